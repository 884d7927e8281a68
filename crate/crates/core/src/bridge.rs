//! Links the two models: annotations tie analytical elements to
//! environmental formulas, so each world induces its own dialectical forest.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::am::{AmProgram, Argument, Context, Dialectic, ElementSet, MarkedTree, WarrantStatus};
use crate::em::{enumerate_worlds, lp_optimum, EmKnowledgeBase, ProbabilityInterval};
use crate::error::{IncaError, Result};
use crate::language::{satisfies, Atom, Constants, Formula, Literal, World};
use crate::lp::Sense;
use crate::rational::Rational;

/// Maps element ids to environmental formulas. Unmapped elements are
/// annotated with `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationFunction {
    map: BTreeMap<String, Formula>,
}

impl AnnotationFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, formula: Formula) {
        self.map.insert(id.into(), formula);
    }

    pub fn with(mut self, id: &str, formula: Formula) -> Self {
        self.insert(id, formula);
        self
    }

    pub fn get(&self, id: &str) -> &Formula {
        const TOP: &Formula = &Formula::Top;
        self.map.get(id).unwrap_or(TOP)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        for f in self.map.values() {
            for a in f.atoms() {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }
}

/// How `poss(L)` treats worlds in which no argument for `L` is valid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum PossibilityMode {
    /// `w ∈ poss(L)` iff `¬L` is not warranted in `w` and some argument for
    /// `L` is valid in `w`.
    #[default]
    Supported,
    /// `w ∈ poss(L)` iff `¬L` is not warranted in `w`.
    Unopposed,
}

/// An explicit probability distribution over worlds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorldDistribution {
    mass: BTreeMap<World, Rational>,
}

impl WorldDistribution {
    pub fn new(entries: impl IntoIterator<Item = (World, Rational)>) -> Self {
        let mut mass: BTreeMap<World, Rational> = BTreeMap::new();
        for (w, p) in entries {
            *mass.entry(w).or_insert_with(Rational::zero) += p;
        }
        WorldDistribution { mass }
    }

    pub fn point(world: World) -> Self {
        Self::new([(world, Rational::one())])
    }

    pub fn uniform(worlds: &[World]) -> Self {
        let share = Rational::new(1.into(), worlds.len().into());
        Self::new(worlds.iter().map(|w| (w.clone(), share.clone())))
    }

    pub fn probability(&self, world: &World) -> Rational {
        self.mass.get(world).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&World, &Rational)> {
        self.mass.iter()
    }

    pub fn entries(&self) -> Vec<(World, Rational)> {
        self.mass
            .iter()
            .map(|(w, p)| (w.clone(), p.clone()))
            .collect()
    }
}

/// An environmental KB, a ground analytical program, and the annotation
/// function between them.
#[derive(Debug)]
pub struct InCaFramework {
    em: EmKnowledgeBase,
    dialectic: Dialectic,
    af: AnnotationFunction,
    mode: PossibilityMode,
    constants: Constants,
    compiled_af: Vec<Formula>,
    warrant_cache: RwLock<HashMap<(ElementSet, Literal), bool>>,
}

impl Clone for InCaFramework {
    fn clone(&self) -> Self {
        InCaFramework {
            em: self.em.clone(),
            dialectic: self.dialectic.clone(),
            af: self.af.clone(),
            mode: self.mode,
            constants: self.constants.clone(),
            compiled_af: self.compiled_af.clone(),
            warrant_cache: RwLock::new(HashMap::new()),
        }
    }
}

impl InCaFramework {
    /// Annotation atoms missing from the universe are appended to it.
    pub fn new(em: EmKnowledgeBase, program: AmProgram, af: AnnotationFunction) -> Result<Self> {
        Self::from_dialectic(em, Dialectic::new(program)?, af)
    }

    pub fn from_dialectic(
        mut em: EmKnowledgeBase,
        dialectic: Dialectic,
        af: AnnotationFunction,
    ) -> Result<Self> {
        let program = dialectic.program();
        for (id, f) in af.iter() {
            if program.index_of(id).is_none() {
                return Err(IncaError::Invalid(format!(
                    "annotation for unknown element {id}"
                )));
            }
            if !f.is_ground() {
                return Err(IncaError::Groundedness(format!("annotation of {id}: {f}")));
            }
        }
        em.extend_universe(af.atoms());
        let compiled_af = program
            .elements()
            .iter()
            .map(|e| af.get(&e.id).clone())
            .collect();
        Ok(InCaFramework {
            em,
            dialectic,
            af,
            mode: PossibilityMode::default(),
            constants: Constants::new(),
            compiled_af,
            warrant_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_mode(mut self, mode: PossibilityMode) -> Self {
        self.mode = mode;
        self
    }

    /// Declared constants and their roles, used to check attribution
    /// queries.
    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = constants;
        self
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    /// Same analytical side and annotations over a different environmental
    /// KB.
    pub fn with_em(&self, em: EmKnowledgeBase) -> Result<Self> {
        let mut fw = self.clone();
        fw.em = em;
        fw.em.extend_universe(fw.af.atoms());
        Ok(fw)
    }

    pub fn em(&self) -> &EmKnowledgeBase {
        &self.em
    }

    pub fn dialectic(&self) -> &Dialectic {
        &self.dialectic
    }

    pub fn program(&self) -> &AmProgram {
        self.dialectic.program()
    }

    pub fn af(&self) -> &AnnotationFunction {
        &self.af
    }

    pub fn mode(&self) -> PossibilityMode {
        self.mode
    }

    pub fn worlds(&self) -> Result<Vec<World>> {
        enumerate_worlds(&self.em)
    }

    /// Errors unless `w` is one of the worlds the framework ranges over.
    pub fn check_world(&self, w: &World) -> Result<()> {
        let universe = self.em.universe();
        if let Some(a) = w.atoms().find(|a| !universe.contains(a)) {
            return Err(IncaError::Invalid(format!(
                "world atom {a} is not in the universe"
            )));
        }
        if let Some(c) = self.em.constraints().iter().find(|c| !c.conforms(w)) {
            return Err(IncaError::Invalid(format!("world {w} violates {c}")));
        }
        Ok(())
    }

    /// Elements whose annotation holds in `w`.
    pub fn valid_elements(&self, w: &World) -> Result<ElementSet> {
        let mut out = ElementSet::new();
        for (ix, f) in self.compiled_af.iter().enumerate() {
            if satisfies(w, f)? {
                out.insert(ix);
            }
        }
        Ok(out)
    }

    pub fn context(&self, w: &World) -> Result<Context> {
        Ok(Context::restricted(self.valid_elements(w)?))
    }

    /// An argument is valid in `w` iff every element of its support has its
    /// annotation satisfied by `w`.
    pub fn is_valid(&self, argument: &Argument, w: &World) -> Result<bool> {
        for &ix in &argument.support {
            if !satisfies(w, &self.compiled_af[ix])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_literal(&self, literal: &Literal) -> Result<()> {
        if !literal.is_ground() {
            return Err(IncaError::Groundedness(literal.to_string()));
        }
        Ok(())
    }

    /// `w ⊢war L`: some root of the forest induced by `w` is undefeated.
    pub fn warrants_in(&self, w: &World, literal: &Literal) -> Result<bool> {
        self.check_literal(literal)?;
        let valid = self.valid_elements(w)?;
        let key = (valid, literal.clone());
        if let Some(&hit) = self.warrant_cache.read().expect("cache lock").get(&key) {
            return Ok(hit);
        }
        let ctx = Context::restricted(key.0.clone());
        let verdict = self.dialectic.is_warranted(literal, &ctx);
        self.warrant_cache
            .write()
            .expect("cache lock")
            .insert(key, verdict);
        Ok(verdict)
    }

    pub fn warrant_status_in(&self, w: &World, literal: &Literal) -> Result<WarrantStatus> {
        self.check_literal(literal)?;
        self.dialectic.warrant_status(literal, &self.context(w)?)
    }

    pub fn marked_forest_in(&self, w: &World, literal: &Literal) -> Result<Vec<MarkedTree>> {
        self.check_literal(literal)?;
        Ok(self.dialectic.marked_forest(literal, &self.context(w)?))
    }

    fn has_valid_argument(&self, w: &World, literal: &Literal) -> Result<bool> {
        let ctx = self.context(w)?;
        Ok(self
            .dialectic
            .arguments_for(literal)
            .into_iter()
            .any(|a| ctx.admits(self.dialectic.argument(a))))
    }

    /// Worlds in which `L` is warranted.
    pub fn nec_set(&self, literal: &Literal) -> Result<Vec<World>> {
        let mut out = Vec::new();
        for w in self.worlds()? {
            if self.warrants_in(&w, literal)? {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Worlds in which `L` can be warranted; see [`PossibilityMode`].
    pub fn poss_set(&self, literal: &Literal) -> Result<Vec<World>> {
        let opposite = literal.complement();
        let mut out = Vec::new();
        for w in self.worlds()? {
            if self.warrants_in(&w, &opposite)? {
                continue;
            }
            if self.mode == PossibilityMode::Supported && !self.has_valid_argument(&w, literal)? {
                continue;
            }
            out.push(w);
        }
        Ok(out)
    }

    /// `[Σ_{nec} Pr(w), Σ_{poss} Pr(w)]` for an explicit distribution.
    pub fn prob_from_distribution(
        &self,
        literal: &Literal,
        pr: &WorldDistribution,
    ) -> Result<ProbabilityInterval> {
        let worlds = self.worlds()?;
        let mut total = Rational::zero();
        for (w, p) in pr.iter() {
            if p < &Rational::zero() {
                return Err(IncaError::Distribution(format!(
                    "negative probability for {w}"
                )));
            }
            if !p.is_zero() && !worlds.contains(w) {
                return Err(IncaError::Distribution(format!(
                    "{w} is not a conforming world"
                )));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(IncaError::Distribution(format!(
                "probabilities sum to {}",
                crate::rational::format_rational(&total)
            )));
        }
        let sum = |ws: Vec<World>| -> Rational {
            ws.iter()
                .map(|w| pr.probability(w))
                .fold(Rational::zero(), |a, b| a + b)
        };
        Ok(ProbabilityInterval::new(
            sum(self.nec_set(literal)?),
            sum(self.poss_set(literal)?),
        ))
    }

    /// `[EP-LP-MIN(⋁_{nec} for(w)), EP-LP-MAX(⋁_{poss} for(w))]`.
    pub fn prob_bounds(&self, literal: &Literal) -> Result<ProbabilityInterval> {
        let universe = self.em.universe();
        let disjunction = |ws: &[World]| -> Formula {
            Formula::or(ws.iter().map(|w| world_formula(universe, w)).collect())
        };
        let nec = self.nec_set(literal)?;
        let poss = self.poss_set(literal)?;
        let lower = lp_optimum(&self.em, &disjunction(&nec), Sense::Minimize)?;
        let upper = lp_optimum(&self.em, &disjunction(&poss), Sense::Maximize)?;
        Ok(ProbabilityInterval::new(lower, upper))
    }
}

/// `for(w)`: the conjunction satisfied by `w` alone among worlds over
/// `universe`.
pub fn world_formula(universe: &[Atom], w: &World) -> Formula {
    Formula::and(
        universe
            .iter()
            .map(|a| {
                let f = Formula::atom(a.clone());
                if w.contains(a) {
                    f
                } else {
                    Formula::not(f)
                }
            })
            .collect(),
    )
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::am::fixtures::worm_program;
    use crate::em::ProbabilisticFormula;
    use crate::rational::ratio;

    pub fn gov() -> Atom {
        Atom::em("govCybLab", &["baja"])
    }
    pub fn cyb() -> Atom {
        Atom::em("cybCapAge", &["baja", "5"])
    }
    pub fn mse() -> Atom {
        Atom::em("mseTT", &["baja", "2"])
    }

    pub fn em() -> EmKnowledgeBase {
        let pf = |a: Atom, p, e| ProbabilisticFormula::new(Formula::atom(a), p, e).unwrap();
        EmKnowledgeBase::new(
            vec![
                pf(gov(), ratio(8, 10), ratio(1, 10)),
                pf(cyb(), ratio(2, 10), ratio(1, 10)),
                pf(mse(), ratio(9, 10), ratio(1, 10)),
            ],
            vec![],
        )
    }

    pub fn framework() -> InCaFramework {
        let af = AnnotationFunction::new()
            .with(
                "phi1",
                Formula::or(vec![Formula::atom(mse()), Formula::atom(gov())]),
            )
            .with("phi3", Formula::atom(cyb()));
        InCaFramework::new(em(), worm_program(), af)
            .unwrap()
            .with_constants(constants())
    }

    pub fn constants() -> Constants {
        Constants::new()
            .with(
                &["baja", "krasnovia", "mojave"],
                crate::language::Role::Actor,
            )
            .with(&["worm123"], crate::language::Role::Operation)
    }

    /// The eight worlds under their example names `w1..w8`.
    pub fn named(name: &str) -> World {
        let atoms: Vec<Atom> = match name {
            "w1" => vec![gov(), cyb(), mse()],
            "w2" => vec![gov(), cyb()],
            "w3" => vec![gov(), mse()],
            "w4" => vec![cyb(), mse()],
            "w5" => vec![cyb()],
            "w6" => vec![gov()],
            "w7" => vec![mse()],
            "w8" => vec![],
            _ => unreachable!(),
        };
        World::new(atoms)
    }

    pub fn worlds(names: &[&str]) -> std::collections::BTreeSet<World> {
        names.iter().map(|n| named(n)).collect()
    }
}
