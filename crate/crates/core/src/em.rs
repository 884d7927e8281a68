//! The environmental model: probabilistic formulas over EM worlds, `oneOf`
//! integrity constraints, and maximum entailment by linear programming.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{IncaError, Result};
use crate::language::{Atom, Formula, World};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{format_rational, int, Rational};

pub const DEFAULT_MAX_ATOMS: usize = 20;

/// `f : p ± eps`, with `[p - eps, p + eps] ⊆ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbabilisticFormula {
    pub formula: Formula,
    pub p: Rational,
    pub eps: Rational,
}

impl ProbabilisticFormula {
    pub fn new(formula: Formula, p: Rational, eps: Rational) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if p < zero || p > one {
            return Err(IncaError::InvalidProbability(format!(
                "{formula}: p = {} is outside [0, 1]",
                format_rational(&p)
            )));
        }
        let slack = std::cmp::min(p.clone(), &one - &p);
        if eps < zero || eps > slack {
            return Err(IncaError::InvalidProbability(format!(
                "{formula}: eps = {} is outside [0, min(p, 1 - p)]",
                format_rational(&eps)
            )));
        }
        Ok(ProbabilisticFormula { formula, p, eps })
    }

    /// `f : 1 ± 0`.
    pub fn certain(formula: Formula) -> Self {
        ProbabilisticFormula {
            formula,
            p: Rational::one(),
            eps: Rational::zero(),
        }
    }

    pub fn lower(&self) -> Rational {
        &self.p - &self.eps
    }

    pub fn upper(&self) -> Rational {
        &self.p + &self.eps
    }
}

impl fmt::Display for ProbabilisticFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : {} +- {}",
            self.formula,
            format_rational(&self.p),
            format_rational(&self.eps)
        )
    }
}

/// `oneOf(atoms)`: at most one of the atoms holds in a conforming world.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegrityConstraint {
    atoms: Vec<Atom>,
}

impl IntegrityConstraint {
    pub fn one_of(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        if set.len() < 2 {
            return Err(IncaError::Invalid(
                "oneOf needs at least two distinct atoms".into(),
            ));
        }
        Ok(IntegrityConstraint {
            atoms: set.into_iter().collect(),
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn conforms(&self, world: &World) -> bool {
        self.atoms.iter().filter(|a| world.contains(a)).count() <= 1
    }
}

impl fmt::Display for IntegrityConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("oneOf{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// `[lower, upper]`, reported as `p ± eps` with `p` the midpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbabilityInterval {
    pub lower: Rational,
    pub upper: Rational,
}

impl ProbabilityInterval {
    pub fn new(lower: Rational, upper: Rational) -> Self {
        debug_assert!(lower <= upper);
        ProbabilityInterval { lower, upper }
    }

    pub fn eps(&self) -> Rational {
        (&self.upper - &self.lower) / int(2)
    }

    pub fn p(&self) -> Rational {
        &self.lower + self.eps()
    }

    pub fn contains(&self, other: &ProbabilityInterval) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

impl fmt::Display for ProbabilityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} +- {}",
            format_rational(&self.p()),
            format_rational(&self.eps())
        )
    }
}

/// A probabilistic knowledge base together with its constraints and the
/// ordered atom universe its worlds range over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmKnowledgeBase {
    formulas: Vec<ProbabilisticFormula>,
    constraints: Vec<IntegrityConstraint>,
    universe: Vec<Atom>,
    max_atoms: usize,
}

impl Default for EmKnowledgeBase {
    fn default() -> Self {
        EmKnowledgeBase {
            formulas: Vec::new(),
            constraints: Vec::new(),
            universe: Vec::new(),
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

impl EmKnowledgeBase {
    /// Universe defaults to the atoms mentioned by formulas and constraints,
    /// in order of first mention.
    pub fn new(formulas: Vec<ProbabilisticFormula>, constraints: Vec<IntegrityConstraint>) -> Self {
        let mut kb = EmKnowledgeBase {
            formulas,
            constraints,
            ..Default::default()
        };
        let mentioned = kb.mentioned_atoms();
        kb.extend_universe(mentioned);
        kb
    }

    /// Replaces the universe. Every atom the KB mentions must be included.
    pub fn with_universe(mut self, universe: Vec<Atom>) -> Result<Self> {
        let mut ordered = Vec::new();
        for a in universe {
            if !ordered.contains(&a) {
                ordered.push(a);
            }
        }
        if let Some(missing) = self
            .mentioned_atoms()
            .into_iter()
            .find(|a| !ordered.contains(a))
        {
            return Err(IncaError::Invalid(format!(
                "atom {missing} is used by the knowledge base but missing from the universe"
            )));
        }
        self.universe = ordered;
        Ok(self)
    }

    pub fn with_max_atoms(mut self, cap: usize) -> Self {
        self.max_atoms = cap;
        self
    }

    pub fn extend_universe(&mut self, atoms: impl IntoIterator<Item = Atom>) {
        for a in atoms {
            if !self.universe.contains(&a) {
                self.universe.push(a);
            }
        }
    }

    pub fn push_formula(&mut self, formula: ProbabilisticFormula) {
        self.extend_universe(formula.formula.atoms());
        self.formulas.push(formula);
    }

    pub fn formulas(&self) -> &[ProbabilisticFormula] {
        &self.formulas
    }

    pub fn constraints(&self) -> &[IntegrityConstraint] {
        &self.constraints
    }

    pub fn universe(&self) -> &[Atom] {
        &self.universe
    }

    pub fn max_atoms(&self) -> usize {
        self.max_atoms
    }

    fn mentioned_atoms(&self) -> Vec<Atom> {
        let mut out: Vec<Atom> = Vec::new();
        let from_formulas = self.formulas.iter().flat_map(|f| f.formula.atoms());
        let from_constraints = self
            .constraints
            .iter()
            .flat_map(|c| c.atoms().iter().cloned());
        for a in from_formulas.chain(from_constraints) {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    /// Copy with a different formula set and the same universe and cap.
    pub fn with_formulas(&self, formulas: Vec<ProbabilisticFormula>) -> Self {
        let mut kb = EmKnowledgeBase {
            formulas: Vec::new(),
            ..self.clone()
        };
        for f in formulas {
            kb.push_formula(f);
        }
        kb
    }

    pub(crate) fn world_space(&self) -> Result<WorldSpace> {
        WorldSpace::new(&self.universe, &self.constraints, self.max_atoms)
    }

    /// Checks that `q` is ground and mentions only universe atoms.
    pub fn check_query(&self, q: &Formula) -> Result<()> {
        if !q.is_ground() {
            return Err(IncaError::Groundedness(q.to_string()));
        }
        if let Some(outside) = q.atoms().into_iter().find(|a| !self.universe.contains(a)) {
            return Err(IncaError::Groundedness(format!(
                "atom {outside} is outside the atom universe"
            )));
        }
        Ok(())
    }
}

/// Conforming worlds as bitmasks over the ordered universe (bit `i` set iff
/// `universe[i]` is true), in ascending binary order.
#[derive(Debug, Clone)]
pub(crate) struct WorldSpace {
    pub universe: Vec<Atom>,
    pub masks: Vec<u32>,
}

impl WorldSpace {
    fn new(universe: &[Atom], constraints: &[IntegrityConstraint], cap: usize) -> Result<Self> {
        if universe.len() > cap {
            return Err(IncaError::Capacity {
                what: "atom universe",
                actual: universe.len(),
                cap,
            });
        }
        if universe.len() > 31 {
            return Err(IncaError::Capacity {
                what: "atom universe",
                actual: universe.len(),
                cap: 31,
            });
        }
        let constraint_masks: Vec<u32> = constraints
            .iter()
            .map(|c| {
                c.atoms()
                    .iter()
                    .filter_map(|a| universe.iter().position(|u| u == a))
                    .fold(0u32, |m, i| m | (1 << i))
            })
            .collect();
        let masks = (0..(1u32 << universe.len()))
            .filter(|m| constraint_masks.iter().all(|c| (m & c).count_ones() <= 1))
            .collect();
        Ok(WorldSpace {
            universe: universe.to_vec(),
            masks,
        })
    }

    pub fn world(&self, mask: u32) -> World {
        World::new(
            self.universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone()),
        )
    }

    pub fn compile(&self, formula: &Formula) -> Compiled {
        match formula {
            Formula::Atom(a) => match self.universe.iter().position(|u| u == a) {
                Some(i) => Compiled::Bit(1 << i),
                None => Compiled::Const(false),
            },
            Formula::Not(f) => Compiled::Not(Box::new(self.compile(f))),
            Formula::And(fs) => Compiled::And(fs.iter().map(|f| self.compile(f)).collect()),
            Formula::Or(fs) => Compiled::Or(fs.iter().map(|f| self.compile(f)).collect()),
            Formula::Top => Compiled::Const(true),
            Formula::Bottom => Compiled::Const(false),
        }
    }
}

/// A formula with atoms resolved to universe bit positions.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Bit(u32),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Const(bool),
}

impl Compiled {
    pub fn eval(&self, mask: u32) -> bool {
        match self {
            Compiled::Bit(b) => mask & b != 0,
            Compiled::Not(f) => !f.eval(mask),
            Compiled::And(fs) => fs.iter().all(|f| f.eval(mask)),
            Compiled::Or(fs) => fs.iter().any(|f| f.eval(mask)),
            Compiled::Const(c) => *c,
        }
    }
}

/// The conforming worlds of the KB, in binary-counting order over the
/// ordered universe.
pub fn enumerate_worlds(kb: &EmKnowledgeBase) -> Result<Vec<World>> {
    let space = kb.world_space()?;
    Ok(space.masks.iter().map(|&m| space.world(m)).collect())
}

fn build_lp(kb: &EmKnowledgeBase, space: &WorldSpace) -> LinearProgram {
    let n = space.masks.len();
    let mut lp = LinearProgram::new(n);
    for pf in &kb.formulas {
        let compiled = space.compile(&pf.formula);
        let row: Vec<Rational> = space
            .masks
            .iter()
            .map(|&m| if compiled.eval(m) { int(1) } else { int(0) })
            .collect();
        if pf.eps.is_zero() {
            lp.add(row, Relation::Eq, pf.p.clone());
        } else {
            lp.add(row.clone(), Relation::Ge, pf.lower());
            lp.add(row, Relation::Le, pf.upper());
        }
    }
    lp.add(vec![int(1); n], Relation::Eq, int(1));
    lp
}

/// Minimum and maximum of `Σ_{w ⊨ q} x_w` over all distributions on the
/// conforming worlds that satisfy every probabilistic formula.
pub fn lp_bounds(kb: &EmKnowledgeBase, q: &Formula) -> Result<ProbabilityInterval> {
    kb.check_query(q)?;
    let space = kb.world_space()?;
    let compiled = space.compile(q);
    let objective: Vec<Rational> = space
        .masks
        .iter()
        .map(|&m| if compiled.eval(m) { int(1) } else { int(0) })
        .collect();
    bounds_for_objective(kb, &space, &objective)
}

pub(crate) fn bounds_for_objective(
    kb: &EmKnowledgeBase,
    space: &WorldSpace,
    objective: &[Rational],
) -> Result<ProbabilityInterval> {
    let lp = build_lp(kb, space);
    let lower = match lp.solve(objective, Sense::Minimize) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Err(IncaError::InconsistentKb),
        LpOutcome::Unbounded => unreachable!("probability simplex is bounded"),
    };
    let upper = match lp.solve(objective, Sense::Maximize) {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Err(IncaError::InconsistentKb),
        LpOutcome::Unbounded => unreachable!("probability simplex is bounded"),
    };
    Ok(ProbabilityInterval::new(lower, upper))
}

/// One side of the entailment program: the minimum (or maximum) of
/// `Σ_{w ⊨ q} x_w`.
pub fn lp_optimum(kb: &EmKnowledgeBase, q: &Formula, sense: Sense) -> Result<Rational> {
    kb.check_query(q)?;
    let space = kb.world_space()?;
    let compiled = space.compile(q);
    let objective: Vec<Rational> = space
        .masks
        .iter()
        .map(|&m| if compiled.eval(m) { int(1) } else { int(0) })
        .collect();
    match build_lp(kb, &space).solve(&objective, sense) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Err(IncaError::InconsistentKb),
        LpOutcome::Unbounded => unreachable!("probability simplex is bounded"),
    }
}

/// The tightest `p ± eps` entailed for `q`.
pub fn max_entailment(kb: &EmKnowledgeBase, q: &Formula) -> Result<(Rational, Rational)> {
    let interval = lp_bounds(kb, q)?;
    Ok((interval.p(), interval.eps()))
}

/// Whether some distribution over the conforming worlds satisfies the KB.
pub fn is_consistent(kb: &EmKnowledgeBase) -> Result<bool> {
    let space = kb.world_space()?;
    Ok(build_lp(kb, &space).is_feasible())
}

/// Evaluates every formula of the KB against an explicit distribution.
pub fn distribution_satisfies(kb: &EmKnowledgeBase, dist: &[(World, Rational)]) -> Result<bool> {
    for pf in &kb.formulas {
        let mut mass = Rational::zero();
        for (w, pr) in dist {
            if crate::language::satisfies(w, &pf.formula)? {
                mass += pr;
            }
        }
        if mass < pf.lower() || mass > pf.upper() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn atom(p: &str, args: &[&str]) -> Formula {
        Formula::atom(Atom::em(p, args))
    }

    fn pf(f: Formula, p: Rational, e: Rational) -> ProbabilisticFormula {
        ProbabilisticFormula::new(f, p, e).unwrap()
    }

    fn f1() -> ProbabilisticFormula {
        pf(atom("govCybLab", &["baja"]), ratio(8, 10), ratio(1, 10))
    }
    fn f2() -> ProbabilisticFormula {
        pf(
            atom("cybCapAge", &["baja", "5"]),
            ratio(2, 10),
            ratio(1, 10),
        )
    }
    // Matches the mseTT row `0.8 <= x1+x3+x4+x7 <= 1` of the worked program.
    fn f3() -> ProbabilisticFormula {
        pf(atom("mseTT", &["baja", "2"]), ratio(9, 10), ratio(1, 10))
    }

    #[test]
    fn eps_bounds_are_validated() {
        assert!(ProbabilisticFormula::new(Formula::Top, ratio(1, 10), ratio(2, 10)).is_err());
        assert!(ProbabilisticFormula::new(Formula::Top, ratio(11, 10), int(0)).is_err());
        assert!(ProbabilisticFormula::new(Formula::Top, ratio(1, 2), ratio(1, 2)).is_ok());
    }

    #[test]
    fn eight_worlds_without_constraints() {
        let kb = EmKnowledgeBase::new(vec![f1(), f2(), f3()], vec![]);
        let worlds = enumerate_worlds(&kb).unwrap();
        assert_eq!(worlds.len(), 8);
        assert_eq!(worlds[0], World::empty());
        let distinct: BTreeSet<_> = worlds.iter().cloned().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn empty_universe_has_one_world() {
        let kb = EmKnowledgeBase::default();
        assert_eq!(enumerate_worlds(&kb).unwrap(), vec![World::empty()]);
    }

    #[test]
    fn one_of_filters_worlds() {
        let a = Atom::em("a", &[]);
        let b = Atom::em("b", &[]);
        let kb = EmKnowledgeBase::new(
            vec![],
            vec![IntegrityConstraint::one_of([a.clone(), b.clone()]).unwrap()],
        );
        let worlds = enumerate_worlds(&kb).unwrap();
        assert_eq!(
            worlds,
            vec![World::empty(), World::new([a]), World::new([b])]
        );
    }

    #[test]
    fn universe_cap_is_enforced() {
        let atoms: Vec<Atom> = (0..5).map(|i| Atom::em("p", &[&i.to_string()])).collect();
        let kb = EmKnowledgeBase::default()
            .with_universe(atoms)
            .unwrap()
            .with_max_atoms(4);
        assert!(matches!(
            enumerate_worlds(&kb),
            Err(IncaError::Capacity { cap: 4, .. })
        ));
    }

    #[test]
    fn example_query_entails_point_nine() {
        let kb = EmKnowledgeBase::new(vec![f1(), f2(), f3()], vec![]);
        let q = Formula::or(vec![
            atom("govCybLab", &["baja"]),
            atom("mseTT", &["baja", "2"]),
        ]);
        let i = lp_bounds(&kb, &q).unwrap();
        assert_eq!((i.lower.clone(), i.upper.clone()), (ratio(8, 10), int(1)));
        assert_eq!(
            max_entailment(&kb, &q).unwrap(),
            (ratio(9, 10), ratio(1, 10))
        );
        assert_eq!(i.to_string(), "0.9 +- 0.1");
    }

    #[test]
    fn top_and_bottom_queries() {
        let kb = EmKnowledgeBase::new(vec![f1(), f2(), f3()], vec![]);
        let top = lp_bounds(&kb, &Formula::Top).unwrap();
        assert_eq!((top.lower, top.upper), (int(1), int(1)));
        assert_eq!(
            max_entailment(&kb, &Formula::Bottom).unwrap(),
            (int(0), int(0))
        );
    }

    #[test]
    fn single_formula_bounds() {
        let kb = EmKnowledgeBase::new(vec![f1()], vec![]);
        let i = lp_bounds(&kb, &atom("govCybLab", &["baja"])).unwrap();
        assert_eq!((i.lower, i.upper), (ratio(7, 10), ratio(9, 10)));

        let kb = EmKnowledgeBase::new(vec![f2()], vec![]);
        let q = Formula::not(atom("cybCapAge", &["baja", "5"]));
        assert_eq!(
            max_entailment(&kb, &q).unwrap(),
            (ratio(8, 10), ratio(1, 10))
        );
    }

    #[test]
    fn consistency() {
        assert!(is_consistent(&EmKnowledgeBase::new(vec![f1(), f2(), f3()], vec![])).unwrap());
        assert!(is_consistent(&EmKnowledgeBase::default()).unwrap());

        let k = Formula::atom(Atom::em("condOp", &["krasnovia", "worm123"]));
        let b = Formula::atom(Atom::em("condOp", &["baja", "worm123"]));
        let kb = EmKnowledgeBase::new(
            vec![
                pf(
                    Formula::or(vec![k.clone(), b.clone()]),
                    ratio(4, 10),
                    int(0),
                ),
                pf(Formula::and(vec![k, b]), ratio(6, 10), ratio(1, 10)),
            ],
            vec![],
        );
        assert!(!is_consistent(&kb).unwrap());
        assert_eq!(
            lp_bounds(&kb, &Formula::Top),
            Err(IncaError::InconsistentKb)
        );
    }

    #[test]
    fn queries_outside_universe_are_rejected() {
        let kb = EmKnowledgeBase::new(vec![f1()], vec![]);
        assert!(matches!(
            lp_bounds(&kb, &atom("mseTT", &["baja", "2"])),
            Err(IncaError::Groundedness(_))
        ));
    }
}
