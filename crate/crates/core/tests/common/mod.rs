#![allow(dead_code)]

//! Random generators and brute-force oracles shared by the integration
//! tests. Nothing here calls into the engine's solvers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use inca::am::{AmElement, AmProgram, Context};
use inca::bridge::{AnnotationFunction, InCaFramework, WorldDistribution};
use inca::em::{EmKnowledgeBase, IntegrityConstraint, ProbabilisticFormula};
use inca::language::{Atom, Constants, Formula, Literal, Role, World};
use inca::rational::Rational;

pub type Q = Ratio<i128>;

pub fn to_big(q: &Q) -> Rational {
    Rational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub fn from_big(r: &Rational) -> Q {
    let n: i128 = r.numer().try_into().expect("small numerator");
    let d: i128 = r.denom().try_into().expect("small denominator");
    Q::new(n, d)
}

pub fn fixture(name: &str) -> String {
    let path = format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

// Formulas and worlds

pub fn em_atom(i: usize) -> Atom {
    Atom::em(&format!("e{i}"), &[])
}

pub fn eval(f: &Formula, world: &BTreeSet<Atom>) -> bool {
    match f {
        Formula::Atom(a) => world.contains(a),
        Formula::Not(g) => !eval(g, world),
        Formula::And(gs) => gs.iter().all(|g| eval(g, world)),
        Formula::Or(gs) => gs.iter().any(|g| eval(g, world)),
        Formula::Top => true,
        Formula::Bottom => false,
    }
}

/// Every subset of `atoms` that picks at most one atom from each group.
pub fn subsets(atoms: &[Atom], one_of: &[Vec<Atom>]) -> Vec<BTreeSet<Atom>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << atoms.len()) {
        let w: BTreeSet<Atom> = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect();
        if one_of
            .iter()
            .all(|g| g.iter().filter(|a| w.contains(*a)).count() <= 1)
        {
            out.push(w);
        }
    }
    out
}

pub fn to_world(w: &BTreeSet<Atom>) -> World {
    World::new(w.iter().cloned())
}

pub fn formula_strategy(n_atoms: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => (0..n_atoms).prop_map(|i| Formula::atom(em_atom(i))),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            prop::collection::vec(inner.clone(), 2).prop_map(Formula::and),
            prop::collection::vec(inner, 2).prop_map(Formula::or),
        ]
    })
}

// The linear-program oracle

/// Min and max of `Σ_{j: objective[j]} x_j` subject to `x ≥ 0`, `Σ x = 1`
/// and `lo_i ≤ Σ_{j: columns[j][i]} x_j ≤ hi_i`, found by enumerating every
/// basic solution. `None` when infeasible.
pub fn vertex_bounds(columns: &[Vec<bool>], objective: &[bool], rows: &[(Q, Q)]) -> Option<(Q, Q)> {
    // Identical columns never share a basis.
    let mut distinct: Vec<(Vec<bool>, bool)> = Vec::new();
    for (c, &o) in columns.iter().zip(objective) {
        let key = (c.clone(), o);
        if !distinct.contains(&key) {
            distinct.push(key);
        }
    }
    let m = rows.len();
    let mut best: Option<(Q, Q)> = None;
    let max_k = (m + 1).min(distinct.len());
    for k in 1..=max_k {
        for support in combinations(distinct.len(), k) {
            for tight in combinations(m, k - 1) {
                for sides in 0u32..(1 << (k - 1)) {
                    let mut a = vec![vec![Q::one(); k]];
                    let mut b = vec![Q::one()];
                    for (t, &r) in tight.iter().enumerate() {
                        let upper = sides & (1 << t) != 0;
                        if upper && rows[r].0 == rows[r].1 {
                            continue;
                        }
                        a.push(
                            support
                                .iter()
                                .map(|&j| indicator(distinct[j].0[r]))
                                .collect(),
                        );
                        b.push(if upper { rows[r].1 } else { rows[r].0 });
                    }
                    if a.len() != k {
                        continue;
                    }
                    let Some(x) = solve(a, b) else { continue };
                    if x.iter().any(|v| v.is_negative()) {
                        continue;
                    }
                    let feasible = rows.iter().enumerate().all(|(r, (lo, hi))| {
                        let s: Q = support
                            .iter()
                            .zip(&x)
                            .filter(|(&j, _)| distinct[j].0[r])
                            .map(|(_, v)| *v)
                            .sum();
                        *lo <= s && s <= *hi
                    });
                    if !feasible {
                        continue;
                    }
                    let value: Q = support
                        .iter()
                        .zip(&x)
                        .filter(|(&j, _)| distinct[j].1)
                        .map(|(_, v)| *v)
                        .sum();
                    best = Some(match best {
                        None => (value, value),
                        Some((lo, hi)) => (lo.min(value), hi.max(value)),
                    });
                }
            }
        }
    }
    best
}

fn indicator(b: bool) -> Q {
    if b {
        Q::one()
    } else {
        Q::zero()
    }
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Gauss-Jordan elimination; `None` unless the square system has a unique
/// solution.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col];
        for v in &mut a[col][col..] {
            *v /= p;
        }
        b[col] /= p;
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for (v, pv) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= f * pv;
                }
                let v = b[col];
                b[r] -= f * v;
            }
        }
    }
    Some(b)
}

/// Bounds of `query` entailed by `(formula, lo, hi)` rows over `worlds`.
pub fn entailment_oracle(
    worlds: &[BTreeSet<Atom>],
    rows: &[(Formula, Q, Q)],
    query: &Formula,
) -> Option<(Q, Q)> {
    let columns: Vec<Vec<bool>> = worlds
        .iter()
        .map(|w| rows.iter().map(|(f, _, _)| eval(f, w)).collect())
        .collect();
    let objective: Vec<bool> = worlds.iter().map(|w| eval(query, w)).collect();
    let bounds: Vec<(Q, Q)> = rows.iter().map(|(_, lo, hi)| (*lo, *hi)).collect();
    vertex_bounds(&columns, &objective, &bounds)
}

// Random environmental knowledge bases

#[derive(Debug, Clone)]
pub struct EmCase {
    pub n_atoms: usize,
    /// Formula with bounds in tenths.
    pub formulas: Vec<(Formula, i64, i64)>,
    pub one_of: Option<(usize, usize)>,
    pub query: Formula,
}

impl EmCase {
    pub fn atoms(&self) -> Vec<Atom> {
        (0..self.n_atoms).map(em_atom).collect()
    }

    pub fn groups(&self) -> Vec<Vec<Atom>> {
        self.one_of
            .map(|(a, b)| vec![vec![em_atom(a), em_atom(b)]])
            .unwrap_or_default()
    }

    pub fn kb(&self) -> EmKnowledgeBase {
        let formulas = self
            .formulas
            .iter()
            .map(|(f, lo, hi)| {
                let (lo, hi) = (
                    Rational::new((*lo).into(), 10.into()),
                    Rational::new((*hi).into(), 10.into()),
                );
                let p = (&lo + &hi) / Rational::from_integer(2.into());
                let eps = (&hi - &lo) / Rational::from_integer(2.into());
                ProbabilisticFormula::new(f.clone(), p, eps).expect("valid bounds")
            })
            .collect();
        let ics = self
            .groups()
            .into_iter()
            .map(|g| IntegrityConstraint::one_of(g).expect("valid constraint"))
            .collect();
        EmKnowledgeBase::new(formulas, ics)
            .with_universe(self.atoms())
            .expect("universe covers the formulas")
    }

    pub fn oracle(&self) -> Option<(Q, Q)> {
        let worlds = subsets(&self.atoms(), &self.groups());
        let rows: Vec<(Formula, Q, Q)> = self
            .formulas
            .iter()
            .map(|(f, lo, hi)| (f.clone(), Q::new(*lo as i128, 10), Q::new(*hi as i128, 10)))
            .collect();
        entailment_oracle(&worlds, &rows, &self.query)
    }
}

pub fn em_case_strategy() -> impl Strategy<Value = EmCase> {
    (1usize..=4).prop_flat_map(|n| {
        let row = (formula_strategy(n), 0i64..=10, 0i64..=10)
            .prop_map(|(f, a, b)| (f, a.min(b), a.max(b)));
        let one_of = if n >= 2 {
            prop::option::weighted(0.3, (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b))
                .boxed()
        } else {
            Just(None).boxed()
        };
        (
            prop::collection::vec(row, 0..=4),
            one_of,
            formula_strategy(n),
        )
            .prop_map(move |(formulas, one_of, query)| EmCase {
                n_atoms: n,
                formulas,
                one_of,
                query,
            })
    })
}

// Random analytical programs

pub fn am_literal(i: usize, negated: bool) -> Literal {
    let l = Literal::am(&format!("p{i}"), &[]);
    if negated {
        l.complement()
    } else {
        l
    }
}

fn literal_strategy(pool: usize) -> impl Strategy<Value = Literal> {
    (0..pool, prop::bool::weighted(0.25)).prop_map(|(i, n)| am_literal(i, n))
}

fn rule_strategy(pool: usize) -> impl Strategy<Value = (Literal, Vec<Literal>)> {
    let body = prop_oneof![
        3 => literal_strategy(pool).prop_map(|l| vec![l]),
        1 => prop::collection::vec(literal_strategy(pool), 2),
    ];
    (literal_strategy(pool), body)
}

#[derive(Debug, Clone)]
pub struct AmCase {
    pub elements: Vec<AmElement>,
}

impl AmCase {
    pub fn program(&self) -> AmProgram {
        AmProgram::new(self.elements.clone()).expect("well-formed program")
    }

    /// Every literal the program mentions, with its complement.
    pub fn literals(&self) -> BTreeSet<Literal> {
        let mut out = BTreeSet::new();
        for e in &self.elements {
            for l in std::iter::once(&e.head).chain(&e.body) {
                out.insert(l.clone());
                out.insert(l.complement());
            }
        }
        out
    }
}

pub fn am_case_strategy() -> impl Strategy<Value = AmCase> {
    let pool = 4;
    (
        prop::collection::vec(literal_strategy(pool), 0..=3),
        prop::collection::vec(rule_strategy(pool), 0..=2),
        prop::collection::vec(literal_strategy(pool), 0..=3),
        prop::collection::vec(rule_strategy(pool), 0..=5),
    )
        .prop_map(|(facts, strict, presumptions, defeasible)| {
            let mut elements = Vec::new();
            for (i, h) in facts.into_iter().enumerate() {
                elements.push(AmElement::fact(&format!("t{i}"), h));
            }
            for (i, (h, b)) in strict.into_iter().enumerate() {
                elements.push(AmElement::strict(&format!("o{i}"), h, b));
            }
            for (i, h) in presumptions.into_iter().enumerate() {
                elements.push(AmElement::presumption(&format!("f{i}"), h));
            }
            for (i, (h, b)) in defeasible.into_iter().enumerate() {
                elements.push(AmElement::defeasible(&format!("d{i}"), h, b));
            }
            AmCase { elements }
        })
}

fn closure(elements: &[&AmElement]) -> BTreeSet<Literal> {
    let mut known = BTreeSet::new();
    loop {
        let before = known.len();
        for e in elements {
            if e.body.iter().all(|b| known.contains(b)) {
                known.insert(e.head.clone());
            }
        }
        if known.len() == before {
            return known;
        }
    }
}

fn contradictory(known: &BTreeSet<Literal>) -> bool {
    known.iter().any(|l| known.contains(&l.complement()))
}

/// Defeasible parts of every argument for `literal`, by checking each
/// subset of presumptions and defeasible rules.
pub fn oracle_arguments(elements: &[AmElement], literal: &Literal) -> BTreeSet<BTreeSet<String>> {
    let strict: Vec<&AmElement> = elements.iter().filter(|e| e.kind.is_strict()).collect();
    let defeasible: Vec<&AmElement> = elements.iter().filter(|e| e.kind.is_defeasible()).collect();
    let mut sufficient: Vec<u32> = Vec::new();
    for mask in 0u32..(1 << defeasible.len()) {
        let mut chosen = strict.clone();
        chosen.extend(
            defeasible
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e),
        );
        let known = closure(&chosen);
        if known.contains(literal) && !contradictory(&known) {
            sufficient.push(mask);
        }
    }
    sufficient
        .iter()
        .filter(|&&m| !sufficient.iter().any(|&o| o != m && o & m == o))
        .map(|&m| {
            defeasible
                .iter()
                .enumerate()
                .filter(|(i, _)| m & (1 << i) != 0)
                .map(|(_, e)| e.id.clone())
                .collect()
        })
        .collect()
}

// Random frameworks with a known satisfying distribution

pub const FW_ATOMS: usize = 3;

#[derive(Debug, Clone)]
pub struct FwCase {
    pub weights: Vec<u32>,
    /// Formula with the amounts, in tenths, by which its bounds are widened
    /// around the hidden distribution's value.
    pub em: Vec<(Formula, i64, i64)>,
    pub am: AmCase,
    pub af: Vec<Option<Formula>>,
}

impl FwCase {
    pub fn worlds(&self) -> Vec<BTreeSet<Atom>> {
        subsets(&(0..FW_ATOMS).map(em_atom).collect::<Vec<_>>(), &[])
    }

    pub fn distribution(&self) -> Vec<(BTreeSet<Atom>, Rational)> {
        let mut weights = self.weights.clone();
        if weights.iter().all(|&w| w == 0) {
            weights[0] = 1;
        }
        let total: u32 = weights.iter().sum();
        self.worlds()
            .into_iter()
            .zip(weights)
            .map(|(w, x)| (w, Rational::new(x.into(), total.into())))
            .collect()
    }

    pub fn em_rows(&self) -> Vec<(Formula, Rational, Rational)> {
        let dist = self.distribution();
        let tenth = |n: i64| Rational::new(n.into(), 10.into());
        self.em
            .iter()
            .map(|(f, down, up)| {
                let p: Rational = dist
                    .iter()
                    .filter(|(w, _)| eval(f, w))
                    .map(|(_, x)| x.clone())
                    .sum();
                let lo = std::cmp::max(&p - tenth(*down), Rational::zero());
                let hi = std::cmp::min(&p + tenth(*up), Rational::one());
                (f.clone(), lo, hi)
            })
            .collect()
    }

    pub fn em_kb(&self) -> EmKnowledgeBase {
        let two = Rational::from_integer(2.into());
        let formulas = self
            .em_rows()
            .into_iter()
            .map(|(f, lo, hi)| {
                ProbabilisticFormula::new(f, (&lo + &hi) / &two, (&hi - &lo) / &two)
                    .expect("valid bounds")
            })
            .collect();
        EmKnowledgeBase::new(formulas, vec![])
            .with_universe((0..FW_ATOMS).map(em_atom).collect())
            .expect("universe covers the formulas")
    }

    pub fn annotation(&self) -> AnnotationFunction {
        let mut af = AnnotationFunction::new();
        for (e, f) in self.am.elements.iter().zip(&self.af) {
            if let Some(f) = f {
                af.insert(e.id.clone(), f.clone());
            }
        }
        af
    }

    pub fn framework(&self) -> InCaFramework {
        InCaFramework::new(self.em_kb(), self.am.program(), self.annotation())
            .expect("framework builds")
    }

    pub fn world_distribution(&self) -> WorldDistribution {
        WorldDistribution::new(
            self.distribution()
                .into_iter()
                .map(|(w, p)| (to_world(&w), p)),
        )
    }
}

fn annotation_strategy(len: usize) -> impl Strategy<Value = Vec<Option<Formula>>> {
    prop::collection::vec(prop::option::weighted(0.6, formula_strategy(FW_ATOMS)), len)
}

pub fn fw_case_strategy() -> impl Strategy<Value = FwCase> {
    (
        prop::collection::vec(0u32..=4, 1 << FW_ATOMS),
        prop::collection::vec((formula_strategy(FW_ATOMS), 0i64..=2, 0i64..=2), 0..=3),
        am_case_strategy(),
    )
        .prop_flat_map(|(weights, em, am)| {
            let len = am.elements.len();
            annotation_strategy(len).prop_map(move |af| FwCase {
                weights: weights.clone(),
                em: em.clone(),
                am: am.clone(),
                af,
            })
        })
}

// Attribution cases

pub const OPERATION: &str = "op";

fn attr_atom(kind: usize, actor: &str) -> Atom {
    match kind {
        0 => Atom::am("condOp", &[actor, OPERATION]),
        1 => Atom::am("evid", &[actor, OPERATION]),
        _ => Atom::am("cap", &[actor]),
    }
}

/// A literal over the suspects `s0`, `s1`: kind, actor index and polarity.
pub type Slot = (usize, usize, bool);

fn slot_literal(slot: Slot, actors: &[&str; 2]) -> Literal {
    let atom = attr_atom(slot.0, actors[slot.1]);
    if slot.2 {
        Literal::negative(atom)
    } else {
        Literal::positive(atom)
    }
}

#[derive(Debug, Clone)]
pub struct AttrCase {
    pub weights: Vec<u32>,
    pub em: Vec<(Formula, i64, i64)>,
    pub facts: Vec<Slot>,
    pub presumptions: Vec<Slot>,
    pub defeasible: Vec<(Slot, Vec<Slot>)>,
    pub exclusive: bool,
    pub af: Vec<Option<Formula>>,
}

impl AttrCase {
    fn hidden(&self) -> FwCase {
        FwCase {
            weights: self.weights.clone(),
            em: self.em.clone(),
            am: AmCase { elements: vec![] },
            af: vec![],
        }
    }

    /// The elements with the two suspects named by `actors`.
    pub fn elements(&self, actors: &[&str; 2]) -> Vec<AmElement> {
        let lit = |s: &Slot| slot_literal(*s, actors);
        let mut out = Vec::new();
        for (i, s) in self.facts.iter().enumerate() {
            out.push(AmElement::fact(&format!("t{i}"), lit(s)));
        }
        if self.exclusive {
            let c = |a: usize, neg: bool| slot_literal((0, a, neg), actors);
            out.push(AmElement::strict("x0", c(0, true), vec![c(1, false)]));
            out.push(AmElement::strict("x1", c(1, true), vec![c(0, false)]));
        }
        for (i, s) in self.presumptions.iter().enumerate() {
            out.push(AmElement::presumption(&format!("f{i}"), lit(s)));
        }
        for (i, (h, b)) in self.defeasible.iter().enumerate() {
            out.push(AmElement::defeasible(
                &format!("d{i}"),
                lit(h),
                b.iter().map(lit).collect(),
            ));
        }
        out
    }

    pub fn framework(&self, actors: &[&str; 2]) -> InCaFramework {
        let elements = self.elements(actors);
        let mut af = AnnotationFunction::new();
        for (e, f) in elements.iter().zip(&self.af) {
            if let Some(f) = f {
                af.insert(e.id.clone(), f.clone());
            }
        }
        let program = AmProgram::new(elements).expect("well-formed program");
        let constants = Constants::new()
            .with(actors, Role::Actor)
            .with(&[OPERATION], Role::Operation);
        InCaFramework::new(self.hidden().em_kb(), program, af)
            .expect("framework builds")
            .with_constants(constants)
    }

    pub fn em_rows(&self) -> Vec<(Formula, Q, Q)> {
        self.hidden()
            .em_rows()
            .into_iter()
            .map(|(f, lo, hi)| (f, from_big(&lo), from_big(&hi)))
            .collect()
    }
}

fn slot_strategy(heads_only_derivable: bool) -> impl Strategy<Value = Slot> {
    let first = if heads_only_derivable { 1usize } else { 0 };
    (first..3usize, 0..2usize, prop::bool::weighted(0.25))
}

pub fn attr_case_strategy() -> impl Strategy<Value = AttrCase> {
    (
        prop::collection::vec(0u32..=4, 1 << FW_ATOMS),
        prop::collection::vec((formula_strategy(FW_ATOMS), 0i64..=2, 0i64..=2), 0..=3),
        prop::collection::vec(slot_strategy(true), 0..=3),
        prop::collection::vec(
            slot_strategy(false).prop_filter("no condOp presumption", |s| s.0 != 0),
            0..=2,
        ),
        prop::collection::vec(
            (
                slot_strategy(false),
                prop::collection::vec(slot_strategy(false), 1..=2),
            ),
            1..=5,
        ),
        any::<bool>(),
    )
        .prop_flat_map(
            |(weights, em, facts, presumptions, defeasible, exclusive)| {
                let len =
                    facts.len() + 2 * exclusive as usize + presumptions.len() + defeasible.len();
                annotation_strategy(len).prop_map(move |af| AttrCase {
                    weights: weights.clone(),
                    em: em.clone(),
                    facts: facts.clone(),
                    presumptions: presumptions.clone(),
                    defeasible: defeasible.clone(),
                    exclusive,
                    af,
                })
            },
        )
}

// The full attribution pipeline, recomputed from scratch

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineAnswer {
    pub most_probable: BTreeSet<String>,
    pub per_suspect: BTreeMap<String, (Q, Q)>,
}

/// nec and poss by direct world enumeration, then the vertex oracle for
/// the bounds, then midpoint comparison. `rows` is the environmental KB.
pub fn pipeline_oracle(
    fw: &InCaFramework,
    rows: &[(Formula, Q, Q)],
    suspects: &[&str],
    operation: &str,
) -> PipelineAnswer {
    let universe = fw.em().universe().to_vec();
    let groups: Vec<Vec<Atom>> = fw
        .em()
        .constraints()
        .iter()
        .map(|c| c.atoms().to_vec())
        .collect();
    let worlds = subsets(&universe, &groups);
    let d = fw.dialectic();
    let program = d.program();

    let mut per_suspect = BTreeMap::new();
    for &s in suspects {
        let lit = Literal::am("condOp", &[s, operation]);
        let mut nec = Vec::new();
        let mut poss = Vec::new();
        for w in &worlds {
            let valid: BTreeSet<usize> = (0..program.len())
                .filter(|&i| eval(fw.af().get(&program.element(i).id), w))
                .collect();
            let ctx = Context::restricted(valid.clone());
            let warranted = d.is_warranted(&lit, &ctx);
            let opposed = d.is_warranted(&lit.complement(), &ctx);
            let supported = d
                .arguments_for(&lit)
                .into_iter()
                .any(|a| d.argument(a).support.is_subset(&valid));
            nec.push(warranted);
            poss.push(!opposed && supported);
        }
        let columns: Vec<Vec<bool>> = worlds
            .iter()
            .map(|w| rows.iter().map(|(f, _, _)| eval(f, w)).collect())
            .collect();
        let bounds: Vec<(Q, Q)> = rows.iter().map(|(_, lo, hi)| (*lo, *hi)).collect();
        let lower = vertex_bounds(&columns, &nec, &bounds)
            .expect("consistent")
            .0;
        let upper = vertex_bounds(&columns, &poss, &bounds)
            .expect("consistent")
            .1;
        per_suspect.insert(s.to_string(), (lower, upper));
    }

    let mid = |(lo, hi): &(Q, Q)| (*lo + *hi) / Q::from_integer(2);
    let most_probable = per_suspect
        .iter()
        .filter(|(_, i)| per_suspect.values().all(|j| mid(j) <= mid(i)))
        .map(|(s, _)| s.clone())
        .collect();
    PipelineAnswer {
        most_probable,
        per_suspect,
    }
}

// The command-line binary

pub struct CliRun {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `inca` from the examples directory.
pub fn run_cli(args: &[&str]) -> CliRun {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_inca"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/examples"))
        .output()
        .expect("binary runs");
    CliRun {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Validation errors of `report` against the published schema.
pub fn schema_errors(report: &serde_json::Value) -> Vec<String> {
    let schema: serde_json::Value =
        serde_json::from_str(inca::output::REPORT_SCHEMA).expect("schema is JSON");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let errors = match compiled.validate(report) {
        Ok(()) => Vec::new(),
        Err(errors) => errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect(),
    };
    errors
}

// The worked example

pub fn gov() -> Atom {
    Atom::em("govCybLab", &["baja"])
}

pub fn cyb() -> Atom {
    Atom::em("cybCapAge", &["baja", "5"])
}

pub fn mse() -> Atom {
    Atom::em("mseTT", &["baja", "2"])
}

/// The eight worlds over govCybLab(baja), cybCapAge(baja,5), mseTT(baja,2).
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
        other => panic!("no world {other}"),
    };
    World::new(atoms)
}

pub fn named_set(names: &[&str]) -> BTreeSet<World> {
    names.iter().map(|n| named(n)).collect()
}
