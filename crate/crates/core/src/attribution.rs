//! Attribution queries: which suspects most probably conducted an
//! operation, given the framework and some evidence.

use std::collections::BTreeMap;
use std::thread;

use crate::am::{MarkedTree, ATTRIBUTION_PREDICATE};
use crate::bridge::InCaFramework;
use crate::em::{is_consistent, ProbabilisticFormula, ProbabilityInterval};
use crate::error::{IncaError, Result};
use crate::language::{Literal, ModelTag, Role, World};

/// Largest formula set for which a minimal conflicting subset is reported.
pub const MINIMAL_CONFLICT_CAP: usize = 12;

/// When one suspect's interval counts as strictly greater than another's.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Comparison {
    /// Larger midpoint.
    #[default]
    Midpoint,
    /// Lower bound above the other's upper bound.
    LowerBoundDominance,
}

impl Comparison {
    pub fn greater(self, a: &ProbabilityInterval, b: &ProbabilityInterval) -> bool {
        match self {
            Comparison::Midpoint => a.p() > b.p(),
            Comparison::LowerBoundDominance => a.lower > b.upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributionQuery {
    pub suspects: Vec<String>,
    pub operation: String,
    pub evidence: Vec<ProbabilisticFormula>,
    pub comparison: Comparison,
}

impl AttributionQuery {
    pub fn new(suspects: &[&str], operation: &str) -> Self {
        AttributionQuery {
            suspects: suspects.iter().map(|s| s.to_string()).collect(),
            operation: operation.into(),
            evidence: Vec::new(),
            comparison: Comparison::default(),
        }
    }

    pub fn with_evidence(mut self, evidence: Vec<ProbabilisticFormula>) -> Self {
        self.evidence = evidence;
        self
    }

    pub fn with_comparison(mut self, comparison: Comparison) -> Self {
        self.comparison = comparison;
        self
    }
}

/// A warranting world for a suspect and the marked forest it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuspectTrace {
    pub world: World,
    pub forest: Vec<MarkedTree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributionAnswer {
    pub most_probable: Vec<String>,
    pub per_suspect: BTreeMap<String, ProbabilityInterval>,
    pub trace: BTreeMap<String, Option<SuspectTrace>>,
}

/// The literal `condOp(actor, operation)`.
pub fn attribution_literal(actor: &str, operation: &str) -> Literal {
    Literal::am(ATTRIBUTION_PREDICATE, &[actor, operation])
}

/// Adds each piece of evidence to the environmental KB. Plain observations
/// are `c : 1 ± 0`.
pub fn apply_evidence(
    fw: &InCaFramework,
    evidence: &[ProbabilisticFormula],
) -> Result<InCaFramework> {
    if evidence.is_empty() {
        return Ok(fw.clone());
    }
    for e in evidence {
        if !e.formula.is_ground() {
            return Err(IncaError::Groundedness(e.to_string()));
        }
        if e.formula.atoms().iter().any(|a| a.tag != ModelTag::Em) {
            return Err(IncaError::Invalid(format!(
                "evidence {e} must be about environmental atoms"
            )));
        }
    }
    let mut formulas = fw.em().formulas().to_vec();
    formulas.extend(evidence.iter().cloned());
    let augmented = fw.em().with_formulas(formulas.clone());
    if !is_consistent(&augmented)? {
        let conflict = if formulas.len() <= MINIMAL_CONFLICT_CAP {
            minimal_conflict(fw, formulas)?
        } else {
            formulas
        };
        return Err(IncaError::InconsistentEvidence {
            conflict: conflict.iter().map(|f| f.to_string()).collect(),
        });
    }
    fw.with_em(augmented)
}

/// Deletion filter: drops each formula whose removal keeps the set
/// inconsistent.
fn minimal_conflict(
    fw: &InCaFramework,
    mut set: Vec<ProbabilisticFormula>,
) -> Result<Vec<ProbabilisticFormula>> {
    let mut i = 0;
    while i < set.len() {
        let mut without = set.clone();
        without.remove(i);
        if !is_consistent(&fw.em().with_formulas(without.clone()))? {
            set = without;
        } else {
            i += 1;
        }
    }
    Ok(set)
}

fn check_roles(fw: &InCaFramework, query: &AttributionQuery) -> Result<()> {
    if query.suspects.is_empty() {
        return Err(IncaError::Invalid("no suspects given".into()));
    }
    let constants = fw.constants();
    for s in &query.suspects {
        if constants.role(s) != Some(Role::Actor) {
            return Err(IncaError::Sort(format!(
                "suspect {s} is not a declared actor"
            )));
        }
    }
    if constants.role(&query.operation) != Some(Role::Operation) {
        return Err(IncaError::Sort(format!(
            "{} is not a declared operation",
            query.operation
        )));
    }
    Ok(())
}

fn suspect_report(
    fw: &InCaFramework,
    suspect: &str,
    operation: &str,
) -> Result<(ProbabilityInterval, Option<SuspectTrace>)> {
    let literal = attribution_literal(suspect, operation);
    let interval = fw.prob_bounds(&literal)?;
    let trace = match fw.nec_set(&literal)?.into_iter().next() {
        Some(world) => Some(SuspectTrace {
            forest: fw.marked_forest_in(&world, &literal)?,
            world,
        }),
        None => None,
    };
    Ok((interval, trace))
}

/// Every suspect whose interval no other suspect's interval exceeds.
pub fn most_probable_suspects(
    fw: &InCaFramework,
    query: &AttributionQuery,
) -> Result<AttributionAnswer> {
    check_roles(fw, query)?;
    let fw = apply_evidence(fw, &query.evidence)?;
    let fw = &fw;

    let reports: Vec<Result<(ProbabilityInterval, Option<SuspectTrace>)>> =
        thread::scope(|scope| {
            // Targets without threads (wasm32) evaluate inline.
            let handles: Vec<_> = query
                .suspects
                .iter()
                .map(|s| {
                    thread::Builder::new()
                        .spawn_scoped(scope, move || suspect_report(fw, s, &query.operation))
                        .map_err(|_| s)
                })
                .collect();
            handles
                .into_iter()
                .map(|h| match h {
                    Ok(h) => h.join().expect("suspect evaluation panicked"),
                    Err(s) => suspect_report(fw, s, &query.operation),
                })
                .collect()
        });

    let mut per_suspect = BTreeMap::new();
    let mut trace = BTreeMap::new();
    for (s, report) in query.suspects.iter().zip(reports) {
        let (interval, t) = report?;
        per_suspect.insert(s.clone(), interval);
        trace.insert(s.clone(), t);
    }

    let mut most_probable: Vec<String> = per_suspect
        .iter()
        .filter(|(_, mine)| {
            !per_suspect
                .values()
                .any(|other| query.comparison.greater(other, mine))
        })
        .map(|(s, _)| s.clone())
        .collect();
    most_probable.sort();
    most_probable.dedup();

    Ok(AttributionAnswer {
        most_probable,
        per_suspect,
        trace,
    })
}
