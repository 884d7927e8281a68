use std::collections::BTreeSet;
use std::fmt;

use super::{AmProgram, ElementKind, ElementSet};
use crate::language::Literal;

/// `⟨A, L⟩`: a minimal, non-contradictory set of program elements from which
/// `L` is defeasibly derived. The support includes the facts and strict
/// rules used by the derivation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Argument {
    pub conclusion: Literal,
    pub support: ElementSet,
    pub(crate) conclusion_id: usize,
    presumptions: ElementSet,
    defeasible_rules: ElementSet,
    strict_rules: ElementSet,
    facts: ElementSet,
}

impl Argument {
    pub(crate) fn new(program: &AmProgram, conclusion_id: usize, support: ElementSet) -> Self {
        let pick = |kind| -> ElementSet {
            support
                .iter()
                .copied()
                .filter(|&i| program.kind(i) == kind)
                .collect()
        };
        Argument {
            conclusion: program.literal(conclusion_id).clone(),
            conclusion_id,
            presumptions: pick(ElementKind::Presumption),
            defeasible_rules: pick(ElementKind::DefeasibleRule),
            strict_rules: pick(ElementKind::StrictRule),
            facts: pick(ElementKind::Fact),
            support,
        }
    }

    /// Φ(A)
    pub fn presumptions(&self) -> &ElementSet {
        &self.presumptions
    }

    /// Δ(A)
    pub fn defeasible_rules(&self) -> &ElementSet {
        &self.defeasible_rules
    }

    /// Ω(A)
    pub fn strict_rules(&self) -> &ElementSet {
        &self.strict_rules
    }

    /// Θ(A)
    pub fn facts(&self) -> &ElementSet {
        &self.facts
    }

    /// The part of the support drawn from Φ ∪ Δ.
    pub fn defeasible_part(&self) -> ElementSet {
        self.presumptions
            .union(&self.defeasible_rules)
            .copied()
            .collect()
    }

    pub fn is_presumptive(&self) -> bool {
        !self.presumptions.is_empty()
    }

    pub fn is_factual(&self) -> bool {
        self.presumptions.is_empty()
    }

    pub fn display<'a>(&'a self, program: &'a AmProgram) -> ArgumentDisplay<'a> {
        ArgumentDisplay {
            argument: self,
            program,
        }
    }
}

pub struct ArgumentDisplay<'a> {
    argument: &'a Argument,
    program: &'a AmProgram,
}

impl fmt::Display for ArgumentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{{{}}}, {}>",
            self.program.ids(&self.argument.support).join(", "),
            self.argument.conclusion
        )
    }
}

/// `⟨B, L⟩` is a subargument of `⟨A, L′⟩` iff `B ⊆ A`.
pub fn is_subargument(b: &Argument, a: &Argument) -> bool {
    b.support.is_subset(&a.support)
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Proof {
    defeasible: ElementSet,
    strict: ElementSet,
}

impl Proof {
    fn union(&self, other: &Proof) -> Proof {
        Proof {
            defeasible: self.defeasible.union(&other.defeasible).copied().collect(),
            strict: self.strict.union(&other.strict).copied().collect(),
        }
    }

    fn rank(&self) -> (usize, &ElementSet) {
        (self.strict.len(), &self.strict)
    }
}

/// Keeps only proofs whose defeasible part is subset-minimal; among proofs
/// with the same defeasible part, keeps the one using the fewest strict
/// elements (ties broken by element order).
fn prune(proofs: Vec<Proof>) -> Vec<Proof> {
    let mut kept: Vec<Proof> = Vec::new();
    for p in proofs {
        if kept
            .iter()
            .any(|k| k.defeasible.is_subset(&p.defeasible) && k.defeasible != p.defeasible)
        {
            continue;
        }
        if let Some(same) = kept.iter_mut().find(|k| k.defeasible == p.defeasible) {
            if p.rank() < same.rank() {
                *same = p;
            }
            continue;
        }
        kept.retain(|k| !(p.defeasible.is_subset(&k.defeasible) && p.defeasible != k.defeasible));
        kept.push(p);
    }
    kept
}

/// Backward search for the minimal derivations of `literal`, never
/// revisiting a literal already on the current path.
fn proofs(program: &AmProgram, literal: usize, path: &mut Vec<usize>) -> Vec<Proof> {
    path.push(literal);
    let mut out = Vec::new();
    for ix in 0..program.len() {
        if program.head(ix) != literal {
            continue;
        }
        let body = program.body(ix);
        if body.iter().any(|b| path.contains(b)) {
            continue;
        }
        let mut own = Proof {
            defeasible: BTreeSet::new(),
            strict: BTreeSet::new(),
        };
        if program.kind(ix).is_defeasible() {
            own.defeasible.insert(ix);
        } else {
            own.strict.insert(ix);
        }
        let mut partial = vec![own];
        for &b in body {
            let sub = proofs(program, b, path);
            if sub.is_empty() {
                partial.clear();
                break;
            }
            let combined = partial
                .iter()
                .flat_map(|p| sub.iter().map(move |s| p.union(s)))
                .collect();
            partial = prune(combined);
        }
        out.extend(partial);
    }
    path.pop();
    prune(out)
}

/// Every argument for `literal` over a ground program, ordered by support.
pub fn arguments_for(program: &AmProgram, literal: &Literal) -> Vec<Argument> {
    let Some(id) = program.literal_id(literal) else {
        return Vec::new();
    };
    arguments_for_id(program, id)
}

pub(crate) fn arguments_for_id(program: &AmProgram, id: usize) -> Vec<Argument> {
    let strict_part = program.strict_part();
    let mut args: Vec<Argument> = proofs(program, id, &mut Vec::new())
        .into_iter()
        .filter(|p| {
            let mut all = strict_part.clone();
            all.extend(p.defeasible.iter().copied());
            !program.is_contradictory(&all)
        })
        .map(|p| {
            let support = p.defeasible.union(&p.strict).copied().collect();
            Argument::new(program, id, support)
        })
        .collect();
    args.sort_by(|a, b| a.support.cmp(&b.support));
    args
}
