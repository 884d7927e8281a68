//! The analytical model: ground PreDeLP programs (facts, strict rules,
//! presumptions, defeasible rules), argument construction, the attack and
//! preference relations, and dialectical analysis.

mod argument;
mod dialectic;
mod preference;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use argument::{arguments_for, is_subargument, Argument};
pub use dialectic::{
    mark_tree, Context, DefeatKind, Dialectic, DialecticalNode, DialecticalTree, Mark, MarkedNode,
    MarkedTree, WarrantStatus,
};
pub use preference::DEFAULT_SPECIFICITY_CAP;

use crate::error::{IncaError, Result};
use crate::language::Literal;

/// Predicate whose literals may only be concluded defeasibly.
pub const ATTRIBUTION_PREDICATE: &str = "condOp";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Fact,
    StrictRule,
    Presumption,
    DefeasibleRule,
}

impl ElementKind {
    pub fn is_defeasible(self) -> bool {
        matches!(self, ElementKind::Presumption | ElementKind::DefeasibleRule)
    }

    pub fn is_strict(self) -> bool {
        !self.is_defeasible()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmElement {
    pub id: String,
    pub kind: ElementKind,
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl AmElement {
    pub fn fact(id: &str, head: Literal) -> Self {
        AmElement {
            id: id.into(),
            kind: ElementKind::Fact,
            head,
            body: Vec::new(),
        }
    }

    pub fn presumption(id: &str, head: Literal) -> Self {
        AmElement {
            id: id.into(),
            kind: ElementKind::Presumption,
            head,
            body: Vec::new(),
        }
    }

    pub fn strict(id: &str, head: Literal, body: Vec<Literal>) -> Self {
        AmElement {
            id: id.into(),
            kind: ElementKind::StrictRule,
            head,
            body,
        }
    }

    pub fn defeasible(id: &str, head: Literal, body: Vec<Literal>) -> Self {
        AmElement {
            id: id.into(),
            kind: ElementKind::DefeasibleRule,
            head,
            body,
        }
    }
}

impl fmt::Display for AmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self
            .body
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        match self.kind {
            ElementKind::Fact => write!(f, "{} : {}", self.id, self.head),
            ElementKind::Presumption => write!(f, "{} : {} -<", self.id, self.head),
            ElementKind::StrictRule => write!(f, "{} : {} <- {}", self.id, self.head, body),
            ElementKind::DefeasibleRule => write!(f, "{} : {} -< {}", self.id, self.head, body),
        }
    }
}

/// A set of program elements, by index into [`AmProgram::elements`].
pub type ElementSet = BTreeSet<usize>;

/// A ground PreDeLP program with literals interned for fast closure.
#[derive(Debug, Clone)]
pub struct AmProgram {
    elements: Vec<AmElement>,
    by_id: HashMap<String, usize>,
    literals: Vec<Literal>,
    literal_index: HashMap<Literal, usize>,
    complement: Vec<usize>,
    heads: Vec<usize>,
    bodies: Vec<Vec<usize>>,
}

impl AmProgram {
    pub fn new(elements: Vec<AmElement>) -> Result<Self> {
        let mut program = AmProgram {
            elements: Vec::with_capacity(elements.len()),
            by_id: HashMap::new(),
            literals: Vec::new(),
            literal_index: HashMap::new(),
            complement: Vec::new(),
            heads: Vec::new(),
            bodies: Vec::new(),
        };
        for e in elements {
            if program.by_id.contains_key(&e.id) {
                return Err(IncaError::Invalid(format!("duplicate element id {}", e.id)));
            }
            if let Some(l) = std::iter::once(&e.head)
                .chain(e.body.iter())
                .find(|l| !l.is_ground())
            {
                return Err(IncaError::Groundedness(format!("{l} in element {}", e.id)));
            }
            if e.kind == ElementKind::Fact && e.head.atom.predicate == ATTRIBUTION_PREDICATE {
                return Err(IncaError::Invalid(format!(
                    "{}: {ATTRIBUTION_PREDICATE} literals must be defeasible, not facts",
                    e.id
                )));
            }
            let head = program.intern(&e.head);
            let body = e.body.iter().map(|l| program.intern(l)).collect();
            program.by_id.insert(e.id.clone(), program.elements.len());
            program.heads.push(head);
            program.bodies.push(body);
            program.elements.push(e);
        }
        Ok(program)
    }

    fn intern(&mut self, literal: &Literal) -> usize {
        if let Some(&i) = self.literal_index.get(literal) {
            return i;
        }
        let i = self.literals.len();
        let c = literal.complement();
        self.literals.push(literal.clone());
        self.literals.push(c.clone());
        self.literal_index.insert(literal.clone(), i);
        self.literal_index.insert(c, i + 1);
        self.complement.push(i + 1);
        self.complement.push(i);
        i
    }

    pub fn elements(&self) -> &[AmElement] {
        &self.elements
    }

    pub fn element(&self, ix: usize) -> &AmElement {
        &self.elements[ix]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Resolves element ids; unknown ids are an error.
    pub fn element_set(&self, ids: &[&str]) -> Result<ElementSet> {
        ids.iter()
            .map(|id| {
                self.index_of(id)
                    .ok_or_else(|| IncaError::Invalid(format!("unknown element {id}")))
            })
            .collect()
    }

    pub fn ids(&self, set: &ElementSet) -> Vec<&str> {
        set.iter().map(|&i| self.elements[i].id.as_str()).collect()
    }

    pub fn of_kind(&self, kind: ElementKind) -> ElementSet {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].kind == kind)
            .collect()
    }

    /// Θ ∪ Ω.
    pub fn strict_part(&self) -> ElementSet {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].kind.is_strict())
            .collect()
    }

    pub fn kind(&self, ix: usize) -> ElementKind {
        self.elements[ix].kind
    }

    pub(crate) fn literal_id(&self, literal: &Literal) -> Option<usize> {
        self.literal_index.get(literal).copied()
    }

    pub(crate) fn literal(&self, id: usize) -> &Literal {
        &self.literals[id]
    }

    pub(crate) fn head(&self, ix: usize) -> usize {
        self.heads[ix]
    }

    pub(crate) fn body(&self, ix: usize) -> &[usize] {
        &self.bodies[ix]
    }

    /// Forward-chaining closure of the given elements, with `extra` literal
    /// ids asserted as facts.
    pub(crate) fn closure<'a>(
        &self,
        elements: impl IntoIterator<Item = &'a usize>,
        extra: &[usize],
    ) -> Vec<bool> {
        let rules: Vec<usize> = elements.into_iter().copied().collect();
        let mut known = vec![false; self.literals.len()];
        for &l in extra {
            known[l] = true;
        }
        let mut fired = vec![false; rules.len()];
        loop {
            let mut changed = false;
            for (k, &r) in rules.iter().enumerate() {
                if fired[k] {
                    continue;
                }
                if self.bodies[r].iter().all(|&b| known[b]) {
                    fired[k] = true;
                    if !known[self.heads[r]] {
                        known[self.heads[r]] = true;
                    }
                    changed = true;
                }
            }
            if !changed {
                return known;
            }
        }
    }

    pub(crate) fn has_complementary_pair(&self, known: &[bool]) -> bool {
        (0..known.len()).any(|l| known[l] && known[self.complement[l]])
    }

    /// Whether `literal` is in the forward-chaining closure of `elements`
    /// (facts and presumptions act as empty-body rules).
    pub fn derives(&self, elements: &ElementSet, literal: &Literal) -> bool {
        match self.literal_id(literal) {
            Some(id) => self.closure(elements, &[])[id],
            None => false,
        }
    }

    /// Like [`derives`](Self::derives) but ignoring presumptions and
    /// defeasible rules.
    pub fn derives_strictly(&self, elements: &ElementSet, literal: &Literal) -> bool {
        let strict: ElementSet = elements
            .iter()
            .copied()
            .filter(|&i| self.kind(i).is_strict())
            .collect();
        self.derives(&strict, literal)
    }

    /// Whether the closure of `elements` contains a literal and its
    /// complement.
    pub fn is_contradictory(&self, elements: &ElementSet) -> bool {
        self.has_complementary_pair(&self.closure(elements, &[]))
    }

    /// Every literal with a defeasible derivation from the whole program.
    pub fn derivable_literals(&self) -> Vec<Literal> {
        self.derivable_ids()
            .into_iter()
            .map(|l| self.literals[l].clone())
            .collect()
    }

    pub(crate) fn derivable_ids(&self) -> Vec<usize> {
        let all: ElementSet = (0..self.elements.len()).collect();
        let known = self.closure(&all, &[]);
        (0..known.len()).filter(|&l| known[l]).collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}
