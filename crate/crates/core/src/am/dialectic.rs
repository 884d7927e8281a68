//! Attack, defeat, dialectical trees and warrant.
//!
//! An argumentation line `[A0, A1, ...]` is acceptable when
//! 1. no argument is a subargument of an earlier one in the line,
//! 2. the supporting arguments (even positions) are jointly
//!    non-contradictory with the available strict knowledge, and likewise
//!    the interfering ones (odd positions),
//! 3. a blocking defeater is only ever followed by a proper defeater.
//!
//! Condition 1 also makes every line finite.

use std::collections::HashMap;

use serde::Serialize;

use super::argument::{arguments_for_id, is_subargument};
use super::preference::Specificity;
use super::{AmProgram, Argument, ElementSet};
use crate::error::{IncaError, Result};
use crate::language::Literal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DefeatKind {
    Proper,
    Blocking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mark {
    #[serde(rename = "U")]
    Undefeated,
    #[serde(rename = "D")]
    Defeated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WarrantStatus {
    Warranted,
    NotWarranted,
    Undecided,
}

impl WarrantStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            WarrantStatus::Warranted => "warranted",
            WarrantStatus::NotWarranted => "not warranted",
            WarrantStatus::Undecided => "undecided",
        }
    }
}

/// Which program elements may take part in arguments. The unrestricted
/// context uses the whole program; a world induces a restricted one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    available: Option<ElementSet>,
}

impl Context {
    pub fn all() -> Self {
        Context { available: None }
    }

    pub fn restricted(available: ElementSet) -> Self {
        Context {
            available: Some(available),
        }
    }

    pub fn admits(&self, argument: &Argument) -> bool {
        match &self.available {
            None => true,
            Some(set) => argument.support.is_subset(set),
        }
    }

    fn strict_base(&self, program: &AmProgram) -> ElementSet {
        let strict = program.strict_part();
        match &self.available {
            None => strict,
            Some(set) => strict.intersection(set).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialecticalNode {
    pub argument: usize,
    /// How this node defeats its parent; `None` at the root.
    pub defeat: Option<DefeatKind>,
    pub children: Vec<DialecticalNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DialecticalTree {
    pub root: DialecticalNode,
}

impl DialecticalTree {
    /// Every root-to-leaf argumentation line.
    pub fn lines(&self) -> Vec<Vec<(usize, Option<DefeatKind>)>> {
        fn walk(
            node: &DialecticalNode,
            prefix: &mut Vec<(usize, Option<DefeatKind>)>,
            out: &mut Vec<Vec<(usize, Option<DefeatKind>)>>,
        ) {
            prefix.push((node.argument, node.defeat));
            if node.children.is_empty() {
                out.push(prefix.clone());
            }
            for c in &node.children {
                walk(c, prefix, out);
            }
            prefix.pop();
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedNode {
    pub argument: usize,
    pub defeat: Option<DefeatKind>,
    pub mark: Mark,
    pub children: Vec<MarkedNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTree {
    pub root: MarkedNode,
}

impl MarkedTree {
    pub fn root_mark(&self) -> Mark {
        self.root.mark
    }
}

/// Leaves are U; an inner node is U iff every child is D.
pub fn mark_tree(tree: &DialecticalTree) -> MarkedTree {
    fn mark(node: &DialecticalNode) -> MarkedNode {
        let children: Vec<MarkedNode> = node.children.iter().map(mark).collect();
        let m = if children.iter().any(|c| c.mark == Mark::Undefeated) {
            Mark::Defeated
        } else {
            Mark::Undefeated
        };
        MarkedNode {
            argument: node.argument,
            defeat: node.defeat,
            mark: m,
            children,
        }
    }
    MarkedTree {
        root: mark(&tree.root),
    }
}

/// All arguments of a ground program with the defeat relation among them
/// precomputed. Argument handles are indices into [`Dialectic::arguments`].
#[derive(Debug, Clone)]
pub struct Dialectic {
    program: AmProgram,
    arguments: Vec<Argument>,
    by_conclusion: HashMap<usize, Vec<usize>>,
    attackers: Vec<Vec<usize>>,
    defeaters: Vec<Vec<(usize, DefeatKind)>>,
    preferred: HashMap<(usize, usize), bool>,
}

impl Dialectic {
    pub fn new(program: AmProgram) -> Result<Self> {
        Self::with_cap(program, super::DEFAULT_SPECIFICITY_CAP)
    }

    pub fn with_cap(program: AmProgram, cap: usize) -> Result<Self> {
        let mut arguments = Vec::new();
        let mut by_conclusion: HashMap<usize, Vec<usize>> = HashMap::new();
        for lit in program.derivable_ids() {
            for arg in arguments_for_id(&program, lit) {
                by_conclusion.entry(lit).or_default().push(arguments.len());
                arguments.push(arg);
            }
        }

        let n = arguments.len();
        let mut attackers = vec![Vec::new(); n];
        for (target, list) in attackers.iter_mut().enumerate() {
            for attacker in 0..n {
                if attacks(&program, &arguments[attacker], &arguments[target]) {
                    list.push(attacker);
                }
            }
        }

        let spec = Specificity::new(&program, cap);
        let mut preferred = HashMap::new();
        let mut defeaters = vec![Vec::new(); n];
        for (target, list) in attackers.iter().enumerate() {
            for &attacker in list {
                let (a, t) = (&arguments[attacker], &arguments[target]);
                let forward = spec.prefers(a, t)?;
                let backward = spec.prefers(t, a)?;
                if forward && backward {
                    return Err(IncaError::InternalInconsistency(
                        "preference is not antisymmetric".into(),
                    ));
                }
                preferred.insert((attacker, target), forward);
                preferred.insert((target, attacker), backward);
                if forward {
                    defeaters[target].push((attacker, DefeatKind::Proper));
                } else if !backward {
                    defeaters[target].push((attacker, DefeatKind::Blocking));
                }
            }
        }

        Ok(Dialectic {
            program,
            arguments,
            by_conclusion,
            attackers,
            defeaters,
            preferred,
        })
    }

    pub fn program(&self) -> &AmProgram {
        &self.program
    }

    pub fn arguments(&self) -> &[Argument] {
        &self.arguments
    }

    pub fn argument(&self, ix: usize) -> &Argument {
        &self.arguments[ix]
    }

    /// Handles of every argument concluding `literal`.
    pub fn arguments_for(&self, literal: &Literal) -> Vec<usize> {
        self.program
            .literal_id(literal)
            .and_then(|id| self.by_conclusion.get(&id).cloned())
            .unwrap_or_default()
    }

    /// Finds the handle of an argument by its exact support.
    pub fn find(&self, support: &ElementSet) -> Option<usize> {
        self.arguments.iter().position(|a| &a.support == support)
    }

    pub fn attacks(&self, attacker: usize, target: usize) -> bool {
        self.attackers[target].contains(&attacker)
    }

    /// Preference between two arguments. Pairs outside the attack relation
    /// are decided on demand.
    pub fn prefers(&self, a1: usize, a2: usize) -> Result<bool> {
        if let Some(&p) = self.preferred.get(&(a1, a2)) {
            return Ok(p);
        }
        Specificity::new(&self.program, super::DEFAULT_SPECIFICITY_CAP)
            .prefers(&self.arguments[a1], &self.arguments[a2])
    }

    pub fn prefers_ps(&self, a1: usize, a2: usize) -> Result<bool> {
        Specificity::new(&self.program, super::DEFAULT_SPECIFICITY_CAP)
            .prefers_ps(&self.arguments[a1], &self.arguments[a2])
    }

    /// Defeaters of `target` whose arguments are available in `ctx`.
    pub fn defeaters(&self, target: usize, ctx: &Context) -> Vec<(usize, DefeatKind)> {
        self.defeaters[target]
            .iter()
            .copied()
            .filter(|(d, _)| ctx.admits(&self.arguments[*d]))
            .collect()
    }

    fn concordant(&self, members: impl Iterator<Item = usize>, ctx: &Context) -> bool {
        let mut set = ctx.strict_base(&self.program);
        for m in members {
            set.extend(self.arguments[m].support.iter().copied());
        }
        !self.program.is_contradictory(&set)
    }

    /// Checks the acceptability conditions on a whole line.
    pub fn line_is_acceptable(&self, line: &[(usize, Option<DefeatKind>)], ctx: &Context) -> bool {
        for k in 1..line.len() {
            let current = &self.arguments[line[k].0];
            if line[..k]
                .iter()
                .any(|(earlier, _)| is_subargument(current, &self.arguments[*earlier]))
            {
                return false;
            }
            if line[k - 1].1 == Some(DefeatKind::Blocking) && line[k].1 != Some(DefeatKind::Proper)
            {
                return false;
            }
            if !self.defeaters[line[k - 1].0]
                .contains(&(line[k].0, line[k].1.unwrap_or(DefeatKind::Proper)))
            {
                return false;
            }
        }
        for parity in 0..2 {
            let members = line.iter().skip(parity).step_by(2).map(|(a, _)| *a);
            if !self.concordant(members, ctx) {
                return false;
            }
        }
        line.iter().all(|(a, _)| ctx.admits(&self.arguments[*a]))
    }

    fn admissible_extension(
        &self,
        line: &[(usize, Option<DefeatKind>)],
        candidate: usize,
        kind: DefeatKind,
        ctx: &Context,
    ) -> bool {
        let arg = &self.arguments[candidate];
        if line
            .iter()
            .any(|(earlier, _)| is_subargument(arg, &self.arguments[*earlier]))
        {
            return false;
        }
        if line.last().and_then(|(_, k)| *k) == Some(DefeatKind::Blocking)
            && kind != DefeatKind::Proper
        {
            return false;
        }
        let parity = line.len() % 2;
        let members = line
            .iter()
            .skip(parity)
            .step_by(2)
            .map(|(a, _)| *a)
            .chain(std::iter::once(candidate));
        self.concordant(members, ctx)
    }

    fn expand(
        &self,
        line: &mut Vec<(usize, Option<DefeatKind>)>,
        ctx: &Context,
    ) -> Vec<DialecticalNode> {
        let last = line.last().expect("non-empty line").0;
        let mut children = Vec::new();
        for (d, kind) in self.defeaters(last, ctx) {
            if !self.admissible_extension(line, d, kind, ctx) {
                continue;
            }
            line.push((d, Some(kind)));
            let grandchildren = self.expand(line, ctx);
            line.pop();
            children.push(DialecticalNode {
                argument: d,
                defeat: Some(kind),
                children: grandchildren,
            });
        }
        children
    }

    /// The exhaustive tree of acceptable argumentation lines rooted at
    /// `root`.
    pub fn build_tree(&self, root: usize, ctx: &Context) -> DialecticalTree {
        let mut line = vec![(root, None)];
        let children = self.expand(&mut line, ctx);
        DialecticalTree {
            root: DialecticalNode {
                argument: root,
                defeat: None,
                children,
            },
        }
    }

    /// One tree per argument for `literal` available in `ctx`.
    pub fn forest(&self, literal: &Literal, ctx: &Context) -> Vec<DialecticalTree> {
        self.arguments_for(literal)
            .into_iter()
            .filter(|&a| ctx.admits(&self.arguments[a]))
            .map(|a| self.build_tree(a, ctx))
            .collect()
    }

    pub fn marked_forest(&self, literal: &Literal, ctx: &Context) -> Vec<MarkedTree> {
        self.forest(literal, ctx).iter().map(mark_tree).collect()
    }

    pub fn is_warranted(&self, literal: &Literal, ctx: &Context) -> bool {
        self.marked_forest(literal, ctx)
            .iter()
            .any(|t| t.root_mark() == Mark::Undefeated)
    }

    pub fn warrant_status(&self, literal: &Literal, ctx: &Context) -> Result<WarrantStatus> {
        let warranted = self.is_warranted(literal, ctx);
        let refuted = self.is_warranted(&literal.complement(), ctx);
        match (warranted, refuted) {
            (true, true) => Err(IncaError::InternalInconsistency(format!(
                "both {literal} and its complement are warranted"
            ))),
            (true, false) => Ok(WarrantStatus::Warranted),
            (false, true) => Ok(WarrantStatus::NotWarranted),
            (false, false) => Ok(WarrantStatus::Undecided),
        }
    }
}

/// `a2` attacks `a1` iff some subargument `⟨A, L″⟩` of `a1` exists such that
/// `Ω(a1) ∪ Ω(a2) ∪ Θ(a1) ∪ Θ(a2) ∪ {L2, L″}` is contradictory under strict
/// closure. The conclusions of subarguments of `a1` are exactly the
/// literals derivable from its own support.
pub(crate) fn attacks(program: &AmProgram, a2: &Argument, a1: &Argument) -> bool {
    let strict: ElementSet = a1
        .strict_rules()
        .iter()
        .chain(a2.strict_rules())
        .chain(a1.facts())
        .chain(a2.facts())
        .copied()
        .collect();
    let sub_conclusions = program.closure(&a1.support, &[]);
    (0..sub_conclusions.len())
        .filter(|&l| sub_conclusions[l])
        .any(|l| {
            let known = program.closure(&strict, &[a2.conclusion_id, l]);
            program.has_complementary_pair(&known)
        })
}
