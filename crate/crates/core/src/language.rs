//! Terms, atoms, literals, formulas and worlds shared by the environmental
//! and analytical models, plus formula satisfaction and sorted grounding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{IncaError, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    /// Classifies a symbol by its first character: uppercase is a variable,
    /// anything else (lowercase, digit) is a constant.
    pub fn from_symbol(name: &str) -> Term {
        if name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            Term::Var(name.to_string())
        } else {
            Term::Const(name.to_string())
        }
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelTag {
    Em,
    Am,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
    pub tag: ModelTag,
}

impl Atom {
    pub fn new(tag: ModelTag, predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
            tag,
        }
    }

    /// Ground atom from constant names.
    pub fn ground(tag: ModelTag, predicate: &str, args: &[&str]) -> Self {
        Atom::new(
            tag,
            predicate,
            args.iter().map(|a| Term::constant(*a)).collect(),
        )
    }

    pub fn em(predicate: &str, args: &[&str]) -> Self {
        Atom::ground(ModelTag::Em, predicate, args)
    }

    pub fn am(predicate: &str, args: &[&str]) -> Self {
        Atom::ground(ModelTag::Am, predicate, args)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    fn substitute(&self, binding: &BTreeMap<String, String>) -> Atom {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => binding
                    .get(v)
                    .map(|c| Term::Const(c.clone()))
                    .unwrap_or_else(|| t.clone()),
                Term::Const(_) => t.clone(),
            })
            .collect();
        Atom::new(self.tag, self.predicate.clone(), args)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An analytical-model atom, possibly under strong negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal {
            atom,
            negated: false,
        }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal {
            atom,
            negated: true,
        }
    }

    pub fn am(predicate: &str, args: &[&str]) -> Self {
        Literal::positive(Atom::am(predicate, args))
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    fn substitute(&self, binding: &BTreeMap<String, String>) -> Literal {
        Literal {
            atom: self.atom.substitute(binding),
            negated: self.negated,
        }
    }
}

pub fn complement(literal: &Literal) -> Literal {
    literal.complement()
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Top,
    Bottom,
}

impl Formula {
    pub fn atom(atom: Atom) -> Self {
        Formula::Atom(atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(parts: Vec<Formula>) -> Self {
        Formula::And(parts)
    }

    pub fn or(parts: Vec<Formula>) -> Self {
        Formula::Or(parts)
    }

    /// Collects every atom leaf.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) => f.collect_atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Top | Formula::Bottom => {}
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Atom(a) => a.is_ground(),
            Formula::Not(f) => f.is_ground(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_ground),
            Formula::Top | Formula::Bottom => true,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(fs) if fs.len() > 1 => 1,
            Formula::And(fs) if fs.len() > 1 => 2,
            _ => 3,
        }
    }

    fn fmt_child(&self, child: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() <= self.precedence() && child.precedence() < 3 {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

/// Renders in the knowledge-base syntax: `~`, `^`, `v`, `true`, `false`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Top => f.write_str("true"),
            Formula::Bottom => f.write_str("false"),
            Formula::Not(inner) => {
                f.write_str("~")?;
                if inner.precedence() < 3 {
                    write!(f, "({inner})")
                } else {
                    write!(f, "{inner}")
                }
            }
            Formula::And(parts) | Formula::Or(parts) => {
                let (sep, empty) = if matches!(self, Formula::And(_)) {
                    (" ^ ", "true")
                } else {
                    (" v ", "false")
                };
                match parts.len() {
                    0 => f.write_str(empty),
                    1 => write!(f, "{}", parts[0]),
                    _ => {
                        for (i, p) in parts.iter().enumerate() {
                            if i > 0 {
                                f.write_str(sep)?;
                            }
                            self.fmt_child(p, f)?;
                        }
                        Ok(())
                    }
                }
            }
        }
    }
}

/// A set of ground atoms taken as true; every other atom is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    atoms: BTreeSet<Atom>,
}

impl World {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        World {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        World::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// `w ⊨ f`. Fails on non-ground formulas.
pub fn satisfies(world: &World, formula: &Formula) -> Result<bool> {
    if !formula.is_ground() {
        return Err(IncaError::Groundedness(formula.to_string()));
    }
    Ok(eval(world, formula))
}

fn eval(world: &World, formula: &Formula) -> bool {
    match formula {
        Formula::Atom(a) => world.contains(a),
        Formula::Not(f) => !eval(world, f),
        Formula::And(fs) => fs.iter().all(|f| eval(world, f)),
        Formula::Or(fs) => fs.iter().any(|f| eval(world, f)),
        Formula::Top => true,
        Formula::Bottom => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Actor,
    Operation,
    Plain,
}

/// Argument positions that are restricted to actors or operations during
/// grounding. Predicates not listed here ground over every constant.
pub fn sort_of(predicate: &str, position: usize) -> Option<Role> {
    use Role::*;
    let sig: &[Role] = match predicate {
        "condOp" => &[Actor, Operation],
        "motiv" => &[Actor, Actor],
        "isCap" => &[Actor, Operation],
        "tgt" => &[Actor, Operation],
        _ => return None,
    };
    sig.get(position).copied()
}

/// The constant symbols available for grounding, each with a role.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Constants {
    roles: BTreeMap<String, Role>,
}

impl Constants {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a constant. A later actor/operation declaration overrides an
    /// earlier plain one, never the other way around.
    pub fn declare(&mut self, name: impl Into<String>, role: Role) {
        let name = name.into();
        match self.roles.get(&name) {
            Some(existing) if role == Role::Plain && *existing != Role::Plain => {}
            _ => {
                self.roles.insert(name, role);
            }
        }
    }

    pub fn with(mut self, names: &[&str], role: Role) -> Self {
        for n in names {
            self.declare(*n, role);
        }
        self
    }

    pub fn role(&self, name: &str) -> Option<Role> {
        self.roles.get(name).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.roles.keys().map(String::as_str)
    }

    pub fn with_role(&self, role: Role) -> impl Iterator<Item = &str> {
        self.roles
            .iter()
            .filter(move |(_, r)| **r == role)
            .map(|(n, _)| n.as_str())
    }
}

/// `left != right`, resolved while grounding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality(pub Term, pub Term);

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} != {}", self.0, self.1)
    }
}

/// A possibly schematic rule. Facts and presumptions have an empty body.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Literal,
    pub body: Vec<Literal>,
    pub guards: Vec<Inequality>,
}

impl Rule {
    pub fn fact(head: Literal) -> Self {
        Rule {
            head,
            body: Vec::new(),
            guards: Vec::new(),
        }
    }

    pub fn new(head: Literal, body: Vec<Literal>) -> Self {
        Rule {
            head,
            body,
            guards: Vec::new(),
        }
    }

    pub fn with_guard(mut self, left: &str, right: &str) -> Self {
        self.guards.push(Inequality(
            Term::from_symbol(left),
            Term::from_symbol(right),
        ));
        self
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        std::iter::once(&self.head).chain(self.body.iter())
    }

    pub fn is_ground(&self) -> bool {
        self.literals().all(Literal::is_ground)
            && self
                .guards
                .iter()
                .all(|g| g.0.is_ground() && g.1.is_ground())
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::new();
        let guard_terms = self.guards.iter().flat_map(|g| [&g.0, &g.1]);
        let terms = self
            .literals()
            .flat_map(|l| l.atom.args.iter())
            .chain(guard_terms);
        for t in terms {
            if let Term::Var(v) = t {
                if !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
        }
        seen
    }

    fn variable_roles(&self) -> BTreeMap<String, BTreeSet<Role>> {
        let mut roles: BTreeMap<String, BTreeSet<Role>> = BTreeMap::new();
        for lit in self.literals() {
            for (i, t) in lit.atom.args.iter().enumerate() {
                if let (Term::Var(v), Some(role)) = (t, sort_of(&lit.atom.predicate, i)) {
                    roles.entry(v.clone()).or_default().insert(role);
                }
            }
        }
        roles
    }

    fn substitute(&self, binding: &BTreeMap<String, String>) -> Rule {
        Rule {
            head: self.head.substitute(binding),
            body: self.body.iter().map(|l| l.substitute(binding)).collect(),
            guards: Vec::new(),
        }
    }
}

/// One admissible variable binding of a schematic rule, in variable order.
pub type Binding = Vec<(String, String)>;

/// Every admissible binding of the rule's variables: sorted positions only
/// take constants of the matching role, and inequality guards discard
/// violating bindings.
pub fn bindings(rule: &Rule, constants: &Constants) -> Vec<Binding> {
    let vars = rule.variables();
    let roles = rule.variable_roles();
    let domains: Vec<Vec<String>> = vars
        .iter()
        .map(|v| match roles.get(v) {
            Some(rs) if rs.len() > 1 => Vec::new(),
            Some(rs) => {
                let role = *rs.iter().next().expect("non-empty role set");
                constants.with_role(role).map(str::to_string).collect()
            }
            None => constants.names().map(str::to_string).collect(),
        })
        .collect();

    let mut out = Vec::new();
    let mut current: BTreeMap<String, String> = BTreeMap::new();
    extend_bindings(rule, &vars, &domains, 0, &mut current, &mut out);
    out
}

fn extend_bindings(
    rule: &Rule,
    vars: &[String],
    domains: &[Vec<String>],
    depth: usize,
    current: &mut BTreeMap<String, String>,
    out: &mut Vec<Binding>,
) {
    if depth == vars.len() {
        let resolve = |t: &Term| match t {
            Term::Var(v) => current.get(v).cloned().unwrap_or_default(),
            Term::Const(c) => c.clone(),
        };
        if rule.guards.iter().all(|g| resolve(&g.0) != resolve(&g.1)) {
            out.push(
                vars.iter()
                    .map(|v| (v.clone(), current[v].clone()))
                    .collect(),
            );
        }
        return;
    }
    for c in &domains[depth] {
        current.insert(vars[depth].clone(), c.clone());
        extend_bindings(rule, vars, domains, depth + 1, current, out);
    }
    current.remove(&vars[depth]);
}

/// All ground instances of a schematic rule. A ground rule yields itself
/// (with its guards evaluated and dropped).
pub fn instantiate(rule: &Rule, constants: &Constants) -> Vec<Rule> {
    instantiate_with_bindings(rule, constants)
        .into_iter()
        .map(|(_, r)| r)
        .collect()
}

pub fn instantiate_with_bindings(rule: &Rule, constants: &Constants) -> Vec<(Binding, Rule)> {
    bindings(rule, constants)
        .into_iter()
        .map(|b| {
            let map: BTreeMap<String, String> = b.iter().cloned().collect();
            let ground = rule.substitute(&map);
            (b, ground)
        })
        .collect()
}

/// Ground instances of a schematic literal.
pub fn instantiate_literal(literal: &Literal, constants: &Constants) -> Vec<Literal> {
    instantiate(&Rule::fact(literal.clone()), constants)
        .into_iter()
        .map(|r| r.head)
        .collect()
}
