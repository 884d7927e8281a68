use std::collections::BTreeMap;

use super::lexer::error_at;
use super::{parse_kb, KbDocument, Span};
use crate::am::{AmElement, AmProgram, Dialectic, ElementKind, ATTRIBUTION_PREDICATE};
use crate::bridge::{AnnotationFunction, InCaFramework, PossibilityMode};
use crate::em::{EmKnowledgeBase, DEFAULT_MAX_ATOMS};
use crate::error::{IncaError, Result};
use crate::language::{instantiate_with_bindings, Constants, Formula, Role, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub max_atoms: usize,
    pub mode: PossibilityMode,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            max_atoms: DEFAULT_MAX_ATOMS,
            mode: PossibilityMode::default(),
        }
    }
}

/// Parses and assembles in one step.
pub fn load(source: &str, options: LoadOptions) -> Result<(KbDocument, InCaFramework)> {
    let doc = parse_kb(source)?;
    let fw = assemble(&doc, source, options)?;
    Ok((doc, fw))
}

/// Grounds the schematic statements and builds the framework. `source`
/// is only used to quote the offending line in errors.
pub fn assemble(doc: &KbDocument, source: &str, options: LoadOptions) -> Result<InCaFramework> {
    let located = |span: Span, message: String| -> IncaError {
        IncaError::Parse(error_at(source, span, message))
    };

    let mut constants = Constants::new();
    for s in &doc.sorts {
        for n in &s.value.names {
            if let Some(existing) = constants.role(n) {
                if existing != Role::Plain
                    && s.value.role != Role::Plain
                    && existing != s.value.role
                {
                    return Err(located(
                        s.span,
                        format!("constant {n} declared with two roles"),
                    ));
                }
            }
            constants.declare(n.clone(), s.value.role);
        }
    }
    for s in &doc.am {
        for lit in s.value.rule.literals() {
            for t in &lit.atom.args {
                if let Term::Const(c) = t {
                    constants.declare(c.clone(), Role::Plain);
                }
            }
        }
        for g in &s.value.rule.guards {
            for t in [&g.0, &g.1] {
                if let Term::Const(c) = t {
                    constants.declare(c.clone(), Role::Plain);
                }
            }
        }
    }

    let mut elements = Vec::new();
    let mut instances: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for s in &doc.am {
        let st = &s.value;
        if st.kind == ElementKind::Fact && st.rule.head.atom.predicate == ATTRIBUTION_PREDICATE {
            return Err(located(
                s.span,
                format!(
                    "{ATTRIBUTION_PREDICATE} must be concluded defeasibly, not stated as a fact"
                ),
            ));
        }
        let ground = st.rule.variables().is_empty();
        for (binding, rule) in instantiate_with_bindings(&st.rule, &constants) {
            let id = if ground {
                st.label.clone()
            } else {
                let values: Vec<&str> = binding.iter().map(|(_, v)| v.as_str()).collect();
                format!("{}[{}]", st.label, values.join(","))
            };
            let element = match st.kind {
                ElementKind::Fact => AmElement::fact(&id, rule.head),
                ElementKind::Presumption => AmElement::presumption(&id, rule.head),
                ElementKind::StrictRule => AmElement::strict(&id, rule.head, rule.body),
                ElementKind::DefeasibleRule => AmElement::defeasible(&id, rule.head, rule.body),
            };
            instances.entry(&st.label).or_default().push(id);
            elements.push(element);
        }
    }
    let program = AmProgram::new(elements)?;

    let mut af = AnnotationFunction::new();
    for a in &doc.af {
        for id in instances.get(a.value.label.as_str()).into_iter().flatten() {
            af.insert(id.clone(), a.value.formula.clone());
        }
    }

    let formulas = doc.em.iter().map(|f| f.value.clone()).collect();
    let constraints = doc.ic.iter().map(|c| c.value.clone()).collect();
    let mut em = EmKnowledgeBase::new(formulas, constraints).with_max_atoms(options.max_atoms);
    if let Some(universe) = &doc.universe {
        let span = universe
            .first()
            .map_or(Span { line: 1, column: 1 }, |a| a.span);
        let atoms: Vec<_> = universe.iter().map(|a| a.value.clone()).collect();
        em = em
            .with_universe(atoms)
            .map_err(|e| located(span, e.to_string()))?;
        for a in &doc.af {
            if let Some(outside) = Formula::atoms(&a.value.formula)
                .into_iter()
                .find(|x| !em.universe().contains(x))
            {
                return Err(located(
                    a.span,
                    format!("annotation atom {outside} is not in the declared universe"),
                ));
            }
        }
    }

    let dialectic = Dialectic::new(program)?;
    Ok(InCaFramework::from_dialectic(em, dialectic, af)?
        .with_mode(options.mode)
        .with_constants(constants))
}
