use std::fmt::Write;

use super::KbDocument;
use crate::am::ElementKind;
use crate::language::{Literal, Role};
use crate::rational::format_rational;

fn literal(l: &Literal) -> String {
    if l.negated {
        format!("neg {}", l.atom)
    } else {
        l.atom.to_string()
    }
}

/// Canonical text of a document: sections in a fixed order, one statement
/// per line.
pub fn render(doc: &KbDocument) -> String {
    let mut out = String::new();

    if !doc.sorts.is_empty() {
        out.push_str("#sorts\n");
        for s in &doc.sorts {
            let kw = match s.value.role {
                Role::Actor => "actor",
                Role::Operation => "operation",
                Role::Plain => "constant",
            };
            let _ = writeln!(out, "{kw} {}.", s.value.names.join(", "));
        }
    }

    if let Some(universe) = &doc.universe {
        out.push_str("#universe\n");
        if !universe.is_empty() {
            let atoms: Vec<String> = universe.iter().map(|a| a.value.to_string()).collect();
            let _ = writeln!(out, "{}.", atoms.join(", "));
        }
    }

    if !doc.em.is_empty() {
        out.push_str("#em\n");
        for f in &doc.em {
            let _ = writeln!(
                out,
                "{} : {} +- {}.",
                f.value.formula,
                format_rational(&f.value.p),
                format_rational(&f.value.eps)
            );
        }
    }

    if !doc.ic.is_empty() {
        out.push_str("#ic\n");
        for c in &doc.ic {
            let _ = writeln!(out, "{}.", c.value);
        }
    }

    if !doc.am.is_empty() {
        out.push_str("#am\n");
        for s in &doc.am {
            let st = &s.value;
            let head = literal(&st.rule.head);
            match st.kind {
                ElementKind::Fact => {
                    let _ = writeln!(out, "{} : fact {head}.", st.label);
                }
                ElementKind::Presumption => {
                    let _ = writeln!(out, "{} : presume {head}.", st.label);
                }
                ElementKind::StrictRule | ElementKind::DefeasibleRule => {
                    let arrow = if st.kind == ElementKind::StrictRule {
                        "<-"
                    } else {
                        "-<"
                    };
                    let body: Vec<String> = st
                        .rule
                        .body
                        .iter()
                        .map(literal)
                        .chain(st.rule.guards.iter().map(|g| g.to_string()))
                        .collect();
                    let _ = writeln!(out, "{} : {head} {arrow} {}.", st.label, body.join(", "));
                }
            }
        }
    }

    if !doc.af.is_empty() {
        out.push_str("#af\n");
        for a in &doc.af {
            let _ = writeln!(out, "{} : {}.", a.value.label, a.value.formula);
        }
    }

    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_kb;
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let src = "% sample\n#am\nd : condOp(X,O) -< evidOf(X,O), X != krasnovia.\n\
                   o : neg p <- q.\nf : fact q.\n\
                   #em\na ^ (b v ~c) : 1/3 +- 0.\n#sorts\nactor baja.\n\
                   #ic\noneOf{a, b}.\n#af\nd : a v b.\n#universe\na, b, c.\n";
        let doc = parse_kb(src).unwrap();
        let text = render(&doc);
        let again = parse_kb(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(render(&again), text);
        assert!(text.starts_with(
            "#sorts\nactor baja.\n#universe\na, b, c.\n#em\na ^ (b v ~c) : 1/3 +- 0.\n"
        ));
    }
}
