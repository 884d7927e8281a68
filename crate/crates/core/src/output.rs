//! JSON reports and plain-text rendering of query results.
//!
//! Rationals are serialized as exact strings (`"0.75"`, `"1/3"`).

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::am::{DefeatKind, Dialectic, Mark, MarkedNode, MarkedTree};
use crate::attribution::AttributionAnswer;
use crate::em::ProbabilityInterval;
use crate::language::World;
use crate::rational::format_rational;

/// The schema every `--json` report conforms to.
pub const REPORT_SCHEMA: &str = include_str!("../schema/inca-output.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalJson {
    pub p: String,
    pub eps: String,
    pub lower: String,
    pub upper: String,
}

impl From<&ProbabilityInterval> for IntervalJson {
    fn from(i: &ProbabilityInterval) -> Self {
        IntervalJson {
            p: format_rational(&i.p()),
            eps: format_rational(&i.eps()),
            lower: format_rational(&i.lower),
            upper: format_rational(&i.upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgumentJson {
    pub conclusion: String,
    pub support: Vec<String>,
}

impl ArgumentJson {
    pub fn new(dialectic: &Dialectic, ix: usize) -> Self {
        let a = dialectic.argument(ix);
        ArgumentJson {
            conclusion: a.conclusion.to_string(),
            support: dialectic
                .program()
                .ids(&a.support)
                .into_iter()
                .map(String::from)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeJson {
    pub argument: ArgumentJson,
    pub mark: Mark,
    pub defeat_kind: Option<DefeatKind>,
    pub children: Vec<NodeJson>,
}

impl NodeJson {
    pub fn new(dialectic: &Dialectic, node: &MarkedNode) -> Self {
        NodeJson {
            argument: ArgumentJson::new(dialectic, node.argument),
            mark: node.mark,
            defeat_kind: node.defeat,
            children: node
                .children
                .iter()
                .map(|c| NodeJson::new(dialectic, c))
                .collect(),
        }
    }
}

pub fn forest_json(dialectic: &Dialectic, forest: &[MarkedTree]) -> Vec<NodeJson> {
    forest
        .iter()
        .map(|t| NodeJson::new(dialectic, &t.root))
        .collect()
}

pub fn world_json(w: &World) -> Vec<String> {
    w.atoms().map(|a| a.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceJson {
    pub world: Vec<String>,
    pub forest: Vec<NodeJson>,
}

/// A query report. Only the fields relevant to a query are present.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub query: BTreeMap<String, serde_json::Value>,
    pub result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worlds: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forest: Option<Vec<NodeJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub most_probable: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_suspect: Option<BTreeMap<String, IntervalJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<BTreeMap<String, Option<TraceJson>>>,
}

impl Report {
    pub fn new(command: &str, result: serde_json::Value) -> Self {
        let mut query = BTreeMap::new();
        query.insert("command".to_string(), serde_json::Value::from(command));
        Report {
            query,
            result,
            interval: None,
            worlds: None,
            forest: None,
            most_probable: None,
            per_suspect: None,
            trace: None,
        }
    }

    pub fn with_query(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.query.insert(key.to_string(), value.into());
        self
    }

    pub fn with_interval(mut self, i: &ProbabilityInterval) -> Self {
        self.interval = Some(i.into());
        self
    }

    pub fn with_worlds(mut self, worlds: &[World]) -> Self {
        self.worlds = Some(worlds.iter().map(world_json).collect());
        self
    }

    pub fn with_forest(mut self, dialectic: &Dialectic, forest: &[MarkedTree]) -> Self {
        self.forest = Some(forest_json(dialectic, forest));
        self
    }

    pub fn with_answer(mut self, dialectic: &Dialectic, answer: &AttributionAnswer) -> Self {
        self.most_probable = Some(answer.most_probable.clone());
        self.per_suspect = Some(
            answer
                .per_suspect
                .iter()
                .map(|(s, i)| (s.clone(), i.into()))
                .collect(),
        );
        self.trace = Some(
            answer
                .trace
                .iter()
                .map(|(s, t)| {
                    let t = t.as_ref().map(|t| TraceJson {
                        world: world_json(&t.world),
                        forest: forest_json(dialectic, &t.forest),
                    });
                    (s.clone(), t)
                })
                .collect(),
        );
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn mark_letter(m: Mark) -> &'static str {
    match m {
        Mark::Undefeated => "U",
        Mark::Defeated => "D",
    }
}

/// Indented text form of a marked forest, one argument per line.
pub fn forest_text(dialectic: &Dialectic, forest: &[MarkedTree]) -> String {
    fn node(d: &Dialectic, n: &MarkedNode, depth: usize, out: &mut String) {
        let prefix = match n.defeat {
            None => String::new(),
            Some(DefeatKind::Proper) => "proper defeater ".into(),
            Some(DefeatKind::Blocking) => "blocking defeater ".into(),
        };
        let _ = writeln!(
            out,
            "{}{prefix}{} [{}]",
            "  ".repeat(depth),
            d.argument(n.argument).display(d.program()),
            mark_letter(n.mark)
        );
        for c in &n.children {
            node(d, c, depth + 1, out);
        }
    }
    let mut out = String::new();
    for t in forest {
        node(dialectic, &t.root, 0, &mut out);
    }
    out
}
