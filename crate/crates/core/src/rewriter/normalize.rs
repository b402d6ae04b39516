use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::expr::{infer_header, Expr};

use super::rules::{
    all_builtin_orientations, applicable_among, apply_rule, Application, Orientation, RuleId, TraceStep,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Selections toward the leaves, projections toward the root, literals
    /// folded as soon as possible.
    Pushdown,
    /// Breadth-first closure under every built-in rule; keeps the smallest
    /// expression seen.
    Exhaustive,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "pushdown" => Ok(Strategy::Pushdown),
            "exhaustive" => Ok(Strategy::Exhaustive),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Pushdown => "pushdown",
            Strategy::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    FixedPoint,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub expr: Expr,
    pub trace: Vec<TraceStep>,
    pub status: Status,
}

pub const PUSHDOWN_RULES: [(RuleId, Orientation); 5] = [
    (RuleId::ConstantFold, Orientation::Ltr),
    (RuleId::EmptyAnnihilate, Orientation::Ltr),
    (RuleId::PushSelectThroughProject, Orientation::Ltr),
    (RuleId::PushCrossThroughProject, Orientation::Ltr),
    (RuleId::PushCrossThroughSelect, Orientation::Rtl),
];

/// Rewrites `e` under `strategy`, spending at most `budget` rule
/// applications.
pub fn normalize(e: &Expr, c: &Catalog, strategy: Strategy, budget: usize) -> Result<Normalized> {
    infer_header(e, c)?;
    match strategy {
        Strategy::Pushdown => pushdown(e, c, budget),
        Strategy::Exhaustive => exhaustive(e, c, budget),
    }
}

fn pushdown(e: &Expr, c: &Catalog, budget: usize) -> Result<Normalized> {
    let mut current = e.clone();
    let mut trace = Vec::new();
    loop {
        let Some(app) = applicable_among(&current, c, &PUSHDOWN_RULES)?.into_iter().next() else {
            return Ok(Normalized {
                expr: current,
                trace,
                status: Status::FixedPoint,
            });
        };
        if trace.len() == budget {
            return Ok(Normalized {
                expr: current,
                trace,
                status: Status::BudgetExhausted,
            });
        }
        let after = apply_rule(&current, &app, c)?;
        trace.push(step(app, current, after.clone()));
        current = after;
    }
}

fn step(app: Application, before: Expr, after: Expr) -> TraceStep {
    TraceStep {
        rule: app.rule,
        orientation: app.orientation,
        position: app.position,
        before,
        after,
    }
}

fn exhaustive(e: &Expr, c: &Catalog, budget: usize) -> Result<Normalized> {
    struct Node {
        expr: Expr,
        text: String,
        parent: Option<(usize, Application)>,
    }
    let rules = all_builtin_orientations();
    let mut nodes = vec![Node {
        expr: e.clone(),
        text: e.to_string(),
        parent: None,
    }];
    let mut seen: HashMap<Expr, usize> = HashMap::from([(e.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut spent = 0;
    let mut status = Status::FixedPoint;
    'search: while let Some(i) = queue.pop_front() {
        for app in applicable_among(&nodes[i].expr, c, &rules)? {
            if spent == budget {
                status = Status::BudgetExhausted;
                break 'search;
            }
            spent += 1;
            let next = apply_rule(&nodes[i].expr, &app, c)?;
            if seen.contains_key(&next) {
                continue;
            }
            seen.insert(next.clone(), nodes.len());
            queue.push_back(nodes.len());
            nodes.push(Node {
                text: next.to_string(),
                expr: next,
                parent: Some((i, app)),
            });
        }
    }
    let best = (0..nodes.len())
        .min_by(|&a, &b| {
            let key = |n: &Node| (n.expr.node_count(), n.text.clone());
            key(&nodes[a]).cmp(&key(&nodes[b]))
        })
        .expect("at least the input");
    let mut path = Vec::new();
    let mut at = best;
    while let Some((parent, app)) = &nodes[at].parent {
        path.push(step(app.clone(), nodes[*parent].expr.clone(), nodes[at].expr.clone()));
        at = *parent;
    }
    path.reverse();
    Ok(Normalized {
        expr: nodes[best].expr.clone(),
        trace: path,
        status,
    })
}

/// Re-applies every step of `trace` starting from `e`, checking that each
/// step starts where the previous one ended and produces what it recorded.
pub fn replay(e: &Expr, trace: &[TraceStep], c: &Catalog) -> Result<Expr> {
    let mut current = e.clone();
    for s in trace {
        let app = s.application();
        if s.before != current {
            return Err(Error::RuleNotApplicable {
                rule: format!("{} {}", s.rule, s.orientation),
                position: s.position.to_string(),
            });
        }
        let after = apply_rule(&current, &app, c)?;
        if after != s.after {
            return Err(Error::RuleNotApplicable {
                rule: format!("{} {}", s.rule, s.orientation),
                position: s.position.to_string(),
            });
        }
        current = after;
    }
    Ok(current)
}
