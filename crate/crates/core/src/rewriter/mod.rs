//! Guarded, position-addressed rewriting of lattice expressions.
//!
//! Rules are equations between patterns whose names act as metavariables.
//! Guards look at inferred headers only, so a rewrite that passes its guard
//! is valid for every catalog with those headers.

mod equivalence;
mod normalize;
mod rules;

pub use equivalence::{equivalent, random_catalog, Equivalence};
pub use normalize::{normalize, replay, Normalized, Status, Strategy, PUSHDOWN_RULES};
pub use rules::{
    applicable_rules, apply_rule, builtin_rules, expand_macro, Application, Direction, Guard,
    Orientation, RewriteRule, RuleBody, RuleId, TraceStep,
};
