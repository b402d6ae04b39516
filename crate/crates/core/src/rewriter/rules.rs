use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::expr::{desugar_node, evaluate, infer_header, parse, Expr, Position};
use crate::laws::{join_over_union_applicable, union_over_join_applicable};
use crate::relation::{inner_union, natural_join, special_element, Relation, SpecialCode};
use crate::value::Header;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    JoinIdempotent,
    UnionIdempotent,
    JoinCommutative,
    UnionCommutative,
    JoinAssociative,
    UnionAssociative,
    AbsorbJoinOverUnion,
    AbsorbUnionOverJoin,
    DistribJoinOverUnion,
    DistribUnionOverJoin,
    ConstantFold,
    EmptyAnnihilate,
    PushCrossThroughSelect,
    PushSelectThroughProject,
    PushCrossThroughProject,
    /// Rewrites one selection, projection or renaming into join/union form.
    Desugar,
    /// `[p] * X` back to `select(X, p)`.
    ResugarSelect,
    /// `[P] + X` back to `project(X, P)`.
    ResugarProject,
}

impl RuleId {
    /// Registry order.
    pub const BUILTIN: [RuleId; 15] = [
        RuleId::JoinIdempotent,
        RuleId::UnionIdempotent,
        RuleId::JoinCommutative,
        RuleId::UnionCommutative,
        RuleId::JoinAssociative,
        RuleId::UnionAssociative,
        RuleId::AbsorbJoinOverUnion,
        RuleId::AbsorbUnionOverJoin,
        RuleId::DistribJoinOverUnion,
        RuleId::DistribUnionOverJoin,
        RuleId::ConstantFold,
        RuleId::EmptyAnnihilate,
        RuleId::PushCrossThroughSelect,
        RuleId::PushSelectThroughProject,
        RuleId::PushCrossThroughProject,
    ];

    /// Steps that only appear inside macro expansions.
    pub const AUXILIARY: [RuleId; 3] = [RuleId::Desugar, RuleId::ResugarSelect, RuleId::ResugarProject];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::JoinIdempotent => "JOIN_IDEMPOTENT",
            RuleId::UnionIdempotent => "UNION_IDEMPOTENT",
            RuleId::JoinCommutative => "JOIN_COMMUTATIVE",
            RuleId::UnionCommutative => "UNION_COMMUTATIVE",
            RuleId::JoinAssociative => "JOIN_ASSOCIATIVE",
            RuleId::UnionAssociative => "UNION_ASSOCIATIVE",
            RuleId::AbsorbJoinOverUnion => "ABSORB_JOIN_OVER_UNION",
            RuleId::AbsorbUnionOverJoin => "ABSORB_UNION_OVER_JOIN",
            RuleId::DistribJoinOverUnion => "DISTRIB_JOIN_OVER_UNION",
            RuleId::DistribUnionOverJoin => "DISTRIB_UNION_OVER_JOIN",
            RuleId::ConstantFold => "CONSTANT_FOLD",
            RuleId::EmptyAnnihilate => "EMPTY_ANNIHILATE",
            RuleId::PushCrossThroughSelect => "PUSH_CROSS_THROUGH_SELECT",
            RuleId::PushSelectThroughProject => "PUSH_SELECT_THROUGH_PROJECT",
            RuleId::PushCrossThroughProject => "PUSH_CROSS_THROUGH_PROJECT",
            RuleId::Desugar => "DESUGAR",
            RuleId::ResugarSelect => "RESUGAR_SELECT",
            RuleId::ResugarProject => "RESUGAR_PROJECT",
        }
    }

    pub fn is_macro(self) -> bool {
        matches!(
            self,
            RuleId::PushCrossThroughSelect | RuleId::PushSelectThroughProject | RuleId::PushCrossThroughProject
        )
    }

    pub fn rule(self) -> &'static RewriteRule {
        &registry()[self as usize]
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        RuleId::BUILTIN
            .into_iter()
            .chain(RuleId::AUXILIARY)
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Which way a rule is read: `Ltr` rewrites its pattern into its
/// replacement, `Rtl` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Orientation {
    Ltr,
    Rtl,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Ltr => "LTR",
            Orientation::Rtl => "RTL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Ltr,
    Rtl,
    Both,
}

impl Direction {
    pub fn orientations(self) -> &'static [Orientation] {
        match self {
            Direction::Ltr => &[Orientation::Ltr],
            Direction::Rtl => &[Orientation::Rtl],
            Direction::Both => &[Orientation::Ltr, Orientation::Rtl],
        }
    }

    pub fn allows(self, o: Orientation) -> bool {
        self.orientations().contains(&o)
    }
}

/// Header conditions on the metavariables `A`, `B`, `C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    Always,
    JoinOverUnion,
    UnionOverJoin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleBody {
    /// `lhs = rhs` over metavariables; every name in a pattern is a
    /// metavariable and repeated names must bind equal subtrees.
    Equation { lhs: Expr, rhs: Expr, guard: Guard },
    ConstantFold,
    EmptyAnnihilate,
    /// Expands into a fixed sequence of primitive steps.
    Macro,
    Desugar,
    ResugarSelect,
    ResugarProject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub id: RuleId,
    pub direction: Direction,
    pub body: RuleBody,
}

fn registry() -> &'static [RewriteRule] {
    static RULES: OnceLock<Vec<RewriteRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let eq = |id, direction, lhs: &str, rhs: &str, guard| RewriteRule {
            id,
            direction,
            body: RuleBody::Equation {
                lhs: parse(lhs).expect("rule pattern"),
                rhs: parse(rhs).expect("rule pattern"),
                guard,
            },
        };
        let other = |id, direction, body| RewriteRule { id, direction, body };
        use Direction::*;
        use Guard::*;
        vec![
            eq(RuleId::JoinIdempotent, Both, "A * A", "A", Always),
            eq(RuleId::UnionIdempotent, Both, "A + A", "A", Always),
            eq(RuleId::JoinCommutative, Both, "A * B", "B * A", Always),
            eq(RuleId::UnionCommutative, Both, "A + B", "B + A", Always),
            eq(RuleId::JoinAssociative, Both, "(A * B) * C", "A * (B * C)", Always),
            eq(RuleId::UnionAssociative, Both, "(A + B) + C", "A + (B + C)", Always),
            eq(RuleId::AbsorbJoinOverUnion, Ltr, "A * (A + B)", "A", Always),
            eq(RuleId::AbsorbUnionOverJoin, Ltr, "A + (A * B)", "A", Always),
            eq(RuleId::DistribJoinOverUnion, Both, "A * (B + C)", "(A * B) + (A * C)", JoinOverUnion),
            eq(RuleId::DistribUnionOverJoin, Both, "A + (B * C)", "(A + B) * (A + C)", UnionOverJoin),
            other(RuleId::ConstantFold, Ltr, RuleBody::ConstantFold),
            other(RuleId::EmptyAnnihilate, Ltr, RuleBody::EmptyAnnihilate),
            other(RuleId::PushCrossThroughSelect, Both, RuleBody::Macro),
            other(RuleId::PushSelectThroughProject, Ltr, RuleBody::Macro),
            other(RuleId::PushCrossThroughProject, Ltr, RuleBody::Macro),
            other(RuleId::Desugar, Ltr, RuleBody::Desugar),
            other(RuleId::ResugarSelect, Ltr, RuleBody::ResugarSelect),
            other(RuleId::ResugarProject, Ltr, RuleBody::ResugarProject),
        ]
    })
}

/// The fifteen rules available to strategies, in registry order.
pub fn builtin_rules() -> &'static [RewriteRule] {
    &registry()[..RuleId::BUILTIN.len()]
}

type Bindings = BTreeMap<String, Expr>;

fn match_pattern(p: &Expr, e: &Expr, b: &mut Bindings) -> bool {
    match (p, e) {
        (Expr::Name(v), _) => match b.get(v) {
            Some(bound) => bound == e,
            None => {
                b.insert(v.clone(), e.clone());
                true
            }
        },
        (Expr::Join(p1, p2), Expr::Join(e1, e2)) | (Expr::Union(p1, p2), Expr::Union(e1, e2)) => {
            match_pattern(p1, e1, b) && match_pattern(p2, e2, b)
        }
        _ => p == e,
    }
}

fn instantiate(p: &Expr, b: &Bindings) -> Expr {
    match p {
        Expr::Name(v) => b[v].clone(),
        Expr::Join(x, y) => Expr::join(instantiate(x, b), instantiate(y, b)),
        Expr::Union(x, y) => Expr::union(instantiate(x, b), instantiate(y, b)),
        other => other.clone(),
    }
}

fn guard_holds(g: Guard, b: &Bindings, c: &Catalog) -> Result<bool> {
    let h = |v: &str| infer_header(&b[v], c);
    Ok(match g {
        Guard::Always => true,
        Guard::JoinOverUnion => join_over_union_applicable(&h("A")?, &h("B")?, &h("C")?),
        Guard::UnionOverJoin => union_over_join_applicable(&h("A")?, &h("B")?, &h("C")?),
    })
}

fn is_empty_literal(e: &Expr, c: &Catalog) -> Option<Header> {
    match e {
        Expr::Empty(h) => Some(h.clone()),
        Expr::Special(SpecialCode::Empty00) => Some(Header::empty()),
        Expr::Special(SpecialCode::Top10) => Some(c.universe().header().clone()),
        _ => None,
    }
}

/// A literal denoting `r`, if one of the obvious candidates does.
fn as_literal(r: &Relation, operands: [&Expr; 2], c: &Catalog) -> Result<Option<Expr>> {
    for op in operands {
        if &evaluate(op, c)? == r {
            return Ok(Some(op.clone()));
        }
    }
    if let Some(code) = SpecialCode::ALL
        .into_iter()
        .find(|&code| &special_element(c.universe(), code) == r)
    {
        return Ok(Some(Expr::Special(code)));
    }
    if r.is_empty() {
        return Ok(Some(Expr::Empty(r.header().clone())));
    }
    Ok(None)
}

impl RewriteRule {
    /// Rewrites `node` itself; `None` when the rule does not apply there.
    pub fn rewrite(&self, node: &Expr, o: Orientation, c: &Catalog) -> Result<Option<Expr>> {
        if !self.direction.allows(o) {
            return Ok(None);
        }
        match &self.body {
            RuleBody::Equation { lhs, rhs, guard } => {
                let (from, to) = match o {
                    Orientation::Ltr => (lhs, rhs),
                    Orientation::Rtl => (rhs, lhs),
                };
                let mut b = Bindings::new();
                if !match_pattern(from, node, &mut b) || !guard_holds(*guard, &b, c)? {
                    return Ok(None);
                }
                let out = instantiate(to, &b);
                Ok((out != *node).then_some(out))
            }
            RuleBody::ConstantFold => {
                let (l, r, join) = match node {
                    Expr::Join(l, r) => (l, r, true),
                    Expr::Union(l, r) => (l, r, false),
                    _ => return Ok(None),
                };
                if !l.is_literal() || !r.is_literal() {
                    return Ok(None);
                }
                let (lv, rv) = (evaluate(l, c)?, evaluate(r, c)?);
                let value = if join { natural_join(&lv, &rv) } else { inner_union(&lv, &rv) };
                as_literal(&value, [l, r], c)
            }
            RuleBody::EmptyAnnihilate => {
                let Expr::Join(l, r) = node else {
                    return Ok(None);
                };
                let (empty, other) = match (is_empty_literal(l, c), is_empty_literal(r, c)) {
                    (Some(h), _) => (h, r),
                    (None, Some(h)) => (h, l),
                    (None, None) => return Ok(None),
                };
                Ok(Some(Expr::Empty(empty.union(&infer_header(other, c)?))))
            }
            RuleBody::Macro => Ok(expand_relative(self.id, node, o, c)?
                .and_then(|steps| steps.last().map(|s| s.after.clone()))),
            RuleBody::Desugar => desugar_node(node, c),
            RuleBody::ResugarSelect => match node {
                Expr::Join(l, x) => match &**l {
                    Expr::Pred(p) if p.attributes().is_subset(&infer_header(x, c)?) => {
                        Ok(Some(Expr::select((**x).clone(), p.clone())))
                    }
                    _ => Ok(None),
                },
                _ => Ok(None),
            },
            RuleBody::ResugarProject => match node {
                Expr::Union(l, x) => match &**l {
                    Expr::Empty(h) if h.is_subset(&infer_header(x, c)?) => {
                        Ok(Some(Expr::project((**x).clone(), h.clone())))
                    }
                    _ => Ok(None),
                },
                _ => Ok(None),
            },
        }
    }
}

/// A rule, the way it is read, and where it applies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Application {
    pub rule: RuleId,
    pub orientation: Orientation,
    pub position: Position,
}

impl Application {
    pub fn new(rule: RuleId, orientation: Orientation, position: Position) -> Self {
        Application {
            rule,
            orientation,
            position,
        }
    }
}

/// One rewrite on a whole expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub orientation: Orientation,
    pub position: Position,
    pub before: Expr,
    pub after: Expr,
}

impl TraceStep {
    pub fn application(&self) -> Application {
        Application::new(self.rule, self.orientation, self.position.clone())
    }

    /// `{"rule":…,"direction":…,"position":[…],"before":…,"after":…}`
    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            rule: RuleId,
            direction: Orientation,
            position: &'a [usize],
            before: String,
            after: String,
        }
        serde_json::to_string(&Line {
            rule: self.rule,
            direction: self.orientation,
            position: &self.position.0,
            before: self.before.to_string(),
            after: self.after.to_string(),
        })
        .expect("trace step serializes")
    }
}

/// Every application of the built-in rules to `e`, by pre-order position,
/// then registry order, then left-to-right before right-to-left.
pub fn applicable_rules(e: &Expr, c: &Catalog) -> Result<Vec<Application>> {
    applicable_among(e, c, &all_builtin_orientations())
}

pub(crate) fn all_builtin_orientations() -> Vec<(RuleId, Orientation)> {
    builtin_rules()
        .iter()
        .flat_map(|r| r.direction.orientations().iter().map(move |&o| (r.id, o)))
        .collect()
}

pub(crate) fn applicable_among(
    e: &Expr,
    c: &Catalog,
    rules: &[(RuleId, Orientation)],
) -> Result<Vec<Application>> {
    infer_header(e, c)?;
    let mut out = Vec::new();
    for pos in e.positions() {
        let node = e.at(&pos).expect("position from positions()");
        for &(id, o) in rules {
            if id.rule().rewrite(node, o, c)?.is_some() {
                out.push(Application::new(id, o, pos.clone()));
            }
        }
    }
    Ok(out)
}

fn not_applicable(app: &Application) -> Error {
    Error::RuleNotApplicable {
        rule: format!("{} {}", app.rule, app.orientation),
        position: app.position.to_string(),
    }
}

/// Rewrites the subtree at the application's position and leaves the rest
/// untouched.
pub fn apply_rule(e: &Expr, app: &Application, c: &Catalog) -> Result<Expr> {
    let node = e.at(&app.position).ok_or_else(|| not_applicable(app))?;
    let out = app
        .rule
        .rule()
        .rewrite(node, app.orientation, c)?
        .ok_or_else(|| not_applicable(app))?;
    Ok(e.replaced(&app.position, out).expect("position exists"))
}

fn pos(path: &[usize]) -> Position {
    Position(path.to_vec())
}

/// Primitive steps of a macro at the root of `node`.
fn macro_plan(id: RuleId, node: &Expr, o: Orientation, c: &Catalog) -> Result<Option<Vec<Application>>> {
    use Orientation::{Ltr, Rtl};
    let step = |r, o, p: &[usize]| Application::new(r, o, pos(p));
    Ok(match (id, o, node) {
        // ([p] * A) * B = [p] * (A * B)
        (RuleId::PushCrossThroughSelect, Ltr, Expr::Join(l, _)) if matches!(**l, Expr::Select(..)) => Some(vec![
            step(RuleId::Desugar, Ltr, &[0]),
            step(RuleId::JoinAssociative, Ltr, &[]),
            step(RuleId::ResugarSelect, Ltr, &[]),
        ]),
        (RuleId::PushCrossThroughSelect, Rtl, Expr::Select(inner, p)) => {
            let Expr::Join(a, b) = &**inner else {
                return Ok(None);
            };
            let attrs = p.attributes();
            if attrs.is_subset(&infer_header(a, c)?) {
                Some(vec![
                    step(RuleId::Desugar, Ltr, &[]),
                    step(RuleId::JoinAssociative, Rtl, &[]),
                    step(RuleId::ResugarSelect, Ltr, &[0]),
                ])
            } else if attrs.is_subset(&infer_header(b, c)?) {
                Some(vec![
                    step(RuleId::Desugar, Ltr, &[]),
                    step(RuleId::JoinCommutative, Ltr, &[1]),
                    step(RuleId::JoinAssociative, Rtl, &[]),
                    step(RuleId::JoinCommutative, Ltr, &[]),
                    step(RuleId::ResugarSelect, Ltr, &[1]),
                ])
            } else {
                None
            }
        }
        // [p] * ([P] + A) = ([p] * [P]) + ([p] * A) = [P] + ([p] * A)
        (RuleId::PushSelectThroughProject, Ltr, Expr::Select(inner, p)) => match &**inner {
            Expr::Project(_, h) if p.attributes().is_subset(h) => Some(vec![
                step(RuleId::Desugar, Ltr, &[]),
                step(RuleId::Desugar, Ltr, &[1]),
                step(RuleId::DistribJoinOverUnion, Ltr, &[]),
                step(RuleId::ConstantFold, Ltr, &[0]),
                step(RuleId::ResugarSelect, Ltr, &[1]),
                step(RuleId::ResugarProject, Ltr, &[]),
            ]),
            _ => None,
        },
        // ([P] + A) * B = ([P] * B) + (A * B) = [P ∪ H(B)] + (A * B)
        (RuleId::PushCrossThroughProject, Ltr, Expr::Join(l, b)) => match &**l {
            Expr::Project(a, h) => {
                let hb = infer_header(b, c)?;
                if hb.intersection(&infer_header(a, c)?).is_subset(h) {
                    Some(vec![
                        step(RuleId::Desugar, Ltr, &[0]),
                        step(RuleId::JoinCommutative, Ltr, &[]),
                        step(RuleId::DistribJoinOverUnion, Ltr, &[]),
                        step(RuleId::JoinCommutative, Ltr, &[0]),
                        step(RuleId::JoinCommutative, Ltr, &[1]),
                        step(RuleId::EmptyAnnihilate, Ltr, &[0]),
                        step(RuleId::ResugarProject, Ltr, &[]),
                    ])
                } else {
                    None
                }
            }
            _ => None,
        },
        _ => None,
    })
}

/// Runs a macro's plan on `node` alone, positions relative to it.
fn expand_relative(id: RuleId, node: &Expr, o: Orientation, c: &Catalog) -> Result<Option<Vec<TraceStep>>> {
    let Some(plan) = macro_plan(id, node, o, c)? else {
        return Ok(None);
    };
    let mut current = node.clone();
    let mut steps = Vec::with_capacity(plan.len());
    for app in plan {
        let Some(sub) = current.at(&app.position) else {
            return Ok(None);
        };
        let Some(out) = app.rule.rule().rewrite(sub, app.orientation, c)? else {
            return Ok(None);
        };
        let after = current.replaced(&app.position, out).expect("position exists");
        steps.push(TraceStep {
            rule: app.rule,
            orientation: app.orientation,
            position: app.position,
            before: current,
            after: after.clone(),
        });
        current = after;
    }
    Ok(Some(steps))
}

/// The primitive steps a macro application performs, as whole-expression
/// rewrites of `e`.
pub fn expand_macro(e: &Expr, app: &Application, c: &Catalog) -> Result<Vec<TraceStep>> {
    let node = e.at(&app.position).ok_or_else(|| not_applicable(app))?;
    let steps = if app.rule.is_macro() {
        expand_relative(app.rule, node, app.orientation, c)?
    } else {
        None
    };
    let steps = steps.ok_or_else(|| not_applicable(app))?;
    Ok(steps
        .into_iter()
        .map(|s| {
            let mut path = app.position.0.clone();
            path.extend(&s.position.0);
            TraceStep {
                rule: s.rule,
                orientation: s.orientation,
                position: Position(path),
                before: e.replaced(&app.position, s.before).expect("position exists"),
                after: e.replaced(&app.position, s.after).expect("position exists"),
            }
        })
        .collect())
}
