//! Set-theoretic oracles and generators shared by the integration tests.
//!
//! The oracles work on tuples as attribute→value maps and never call the
//! library's operators.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use relattice::json::{catalog_from_json, universe_from_json};
use relattice::predicate::Operand;
use relattice::sample::Sampler;
use relattice::{Catalog, Comparator, Expr, Header, Predicate, Relation, RenameSpec, ScalarValue, Universe};

pub type T = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rel {
    pub header: BTreeSet<String>,
    pub body: BTreeSet<T>,
}

pub fn rel(r: &Relation) -> Rel {
    Rel {
        header: r.header().iter().map(|a| a.to_string()).collect(),
        body: r
            .tuples()
            .map(|t| t.into_iter().map(|(a, v)| (a.to_string(), v.to_string())).collect())
            .collect(),
    }
}

pub fn u2() -> Universe {
    universe_from_json(include_str!("../../../../data/u2.json")).unwrap()
}

/// Three attributes over one shared three-value domain, so every renaming
/// is legal.
pub fn u3() -> Universe {
    Universe::new([("x", vec!["1", "2", "a"]), ("y", vec!["1", "2", "a"]), ("z", vec!["1", "2", "a"])]).unwrap()
}

pub fn header(names: &str) -> Header {
    names.split_whitespace().collect()
}

pub fn relation(u: &Universe, names: &str, rows: &[&str]) -> Relation {
    Relation::from_rows(u, header(names), rows.iter().map(|r| r.split_whitespace())).unwrap()
}

fn project_tuple(t: &T, h: &BTreeSet<String>) -> T {
    t.iter().filter(|(k, _)| h.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect()
}

pub fn join(a: &Rel, b: &Rel) -> Rel {
    let header: BTreeSet<String> = a.header.union(&b.header).cloned().collect();
    let mut body = BTreeSet::new();
    for s in &a.body {
        for t in &b.body {
            if s.iter().all(|(k, v)| t.get(k).is_none_or(|w| w == v)) {
                let mut m = s.clone();
                m.extend(t.clone());
                body.insert(m);
            }
        }
    }
    Rel { header, body }
}

pub fn union(a: &Rel, b: &Rel) -> Rel {
    let header: BTreeSet<String> = a.header.intersection(&b.header).cloned().collect();
    let body = a
        .body
        .iter()
        .chain(&b.body)
        .map(|t| project_tuple(t, &header))
        .collect();
    Rel { header, body }
}

pub fn project(a: &Rel, h: &BTreeSet<String>) -> Rel {
    Rel {
        header: h.clone(),
        body: a.body.iter().map(|t| project_tuple(t, h)).collect(),
    }
}

/// Every tuple over `h` drawn from the universe's domains.
pub fn all_tuples(u: &Universe, h: &BTreeSet<String>) -> BTreeSet<T> {
    let mut out = BTreeSet::from([T::new()]);
    for a in h {
        let dom = u.domain(&a.as_str().into()).unwrap();
        out = out
            .into_iter()
            .flat_map(|t| {
                dom.iter().map(move |v| {
                    let mut t = t.clone();
                    t.insert(a.clone(), v.to_string());
                    t
                })
            })
            .collect();
    }
    out
}

/// Integers first and numerically, then everything else bytewise.
pub fn compare_values(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.as_bytes().cmp(b.as_bytes()),
    }
}

pub fn holds(p: &Predicate, t: &T) -> bool {
    p.conjuncts().iter().all(|atom| match atom {
        Predicate::Compare { left, op, right } => {
            let l = &t[left.as_str()];
            let r = match right {
                Operand::Attr(a) => t[a.as_str()].clone(),
                Operand::Const(v) => v.to_string(),
            };
            let ord = compare_values(l, &r);
            match op {
                Comparator::Eq => ord == Ordering::Equal,
                Comparator::Ne => ord != Ordering::Equal,
                Comparator::Lt => ord == Ordering::Less,
                Comparator::Le => ord != Ordering::Greater,
                Comparator::Gt => ord == Ordering::Greater,
                Comparator::Ge => ord != Ordering::Less,
            }
        }
        Predicate::And(_) => unreachable!(),
    })
}

pub fn select(a: &Rel, p: &Predicate) -> Rel {
    Rel {
        header: a.header.clone(),
        body: a.body.iter().filter(|t| holds(p, t)).cloned().collect(),
    }
}

pub fn rename(a: &Rel, s: &RenameSpec) -> Rel {
    let (from, to) = (s.from.to_string(), s.to.to_string());
    let header = a
        .header
        .iter()
        .map(|h| if *h == from { to.clone() } else { h.clone() })
        .collect();
    let body = a
        .body
        .iter()
        .map(|t| {
            t.iter()
                .map(|(k, v)| (if *k == from { to.clone() } else { k.clone() }, v.clone()))
                .collect()
        })
        .collect();
    Rel { header, body }
}

pub fn difference(a: &Rel, b: &Rel) -> Rel {
    Rel {
        header: a.header.clone(),
        body: a.body.difference(&b.body).cloned().collect(),
    }
}

/// Tuples over `H(A) \ H(B)` with some partner in `B`.
pub fn exists(a: &Rel, b: &Rel) -> Rel {
    let rest: BTreeSet<String> = a.header.difference(&b.header).cloned().collect();
    let body = a
        .body
        .iter()
        .filter(|t| b.body.contains(&project_tuple(t, &b.header)))
        .map(|t| project_tuple(t, &rest))
        .collect();
    Rel { header: rest, body }
}

/// Tuples over `H(A) \ H(B)` that pair with every tuple of `B` inside `A`.
pub fn forall(u: &Universe, a: &Rel, b: &Rel) -> Rel {
    let rest: BTreeSet<String> = a.header.difference(&b.header).cloned().collect();
    let body = all_tuples(u, &rest)
        .into_iter()
        .filter(|s| {
            b.body.iter().all(|t| {
                let mut m = s.clone();
                m.extend(t.clone());
                a.body.contains(&m)
            })
        })
        .collect();
    Rel { header: rest, body }
}

/// A random predicate over `attrs` with constants from the domains.
pub fn predicate(s: &mut Sampler, u: &Universe, attrs: &[String]) -> Predicate {
    let n = 1 + s.below(2);
    let atoms = (0..n).map(|_| {
        let left = &attrs[s.below(attrs.len())];
        let op = Comparator::ALL[s.below(6)];
        if s.chance(0.3) {
            Predicate::attr_attr(left.as_str(), op, attrs[s.below(attrs.len())].as_str())
        } else {
            let dom = u.domain(&left.as_str().into()).unwrap();
            Predicate::attr_const(left.as_str(), op, dom[s.below(dom.len())].clone())
        }
    });
    Predicate::and(atoms)
}

fn subset(s: &mut Sampler, from: &[String], at_least: usize) -> Vec<String> {
    loop {
        let picked: Vec<String> = from.iter().filter(|_| s.chance(0.5)).cloned().collect();
        if picked.len() >= at_least {
            return picked;
        }
    }
}

fn names(h: &Header) -> Vec<String> {
    h.iter().map(|a| a.to_string()).collect()
}

/// A random expression that evaluates without error against catalogs with
/// the headers of `c`. `c`'s universe must give all attributes the same
/// domain.
pub fn well_formed(s: &mut Sampler, c: &Catalog, depth: usize) -> Expr {
    let u = c.universe();
    let rel_names: Vec<&str> = c.names().collect();
    let h = |e: &Expr| relattice::infer_header(e, c).unwrap();
    if depth == 0 || s.chance(0.25) {
        return match s.below(8) {
            0 => Expr::Special(relattice::SpecialCode::ALL[s.below(4)]),
            1 => Expr::Empty(subset(s, &names(u.header()), 0).iter().map(String::as_str).collect()),
            2 => {
                let attrs = subset(s, &names(u.header()), 1);
                Expr::Pred(predicate(s, u, &attrs))
            }
            _ => Expr::name(rel_names[s.below(rel_names.len())]),
        };
    }
    let sub = |s: &mut Sampler| well_formed(s, c, depth - 1);
    match s.below(9) {
        0 | 1 => Expr::join(sub(s), sub(s)),
        2 | 3 => Expr::union(sub(s), sub(s)),
        4 => {
            let e = sub(s);
            let hs = names(&h(&e));
            if hs.is_empty() {
                return e;
            }
            let attrs = subset(s, &hs, 1);
            let p = predicate(s, u, &attrs);
            Expr::select(e, p)
        }
        5 => {
            let e = sub(s);
            let keep = subset(s, &names(&h(&e)), 0);
            Expr::project(e, keep.iter().map(String::as_str).collect())
        }
        6 => {
            let e = sub(s);
            let he = h(&e);
            let inside = names(&he);
            let outside: Vec<String> = names(u.header()).into_iter().filter(|a| !he.contains(a.as_str())).collect();
            if inside.is_empty() || outside.is_empty() {
                return e;
            }
            let from = &inside[s.below(inside.len())];
            let to = &outside[s.below(outside.len())];
            Expr::rename(e, RenameSpec::new(from.as_str(), to.as_str()).unwrap())
        }
        7 => {
            let a = sub(s);
            let ha = names(&h(&a));
            if ha.len() < 2 {
                return a;
            }
            let mut part = subset(s, &ha, 1);
            if part.len() == ha.len() {
                part.pop();
            }
            let divisor = Expr::union(
                Expr::join(sub(s), Expr::Special(relattice::SpecialCode::Universal11)),
                Expr::Empty(part.iter().map(String::as_str).collect()),
            );
            Expr::divide(a, divisor)
        }
        _ => {
            let a = sub(s);
            let ha = h(&a);
            let b = Expr::union(
                Expr::join(sub(s), Expr::Special(relattice::SpecialCode::Universal11)),
                Expr::Empty(ha),
            );
            Expr::minus(a, b)
        }
    }
}

const TOKENS: [&str; 10] = ["1", "-7", "007", "a", "b c", "it's", "back\\slash", "x", "10", "é"];

/// A random, not necessarily well-formed, expression exercising every
/// node kind and awkward constants.
pub fn any_expr(s: &mut Sampler, depth: usize) -> Expr {
    let attrs = ["x", "y", "z", "w_1"];
    let attr = |s: &mut Sampler| attrs[s.below(attrs.len())];
    let pred = |s: &mut Sampler| {
        let n = 1 + s.below(3);
        Predicate::and((0..n).map(|_| {
            let op = Comparator::ALL[s.below(6)];
            if s.chance(0.3) {
                Predicate::attr_attr(attr(s), op, attr(s))
            } else {
                Predicate::attr_const(attr(s), op, ScalarValue::new(TOKENS[s.below(TOKENS.len())]).unwrap())
            }
        }))
    };
    let attr_set = |s: &mut Sampler| -> Header { attrs.iter().copied().filter(|_| s.chance(0.5)).collect() };
    if depth == 0 || s.chance(0.2) {
        return match s.below(5) {
            0 => Expr::Special(relattice::SpecialCode::ALL[s.below(4)]),
            1 => Expr::Empty(attr_set(s)),
            2 => Expr::Pred(pred(s)),
            _ => Expr::name(["A", "B", "C", "R2", "select"][s.below(5)]),
        };
    }
    match s.below(9) {
        0 | 1 => Expr::join(any_expr(s, depth - 1), any_expr(s, depth - 1)),
        2 | 3 => Expr::union(any_expr(s, depth - 1), any_expr(s, depth - 1)),
        4 => Expr::select(any_expr(s, depth - 1), pred(s)),
        5 => Expr::project(any_expr(s, depth - 1), attr_set(s)),
        6 => {
            let from = attr(s);
            let to = if from == "x" { "y" } else { "x" };
            Expr::rename(any_expr(s, depth - 1), RenameSpec::new(from, to).unwrap())
        }
        7 => Expr::divide(any_expr(s, depth - 1), any_expr(s, depth - 1)),
        _ => Expr::minus(any_expr(s, depth - 1), any_expr(s, depth - 1)),
    }
}

/// Random bodies for the given headers over `u`.
pub fn random_catalog(s: &mut Sampler, u: &Universe, headers: &[(&str, &str)]) -> Catalog {
    let mut c = Catalog::new(u.clone());
    for (name, h) in headers {
        c.insert(*name, s.relation(u, &header(h))).unwrap();
    }
    c
}

pub fn catalog_json(u: &Universe, text: &str) -> Catalog {
    catalog_from_json(u, text).unwrap()
}
