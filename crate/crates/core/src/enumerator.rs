//! The complete relational lattice over a tiny universe: every relation over
//! every header, the Hasse cover relation, and Boolean sublattice checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::{inner_union, natural_join, special_element, Relation, SpecialCode};
use crate::universe::Universe;
use crate::value::Header;

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Enumerated lattice elements in canonical order together with the cover
/// relation. Element order: headers by size then names, bodies by bitmask
/// over the canonical tuple order of the header's domain product.
#[derive(Debug, Clone)]
pub struct LatticeGraph {
    elements: Vec<Relation>,
    covers: BTreeSet<(usize, usize)>,
    labels: Vec<String>,
    index: HashMap<Relation, usize>,
    join: Vec<usize>,
    meet: Vec<usize>,
}

impl LatticeGraph {
    pub fn elements(&self) -> &[Relation] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Hasse cover edges `(lower, upper)`.
    pub fn covers(&self) -> &BTreeSet<(usize, usize)> {
        &self.covers
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, r: &Relation) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.join(a, b) == b
    }

    /// The subgraph on `members`, or `None` when they are not closed under
    /// both operations.
    pub fn induced(&self, members: &BTreeSet<usize>) -> Option<LatticeGraph> {
        let list: Vec<usize> = members.iter().copied().collect();
        let local: HashMap<usize, usize> = list.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = list.len();
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for (i, &a) in list.iter().enumerate() {
            for (j, &b) in list.iter().enumerate() {
                join[i * n + j] = *local.get(&self.join(a, b))?;
                meet[i * n + j] = *local.get(&self.meet(a, b))?;
            }
        }
        let elements: Vec<Relation> = list.iter().map(|&i| self.elements[i].clone()).collect();
        let mut g = LatticeGraph {
            index: elements.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect(),
            labels: list.iter().map(|&i| self.labels[i].clone()).collect(),
            elements,
            covers: BTreeSet::new(),
            join,
            meet,
        };
        g.covers = hasse_edges(&g);
        Some(g)
    }
}

/// Headers over the universe, ordered by size and then by names.
pub fn all_headers(u: &Universe) -> Vec<Header> {
    let attrs: Vec<_> = u.header().iter().cloned().collect();
    let mut headers: Vec<Header> = (0u64..1 << attrs.len())
        .map(|mask| {
            attrs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    headers.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    headers
}

/// Total number of lattice elements, as a float to survive overflow.
pub fn lattice_size(u: &Universe) -> f64 {
    all_headers(u)
        .iter()
        .map(|h| 2f64.powf(u.product_size(h) as f64))
        .sum()
}

pub fn enumerate_lattice(u: &Universe) -> Result<LatticeGraph> {
    enumerate_lattice_capped(u, DEFAULT_CAP)
}

pub fn enumerate_lattice_capped(u: &Universe, cap: u64) -> Result<LatticeGraph> {
    let size = lattice_size(u);
    if size > cap as f64 {
        return Err(Error::UniverseTooLarge { elements: size, cap });
    }
    let mut elements = Vec::with_capacity(size as usize);
    for header in all_headers(u) {
        let rows = u.domain_product(&header)?;
        for mask in 0u64..1 << rows.len() {
            let body = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect();
            elements.push(Relation::from_parts(header.clone(), body));
        }
    }
    let index: HashMap<Relation, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();

    let n = elements.len();
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let j = index[&natural_join(&elements[a], &elements[b])];
            let m = index[&inner_union(&elements[a], &elements[b])];
            join[a * n + b] = j;
            join[b * n + a] = j;
            meet[a * n + b] = m;
            meet[b * n + a] = m;
        }
    }

    let labels = label_elements(u, &elements);
    let mut g = LatticeGraph {
        elements,
        covers: BTreeSet::new(),
        labels,
        index,
        join,
        meet,
    };
    g.covers = hasse_edges(&g);
    Ok(g)
}

fn label_elements(u: &Universe, elements: &[Relation]) -> Vec<String> {
    let specials: Vec<(Relation, SpecialCode)> = SpecialCode::ALL
        .iter()
        .map(|&c| (special_element(u, c), c))
        .collect();
    elements
        .iter()
        .map(|r| {
            // With no attributes at all, 10 is 00 and 11 is 01.
            let special = [SpecialCode::Top10, SpecialCode::Universal11, SpecialCode::Empty00, SpecialCode::Bottom01]
                .into_iter()
                .find(|c| specials.iter().any(|(s, sc)| sc == c && s == r));
            match special {
                Some(c) => c.symbol().to_string(),
                None if r.is_empty() => {
                    let names: Vec<&str> = r.header().iter().map(|a| a.as_str()).collect();
                    format!("[{}]", names.join(" "))
                }
                None => r.to_string(),
            }
        })
        .collect()
}

/// Recomputes the cover relation from the order: `(a, b)` with `a < b` and
/// nothing strictly between.
pub fn hasse_edges(g: &LatticeGraph) -> BTreeSet<(usize, usize)> {
    let n = g.len();
    let mut edges = BTreeSet::new();
    for a in 0..n {
        let above: Vec<usize> = (0..n).filter(|&b| b != a && g.leq(a, b)).collect();
        for &b in &above {
            if !above.iter().any(|&c| c != b && g.leq(c, b)) {
                edges.insert((a, b));
            }
        }
    }
    edges
}

/// Longest cover chain from a minimal element, used for DOT ranks.
fn heights(g: &LatticeGraph) -> Vec<usize> {
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Any linear extension works; count of elements below is one.
    let below: Vec<usize> = (0..n).map(|b| (0..n).filter(|&a| g.leq(a, b)).count()).collect();
    order.sort_by_key(|&i| (below[i], i));
    let mut height = vec![0; n];
    for &b in &order {
        height[b] = g
            .covers
            .iter()
            .filter(|&&(_, up)| up == b)
            .map(|&(low, _)| height[low] + 1)
            .max()
            .unwrap_or(0);
    }
    height
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph of the Hasse diagram, drawn bottom to top.
pub fn export_dot(g: &LatticeGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph lattice {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
    for (i, label) in g.labels.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", dot_escape(label)).unwrap();
    }
    let height = heights(g);
    let max = height.iter().copied().max().unwrap_or(0);
    for level in 0..=max {
        let members: Vec<String> = (0..g.len())
            .filter(|&i| height[i] == level)
            .map(|i| format!("n{i};"))
            .collect();
        if members.len() > 1 {
            writeln!(out, "  {{ rank=same; {} }}", members.join(" ")).unwrap();
        }
    }
    for &(a, b) in &g.covers {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublatticeReport {
    pub members: Vec<usize>,
    pub closed_under_join: bool,
    pub closed_under_union: bool,
    pub distributive: bool,
    pub complemented: bool,
    pub bottom: Option<usize>,
    pub top: Option<usize>,
}

impl SublatticeReport {
    pub fn is_boolean(&self) -> bool {
        self.closed_under_join && self.closed_under_union && self.distributive && self.complemented
    }
}

/// Checks closure, distributivity and complements for `members`, with
/// bottom and top taken as the meet and join of the whole set.
pub fn verify_boolean_sublattice(g: &LatticeGraph, members: &BTreeSet<usize>) -> SublatticeReport {
    let list: Vec<usize> = members.iter().copied().collect();
    let closed_under_join = list
        .iter()
        .all(|&a| list.iter().all(|&b| members.contains(&g.join(a, b))));
    let closed_under_union = list
        .iter()
        .all(|&a| list.iter().all(|&b| members.contains(&g.meet(a, b))));
    let distributive = list.iter().all(|&a| {
        list.iter().all(|&b| {
            list.iter().all(|&c| {
                g.join(a, g.meet(b, c)) == g.meet(g.join(a, b), g.join(a, c))
                    && g.meet(a, g.join(b, c)) == g.join(g.meet(a, b), g.meet(a, c))
            })
        })
    });
    let bottom = list.iter().copied().reduce(|x, y| g.meet(x, y));
    let top = list.iter().copied().reduce(|x, y| g.join(x, y));
    let complemented = match (bottom, top) {
        (Some(lo), Some(hi)) => list.iter().all(|&a| {
            list.iter()
                .any(|&b| g.join(a, b) == hi && g.meet(a, b) == lo)
        }),
        _ => false,
    };
    SublatticeReport {
        members: list,
        closed_under_join,
        closed_under_union,
        distributive,
        complemented,
        bottom,
        top,
    }
}

fn violates(g: &LatticeGraph, a: usize, b: usize, c: usize) -> bool {
    g.join(a, g.meet(b, c)) != g.meet(g.join(a, b), g.join(a, c))
}

/// First triple in canonical order with `A ⋈ (B + C) ≠ (A ⋈ B) + (A ⋈ C)`.
pub fn find_nondistributive_triple(g: &LatticeGraph) -> Option<(usize, usize, usize)> {
    let all: BTreeSet<usize> = (0..g.len()).collect();
    find_nondistributive_triple_among(g, &all)
}

pub fn find_nondistributive_triple_among(
    g: &LatticeGraph,
    members: &BTreeSet<usize>,
) -> Option<(usize, usize, usize)> {
    for &a in members {
        for &b in members {
            for &c in members {
                if violates(g, a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// All relations with exactly `header`.
pub fn header_algebra(g: &LatticeGraph, header: &Header) -> BTreeSet<usize> {
    (0..g.len())
        .filter(|&i| g.elements[i].header() == header)
        .collect()
}

/// All empty relations, one per header.
pub fn empty_algebra(g: &LatticeGraph) -> BTreeSet<usize> {
    (0..g.len()).filter(|&i| g.elements[i].is_empty()).collect()
}

/// Full domain products over each header; `01` and `11` are the extremes.
pub fn domain_algebra(g: &LatticeGraph, u: &Universe) -> BTreeSet<usize> {
    let top = special_element(u, SpecialCode::Universal11);
    all_headers(u)
        .iter()
        .filter_map(|h| g.index_of(&inner_union(&top, &Relation::empty(h.clone()))))
        .collect()
}

/// `{00, 01, 10, 11}`.
pub fn special_algebra(g: &LatticeGraph, u: &Universe) -> BTreeSet<usize> {
    SpecialCode::ALL
        .iter()
        .filter_map(|&c| g.index_of(&special_element(u, c)))
        .collect()
}

/// Named Boolean sublattice candidates: one per non-empty header, then the
/// domain algebra, the empty relations and the four special elements.
pub fn sublattice_candidates(g: &LatticeGraph, u: &Universe) -> Vec<(String, BTreeSet<usize>)> {
    let mut out: Vec<(String, BTreeSet<usize>)> = all_headers(u)
        .into_iter()
        .filter(|h| !h.is_empty())
        .map(|h| (format!("header {h}"), header_algebra(g, &h)))
        .collect();
    out.push(("domains".into(), domain_algebra(g, u)));
    out.push(("empty relations".into(), empty_algebra(g)));
    out.push(("special elements".into(), special_algebra(g, u)));
    out
}
