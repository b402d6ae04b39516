//! Finite relations and the two lattice operations.
//!
//! Natural join is the lattice supremum and inner union the infimum. Both are
//! total: any two relations over one universe can be combined, whatever their
//! headers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::Universe;
use crate::value::{Attr, Header, ScalarValue};

/// A tuple given as attribute bindings.
pub type Tuple = BTreeMap<Attr, ScalarValue>;

/// Positional tuple, values in header (name) order.
pub type Row = Vec<ScalarValue>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    header: Header,
    body: BTreeSet<Row>,
}

/// The four distinguished elements of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecialCode {
    /// `01`: no attributes, the single empty tuple. Least element.
    Bottom01,
    /// `10`: all attributes, no tuples. Greatest element.
    Top10,
    /// `00`: no attributes, no tuples.
    Empty00,
    /// `11`: all attributes, every tuple of the domain product.
    Universal11,
}

impl SpecialCode {
    pub const ALL: [SpecialCode; 4] = [
        SpecialCode::Empty00,
        SpecialCode::Bottom01,
        SpecialCode::Top10,
        SpecialCode::Universal11,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            SpecialCode::Empty00 => "00",
            SpecialCode::Bottom01 => "01",
            SpecialCode::Top10 => "10",
            SpecialCode::Universal11 => "11",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        SpecialCode::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

impl fmt::Display for SpecialCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Builds a validated relation from attribute-bound tuples, dropping duplicates.
pub fn make_relation<'a, I>(u: &Universe, header: &Header, tuples: I) -> Result<Relation>
where
    I: IntoIterator<Item = &'a Tuple>,
{
    u.check_header(header)?;
    let mut body = BTreeSet::new();
    for tuple in tuples {
        let bound: Header = tuple.keys().cloned().collect();
        if &bound != header {
            return Err(Error::TupleHeaderMismatch {
                expected: header.clone(),
                found: bound,
            });
        }
        for (attr, value) in tuple {
            if !u.domain_contains(attr, value) {
                return Err(Error::ValueOutsideDomain {
                    attr: attr.clone(),
                    value: value.to_string(),
                });
            }
        }
        body.insert(tuple.values().cloned().collect());
    }
    Ok(Relation {
        header: header.clone(),
        body,
    })
}

impl Relation {
    /// Builds a validated relation from positional rows in header order.
    pub fn from_rows<R, T>(u: &Universe, header: Header, rows: R) -> Result<Relation>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        u.check_header(&header)?;
        let mut body = BTreeSet::new();
        for row in rows {
            let mut values = Vec::with_capacity(header.len());
            for token in row {
                let token = token.as_ref();
                let attr = header.iter().nth(values.len());
                let value = ScalarValue::new(token);
                match (attr, value) {
                    (Some(attr), Some(value)) if u.domain_contains(attr, &value) => {
                        values.push(value)
                    }
                    (Some(attr), _) => {
                        return Err(Error::ValueOutsideDomain {
                            attr: attr.clone(),
                            value: token.to_string(),
                        })
                    }
                    (None, _) => {
                        return Err(Error::TupleHeaderMismatch {
                            expected: header.clone(),
                            found: Header::empty(),
                        })
                    }
                }
            }
            if values.len() != header.len() {
                return Err(Error::TupleHeaderMismatch {
                    expected: header.clone(),
                    found: header.iter().take(values.len()).cloned().collect(),
                });
            }
            body.insert(values);
        }
        Ok(Relation { header, body })
    }

    /// The empty relation over `header`: the `[x y]` literal.
    pub fn empty(header: Header) -> Relation {
        Relation {
            header,
            body: BTreeSet::new(),
        }
    }

    pub(crate) fn from_parts(header: Header, body: BTreeSet<Row>) -> Relation {
        debug_assert!(body.iter().all(|r| r.len() == header.len()));
        Relation { header, body }
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    /// Rows in canonical order.
    pub fn rows(&self) -> impl ExactSizeIterator<Item = &Row> {
        self.body.iter()
    }

    pub(crate) fn body(&self) -> &BTreeSet<Row> {
        &self.body
    }

    pub fn tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        self.body
            .iter()
            .map(|row| self.header.iter().cloned().zip(row.iter().cloned()).collect())
    }

    pub fn len(&self) -> usize {
        self.body.len()
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn contains_row(&self, row: &[ScalarValue]) -> bool {
        self.body.contains(row)
    }

    pub fn natural_join(&self, other: &Relation) -> Relation {
        natural_join(self, other)
    }

    pub fn inner_union(&self, other: &Relation) -> Relation {
        inner_union(self, other)
    }

    pub fn leq(&self, other: &Relation) -> bool {
        leq(self, other)
    }

    /// Projection of the body onto `header`, which must be a subset of ours.
    pub(crate) fn restrict(&self, header: &Header) -> Relation {
        let positions = positions_in(&self.header, header);
        let body = self
            .body
            .iter()
            .map(|row| positions.iter().map(|&i| row[i].clone()).collect())
            .collect();
        Relation {
            header: header.clone(),
            body,
        }
    }

    /// Aligned text table, header row first.
    pub fn to_table(&self) -> String {
        let names: Vec<&str> = self.header.iter().map(Attr::as_str).collect();
        let mut widths: Vec<usize> = names.iter().map(|n| n.len()).collect();
        for row in &self.body {
            for (w, v) in widths.iter_mut().zip(row) {
                *w = (*w).max(v.as_str().len());
            }
        }
        let line = |cells: Vec<&str>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        if names.is_empty() {
            out.push_str("(no attributes)\n");
        } else {
            out.push_str(&line(names.clone()));
            out.push('\n');
            out.push_str(
                &widths
                    .iter()
                    .map(|w| "-".repeat(*w))
                    .collect::<Vec<_>>()
                    .join("-+-"),
            );
            out.push('\n');
            for row in &self.body {
                out.push_str(&line(row.iter().map(ScalarValue::as_str).collect()));
                out.push('\n');
            }
        }
        out.push_str(&format!(
            "({} tuple{})\n",
            self.body.len(),
            if self.body.len() == 1 { "" } else { "s" }
        ));
        out
    }
}

/// For each attribute of `target`, its index in `source`.
fn positions_in(source: &Header, target: &Header) -> Vec<usize> {
    target
        .iter()
        .map(|a| source.position(a).expect("target attribute missing from source"))
        .collect()
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.header.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.as_str())?;
        }
        f.write_str(":")?;
        for row in &self.body {
            f.write_str(" (")?;
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(v.as_str())?;
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

/// Tuples agreeing on shared attributes, merged. Header is the union.
pub fn natural_join(a: &Relation, b: &Relation) -> Relation {
    let header = a.header.union(&b.header);
    let common = a.header.intersection(&b.header);
    let a_key = positions_in(&a.header, &common);
    let b_key = positions_in(&b.header, &common);

    enum Src {
        Left(usize),
        Right(usize),
    }
    let layout: Vec<Src> = header
        .iter()
        .map(|attr| match a.header.position(attr) {
            Some(i) => Src::Left(i),
            None => Src::Right(b.header.position(attr).unwrap()),
        })
        .collect();

    let mut by_key: HashMap<Vec<&ScalarValue>, Vec<&Row>> = HashMap::new();
    for row in &b.body {
        by_key
            .entry(b_key.iter().map(|&i| &row[i]).collect())
            .or_default()
            .push(row);
    }

    let mut body = BTreeSet::new();
    for left in &a.body {
        let key: Vec<&ScalarValue> = a_key.iter().map(|&i| &left[i]).collect();
        let Some(matches) = by_key.get(&key) else {
            continue;
        };
        for right in matches {
            body.insert(
                layout
                    .iter()
                    .map(|src| match *src {
                        Src::Left(i) => left[i].clone(),
                        Src::Right(i) => right[i].clone(),
                    })
                    .collect(),
            );
        }
    }
    Relation { header, body }
}

/// Both bodies projected onto the shared attributes, then united. Header is
/// the intersection.
///
/// With no shared attributes the result is `01` when either operand has a
/// tuple and `00` otherwise.
pub fn inner_union(a: &Relation, b: &Relation) -> Relation {
    let common = a.header.intersection(&b.header);
    let mut out = a.restrict(&common);
    out.body.extend(b.restrict(&common).body);
    out
}

/// `a <= b` iff `b = a ⋈ b`.
pub fn leq(a: &Relation, b: &Relation) -> bool {
    // Cheap necessary condition first: join only grows headers.
    a.header.is_subset(&b.header) && &natural_join(a, b) == b
}

pub fn special_element(u: &Universe, code: SpecialCode) -> Relation {
    match code {
        SpecialCode::Empty00 => Relation::empty(Header::empty()),
        SpecialCode::Bottom01 => Relation {
            header: Header::empty(),
            body: BTreeSet::from([Vec::new()]),
        },
        SpecialCode::Top10 => Relation::empty(u.header().clone()),
        SpecialCode::Universal11 => full_product(u, u.header()),
    }
}

/// Every tuple over `header`.
pub(crate) fn full_product(u: &Universe, header: &Header) -> Relation {
    let rows = u
        .domain_product(header)
        .expect("header checked against universe");
    Relation {
        header: header.clone(),
        body: rows.into_iter().collect(),
    }
}

/// Splits a relation into its header part `A ⋈ 00` and content part `A ⋈ 11`.
/// Their inner union gives back `A`.
pub fn decompose(u: &Universe, a: &Relation) -> (Relation, Relation) {
    (
        natural_join(a, &special_element(u, SpecialCode::Empty00)),
        natural_join(a, &special_element(u, SpecialCode::Universal11)),
    )
}
