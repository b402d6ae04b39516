//! Classic relational operators expressed through join and inner union.
//!
//! Selection, projection and renaming are computed by their lattice
//! formulas, never by direct tuple manipulation:
//!
//! * `select(A, p) = [p] ⋈ A`
//! * `project(A, P) = [P] + A`
//! * `rename(A, y→z) = [H(A)\y ∪ z] + (A ⋈ [y=z])`
//!
//! Set difference and division have no such reduction and are computed
//! directly, with lattice-flavoured variants alongside for cross-checking.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::predicate::{Comparator, Predicate, RenameSpec};
use crate::relation::{full_product, inner_union, natural_join, Relation};
use crate::universe::Universe;
use crate::value::{Attr, Header};

/// Materializes `p` as a finite relation over `over`.
pub fn predicate_relation(u: &Universe, over: &Header, p: &Predicate) -> Result<Relation> {
    u.check_header(over)?;
    p.check(u)?;
    if let Some(a) = p.attributes().iter().find(|a| !over.contains(*a)) {
        return Err(Error::AttributeNotInHeader(a.clone()));
    }
    let body: BTreeSet<_> = u
        .domain_product(over)?
        .into_iter()
        .filter(|row| p.eval_row(over, row))
        .collect();
    Ok(Relation::from_parts(over.clone(), body))
}

fn require_in_header(u: &Universe, header: &Header, attrs: &Header) -> Result<()> {
    u.check_header(attrs)?;
    match attrs.iter().find(|a| !header.contains(*a)) {
        Some(a) => Err(Error::AttributeNotInHeader(a.clone())),
        None => Ok(()),
    }
}

pub fn select(u: &Universe, a: &Relation, p: &Predicate) -> Result<Relation> {
    let attrs = p.attributes();
    require_in_header(u, a.header(), &attrs)?;
    let literal = predicate_relation(u, &attrs, p)?;
    Ok(natural_join(&literal, a))
}

pub fn project(a: &Relation, attrs: &Header) -> Result<Relation> {
    if let Some(x) = attrs.iter().find(|x| !a.header().contains(*x)) {
        return Err(Error::AttributeNotInHeader(x.clone()));
    }
    Ok(inner_union(&Relation::empty(attrs.clone()), a))
}

pub fn rename(u: &Universe, a: &Relation, spec: &RenameSpec) -> Result<Relation> {
    let RenameSpec { from, to } = spec;
    if !a.header().contains(from) {
        return Err(Error::AttributeNotInHeader(from.clone()));
    }
    if a.header().contains(to) {
        return Err(Error::TargetAttributeCollision(to.clone()));
    }
    let target_domain = u.domain(to).ok_or_else(|| Error::UnknownAttribute(to.clone()))?;
    let source_domain = u.domain(from).ok_or_else(|| Error::UnknownAttribute(from.clone()))?;
    if !source_domain.iter().all(|v| target_domain.contains(v)) {
        return Err(Error::DomainMismatch {
            from: from.clone(),
            to: to.clone(),
        });
    }
    let pair = Header::empty().with(from.clone()).with(to.clone());
    let equal = predicate_relation(u, &pair, &Predicate::attr_attr(from.clone(), Comparator::Eq, to.clone()))?;
    let target = a.header().clone().without(from).with(to.clone());
    Ok(inner_union(
        &Relation::empty(target),
        &natural_join(a, &equal),
    ))
}

fn same_header(a: &Relation, b: &Relation) -> Result<()> {
    if a.header() != b.header() {
        return Err(Error::HeaderMismatch {
            left: a.header().clone(),
            right: b.header().clone(),
        });
    }
    Ok(())
}

/// Plain set difference of bodies.
pub fn difference(a: &Relation, b: &Relation) -> Result<Relation> {
    same_header(a, b)?;
    let body = a.body().difference(b.body()).cloned().collect();
    Ok(Relation::from_parts(a.header().clone(), body))
}

/// Outcome of solving `X ⋈ B = [H]`, `X + B = A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquationSolution {
    Solved(Relation),
    NoSolution,
}

/// Set difference characterized by the pair of lattice equations
/// `X ⋈ B = [H(A)]` and `X + B = A`.
///
/// The candidate is checked by substitution; an unsatisfiable system
/// (in particular whenever `B` is not contained in `A`) gives
/// [`EquationSolution::NoSolution`].
pub fn difference_by_equations(a: &Relation, b: &Relation) -> Result<EquationSolution> {
    same_header(a, b)?;
    // With equal headers the join equation forces X ∩ B = ∅ and the union
    // equation forces X ∪ B = A, so A \ B is the only possible candidate.
    let candidate = difference(a, b)?;
    let empty = Relation::empty(a.header().clone());
    if natural_join(&candidate, b) == empty && &inner_union(&candidate, b) == a {
        Ok(EquationSolution::Solved(candidate))
    } else {
        Ok(EquationSolution::NoSolution)
    }
}

/// Set difference of unary relations through division:
/// with `C = rename(B, z→shadow)`, `A \ B = select(A ⋈ C, z ≠ shadow) / C`.
///
/// Only meaningful for non-empty `B`: dividing by an empty `C` is vacuously
/// true for every domain value, so the result is then the whole domain of
/// `z` rather than `A`.
pub fn difference_by_division(u: &Universe, a: &Relation, b: &Relation, shadow: &Attr) -> Result<Relation> {
    same_header(a, b)?;
    if a.header().len() != 1 {
        return Err(Error::ArityRestriction(a.header().clone()));
    }
    let z = a.header().iter().next().unwrap().clone();
    let c = rename(u, b, &RenameSpec::new(z.clone(), shadow.clone())?)?;
    let pairs = natural_join(a, &c);
    let distinct = select(u, &pairs, &Predicate::attr_attr(z, Comparator::Ne, shadow.clone()))?;
    divide(u, &distinct, &c)
}

fn check_divisor(a: &Relation, b: &Relation) -> Result<Header> {
    if b.header().is_empty() {
        return Err(Error::EmptyDivisorHeader);
    }
    if !b.header().is_subset(a.header()) || b.header() == a.header() {
        return Err(Error::HeaderNotProperSubset {
            dividend: a.header().clone(),
            divisor: b.header().clone(),
        });
    }
    Ok(a.header().difference(b.header()))
}

/// Relational division, computed as the finite supremum over `B`: the join,
/// over every `b ∈ B`, of the section of `A` at `b`.
///
/// An empty divisor yields every tuple over `H(A) \ H(B)`.
pub fn divide(u: &Universe, a: &Relation, b: &Relation) -> Result<Relation> {
    let rest = check_divisor(a, b)?;
    u.check_header(&rest)?;
    // The join identity on header `rest` is the full domain product.
    let mut acc = full_product(u, &rest);
    for row in b.rows() {
        let point = Relation::from_parts(b.header().clone(), BTreeSet::from([row.clone()]));
        let section = inner_union(&Relation::empty(rest.clone()), &natural_join(a, &point));
        acc = natural_join(&acc, &section);
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// The finite infimum over `B`: tuples of `A` restricted to
/// `H(A) \ H(B)` that have a witness in `B`. Equal to `[H(A)\H(B)] + (A ⋈ B)`,
/// which is the subquery unnesting identity.
pub fn finite_infimum(a: &Relation, b: &Relation) -> Result<Relation> {
    let rest = check_divisor(a, b)?;
    project(&natural_join(a, b), &rest)
}

/// Cartesian product: natural join of disjoint headers.
pub fn cross(a: &Relation, b: &Relation) -> Result<Relation> {
    let shared = a.header().intersection(b.header());
    if !shared.is_empty() {
        return Err(Error::OverlappingHeaders(shared));
    }
    Ok(natural_join(a, b))
}
