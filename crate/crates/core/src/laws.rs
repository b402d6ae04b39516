//! Registry of lattice identities and the header criteria under which the
//! two distributive laws hold.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::enumerator::enumerate_lattice;
use crate::error::{Error, Result};
use crate::relation::{inner_union, natural_join, special_element, Relation, SpecialCode};
use crate::sample::Sampler;
use crate::universe::Universe;
use crate::value::Header;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LawId {
    JoinIdempotent,
    UnionIdempotent,
    JoinCommutative,
    UnionCommutative,
    JoinAssociative,
    UnionAssociative,
    AbsorbJoinOverUnion,
    AbsorbUnionOverJoin,
    Proposition1,
    DistribJoinOverUnion,
    DistribUnionOverJoin,
}

impl LawId {
    pub const ALL: [LawId; 11] = [
        LawId::JoinIdempotent,
        LawId::UnionIdempotent,
        LawId::JoinCommutative,
        LawId::UnionCommutative,
        LawId::JoinAssociative,
        LawId::UnionAssociative,
        LawId::AbsorbJoinOverUnion,
        LawId::AbsorbUnionOverJoin,
        LawId::Proposition1,
        LawId::DistribJoinOverUnion,
        LawId::DistribUnionOverJoin,
    ];

    /// The eight lattice axioms.
    pub const AXIOMS: [LawId; 8] = [
        LawId::JoinIdempotent,
        LawId::UnionIdempotent,
        LawId::JoinCommutative,
        LawId::UnionCommutative,
        LawId::JoinAssociative,
        LawId::UnionAssociative,
        LawId::AbsorbJoinOverUnion,
        LawId::AbsorbUnionOverJoin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawId::JoinIdempotent => "JOIN_IDEMPOTENT",
            LawId::UnionIdempotent => "UNION_IDEMPOTENT",
            LawId::JoinCommutative => "JOIN_COMMUTATIVE",
            LawId::UnionCommutative => "UNION_COMMUTATIVE",
            LawId::JoinAssociative => "JOIN_ASSOCIATIVE",
            LawId::UnionAssociative => "UNION_ASSOCIATIVE",
            LawId::AbsorbJoinOverUnion => "ABSORB_JOIN_OVER_UNION",
            LawId::AbsorbUnionOverJoin => "ABSORB_UNION_OVER_JOIN",
            LawId::Proposition1 => "PROPOSITION_1",
            LawId::DistribJoinOverUnion => "DISTRIB_JOIN_OVER_UNION",
            LawId::DistribUnionOverJoin => "DISTRIB_UNION_OVER_JOIN",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            LawId::JoinIdempotent | LawId::UnionIdempotent | LawId::Proposition1 => 1,
            LawId::JoinCommutative
            | LawId::UnionCommutative
            | LawId::AbsorbJoinOverUnion
            | LawId::AbsorbUnionOverJoin => 2,
            LawId::JoinAssociative
            | LawId::UnionAssociative
            | LawId::DistribJoinOverUnion
            | LawId::DistribUnionOverJoin => 3,
        }
    }

    pub fn is_guarded(self) -> bool {
        matches!(self, LawId::DistribJoinOverUnion | LawId::DistribUnionOverJoin)
    }

    /// Header criterion for the law; always true for unguarded laws.
    pub fn guard(self, headers: &[&Header]) -> bool {
        match (self, headers) {
            (LawId::DistribJoinOverUnion, [a, b, c]) => join_over_union_applicable(a, b, c),
            (LawId::DistribUnionOverJoin, [a, b, c]) => union_over_join_applicable(a, b, c),
            _ => true,
        }
    }

    /// Evaluates the left- and right-hand sides.
    pub fn sides(self, u: &Universe, args: &[Relation]) -> Result<(Relation, Relation)> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch {
                law: self.name(),
                expected: self.arity(),
                found: args.len(),
            });
        }
        let join = natural_join;
        let union = inner_union;
        Ok(match (self, args) {
            (LawId::JoinIdempotent, [a]) => (join(a, a), a.clone()),
            (LawId::UnionIdempotent, [a]) => (union(a, a), a.clone()),
            (LawId::JoinCommutative, [a, b]) => (join(a, b), join(b, a)),
            (LawId::UnionCommutative, [a, b]) => (union(a, b), union(b, a)),
            (LawId::JoinAssociative, [a, b, c]) => (join(a, &join(b, c)), join(&join(a, b), c)),
            (LawId::UnionAssociative, [a, b, c]) => {
                (union(a, &union(b, c)), union(&union(a, b), c))
            }
            (LawId::AbsorbJoinOverUnion, [a, b]) => (join(a, &union(a, b)), a.clone()),
            (LawId::AbsorbUnionOverJoin, [a, b]) => (union(a, &join(a, b)), a.clone()),
            (LawId::Proposition1, [a]) => {
                let header_part = join(a, &special_element(u, SpecialCode::Empty00));
                let content_part = join(a, &special_element(u, SpecialCode::Universal11));
                (a.clone(), union(&header_part, &content_part))
            }
            (LawId::DistribJoinOverUnion, [a, b, c]) => {
                (join(a, &union(b, c)), union(&join(a, b), &join(a, c)))
            }
            (LawId::DistribUnionOverJoin, [a, b, c]) => {
                (union(a, &join(b, c)), join(&union(a, b), &union(a, c)))
            }
            _ => unreachable!("arity checked"),
        })
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        LawId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown law `{s}`"))
    }
}

impl Serialize for LawId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Join with `A` distributes over inner union of `B` and `C` when no
/// attribute is shared by exactly `A` and one of `B`, `C`.
pub fn join_over_union_applicable(ha: &Header, hb: &Header, hc: &Header) -> bool {
    ha.intersection(hb).is_subset(hc) && ha.intersection(hc).is_subset(hb)
}

/// Inner union with `A` distributes over join of `B` and `C`; this holds
/// exactly when `H(A) = H(B) ∩ H(C)`.
pub fn union_over_join_applicable(ha: &Header, hb: &Header, hc: &Header) -> bool {
    join_over_union_applicable(ha, hb, hc)
        && hb.intersection(hc).is_subset(ha)
        && ha.is_subset(&hb.union(hc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    GuardFailed,
    Counterexample,
}

/// Whether a guarded law skips arguments that fail its header criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardPolicy {
    Enforce,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: LawId,
    pub verdict: Verdict,
    pub witness: Option<Vec<Relation>>,
    pub lhs: Option<Relation>,
    pub rhs: Option<Relation>,
    /// Argument tuples on which the equation was evaluated.
    pub checked: usize,
    /// Argument tuples skipped because the guard failed.
    pub guard_failed: usize,
}

pub fn check_law(u: &Universe, law: LawId, args: &[Relation]) -> Result<LawReport> {
    check_law_with(u, law, args, GuardPolicy::Enforce)
}

/// Checks one instance. A failed guard reports `GuardFailed` but still
/// carries both sides so callers can inspect them.
pub fn check_law_with(
    u: &Universe,
    law: LawId,
    args: &[Relation],
    policy: GuardPolicy,
) -> Result<LawReport> {
    let (lhs, rhs) = law.sides(u, args)?;
    let headers: Vec<&Header> = args.iter().map(Relation::header).collect();
    let guarded_out = policy == GuardPolicy::Enforce && !law.guard(&headers);
    let verdict = if guarded_out {
        Verdict::GuardFailed
    } else if lhs == rhs {
        Verdict::Holds
    } else {
        Verdict::Counterexample
    };
    Ok(LawReport {
        law,
        verdict,
        witness: (verdict == Verdict::Counterexample).then(|| args.to_vec()),
        lhs: Some(lhs),
        rhs: Some(rhs),
        checked: usize::from(!guarded_out),
        guard_failed: usize::from(guarded_out),
    })
}

/// Universes small enough to sweep every argument tuple of the lattice.
pub fn is_exhaustive(u: &Universe) -> bool {
    u.header().len() <= 2 && u.attributes().all(|(_, d)| d.len() <= 2)
}

pub fn quantified_check(u: &Universe, law: LawId, budget: usize, seed: u64) -> LawReport {
    quantified_check_with(u, law, budget, seed, GuardPolicy::Enforce)
}

/// Universally quantified check: every argument tuple over the enumerated
/// lattice for tiny universes, otherwise `budget` seeded random tuples.
///
/// Under [`GuardPolicy::Enforce`] random sampling draws until `budget`
/// guard-passing tuples have been checked, giving up after `64 * budget`
/// draws. Stops at the first counterexample.
pub fn quantified_check_with(
    u: &Universe,
    law: LawId,
    budget: usize,
    seed: u64,
    policy: GuardPolicy,
) -> LawReport {
    let mut report = LawReport {
        law,
        verdict: Verdict::Holds,
        witness: None,
        lhs: None,
        rhs: None,
        checked: 0,
        guard_failed: 0,
    };
    let enforce = policy == GuardPolicy::Enforce;
    let visit = |args: &[Relation], report: &mut LawReport| -> bool {
        let headers: Vec<&Header> = args.iter().map(Relation::header).collect();
        if enforce && !law.guard(&headers) {
            report.guard_failed += 1;
            return true;
        }
        report.checked += 1;
        let (lhs, rhs) = law.sides(u, args).expect("arity matches");
        if lhs != rhs {
            report.verdict = Verdict::Counterexample;
            report.witness = Some(args.to_vec());
            report.lhs = Some(lhs);
            report.rhs = Some(rhs);
            return false;
        }
        true
    };

    if is_exhaustive(u) {
        let g = enumerate_lattice(u).expect("tiny universe enumerates");
        let n = g.len();
        let arity = law.arity();
        let total = n.pow(arity as u32);
        let mut args = Vec::with_capacity(arity);
        for code in 0..total {
            args.clear();
            let mut rest = code;
            let mut digits = vec![0; arity];
            for d in digits.iter_mut().rev() {
                *d = rest % n;
                rest /= n;
            }
            args.extend(digits.iter().map(|&i| g.elements()[i].clone()));
            if !visit(&args, &mut report) {
                break;
            }
        }
    } else {
        let mut sampler = Sampler::new(seed);
        let max_draws = budget.saturating_mul(if enforce && law.is_guarded() { 64 } else { 1 });
        for _ in 0..max_draws {
            if report.checked >= budget {
                break;
            }
            let args: Vec<Relation> = (0..law.arity()).map(|_| sampler.any_relation(u)).collect();
            if !visit(&args, &mut report) {
                break;
            }
        }
    }
    report
}
