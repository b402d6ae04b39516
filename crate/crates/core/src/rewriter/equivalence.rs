use crate::catalog::Catalog;
use crate::error::Result;
use crate::expr::{evaluate, infer_header, Expr};
use crate::sample::Sampler;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    EquivalentUpToTrials { trials: usize },
    /// A catalog on which the two expressions evaluate differently.
    Counterexample(Box<Catalog>),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::EquivalentUpToTrials { .. })
    }
}

/// Same universe, same names and headers as `c0`, fresh bodies.
pub fn random_catalog(c0: &Catalog, sampler: &mut Sampler) -> Catalog {
    let u = c0.universe();
    let mut out = Catalog::new(u.clone());
    for (name, r) in c0.iter() {
        out.insert(name, sampler.relation(u, r.header()))
            .expect("sampled relations stay inside the universe");
    }
    out
}

fn agree(e1: &Expr, e2: &Expr, c: &Catalog) -> bool {
    match (evaluate(e1, c), evaluate(e2, c)) {
        (Ok(a), Ok(b)) => a == b,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

/// Compares `e1` and `e2` on `c0` and then on `trials` random catalogs with
/// `c0`'s headers. Two failing evaluations count as agreement.
pub fn equivalent(e1: &Expr, e2: &Expr, c0: &Catalog, trials: usize, seed: u64) -> Result<Equivalence> {
    infer_header(e1, c0)?;
    infer_header(e2, c0)?;
    if !agree(e1, e2, c0) {
        return Ok(Equivalence::Counterexample(Box::new(c0.clone())));
    }
    let mut sampler = Sampler::new(seed);
    for _ in 0..trials {
        let c = random_catalog(c0, &mut sampler);
        if !agree(e1, e2, &c) {
            return Ok(Equivalence::Counterexample(Box::new(c)));
        }
    }
    Ok(Equivalence::EquivalentUpToTrials { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::json::{catalog_from_json, universe_from_json};

    const U2: &str = r#"{"attributes":[{"name":"x","domain":["1","2"]},{"name":"y","domain":["a","b"]}]}"#;

    #[test]
    fn stored_nondistributive_witness() {
        let u = universe_from_json(U2).unwrap();
        let c = catalog_from_json(
            &u,
            r#"{"relations":{
                "A":{"header":["x","y"],"tuples":[["1","a"]]},
                "B":{"header":["y"],"tuples":[["b"]]},
                "C":{"header":["x"],"tuples":[["2"]]}}}"#,
        )
        .unwrap();
        let lhs = parse("A*(B+C)").unwrap();
        let rhs = parse("(A*B)+(A*C)").unwrap();
        match equivalent(&lhs, &rhs, &c, 100, 0).unwrap() {
            Equivalence::Counterexample(w) => assert_eq!(*w, c),
            other => panic!("{other:?}"),
        }
        assert!(equivalent(&lhs, &lhs, &c, 100, 0).unwrap().is_equivalent());
        assert!(equivalent(&lhs, &parse("A * Q").unwrap(), &c, 1, 0).is_err());
    }
}
