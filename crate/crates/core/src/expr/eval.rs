use crate::catalog::Catalog;
use crate::derived;
use crate::error::{Error, Result};
use crate::predicate::{Comparator, Predicate, RenameSpec};
use crate::relation::{inner_union, natural_join, special_element, Relation, SpecialCode};
use crate::value::Header;

use super::{Expr, Position};

/// Header of `e` from names' headers alone, without touching any body.
pub fn infer_header(e: &Expr, c: &Catalog) -> Result<Header> {
    Ok(match e {
        Expr::Join(a, b) => infer_header(a, c)?.union(&infer_header(b, c)?),
        Expr::Union(a, b) => infer_header(a, c)?.intersection(&infer_header(b, c)?),
        Expr::Name(n) => c.header_of(n)?.clone(),
        Expr::Special(SpecialCode::Empty00 | SpecialCode::Bottom01) => Header::empty(),
        Expr::Special(SpecialCode::Top10 | SpecialCode::Universal11) => c.universe().header().clone(),
        Expr::Empty(h) => h.clone(),
        Expr::Pred(p) => p.attributes(),
        Expr::Select(a, p) => infer_header(a, c)?.union(&p.attributes()),
        Expr::Project(a, h) => infer_header(a, c)?.intersection(h),
        Expr::Rename(a, RenameSpec { from, to }) => infer_header(a, c)?.without(from).with(to.clone()),
        Expr::Divide(a, b) => infer_header(a, c)?.difference(&infer_header(b, c)?),
        Expr::Minus(a, _) => infer_header(a, c)?,
    })
}

fn located(pos: &[usize], err: Error) -> Error {
    match err {
        Error::Eval { .. } => err,
        other => Error::Eval {
            position: Position(pos.to_vec()).to_string(),
            source: Box::new(other),
        },
    }
}

/// Bottom-up evaluation. Failures are wrapped in [`Error::Eval`] naming the
/// position of the innermost failing node.
pub fn evaluate(e: &Expr, c: &Catalog) -> Result<Relation> {
    let mut path = Vec::new();
    eval_at(e, c, &mut path)
}

fn eval_at(e: &Expr, c: &Catalog, path: &mut Vec<usize>) -> Result<Relation> {
    let child = |i: usize, sub: &Expr, path: &mut Vec<usize>| {
        path.push(i);
        let r = eval_at(sub, c, path);
        path.pop();
        r
    };
    let u = c.universe();
    let out = match e {
        Expr::Join(a, b) => {
            let (ra, rb) = (child(0, a, path)?, child(1, b, path)?);
            Ok(natural_join(&ra, &rb))
        }
        Expr::Union(a, b) => {
            let (ra, rb) = (child(0, a, path)?, child(1, b, path)?);
            Ok(inner_union(&ra, &rb))
        }
        Expr::Name(n) => c.get(n).cloned(),
        Expr::Special(code) => Ok(special_element(u, *code)),
        Expr::Empty(h) => u.check_header(h).map(|_| Relation::empty(h.clone())),
        Expr::Pred(p) => derived::predicate_relation(u, &p.attributes(), p),
        Expr::Select(a, p) => {
            let ra = child(0, a, path)?;
            derived::select(u, &ra, p)
        }
        Expr::Project(a, h) => {
            let ra = child(0, a, path)?;
            derived::project(&ra, h)
        }
        Expr::Rename(a, spec) => {
            let ra = child(0, a, path)?;
            derived::rename(u, &ra, spec)
        }
        Expr::Divide(a, b) => {
            let (ra, rb) = (child(0, a, path)?, child(1, b, path)?);
            derived::divide(u, &ra, &rb)
        }
        Expr::Minus(a, b) => {
            let (ra, rb) = (child(0, a, path)?, child(1, b, path)?);
            derived::difference(&ra, &rb)
        }
    };
    out.map_err(|err| located(path, err))
}

/// One-level reduction of a selection, projection or renaming node to its
/// join/union formula. Other nodes give `None`.
pub fn desugar_node(e: &Expr, c: &Catalog) -> Result<Option<Expr>> {
    Ok(match e {
        Expr::Select(a, p) => Some(Expr::join(Expr::Pred(p.clone()), (**a).clone())),
        Expr::Project(a, h) => Some(Expr::union(Expr::Empty(h.clone()), (**a).clone())),
        Expr::Rename(a, RenameSpec { from, to }) => {
            let target = infer_header(a, c)?.without(from).with(to.clone());
            let equal = Predicate::attr_attr(from.clone(), Comparator::Eq, to.clone());
            Some(Expr::union(
                Expr::Empty(target),
                Expr::join((**a).clone(), Expr::Pred(equal)),
            ))
        }
        _ => None,
    })
}

/// Removes every selection, projection and renaming. Division and
/// difference stay as they are.
pub fn desugar(e: &Expr, c: &Catalog) -> Result<Expr> {
    let rebuilt = match e {
        Expr::Join(a, b) => Expr::join(desugar(a, c)?, desugar(b, c)?),
        Expr::Union(a, b) => Expr::union(desugar(a, c)?, desugar(b, c)?),
        Expr::Divide(a, b) => Expr::divide(desugar(a, c)?, desugar(b, c)?),
        Expr::Minus(a, b) => Expr::minus(desugar(a, c)?, desugar(b, c)?),
        Expr::Select(a, p) => Expr::select(desugar(a, c)?, p.clone()),
        Expr::Project(a, h) => Expr::project(desugar(a, c)?, h.clone()),
        Expr::Rename(a, s) => Expr::rename(desugar(a, c)?, s.clone()),
        leaf => return Ok(leaf.clone()),
    };
    Ok(desugar_node(&rebuilt, c)?.unwrap_or(rebuilt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::json::{catalog_from_json, universe_from_json};

    fn catalog() -> Catalog {
        let u = universe_from_json(
            r#"{"attributes":[{"name":"x","domain":["1","2"]},{"name":"y","domain":["a","b"]},{"name":"z","domain":["a","b","c"]}]}"#,
        )
        .unwrap();
        catalog_from_json(
            &u,
            r#"{"relations":{
                "A":{"header":["x","y"],"tuples":[["1","a"],["2","b"],["2","a"]]},
                "B":{"header":["y","z"],"tuples":[["a","c"],["b","b"]]}}}"#,
        )
        .unwrap()
    }

    fn eval(s: &str, c: &Catalog) -> Relation {
        evaluate(&parse(s).unwrap(), c).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn header(s: &str, c: &Catalog) -> String {
        infer_header(&parse(s).unwrap(), c).unwrap().to_string()
    }

    #[test]
    fn header_inference() {
        let c = catalog();
        assert_eq!(header("A * B", &c), "{x,y,z}");
        assert_eq!(header("A + B", &c), "{y}");
        assert_eq!(header("A + 11", &c), "{x,y}");
        assert_eq!(header("rename(A, y -> z)", &c), "{x,z}");
        assert!(matches!(
            infer_header(&parse("Q").unwrap(), &c),
            Err(Error::UnresolvedName(n)) if n == "Q"
        ));
    }

    #[test]
    fn evaluation_examples() {
        let c = catalog();
        let a = c.get("A").unwrap().clone();
        assert_eq!(eval("01 * A", &c), a);
        assert_eq!(eval("A * 00", &c), Relation::empty(a.header().clone()));
        assert_eq!(eval("(A*00) + (A*11)", &c), a);
        assert_eq!(eval("select(A, x=2)", &c).len(), 2);
        assert_eq!(eval("project(A, {y})", &c).len(), 2);
    }

    #[test]
    fn errors_carry_position() {
        let c = catalog();
        let err = evaluate(&parse("A * project(B, {x})").unwrap(), &c).unwrap_err();
        match &err {
            Error::Eval { position, source } => {
                assert_eq!(position, "[1]");
                assert!(matches!(**source, Error::AttributeNotInHeader(_)));
            }
            other => panic!("{other:?}"),
        }
        let err = evaluate(&parse("A + (B * Q)").unwrap(), &c).unwrap_err();
        assert!(err.to_string().starts_with("at node [1,1]"), "{err}");
        assert!(matches!(err.root(), Error::UnresolvedName(_)));
    }

    #[test]
    fn desugaring_preserves_meaning() {
        let c = catalog();
        for s in [
            "select(A, x=2 & y='a')",
            "project(A * B, {x, z})",
            "rename(A, y -> z)",
            "select(rename(project(A, {y}), y -> z), z!='a') * B",
            "minus(A, select(A, y='b'))",
        ] {
            let e = parse(s).unwrap();
            let d = desugar(&e, &c).unwrap();
            assert_eq!(evaluate(&d, &c).unwrap(), evaluate(&e, &c).unwrap(), "{s}");
            assert_eq!(infer_header(&d, &c).unwrap(), infer_header(&e, &c).unwrap(), "{s}");
            let text = d.to_string();
            assert!(!text.contains("select") && !text.contains("project") && !text.contains("rename"), "{text}");
        }
        let d = desugar(&parse("project(A, {y})").unwrap(), &c).unwrap();
        assert_eq!(d.to_string(), "[y] + A");
        let d = desugar(&parse("rename(A, y -> z)").unwrap(), &c).unwrap();
        assert_eq!(d.to_string(), "[x z] + A * [y=z]");
    }
}
