//! Lattice expressions: syntax tree, canonical text, parsing and evaluation.
//!
//! `*` is natural join and `+` inner union; `*` binds tighter and both
//! associate to the left.
//!
//! ```text
//! union := join ('+' join)*
//! join  := atom ('*' atom)*
//! atom  := NAME | 00 | 01 | 10 | 11 | '[' attrs ']' | '[' predicate ']'
//!        | select '(' union ',' predicate ')'
//!        | project '(' union ',' '{' attrs '}' ')'
//!        | rename '(' union ',' attr '->' attr ')'
//!        | divide '(' union ',' union ')' | minus '(' union ',' union ')'
//!        | '(' union ')'
//! ```
//!
//! In predicates `&` conjoins comparisons, a bare identifier is an attribute, and constants are integers
//! (`x=1`, `x>-2`) or quoted (`y='a'`).

mod eval;
mod parser;

use std::fmt;

pub use eval::{desugar, desugar_node, evaluate, infer_header};
pub use parser::parse;

use crate::predicate::{Predicate, RenameSpec};
use crate::relation::SpecialCode;
use crate::value::Header;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Join(Box<Expr>, Box<Expr>),
    Union(Box<Expr>, Box<Expr>),
    Name(String),
    Special(SpecialCode),
    /// The empty relation over a header, `[x y]`.
    Empty(Header),
    /// A predicate materialized over the attributes it mentions, `[x>y]`.
    Pred(Predicate),
    Select(Box<Expr>, Predicate),
    Project(Box<Expr>, Header),
    Rename(Box<Expr>, RenameSpec),
    Divide(Box<Expr>, Box<Expr>),
    Minus(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(n: impl Into<String>) -> Expr {
        Expr::Name(n.into())
    }

    pub fn join(a: Expr, b: Expr) -> Expr {
        Expr::Join(Box::new(a), Box::new(b))
    }

    pub fn union(a: Expr, b: Expr) -> Expr {
        Expr::Union(Box::new(a), Box::new(b))
    }

    pub fn select(e: Expr, p: Predicate) -> Expr {
        Expr::Select(Box::new(e), p)
    }

    pub fn project(e: Expr, h: Header) -> Expr {
        Expr::Project(Box::new(e), h)
    }

    pub fn rename(e: Expr, spec: RenameSpec) -> Expr {
        Expr::Rename(Box::new(e), spec)
    }

    pub fn divide(a: Expr, b: Expr) -> Expr {
        Expr::Divide(Box::new(a), Box::new(b))
    }

    pub fn minus(a: Expr, b: Expr) -> Expr {
        Expr::Minus(Box::new(a), Box::new(b))
    }

    /// Constant leaves: special elements and bracket literals.
    pub fn is_literal(&self) -> bool {
        matches!(self, Expr::Special(_) | Expr::Empty(_) | Expr::Pred(_))
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Join(a, b) | Expr::Union(a, b) | Expr::Divide(a, b) | Expr::Minus(a, b) => {
                vec![a, b]
            }
            Expr::Select(e, _) | Expr::Project(e, _) | Expr::Rename(e, _) => vec![e],
            Expr::Name(_) | Expr::Special(_) | Expr::Empty(_) | Expr::Pred(_) => vec![],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut Expr> {
        match (self, i) {
            (Expr::Join(a, _) | Expr::Union(a, _) | Expr::Divide(a, _) | Expr::Minus(a, _), 0) => Some(a),
            (Expr::Join(_, b) | Expr::Union(_, b) | Expr::Divide(_, b) | Expr::Minus(_, b), 1) => Some(b),
            (Expr::Select(e, _) | Expr::Project(e, _) | Expr::Rename(e, _), 0) => Some(e),
            _ => None,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn at(&self, pos: &Position) -> Option<&Expr> {
        pos.0
            .iter()
            .try_fold(self, |node, &i| node.children().get(i).copied())
    }

    pub fn at_mut(&mut self, pos: &Position) -> Option<&mut Expr> {
        let mut node = self;
        for &i in &pos.0 {
            node = node.child_mut(i)?;
        }
        Some(node)
    }

    /// Copy of `self` with the subtree at `pos` replaced.
    pub fn replaced(&self, pos: &Position, with: Expr) -> Option<Expr> {
        let mut out = self.clone();
        *out.at_mut(pos)? = with;
        Some(out)
    }

    /// Every position in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut stack = vec![(self, Vec::new())];
        while let Some((node, path)) = stack.pop() {
            let children = node.children();
            for i in (0..children.len()).rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((children[i], p));
            }
            out.push(Position(path));
        }
        out
    }

    /// Relation names referenced anywhere in the tree.
    pub fn names(&self) -> std::collections::BTreeSet<&str> {
        let mut out = std::collections::BTreeSet::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let Expr::Name(n) = node {
                out.insert(n.as_str());
            }
            stack.extend(node.children());
        }
        out
    }
}

/// Path of child indices from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn write_attrs(f: &mut fmt::Formatter<'_>, h: &Header, sep: &str) -> fmt::Result {
    for (i, a) in h.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        f.write_str(a.as_str())?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    /// Canonical text with the fewest parentheses that re-parse to the same
    /// tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Union(a, b) => {
                write!(f, "{a} + ")?;
                if matches!(**b, Expr::Union(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Join(a, b) => {
                if matches!(**a, Expr::Union(..)) {
                    write!(f, "({a}) * ")?;
                } else {
                    write!(f, "{a} * ")?;
                }
                if matches!(**b, Expr::Union(..) | Expr::Join(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Name(n) => f.write_str(n),
            Expr::Special(c) => f.write_str(c.symbol()),
            Expr::Empty(h) => {
                f.write_str("[")?;
                write_attrs(f, h, " ")?;
                f.write_str("]")
            }
            Expr::Pred(p) => write!(f, "[{p}]"),
            Expr::Select(e, p) => write!(f, "select({e}, {p})"),
            Expr::Project(e, h) => {
                write!(f, "project({e}, {{")?;
                write_attrs(f, h, ", ")?;
                f.write_str("})")
            }
            Expr::Rename(e, s) => write!(f, "rename({e}, {s})"),
            Expr::Divide(a, b) => write!(f, "divide({a}, {b})"),
            Expr::Minus(a, b) => write!(f, "minus({a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicate::Comparator;
    use crate::value::ScalarValue;

    #[test]
    fn format_examples() {
        let e = Expr::join(Expr::name("A"), Expr::union(Expr::name("B"), Expr::name("C")));
        assert_eq!(e.to_string(), "A * (B + C)");
        assert_eq!(Expr::Special(SpecialCode::Top10).to_string(), "10");
        let p = Predicate::attr_const("x", Comparator::Eq, ScalarValue::new("1").unwrap());
        assert_eq!(Expr::Pred(p).to_string(), "[x=1]");
        let left = Expr::join(Expr::join(Expr::name("A"), Expr::name("B")), Expr::name("C"));
        assert_eq!(left.to_string(), "A * B * C");
        let right = Expr::join(Expr::name("A"), Expr::join(Expr::name("B"), Expr::name("C")));
        assert_eq!(right.to_string(), "A * (B * C)");
        let h: Header = ["y", "x"].into_iter().collect();
        assert_eq!(Expr::project(Expr::name("A"), h.clone()).to_string(), "project(A, {x, y})");
        assert_eq!(Expr::Empty(h).to_string(), "[x y]");
        assert_eq!(Expr::Empty(Header::empty()).to_string(), "[]");
    }

    #[test]
    fn positions_are_preorder() {
        let e = Expr::join(Expr::union(Expr::name("A"), Expr::name("B")), Expr::name("C"));
        let ps: Vec<String> = e.positions().iter().map(ToString::to_string).collect();
        assert_eq!(ps, ["[]", "[0]", "[0,0]", "[0,1]", "[1]"]);
        assert_eq!(e.at(&Position(vec![0, 1])), Some(&Expr::name("B")));
        assert_eq!(e.at(&Position(vec![1, 0])), None);
        let r = e.replaced(&Position(vec![1]), Expr::name("D")).unwrap();
        assert_eq!(r.to_string(), "(A + B) * D");
        assert_eq!(e.node_count(), 5);
        assert_eq!(e.depth(), 3);
    }
}
