use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::universe::Universe;
use crate::value::{Attr, Header, ScalarValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub const ALL: [Comparator; 6] = [
        Comparator::Eq,
        Comparator::Ne,
        Comparator::Lt,
        Comparator::Le,
        Comparator::Gt,
        Comparator::Ge,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Comparator::Eq => ord == Ordering::Equal,
            Comparator::Ne => ord != Ordering::Equal,
            Comparator::Lt => ord == Ordering::Less,
            Comparator::Le => ord != Ordering::Greater,
            Comparator::Gt => ord == Ordering::Greater,
            Comparator::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Attr(Attr),
    Const(ScalarValue),
}

/// Comparison predicates and their conjunctions.
///
/// A conjunction always has at least two conjuncts and never nests another
/// conjunction; build them through [`Predicate::and`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    Compare {
        left: Attr,
        op: Comparator,
        right: Operand,
    },
    And(Vec<Predicate>),
}

impl Predicate {
    pub fn attr_const(left: impl Into<Attr>, op: Comparator, value: ScalarValue) -> Self {
        Predicate::Compare {
            left: left.into(),
            op,
            right: Operand::Const(value),
        }
    }

    pub fn attr_attr(left: impl Into<Attr>, op: Comparator, right: impl Into<Attr>) -> Self {
        Predicate::Compare {
            left: left.into(),
            op,
            right: Operand::Attr(right.into()),
        }
    }

    /// Flattening conjunction. Panics on an empty list.
    pub fn and(parts: impl IntoIterator<Item = Predicate>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Predicate::And(inner) => flat.extend(inner),
                atom => flat.push(atom),
            }
        }
        match flat.len() {
            0 => panic!("conjunction of nothing"),
            1 => flat.pop().unwrap(),
            _ => Predicate::And(flat),
        }
    }

    /// Atomic comparisons, left to right.
    pub fn conjuncts(&self) -> &[Predicate] {
        match self {
            Predicate::And(parts) => parts,
            atom => std::slice::from_ref(atom),
        }
    }

    /// Every attribute the predicate mentions.
    pub fn attributes(&self) -> Header {
        let mut out = Header::empty();
        for atom in self.conjuncts() {
            if let Predicate::Compare { left, right, .. } = atom {
                out = out.with(left.clone());
                if let Operand::Attr(r) = right {
                    out = out.with(r.clone());
                }
            }
        }
        out
    }

    pub fn check(&self, u: &Universe) -> Result<()> {
        u.check_header(&self.attributes())
    }

    /// Evaluates against a positional row over `header`.
    pub(crate) fn eval_row(&self, header: &Header, row: &[ScalarValue]) -> bool {
        let get = |a: &Attr| &row[header.position(a).expect("predicate attribute in header")];
        self.conjuncts().iter().all(|atom| match atom {
            Predicate::Compare { left, op, right } => {
                let lhs = get(left);
                let rhs = match right {
                    Operand::Attr(a) => get(a),
                    Operand::Const(v) => v,
                };
                op.holds(lhs.cmp(rhs))
            }
            Predicate::And(_) => unreachable!("conjunctions are flat"),
        })
    }
}

/// Tokens that lex as integers print bare; everything else is quoted.
pub(crate) fn is_bare_constant(token: &str) -> bool {
    let digits = token.strip_prefix('-').unwrap_or(token);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn write_constant(f: &mut impl fmt::Write, token: &str) -> fmt::Result {
    if is_bare_constant(token) {
        return f.write_str(token);
    }
    f.write_char('\'')?;
    for c in token.chars() {
        if c == '\'' || c == '\\' {
            f.write_char('\\')?;
        }
        f.write_char(c)?;
    }
    f.write_char('\'')
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.conjuncts().iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            if let Predicate::Compare { left, op, right } = atom {
                write!(f, "{left}{}", op.symbol())?;
                match right {
                    Operand::Attr(a) => write!(f, "{a}")?,
                    Operand::Const(v) => write_constant(f, v.as_str())?,
                }
            }
        }
        Ok(())
    }
}

/// Relabels attribute `from` as `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RenameSpec {
    pub from: Attr,
    pub to: Attr,
}

impl RenameSpec {
    pub fn new(from: impl Into<Attr>, to: impl Into<Attr>) -> Result<Self> {
        let (from, to) = (from.into(), to.into());
        if from == to {
            return Err(Error::InvalidPredicate(format!(
                "rename of `{from}` onto itself"
            )));
        }
        Ok(RenameSpec { from, to })
    }
}

impl fmt::Display for RenameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ScalarValue {
        ScalarValue::new(s).unwrap()
    }

    #[test]
    fn conjunction_flattens() {
        let a = Predicate::attr_const("x", Comparator::Eq, v("1"));
        let b = Predicate::attr_attr("x", Comparator::Lt, "y");
        let c = Predicate::attr_const("y", Comparator::Ne, v("a"));
        let p = Predicate::and([Predicate::and([a.clone(), b.clone()]), c.clone()]);
        assert_eq!(p.conjuncts(), &[a.clone(), b, c]);
        assert_eq!(Predicate::and([a.clone()]), a);
        assert_eq!(p.attributes().to_string(), "{x,y}");
    }

    #[test]
    fn display_quotes_symbols() {
        let p = Predicate::and([
            Predicate::attr_const("x", Comparator::Ge, v("-3")),
            Predicate::attr_const("y", Comparator::Eq, v("it's")),
            Predicate::attr_attr("x", Comparator::Ne, "y"),
        ]);
        assert_eq!(p.to_string(), r"x>=-3 & y='it\'s' & x!=y");
    }

    #[test]
    fn comparators() {
        use Ordering::*;
        assert!(Comparator::Le.holds(Equal) && Comparator::Le.holds(Less));
        assert!(!Comparator::Gt.holds(Equal));
        assert!(Comparator::Ne.holds(Greater));
    }

    #[test]
    fn rename_onto_self_rejected() {
        assert!(RenameSpec::new("x", "x").is_err());
        assert_eq!(RenameSpec::new("y", "z").unwrap().to_string(), "y -> z");
    }
}
