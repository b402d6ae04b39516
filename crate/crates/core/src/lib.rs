//! An executable relational lattice.
//!
//! Finite relations over an explicit [`Universe`] form a lattice under
//! natural join (supremum) and inner union (infimum). Everything else in the
//! classic relational algebra is derived from those two operations, checked
//! against algebraic laws, and rewritten by guarded rules.

pub mod catalog;
pub mod cli;
pub mod derived;
pub mod enumerator;
pub mod error;
pub mod expr;
pub mod json;
pub mod laws;
pub mod predicate;
pub mod relation;
pub mod rewriter;
pub mod sample;
pub mod universe;
pub mod value;

pub use catalog::Catalog;
pub use error::{Error, Result, SyntaxError};
pub use expr::{evaluate, infer_header, parse, Expr, Position};
pub use predicate::{Comparator, Operand, Predicate, RenameSpec};
pub use relation::{
    decompose, inner_union, leq, make_relation, natural_join, special_element, Relation, Row,
    SpecialCode, Tuple,
};
pub use universe::Universe;
pub use value::{Attr, Header, ScalarValue};
