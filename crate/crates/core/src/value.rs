//! Attribute names, scalar domain values and attribute sets.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attr(Arc<str>);

impl Attr {
    pub fn new(name: impl AsRef<str>) -> Self {
        Attr(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Attr {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Attr {
    fn from(s: &str) -> Self {
        Attr::new(s)
    }
}

/// A domain element. Tokens that read as base-10 integers order numerically
/// and sort before all other tokens, which order bytewise.
#[derive(Clone)]
pub struct ScalarValue {
    token: Arc<str>,
    numeric: Option<i64>,
}

impl ScalarValue {
    /// Returns `None` for the empty token.
    pub fn new(token: impl AsRef<str>) -> Option<Self> {
        let token = token.as_ref();
        if token.is_empty() {
            return None;
        }
        Some(ScalarValue {
            numeric: parse_integer(token),
            token: Arc::from(token),
        })
    }

    pub fn as_str(&self) -> &str {
        &self.token
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.numeric
    }
}

fn parse_integer(token: &str) -> Option<i64> {
    let digits = token.strip_prefix('-').unwrap_or(token);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

impl PartialEq for ScalarValue {
    fn eq(&self, other: &Self) -> bool {
        self.token == other.token
    }
}

impl Eq for ScalarValue {}

impl Hash for ScalarValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.token.hash(state)
    }
}

impl Ord for ScalarValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric, other.numeric) {
            // "01" and "1" are distinct tokens with equal numeric value.
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.token.cmp(&other.token)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.token.as_bytes().cmp(other.token.as_bytes()),
        }
    }
}

impl PartialOrd for ScalarValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token)
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token)
    }
}

/// A set of attribute names, iterated in name order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Header(BTreeSet<Attr>);

impl Header {
    pub fn empty() -> Self {
        Header(BTreeSet::new())
    }

    pub fn union(&self, other: &Header) -> Header {
        Header(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Header) -> Header {
        Header(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Header) -> Header {
        Header(self.0.difference(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &Header) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(mut self, attr: Attr) -> Header {
        self.0.insert(attr);
        self
    }

    pub fn without(mut self, attr: &Attr) -> Header {
        self.0.remove(attr);
        self
    }

    /// Index of `attr` in iteration order.
    pub fn position(&self, attr: &Attr) -> Option<usize> {
        self.0.iter().position(|a| a == attr)
    }
}

impl Deref for Header {
    type Target = BTreeSet<Attr>;

    fn deref(&self) -> &BTreeSet<Attr> {
        &self.0
    }
}

impl FromIterator<Attr> for Header {
    fn from_iter<I: IntoIterator<Item = Attr>>(iter: I) -> Self {
        Header(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for Header {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Header(iter.into_iter().map(Attr::new).collect())
    }
}

impl<'a> IntoIterator for &'a Header {
    type Item = &'a Attr;
    type IntoIter = std::collections::btree_set::Iter<'a, Attr>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Header {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.as_str())?;
        }
        f.write_str("}")
    }
}
