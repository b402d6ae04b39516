use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::value::{Attr, Header, ScalarValue};

/// The ambient schema: every attribute name with its finite domain.
///
/// Attributes keep declaration order and domains keep declared value order.
/// The universe fixes what "all attributes" means for the `10` and `11`
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    attributes: Vec<(Attr, Vec<ScalarValue>)>,
    index: BTreeMap<Attr, usize>,
    all: Header,
}

impl Universe {
    pub fn new<I, N, D, T>(attributes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, D)>,
        N: AsRef<str>,
        D: IntoIterator<Item = T>,
        T: AsRef<str>,
    {
        let mut decl = Vec::new();
        let mut index = BTreeMap::new();
        for (name, domain) in attributes {
            let name = name.as_ref();
            if name.is_empty() {
                return Err(Error::InvalidUniverse("empty attribute name".into()));
            }
            let attr = Attr::new(name);
            if index.insert(attr.clone(), decl.len()).is_some() {
                return Err(Error::InvalidUniverse(format!(
                    "attribute `{name}` declared twice"
                )));
            }
            let mut seen = BTreeSet::new();
            let mut values = Vec::new();
            for token in domain {
                let value = ScalarValue::new(token.as_ref()).ok_or_else(|| {
                    Error::InvalidUniverse(format!("empty value in domain of `{name}`"))
                })?;
                if !seen.insert(value.clone()) {
                    return Err(Error::InvalidUniverse(format!(
                        "value `{value}` repeated in domain of `{name}`"
                    )));
                }
                values.push(value);
            }
            if values.is_empty() {
                return Err(Error::InvalidUniverse(format!(
                    "domain of `{name}` is empty"
                )));
            }
            decl.push((attr, values));
        }
        let all = decl.iter().map(|(a, _)| a.clone()).collect();
        Ok(Universe {
            attributes: decl,
            index,
            all,
        })
    }

    /// Attributes with their domains, in declaration order.
    pub fn attributes(&self) -> impl Iterator<Item = (&Attr, &[ScalarValue])> {
        self.attributes.iter().map(|(a, d)| (a, d.as_slice()))
    }

    /// Every attribute of the universe.
    pub fn header(&self) -> &Header {
        &self.all
    }

    pub fn contains(&self, attr: &Attr) -> bool {
        self.index.contains_key(attr)
    }

    pub fn domain(&self, attr: &Attr) -> Option<&[ScalarValue]> {
        self.index
            .get(attr)
            .map(|&i| self.attributes[i].1.as_slice())
    }

    pub fn domain_contains(&self, attr: &Attr, value: &ScalarValue) -> bool {
        self.domain(attr).is_some_and(|d| d.contains(value))
    }

    pub fn check_header(&self, header: &Header) -> Result<()> {
        match header.iter().find(|a| !self.contains(a)) {
            Some(a) => Err(Error::UnknownAttribute(a.clone())),
            None => Ok(()),
        }
    }

    /// All tuples over `header`, positional in header order, sorted canonically.
    pub fn domain_product(&self, header: &Header) -> Result<Vec<Vec<ScalarValue>>> {
        self.check_header(header)?;
        let mut rows: Vec<Vec<ScalarValue>> = vec![Vec::new()];
        for attr in header {
            let mut domain = self.domain(attr).unwrap_or_default().to_vec();
            domain.sort();
            rows = rows
                .into_iter()
                .flat_map(|row| {
                    domain.iter().map(move |v| {
                        let mut next = row.clone();
                        next.push(v.clone());
                        next
                    })
                })
                .collect();
        }
        Ok(rows)
    }

    /// Size of the domain product over `header`, saturating.
    pub fn product_size(&self, header: &Header) -> usize {
        header
            .iter()
            .map(|a| self.domain(a).map_or(0, <[_]>::len))
            .fold(1usize, usize::saturating_mul)
    }
}
