use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::universe::Universe;
use crate::value::Header;

/// Named relations over one shared universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    universe: Universe,
    relations: BTreeMap<String, Relation>,
}

impl Catalog {
    pub fn new(universe: Universe) -> Self {
        Catalog {
            universe,
            relations: BTreeMap::new(),
        }
    }

    /// Adds or replaces `name`. The relation must lie within the universe.
    pub fn insert(&mut self, name: impl Into<String>, r: Relation) -> Result<()> {
        self.universe.check_header(r.header())?;
        for row in r.rows() {
            for (a, v) in r.header().iter().zip(row) {
                if !self.universe.domain_contains(a, v) {
                    return Err(Error::ValueOutsideDomain {
                        attr: a.clone(),
                        value: v.to_string(),
                    });
                }
            }
        }
        self.relations.insert(name.into(), r);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, r: Relation) -> Result<Self> {
        self.insert(name, r)?;
        Ok(self)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn get(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnresolvedName(name.to_string()))
    }

    pub fn header_of(&self, name: &str) -> Result<&Header> {
        self.get(name).map(Relation::header)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}
