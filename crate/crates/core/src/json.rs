//! JSON documents for universes and relations.
//!
//! ```json
//! {"attributes": [{"name": "x", "domain": ["1", "2"]}]}
//! {"header": ["x", "y"], "tuples": [["1", "a"]]}
//! ```
//!
//! A catalog names relations: `{"relations": {"A": {"header": …, "tuples": …}}}`.
//!
//! Relation values are positional against the document's `header` list.
//! Emission is compact, with the header in name order and tuples in
//! canonical order, so emitting a parsed document is a fixed point.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use std::collections::BTreeMap;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::universe::Universe;
use crate::value::{Attr, Header, ScalarValue};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UniverseDoc {
    attributes: Vec<AttributeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AttributeDoc {
    name: String,
    domain: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RelationDoc {
    header: Vec<String>,
    tuples: Vec<Vec<String>>,
}

pub fn universe_from_json(text: &str) -> Result<Universe> {
    let doc: UniverseDoc = serde_json::from_str(text)?;
    Universe::new(doc.attributes.into_iter().map(|a| (a.name, a.domain)))
}

pub fn universe_to_json(u: &Universe) -> String {
    let doc = UniverseDoc {
        attributes: u
            .attributes()
            .map(|(a, d)| AttributeDoc {
                name: a.to_string(),
                domain: d.iter().map(ScalarValue::to_string).collect(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("universe serializes")
}

pub fn relation_from_json(u: &Universe, text: &str) -> Result<Relation> {
    let doc: RelationDoc = serde_json::from_str(text)?;
    relation_from_doc(u, doc)
}

pub(crate) fn relation_from_doc(u: &Universe, doc: RelationDoc) -> Result<Relation> {
    let header: Header = doc.header.iter().map(String::as_str).collect();
    if header.len() != doc.header.len() {
        return Err(Error::MalformedRelation("repeated attribute in header".into()));
    }
    u.check_header(&header)?;
    // Permute document order into name order.
    let order: Vec<usize> = header
        .iter()
        .map(|a| doc.header.iter().position(|n| n == a.as_str()).unwrap())
        .collect();
    let mut rows = Vec::with_capacity(doc.tuples.len());
    for tuple in &doc.tuples {
        if tuple.len() != doc.header.len() {
            return Err(Error::MalformedRelation(format!(
                "tuple has {} values for {} attributes",
                tuple.len(),
                doc.header.len()
            )));
        }
        rows.push(order.iter().map(|&i| tuple[i].as_str()).collect::<Vec<_>>());
    }
    Relation::from_rows(u, header, rows)
}

pub fn relation_to_json(r: &Relation) -> String {
    serde_json::to_string(r).expect("relation serializes")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    relations: BTreeMap<String, RelationDoc>,
}

pub fn catalog_from_json(u: &Universe, text: &str) -> Result<Catalog> {
    let doc: CatalogDoc = serde_json::from_str(text)?;
    let mut c = Catalog::new(u.clone());
    for (name, r) in doc.relations {
        let r = relation_from_doc(u, r).map_err(|e| Error::MalformedRelation(format!("{name}: {e}")))?;
        c.insert(name, r)?;
    }
    Ok(c)
}

pub fn catalog_to_json(c: &Catalog) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        relations: BTreeMap<&'a str, &'a Relation>,
    }
    let out = Out {
        relations: c.iter().collect(),
    };
    serde_json::to_string(&out).expect("catalog serializes")
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let header: Vec<&str> = self.header().iter().map(Attr::as_str).collect();
        let tuples: Vec<Vec<&str>> = self
            .rows()
            .map(|row| row.iter().map(ScalarValue::as_str).collect())
            .collect();
        let mut s = serializer.serialize_struct("Relation", 2)?;
        s.serialize_field("header", &header)?;
        s.serialize_field("tuples", &tuples)?;
        s.end()
    }
}
