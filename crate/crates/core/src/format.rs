//! The structure file format.
//!
//! A structure file is a single JSON document:
//!
//! ```json
//! {
//!   "signature": [{"name": "R", "arity": 2}],
//!   "domain": 3,
//!   "relations": {"R": [[0, 1], [1, 2], [2, 0]]}
//! }
//! ```
//!
//! `domain` may also be a list of element names, in which case tuple entries
//! may refer to elements by name; names are mapped to `0..n` in list order
//! on ingest. Relations missing from `relations` are empty. Output always
//! uses an integer domain, relations in signature order, and tuples in
//! lexicographic order.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDecl {
    name: String,
    arity: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DomainDoc {
    Size(usize),
    Names(Vec<String>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ElementRef {
    Index(usize),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    signature: Vec<RelationDecl>,
    domain: DomainDoc,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<ElementRef>>>,
}

/// Parses a structure document.
pub fn decode(text: &str) -> Result<Structure> {
    let doc: StructureDoc = serde_json::from_str(text)?;
    let signature = Signature::new(doc.signature.into_iter().map(|r| (r.name, r.arity)))?;
    let (size, names): (usize, HashMap<String, usize>) = match doc.domain {
        DomainDoc::Size(n) => (n, HashMap::new()),
        DomainDoc::Names(list) => {
            let mut map = HashMap::new();
            for (i, name) in list.iter().enumerate() {
                if map.insert(name.clone(), i).is_some() {
                    return Err(Error::Format(format!("duplicate element name {name:?}")));
                }
            }
            (list.len(), map)
        }
    };
    let mut relations = vec![Vec::new(); signature.len()];
    for (name, tuples) in doc.relations {
        let idx = signature
            .index_of(&name)
            .ok_or_else(|| Error::Format(format!("relation {name:?} is not in the signature")))?;
        for t in tuples {
            let tuple = t
                .into_iter()
                .map(|e| match e {
                    ElementRef::Index(i) => Ok(i),
                    ElementRef::Name(n) => names
                        .get(&n)
                        .copied()
                        .ok_or_else(|| Error::Format(format!("unknown element name {n:?}"))),
                })
                .collect::<Result<Vec<usize>>>()?;
            relations[idx].push(tuple);
        }
    }
    Structure::new(signature, size, relations)
}

/// Serializes a structure as a pretty-printed document with a trailing newline.
pub fn encode(s: &Structure) -> String {
    let mut text = serde_json::to_string_pretty(&StructureOut(s)).expect("structures always serialize");
    text.push('\n');
    text
}

/// Serializes a structure on one line.
pub fn encode_compact(s: &Structure) -> String {
    serde_json::to_string(&StructureOut(s)).expect("structures always serialize")
}

pub fn read_structure(path: impl AsRef<Path>) -> Result<Structure> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    decode(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn write_structure(path: impl AsRef<Path>, s: &Structure) -> Result<()> {
    std::fs::write(path, encode(s))?;
    Ok(())
}

struct StructureOut<'a>(&'a Structure);
struct SignatureOut<'a>(&'a Signature);
struct RelationsOut<'a>(&'a Structure);

#[derive(Serialize)]
struct RelationOut<'a> {
    name: &'a str,
    arity: usize,
}

impl Serialize for StructureOut<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Structure", 3)?;
        st.serialize_field("signature", &SignatureOut(self.0.signature()))?;
        st.serialize_field("domain", &self.0.size())?;
        st.serialize_field("relations", &RelationsOut(self.0))?;
        st.end()
    }
}

impl Serialize for SignatureOut<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.relations().iter().map(|r| RelationOut {
            name: &r.name,
            arity: r.arity,
        }))
    }
}

impl Serialize for RelationsOut<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let sig = self.0.signature();
        let mut map = serializer.serialize_map(Some(sig.len()))?;
        for (r, rel) in sig.relations().iter().enumerate() {
            map.serialize_entry(&rel.name, self.0.tuples(r))?;
        }
        map.end()
    }
}
