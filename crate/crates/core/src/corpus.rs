//! Bundled generating sets and reference presentations.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::symop::{parse_generating_set, GeneratingSetDocument};
use crate::words::Presentation;

const DOCUMENTS: &[(&str, &str)] = &[
    ("elv.json", include_str!("../data/groups/elv.json")),
    ("i41a_gis.json", include_str!("../data/groups/i41a_gis.json")),
    ("i42d_gis.json", include_str!("../data/groups/i42d_gis.json")),
    ("p-1_dia.json", include_str!("../data/groups/p-1_dia.json")),
    ("p212121_dia.json", include_str!("../data/groups/p212121_dia.json")),
    ("p6_hcb.json", include_str!("../data/groups/p6_hcb.json")),
    ("pnna_acd.json", include_str!("../data/groups/pnna_acd.json")),
    ("pnna_bcd.json", include_str!("../data/groups/pnna_bcd.json")),
    ("pnna_dia.json", include_str!("../data/groups/pnna_dia.json")),
];

const CORPUS: &str = include_str!("../data/corpus.json");

/// Names of the bundled generating-set documents.
pub fn document_names() -> Vec<&'static str> {
    DOCUMENTS.iter().map(|(n, _)| *n).collect()
}

pub fn document_text(name: &str) -> Result<&'static str> {
    DOCUMENTS
        .iter()
        .find(|(n, _)| *n == name || n.trim_end_matches(".json") == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Invalid(format!("no bundled document `{name}`")))
}

pub fn document(name: &str) -> Result<GeneratingSetDocument> {
    parse_generating_set(document_text(name)?)
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    document: String,
    relators: Vec<String>,
}

/// A generating set with a reference presentation on the same generators.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub document: GeneratingSetDocument,
    pub reference: Presentation,
}

pub fn reference_corpus() -> Result<Vec<CorpusEntry>> {
    let raw: Vec<RawEntry> = serde_json::from_str(CORPUS).map_err(|e| Error::Document(e.to_string()))?;
    raw.into_iter()
        .map(|e| {
            let document = document(&e.document)?;
            let texts: Vec<&str> = e.relators.iter().map(String::as_str).collect();
            let reference = Presentation::parse(&document.names(), &texts)?;
            Ok(CorpusEntry { name: e.name, document, reference })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::evaluate;

    #[test]
    fn reference_relators_hold() {
        for entry in reference_corpus().unwrap() {
            let ops = entry.document.ops();
            for r in &entry.reference.relators {
                assert!(evaluate(r, &ops).unwrap().is_identity(), "{}: {:?}", entry.name, r);
            }
        }
    }

    #[test]
    fn all_documents_parse() {
        for name in document_names() {
            document(name).unwrap();
        }
    }
}
