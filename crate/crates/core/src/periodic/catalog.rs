//! Bundled nets, overridable from a directory of `<name>.net` files.

use std::path::PathBuf;

use super::LabeledQuotientGraph;
use crate::error::{Error, Result};

/// Directory searched for `<name>.net` before the bundled catalog.
pub const CATALOG_DIR_VAR: &str = "CRYSTPRES_NET_DIR";

const NETS: &[(&str, &str)] = &[
    ("dia", include_str!("../../data/nets/dia.net")),
    ("gis", include_str!("../../data/nets/gis.net")),
    ("hcb", include_str!("../../data/nets/hcb.net")),
    ("nbo", include_str!("../../data/nets/nbo.net")),
    ("pcu", include_str!("../../data/nets/pcu.net")),
    ("qtz", include_str!("../../data/nets/qtz.net")),
    ("sql", include_str!("../../data/nets/sql.net")),
    ("srs", include_str!("../../data/nets/srs.net")),
    ("ths", include_str!("../../data/nets/ths.net")),
];

pub fn catalog_names() -> Vec<&'static str> {
    NETS.iter().map(|(n, _)| *n).collect()
}

/// Loads and validates a net by name; names are case-insensitive.
pub fn catalog_load(name: &str) -> Result<LabeledQuotientGraph> {
    let key = name.to_ascii_lowercase();
    if let Some(dir) = std::env::var_os(CATALOG_DIR_VAR) {
        let path = PathBuf::from(dir).join(format!("{key}.net"));
        if path.is_file() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Graph(format!("{}: {e}", path.display())))?;
            return LabeledQuotientGraph::parse_net(&text);
        }
    }
    let (_, text) = NETS.iter().find(|(n, _)| *n == key).ok_or_else(|| Error::UnknownNet(name.to_string()))?;
    LabeledQuotientGraph::parse_net(text)
}
