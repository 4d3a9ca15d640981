//! Input documents: a small JSON format holding a named simplicial
//! complex, plus the plain-text integer matrix format for quasitoric
//! characteristic data.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use toric_core::SimplicialComplex;

/// A simplicial complex document: vertex count, facets as arrays of
/// 1-based vertex labels, and an optional name.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
}

impl ComplexDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: ComplexDocument =
            serde_json::from_str(text).context("parsing complex document")?;
        Ok(doc)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text)
    }

    /// Builds the complex, validating vertex labels.
    pub fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_facets(self.m, &self.facets)
            .map_err(|e| anyhow!("invalid complex document: {e}"))
    }

    /// Canonical form: facets sorted internally and between each other,
    /// duplicates and dominated facets removed. This is the form echoed
    /// in result documents.
    pub fn canonical(&self) -> Result<ComplexDocument> {
        let k = self.build()?;
        Ok(ComplexDocument {
            name: self.name.clone(),
            m: self.m,
            facets: k.facets(),
        })
    }

    /// FNV-1a digest of the canonical content, hex-encoded.
    pub fn digest(&self) -> Result<String> {
        let canon = self.canonical()?;
        let blob = serde_json::to_string(&canon).expect("document serializes");
        Ok(format!("{:016x}", fnv1a(blob.as_bytes())))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Parses an integer matrix from plain text: one row per line, entries
/// whitespace-separated, `#` starting a comment line.
pub fn parse_lambda(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for field in trimmed.split_whitespace() {
            let value: i64 = field
                .parse()
                .with_context(|| format!("line {}: bad integer {field:?}", lineno + 1))?;
            row.push(value);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("parameter matrix is empty");
    }
    let width = rows[0].len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            bail!(
                "row {} has {} entries, expected {}",
                i + 1,
                row.len(),
                width
            );
        }
    }
    Ok(rows)
}

pub fn load_lambda(path: &std::path::Path) -> Result<Vec<Vec<i64>>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_lambda(&text)
}
