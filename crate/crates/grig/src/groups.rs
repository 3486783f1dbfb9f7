//! Finite groups for the wreath verifier: built-in names or Cayley-table files.

use std::fs;
use std::path::Path;

use grig_core::wreath::FiniteGroup;
use grig_core::GrigError;
use serde::Deserialize;

/// `{ "order": n, "table": [[...]], "names": [...] }`
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub names: Option<Vec<String>>,
}

impl CayleyTable {
    pub fn into_group(self) -> Result<FiniteGroup, GrigError> {
        if self.table.len() != self.order {
            return Err(GrigError::InvalidTable(format!("order {} but {} rows", self.order, self.table.len())));
        }
        FiniteGroup::from_table(self.table, self.names)
    }
}

fn input_error(path: &Path, err: impl std::fmt::Display) -> GrigError {
    GrigError::InvalidArgument(format!("{}: {err}", path.display()))
}

/// Read a Cayley table from JSON, or from CSV with one row per element.
pub fn load_table(path: &Path) -> Result<FiniteGroup, GrigError> {
    let text = fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    if path.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv")) {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut table = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| input_error(path, e))?;
            let row = record.iter().map(|cell| cell.parse::<usize>()).collect::<Result<Vec<_>, _>>();
            table.push(row.map_err(|e| input_error(path, e))?);
        }
        CayleyTable { order: table.len(), table, names: None }.into_group()
    } else {
        serde_json::from_str::<CayleyTable>(&text).map_err(|e| input_error(path, e))?.into_group()
    }
}

/// `C4`, `D3`, `S3`, ... or a path to a table file.
pub fn resolve(spec: &str) -> Result<FiniteGroup, GrigError> {
    match FiniteGroup::by_name(spec) {
        Ok(group) => Ok(group),
        Err(_) if Path::new(spec).exists() => load_table(Path::new(spec)),
        Err(err) => Err(err),
    }
}

/// Parse `A:B` into base and top group.
pub fn resolve_pair(spec: &str) -> Result<(FiniteGroup, FiniteGroup), GrigError> {
    let (a, b) =
        spec.split_once(':').ok_or_else(|| GrigError::InvalidArgument(format!("expected BASE:TOP, got {spec:?}")))?;
    Ok((resolve(a)?, resolve(b)?))
}
