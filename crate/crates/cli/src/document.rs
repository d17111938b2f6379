//! Versioned JSON coefficient documents.
//!
//! Exact values are written as `p/q` (or an integer) and read back
//! losslessly; floats are written with 17 significant digits. Every entry
//! inside the caps is present, in row-major order, so documents produced
//! from the same inputs are byte-identical.

use std::collections::BTreeMap;
use std::path::Path;

use exact_series::series::MultiIndexIter;
use exact_series::{Backend, Scalar, SeriesK};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "exactseries.coefficients/1";

pub mod kind {
    pub const PVI: &str = "pvi";
    pub const NAVIER_STOKES: &str = "navier-stokes";
    pub const PRANDTL: &str = "prandtl";
    pub const EXTERNAL_FLOW: &str = "external-flow";
    pub const WALL_SLOPE: &str = "wall-slope";
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub index: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub caps: Vec<usize>,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientDocument {
    pub schema: String,
    pub kind: String,
    pub backend: String,
    pub axes: Vec<String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub fields: Vec<Field>,
}

impl CoefficientDocument {
    pub fn new(kind: &str, backend: Backend, axes: &[&str]) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            kind: kind.to_string(),
            backend: backend.name().to_string(),
            axes: axes.iter().map(|s| s.to_string()).collect(),
            parameters: BTreeMap::new(),
            metadata: BTreeMap::new(),
            fields: Vec::new(),
        }
    }

    pub fn parameter_value<T: Scalar>(mut self, name: &str, value: &T) -> Self {
        self.parameters.insert(name.to_string(), value.to_text());
        self
    }

    pub fn meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn field<T: Scalar>(mut self, name: &str, series: &SeriesK<T>) -> Self {
        let entries = series
            .indices()
            .map(|index| Entry {
                value: series.at(&index).to_text(),
                index,
            })
            .collect();
        self.fields.push(Field {
            name: name.to_string(),
            caps: series.caps().to_vec(),
            entries,
        });
        self
    }

    pub fn backend(&self) -> Result<Backend, CliError> {
        self.backend
            .parse()
            .map_err(|_| CliError::Input(format!("unknown backend `{}` in document", self.backend)))
    }

    pub fn expect_kind(&self, kind: &str) -> Result<(), CliError> {
        if self.kind != kind {
            return Err(CliError::Input(format!(
                "expected a `{kind}` document, got `{}`",
                self.kind
            )));
        }
        Ok(())
    }

    pub fn parameter<T: Scalar>(&self, name: &str) -> Result<T, CliError> {
        let text = self
            .parameters
            .get(name)
            .ok_or_else(|| CliError::Input(format!("document has no parameter `{name}`")))?;
        T::parse(text).map_err(|e| CliError::Input(format!("parameter `{name}`: {e}")))
    }

    pub fn metadata_value(&self, key: &str) -> Result<&str, CliError> {
        self.metadata
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| CliError::Input(format!("document has no metadata `{key}`")))
    }

    /// Reads field `name` as a series over the document axes. Entries left
    /// out are zero; duplicates and indices outside the caps are rejected.
    pub fn series<T: Scalar>(&self, name: &str) -> Result<SeriesK<T>, CliError> {
        let backend = self.backend()?;
        if backend != T::BACKEND {
            return Err(CliError::Input(format!(
                "document backend is `{backend}`, expected `{}`",
                T::BACKEND
            )));
        }
        let f = self
            .fields
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| CliError::Input(format!("document has no field `{name}`")))?;
        if f.caps.len() != self.axes.len() {
            return Err(CliError::Input(format!(
                "field `{name}` has {} caps for {} axes",
                f.caps.len(),
                self.axes.len()
            )));
        }
        let mut out = SeriesK::zeros(self.axes.clone(), f.caps.clone());
        let mut seen = vec![false; MultiIndexIter::new(&f.caps).count()];
        for e in &f.entries {
            if e.index.len() != f.caps.len() || e.index.iter().zip(&f.caps).any(|(i, c)| i > c) {
                return Err(CliError::Input(format!(
                    "field `{name}`: index {:?} lies outside caps {:?}",
                    e.index, f.caps
                )));
            }
            let flat = e.index.iter().zip(&f.caps).fold(0, |acc, (i, c)| acc * (c + 1) + i);
            if std::mem::replace(&mut seen[flat], true) {
                return Err(CliError::Input(format!("field `{name}`: duplicate entry {:?}", e.index)));
            }
            let v = T::parse(&e.value).map_err(|err| CliError::Input(format!("field `{name}` {:?}: {err}", e.index)))?;
            out.set(&e.index, v).expect("index checked");
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed document: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(CliError::Input(format!(
                "unsupported schema `{}` (expected `{SCHEMA}`)",
                doc.schema
            )));
        }
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
