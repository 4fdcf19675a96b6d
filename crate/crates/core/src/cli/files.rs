use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::{Branch, BranchDatum};
use crate::group::{FiniteGroup, GroupSpec};
use crate::hurwitz::HurwitzTuple;

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchEntry {
    pub label: String,
    pub order: usize,
    pub element: String,
}

/// On-disk datum: group descriptor, base genus, handle images and branches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub group: GroupSpec,
    pub base_genus: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub handles: Vec<String>,
    pub branches: Vec<BranchEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleFile {
    pub group: GroupSpec,
    pub entries: Vec<String>,
}

fn syntax(what: &str, err: serde_json::Error) -> CliError {
    CliError::Input(format!("malformed {what}: {err}"))
}

pub fn build_group(spec: &GroupSpec, cap: usize) -> Result<Arc<FiniteGroup>, CliError> {
    FiniteGroup::from_spec_with_cap(spec, cap)
        .map(Arc::new)
        .map_err(|e| CliError::Input(e.to_string()))
}

fn element(group: &FiniteGroup, text: &str) -> Result<crate::group::GroupElement, CliError> {
    group.parse_element(text).map_err(|e| CliError::Input(format!("element `{text}`: {e}")))
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| syntax("datum file", e))
    }

    pub fn to_datum(&self, cap: usize) -> Result<BranchDatum, CliError> {
        let group = build_group(&self.group, cap)?;
        let handles = self.handles.iter().map(|h| element(&group, h)).collect::<Result<Vec<_>, _>>()?;
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch { label: b.label.clone(), order: b.order, monodromy: element(&group, &b.element)? })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        BranchDatum::new(group, self.base_genus, handles, branches).map_err(|e| CliError::Input(e.to_string()))
    }

    /// Canonical form: element strings in normal form.
    pub fn from_datum(d: &BranchDatum) -> Self {
        let g = d.group();
        DatumFile {
            group: g.kind().clone(),
            base_genus: d.base_genus(),
            handles: d.handles().iter().map(|&h| g.label(h).to_string()).collect(),
            branches: d
                .branches()
                .iter()
                .map(|b| BranchEntry {
                    label: b.label.clone(),
                    order: b.order,
                    element: g.label(b.monodromy).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datum serializes")
    }
}

/// Parses a datum file into a datum; validity is checked separately.
pub fn parse_datum_file(text: &str, cap: usize) -> Result<BranchDatum, CliError> {
    DatumFile::parse(text)?.to_datum(cap)
}

impl TupleFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| syntax("tuple file", e))
    }

    pub fn to_tuple(&self, cap: usize) -> Result<HurwitzTuple, CliError> {
        let group = build_group(&self.group, cap)?;
        let entries = self.entries.iter().map(|e| element(&group, e)).collect::<Result<Vec<_>, _>>()?;
        HurwitzTuple::new(group, entries).map_err(|e| CliError::Invalid(e.to_string()))
    }
}

/// A bare group descriptor, or any document with a `group` field.
pub fn parse_group_document(text: &str) -> Result<GroupSpec, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| syntax("group file", e))?;
    let spec = match value.get("group") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(spec).map_err(|e| syntax("group descriptor", e))
}
