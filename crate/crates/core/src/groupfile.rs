//! The JSON group file: `{"degree": n, "generators": [[…], …], "name": "…"}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::perm::Permutation;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GroupDocument {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupDocument {
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.to_vec()).collect(),
            name: g.name().map(str::to_owned),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for (k, images) in self.generators.iter().enumerate() {
            if images.len() != self.degree {
                return Err(Error::MalformedPermutation(format!(
                    "generator {k} has {} images, expected {}",
                    images.len(),
                    self.degree
                )));
            }
            gens.push(Permutation::from_images(images).map_err(|e| match e {
                Error::MalformedPermutation(msg) => {
                    Error::MalformedPermutation(format!("generator {k}: {msg}"))
                }
                other => other,
            })?);
        }
        let g = FiniteGroup::closure(self.degree, &gens)?;
        Ok(match &self.name {
            Some(name) => g.with_name(name.clone()),
            None => g,
        })
    }
}

pub fn parse_document(text: &str) -> Result<GroupDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

/// Parses and closes a group file.
pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    parse_document(text)?.build()
}
