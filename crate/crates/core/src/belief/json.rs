//! JSON form of a basic belief assignment:
//!
//! ```json
//! {"frame": ["A", "B", "C"], "focal": [{"set": ["A"], "mass": 0.6}, {"set": [], "mass": 0.4}]}
//! ```
//!
//! `set: []` is the empty set. Unknown labels and repeated sets are rejected.
//! Output lists focal sets in ascending bit order with labels in frame order.

use serde::{Deserialize, Serialize};

use super::{Frame, MassFunction};
use crate::Result;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BbaDocument {
    pub frame: Vec<String>,
    pub focal: Vec<FocalEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocalEntry {
    pub set: Vec<String>,
    pub mass: f64,
}

impl BbaDocument {
    pub fn into_mass_function(self) -> Result<MassFunction> {
        let frame = Frame::new(self.frame)?;
        let entries = self
            .focal
            .iter()
            .map(|e| Ok((frame.subset(&e.set)?, e.mass)))
            .collect::<Result<Vec<_>>>()?;
        MassFunction::new(frame, entries)
    }
}

impl From<&MassFunction> for BbaDocument {
    fn from(m: &MassFunction) -> Self {
        let frame = m.frame();
        BbaDocument {
            frame: frame.labels().to_vec(),
            focal: m
                .focal()
                .iter()
                .map(|&(set, mass)| FocalEntry {
                    set: frame.names(set).into_iter().map(String::from).collect(),
                    mass,
                })
                .collect(),
        }
    }
}

impl MassFunction {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<BbaDocument>(text)?.into_mass_function()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&BbaDocument::from(self)).expect("plain data serializes")
    }
}
