//! Lattice configuration files: a lattice, the assumptions made about it,
//! and optionally the aCM class `B` the theorem replay starts from.
//!
//! ```json
//! {
//!   "rank": 2,
//!   "gram": [[4, 2], [2, -2]],
//!   "labels": ["h", "B"],
//!   "ample": [1, 0],
//!   "k3": true,
//!   "acm_class": [0, 1],
//!   "assumptions": []
//! }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::acm::{check_assumptions, AcmError, Assumption};
use crate::lattice::{DivClass, Lattice, LatticeData, LatticeError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("field `{field}`: {msg}")]
    Invalid { field: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, ConfigError>;

/// On-disk form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub ample: Vec<i64>,
    #[serde(default = "yes")]
    pub k3: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acm_class: Option<Vec<i64>>,
    #[serde(default)]
    pub assumptions: Vec<Assumption>,
}

fn yes() -> bool {
    true
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeConfig {
    pub lattice: Lattice,
    pub acm_class: Option<DivClass>,
    pub assumptions: Vec<Assumption>,
}

fn lattice_field(e: &LatticeError) -> &'static str {
    match e {
        LatticeError::NonSymmetric { .. }
        | LatticeError::OddK3Diagonal { .. }
        | LatticeError::WrongSignature { .. }
        | LatticeError::DegenerateForm => "gram",
        LatticeError::DuplicateLabel(_) => "labels",
        LatticeError::NonPositiveAmple(_) => "ample",
        _ => "rank",
    }
}

impl LatticeConfig {
    pub fn from_file(f: ConfigFile) -> Result<Self> {
        let lattice = Lattice::try_from(LatticeData {
            rank: f.rank,
            gram: f.gram,
            labels: f.labels,
            ample: f.ample,
            k3: f.k3,
        })
        .map_err(|e| ConfigError::Invalid {
            field: lattice_field(&e),
            msg: e.to_string(),
        })?;
        let acm_class = match f.acm_class {
            Some(c) => Some(lattice.class(c).map_err(|e| ConfigError::Invalid {
                field: "acm_class",
                msg: e.to_string(),
            })?),
            None => None,
        };
        check_assumptions(&lattice, &f.assumptions).map_err(|e| ConfigError::Invalid {
            field: "assumptions",
            msg: match e {
                AcmError::Lattice(l) => l.to_string(),
                other => other.to_string(),
            },
        })?;
        Ok(LatticeConfig {
            lattice,
            acm_class,
            assumptions: f.assumptions,
        })
    }

    pub fn to_file(&self) -> ConfigFile {
        let d = LatticeData::from(self.lattice.clone());
        ConfigFile {
            rank: d.rank,
            gram: d.gram,
            labels: d.labels,
            ample: d.ample,
            k3: d.k3,
            acm_class: self.acm_class.as_ref().map(|c| c.0.clone()),
            assumptions: self.assumptions.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: ConfigFile = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        Self::from_file(f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let text = fs::read_to_string(p).map_err(|e| ConfigError::Io {
            path: p.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn dump(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("config serializes")
    }

    /// Parses `"a,b,..."` as a class in label order.
    pub fn parse_class(&self, arg: &str) -> Result<DivClass> {
        let coords: std::result::Result<Vec<i64>, _> =
            arg.split(',').map(|x| x.trim().parse::<i64>()).collect();
        let coords = coords.map_err(|e| ConfigError::Invalid {
            field: "class",
            msg: format!("{arg:?}: {e}"),
        })?;
        self.lattice
            .class(coords)
            .map_err(|e| ConfigError::Invalid {
                field: "class",
                msg: e.to_string(),
            })
    }
}
