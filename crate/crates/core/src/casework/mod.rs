//! Mechanized casework: `(s, t)` enumeration, destabilizing-pair
//! elimination, and a checker for derivation scripts.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod axioms;
pub mod builtin;
pub mod cases;
pub mod destab;
pub mod expr;
pub mod script;
pub mod theorem;

pub use cases::{case_preset, case_presets, enumerate_case, CaseError, CaseSpec, Constraint};
pub use destab::{enumerate_destabilizing, Outcome, PairElimination, PairMode};
pub use expr::{Cond, Expr};
pub use script::{run_script, ArithClaim, Conclusion, DerivationReport, DerivationScript, Step};
pub use theorem::{verify_theorem_necessity, TheoremReport};

/// Integer comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Rel {
    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
