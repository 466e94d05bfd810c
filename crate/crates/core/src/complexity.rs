//! Operation-count model for character-based simulation, evaluated with unit constants.
//!
//! The three cases share the `k·D²` tail and differ in the per-gate and
//! per-element costs:
//!
//! ```text
//! abelian:   k(m + |G|(1 + k² + k³)) + kD²
//! symmetric: k(m n² + |G|(n² + k² n² + k³)) + kD²
//! general:   k(m g + |G|(g + k² g + k³)) + kD²
//! ```
//!
//! Values are relative indicators, not time predictions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::FiniteMatrixGroup;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostCase {
    Abelian,
    Symmetric,
    General,
}

impl FromStr for CostCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abelian" => Ok(CostCase::Abelian),
            "symmetric" => Ok(CostCase::Symmetric),
            "general" => Ok(CostCase::General),
            other => Err(format!("unknown case `{other}` (expected abelian, symmetric or general)")),
        }
    }
}

impl fmt::Display for CostCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostCase::Abelian => "abelian",
            CostCase::Symmetric => "symmetric",
            CostCase::General => "general",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("the general case needs a positive g_cost")]
    MissingGCost,
    #[error("invalid cost parameters: {0}")]
    InvalidParams(String),
    #[error("declared abelian, but the group is not abelian")]
    ConflictingDeclaration,
}

/// Inputs: `k` irreps, `m` gates, `n` qubits, group order, largest irrep degree `dmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub case: CostCase,
    pub k: u64,
    pub m: u64,
    pub n: u64,
    pub order: u64,
    pub dmax: u64,
    /// Cost of one character evaluation in the general case.
    pub g_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    pub value: f64,
    pub formula_text: String,
}

const TAIL_NOTE: &str = "unit constants; kD^2 is added once, outside the k factor";

pub fn estimate_cost(p: &CostParams) -> Result<CostEstimate, CostError> {
    for (name, v) in [("k", p.k), ("m", p.m), ("order", p.order), ("dmax", p.dmax)] {
        if v == 0 {
            return Err(CostError::InvalidParams(format!("{name} must be positive")));
        }
    }
    if p.case == CostCase::Symmetric && p.n == 0 {
        return Err(CostError::InvalidParams("n must be positive in the symmetric case".into()));
    }
    let (k, m, n, order, d) = (p.k as f64, p.m as f64, p.n as f64, p.order as f64, p.dmax as f64);
    let tail = k * d * d;
    let (value, text) = match p.case {
        CostCase::Abelian => (
            k * (m + order * (1.0 + k * k + k * k * k)) + tail,
            format!(
                "k(m + |G|(1 + k^2 + k^3)) + kD^2 = {0}({1} + {2}(1 + {0}^2 + {0}^3)) + {0}*{3}^2",
                p.k, p.m, p.order, p.dmax
            ),
        ),
        CostCase::Symmetric => (
            k * (m * n * n + order * (n * n + k * k * n * n + k * k * k)) + tail,
            format!(
                "k(mn^2 + |G|(n^2 + k^2 n^2 + k^3)) + kD^2 = {0}({1}*{2}^2 + {3}({2}^2 + {0}^2*{2}^2 + {0}^3)) + {0}*{4}^2",
                p.k, p.m, p.n, p.order, p.dmax
            ),
        ),
        CostCase::General => {
            let g = match p.g_cost {
                Some(g) if g.is_finite() && g > 0.0 => g,
                _ => return Err(CostError::MissingGCost),
            };
            (
                k * (m * g + order * (g + k * k * g + k * k * k)) + tail,
                format!(
                    "k(m g + |G|(g + k^2 g + k^3)) + kD^2 = {0}({1}*{4} + {2}({4} + {0}^2*{4} + {0}^3)) + {0}*{3}^2",
                    p.k, p.m, p.order, p.dmax, g
                ),
            )
        }
    };
    Ok(CostEstimate { value, formula_text: format!("{text} = {value}; {TAIL_NOTE}") })
}

/// Abelian groups are detected; `symmetric` is only ever taken from the declaration.
pub fn classify_group<T: Real>(
    group: &FiniteMatrixGroup<T>,
    declared: Option<CostCase>,
) -> Result<CostCase, CostError> {
    let abelian = group.is_abelian();
    match declared {
        Some(CostCase::Abelian) if !abelian => Err(CostError::ConflictingDeclaration),
        Some(case) => Ok(case),
        None if abelian => Ok(CostCase::Abelian),
        None => Ok(CostCase::General),
    }
}
