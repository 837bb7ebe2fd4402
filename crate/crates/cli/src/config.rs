use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use selfsim_core::grig::{BoundaryPoint, GroupWord};
use selfsim_core::hecke::AlgebraElement;
use selfsim_core::renorm::lambda_slice;
use selfsim_core::intervals::IntervalUnion;

use crate::error::CliError;

/// A complete description of one run. Identical configurations produce
/// byte-identical artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Operator element; commands that need one default to `Δ`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<AlgebraElement>,
    /// Where the element was read from, for the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_file: Option<PathBuf>,
    pub out: PathBuf,
    /// Absolute tolerance for invariant and membership checks.
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Exact relation suite at levels `0..=max_level`.
    Verify { max_level: usize },
    /// Eigenvalues of the level-`level` operator, compared with `target`.
    Spectrum {
        level: usize,
        target: Target,
        bins: usize,
        export_matrix: bool,
    },
    /// `Λ_t` and the curve samples on each slice for `n ≤ max_level`.
    Slice { t: Vec<f64>, max_level: u32 },
    /// Curve invariance for `n ≤ max_level` and the picture of `Ω`.
    Omega {
        max_level: u32,
        samples: usize,
        t: Vec<f64>,
    },
    /// Truncated operator on an orbital-graph ball.
    Orbital {
        x: BoundaryPoint,
        gens: Vec<GroupWord>,
        radius: usize,
        depth: usize,
        target: Target,
    },
    /// Rigid fraction of Bernoulli-sampled boundary points.
    Rigidity {
        q: f64,
        samples: usize,
        depth: usize,
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Spectrum { .. } => "spectrum",
            Command::Slice { .. } => "slice",
            Command::Omega { .. } => "omega",
            Command::Orbital { .. } => "orbital",
            Command::Rigidity { .. } => "rigidity",
        }
    }
}

/// A named comparison set for computed spectra.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// `[-1/2, 0] ∪ [1/2, 1]`, the spectrum of `Δ`.
    Delta,
    /// `[-2, 0] ∪ [2, 4]`, the spectrum of `a + b + c + d`.
    Cayley,
    /// `Λ_t`.
    Slice { t: f64 },
}

impl Target {
    pub fn set(&self) -> IntervalUnion {
        match *self {
            Target::Delta => IntervalUnion::new(vec![[-0.5, 0.0], [0.5, 1.0]]).expect("valid"),
            Target::Cayley => lambda_slice(-1.0),
            Target::Slice { t } => lambda_slice(t),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Delta => write!(f, "delta"),
            Target::Cayley => write!(f, "cayley"),
            Target::Slice { t } => write!(f, "slice:{t}"),
        }
    }
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "delta" => Ok(Target::Delta),
            "cayley" => Ok(Target::Cayley),
            _ => s
                .strip_prefix("slice:")
                .and_then(|t| t.parse::<f64>().ok())
                .filter(|t| t.is_finite())
                .map(|t| Target::Slice { t })
                .ok_or_else(|| {
                    CliError::Usage(format!("unknown target {s:?}: expected delta, cayley or slice:<t>"))
                }),
        }
    }
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configurations serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid run configuration: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn element_or_delta(&self) -> AlgebraElement {
        self.element.clone().unwrap_or_else(AlgebraElement::delta)
    }

    /// Checks the ranges that the type system does not.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Usage(msg));
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return fail(format!("tolerance must be positive, got {}", self.tol));
        }
        match &self.command {
            Command::Spectrum { bins, .. } if *bins == 0 => fail("bins must be at least 1".into()),
            Command::Slice { t, .. } | Command::Omega { t, .. } if t.iter().any(|v| !v.is_finite()) => {
                fail("slice values must be finite".into())
            }
            Command::Slice { t, .. } if t.is_empty() => fail("slice needs at least one --t".into()),
            Command::Omega { max_level, samples, .. } if *max_level == 0 || *samples == 0 => {
                fail("omega needs --level >= 1 and --samples >= 1".into())
            }
            Command::Orbital { gens, radius, .. } => {
                if gens.is_empty() {
                    fail("orbital needs at least one generator".into())
                } else if *radius > MAX_RADIUS {
                    fail(format!("radius {radius} exceeds the limit {MAX_RADIUS}"))
                } else {
                    Ok(())
                }
            }
            Command::Rigidity { q, depth, .. } => {
                if !(*q > 0.0 && *q < 1.0) {
                    fail(format!("q must lie in (0, 1), got {q}"))
                } else if *depth == 0 {
                    fail("depth must be at least 1".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Largest orbital-ball radius accepted; the dense fallback of the
/// eigensolver would not fit in memory far beyond this.
pub const MAX_RADIUS: usize = 4096;
