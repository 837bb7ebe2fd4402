use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use selfsim_core::grig::{BoundaryPoint, GroupWord};
use selfsim_core::hecke::AlgebraElement;
use selfsim_core::spectra::MEMBERSHIP_TOL;

use crate::config::{Command, RunConfig, Target};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "selfsim", version, about = "Spectra of Hecke-type operators for the Grigorchuk group")]
pub struct Cli {
    /// Output directory for all artifacts.
    #[arg(long, global = true, default_value = "selfsim-out")]
    pub out: PathBuf,

    /// Absolute tolerance for invariant and membership checks.
    #[arg(long, global = true, default_value_t = MEMBERSHIP_TOL)]
    pub tol: f64,

    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Check the group relations exactly on the level permutations.
    Verify {
        /// Highest level checked.
        #[arg(long, default_value_t = 13)]
        level: usize,
    },
    /// Eigenvalues of an operator at a finite level.
    Spectrum {
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, default_value_t = 8)]
        level: usize,
        /// delta, cayley or slice:<t>.
        #[arg(long, default_value = "delta")]
        target: String,
        /// Histogram bins over the hull of the target.
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Also write the matrix as dense CSV with a metadata sidecar.
        #[arg(long)]
        export_matrix: bool,
    },
    /// Slices of the spectral region at fixed α.
    Slice {
        /// α value; repeat for several slices.
        #[arg(long = "t", allow_negative_numbers = true, required = true)]
        t: Vec<f64>,
        /// Highest curve level sampled.
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
    /// Curve invariance under the renormalization map and a picture of the region.
    Omega {
        /// Highest curve level checked.
        #[arg(long, default_value_t = 6)]
        level: u32,
        /// α samples per curve (each gives two points).
        #[arg(long, default_value_t = 5000)]
        samples: usize,
        /// Slice lines drawn in the picture.
        #[arg(long = "t", allow_negative_numbers = true)]
        t: Vec<f64>,
    },
    /// Truncated operator on a ball of an orbital graph.
    Orbital {
        #[command(flatten)]
        element: ElementArg,
        /// Base point as pre(period), e.g. (1) or 01(0).
        #[arg(long, default_value = "(1)")]
        x: String,
        /// Comma-separated generator words.
        #[arg(long, default_value = "a,b,c,d")]
        gens: String,
        #[arg(long, default_value_t = 64)]
        radius: usize,
        /// Coordinates used to tell orbit points apart.
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long, default_value = "delta")]
        target: String,
    },
    /// Fraction of Bernoulli-random boundary points that are rigid.
    Rigidity {
        /// Probability of the digit 0.
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct ElementArg {
    /// JSON file {"terms":[{"word":"a","coef":0.25},...]}; defaults to Δ.
    #[arg(long)]
    pub element: Option<PathBuf>,
}

impl ElementArg {
    fn load(&self) -> Result<Option<AlgebraElement>, CliError> {
        match &self.element {
            None => Ok(None),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Ok(Some(AlgebraElement::from_json(&text)?))
            }
        }
    }
}

fn parse_gens(text: &str) -> Result<Vec<GroupWord>, CliError> {
    text.split(',')
        .map(|w| w.trim().parse::<GroupWord>().map_err(CliError::from))
        .collect()
}

impl Cli {
    /// Resolves files and parses structured values into a run configuration.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut element = None;
        let mut element_file = None;
        let command = match self.command {
            Sub::Verify { level } => Command::Verify { max_level: level },
            Sub::Spectrum {
                element: e,
                level,
                target,
                bins,
                export_matrix,
            } => {
                element = e.load()?;
                element_file = e.element;
                Command::Spectrum {
                    level,
                    target: target.parse()?,
                    bins,
                    export_matrix,
                }
            }
            Sub::Slice { t, level } => Command::Slice { t, max_level: level },
            Sub::Omega { level, samples, t } => Command::Omega {
                max_level: level,
                samples,
                t,
            },
            Sub::Orbital {
                element: e,
                x,
                gens,
                radius,
                depth,
                target,
            } => {
                element = e.load()?;
                element_file = e.element;
                Command::Orbital {
                    x: x.parse::<BoundaryPoint>()?,
                    gens: parse_gens(&gens)?,
                    radius,
                    depth,
                    target: target.parse::<Target>()?,
                }
            }
            Sub::Rigidity {
                q,
                samples,
                depth,
                seed,
            } => Command::Rigidity {
                q,
                samples,
                depth,
                seed,
            },
        };
        let config = RunConfig {
            command,
            element,
            element_file,
            out: self.out,
            tol: self.tol,
        };
        config.validate()?;
        Ok(config)
    }
}
