//! Finite-dimensional spectra: the symmetric eigensolver and the set
//! comparisons used to measure convergence toward a target spectrum.

mod tridiag;

use std::io::{self, Write};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::OperatorMatrix;
use crate::intervals::IntervalUnion;

pub use tridiag::{eigenvalues as tridiagonal_eigenvalues, inverse_iteration};

/// Bound on `max ‖Mv - λv‖ / ‖M‖` relative to `1 + ‖M‖`.
pub const SOLVER_TOL: f64 = 1e-10;

/// Default absolute tolerance for spectral membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigMethod {
    /// The sparsity graph is a disjoint union of paths.
    Tridiagonal,
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigReport {
    pub dim: usize,
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// `max ‖Mv - λv‖ / ‖M‖` over the computed pairs.
    pub residual_bound: f64,
    /// Spectral norm `max |λ|`.
    pub norm: f64,
    pub method: EigMethod,
}

impl EigReport {
    pub fn within_tolerance(&self) -> bool {
        self.residual_bound <= SOLVER_TOL * (1.0 + self.norm)
    }

    /// `# dim=... residual_bound=...` header, then one eigenvalue per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# dim={} residual_bound={:e}", self.dim, self.residual_bound)?;
        writeln!(out, "eigenvalue")?;
        for v in &self.eigenvalues {
            writeln!(out, "{v:?}")?;
        }
        Ok(())
    }
}

/// All eigenvalues of a symmetric matrix, with a residual bound computed
/// from eigenvectors against the original matrix.
///
/// Matrices whose off-diagonal sparsity graph is a disjoint union of paths
/// (every operator supported on `{e, a, b, c, d}`, since level Schreier
/// graphs of the group are linear) are permuted to tridiagonal form and
/// solved in `O(n²)`; everything else goes through a dense solver.
pub fn sym_eigs(m: &OperatorMatrix) -> Result<EigReport> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric {
            asymmetry: m.asymmetry(),
        });
    }
    let dim = m.dim();
    if dim == 0 {
        return Ok(EigReport {
            dim,
            eigenvalues: Vec::new(),
            residual_bound: 0.0,
            norm: 0.0,
            method: EigMethod::Dense,
        });
    }
    match path_ordering(m) {
        Some(paths) => Ok(solve_paths(m, &paths)),
        None => Ok(solve_dense(m)),
    }
}

/// Vertex orders along each path component, or `None` when some vertex
/// has more than two neighbours or a component is a cycle.
fn path_ordering(m: &OperatorMatrix) -> Option<Vec<Vec<usize>>> {
    let dim = m.dim();
    let mut neighbours: Vec<Vec<usize>> = Vec::with_capacity(dim);
    for i in 0..dim {
        let nb: Vec<usize> = m.row(i).iter().map(|&(j, _)| j).filter(|&j| j != i).collect();
        if nb.len() > 2 {
            return None;
        }
        neighbours.push(nb);
    }
    let mut visited = vec![false; dim];
    let mut paths = Vec::new();
    let walk = |start: usize, visited: &mut Vec<bool>| {
        let mut path = vec![start];
        visited[start] = true;
        let mut prev = usize::MAX;
        let mut current = start;
        while let Some(&next) = neighbours[current].iter().find(|&&j| j != prev && !visited[j]) {
            visited[next] = true;
            path.push(next);
            prev = current;
            current = next;
        }
        path
    };
    for start in 0..dim {
        if !visited[start] && neighbours[start].len() <= 1 {
            paths.push(walk(start, &mut visited));
        }
    }
    if visited.iter().any(|v| !v) {
        // leftover vertices all have two neighbours: cycles
        return None;
    }
    Some(paths)
}

fn solve_paths(m: &OperatorMatrix, paths: &[Vec<usize>]) -> EigReport {
    let blocks: Vec<(Vec<f64>, Vec<f64>)> = paths
        .iter()
        .map(|path| {
            let diag = path.iter().map(|&i| m.get(i, i)).collect();
            let off = path.windows(2).map(|w| m.get(w[0], w[1])).collect();
            (diag, off)
        })
        .collect();
    let block_values: Vec<Vec<f64>> = blocks
        .par_iter()
        .map(|(diag, off)| tridiag::eigenvalues(diag, off))
        .collect();
    let norm = block_values
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let denom = if norm > 0.0 { norm } else { 1.0 };

    let residual_bound = paths
        .par_iter()
        .zip(&blocks)
        .zip(&block_values)
        .map(|((path, (diag, off)), values)| {
            values
                .iter()
                .map(|&lambda| {
                    let local = tridiag::inverse_iteration(diag, off, lambda, 2);
                    let mut v = vec![0.0; m.dim()];
                    for (&i, &x) in path.iter().zip(&local) {
                        v[i] = x;
                    }
                    path.iter()
                        .map(|&i| {
                            let mv: f64 = m.row(i).iter().map(|&(j, a)| a * v[j]).sum();
                            (mv - lambda * v[i]).powi(2)
                        })
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
        / denom;

    let mut eigenvalues: Vec<f64> = block_values.into_iter().flatten().collect();
    eigenvalues.sort_by(f64::total_cmp);
    EigReport {
        dim: m.dim(),
        eigenvalues,
        residual_bound,
        norm,
        method: EigMethod::Tridiagonal,
    }
}

fn solve_dense(m: &OperatorMatrix) -> EigReport {
    let dense = m.to_dense();
    let eig = SymmetricEigen::new(dense.clone());
    let norm = eig.eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let denom = if norm > 0.0 { norm } else { 1.0 };
    let mv: DMatrix<f64> = &dense * &eig.eigenvectors;
    let residual_bound = (0..m.dim())
        .map(|k| (mv.column(k) - eig.eigenvectors.column(k) * eig.eigenvalues[k]).norm())
        .fold(0.0, f64::max)
        / denom;
    let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    EigReport {
        dim: m.dim(),
        eigenvalues,
        residual_bound,
        norm,
        method: EigMethod::Dense,
    }
}

/// `(d_forward, d_backward)`: the largest distance from a point to the
/// target, and from a target point to the nearest point.
///
/// The backward distance is exact: on each interval the distance to the
/// point set peaks at an endpoint or at a midpoint between neighbouring
/// points.
pub fn hausdorff_to_set(points: &[f64], target: &IntervalUnion) -> (f64, f64) {
    assert!(!points.is_empty(), "point set must be nonempty");
    assert!(!target.is_empty(), "target set must be nonempty");
    let forward = points
        .iter()
        .map(|&p| target.distance(p))
        .fold(0.0, f64::max);

    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nearest = |x: f64| {
        let k = sorted.partition_point(|&p| p < x);
        let mut best = f64::INFINITY;
        if k < sorted.len() {
            best = best.min((sorted[k] - x).abs());
        }
        if k > 0 {
            best = best.min((x - sorted[k - 1]).abs());
        }
        best
    };
    let mut backward: f64 = 0.0;
    for &[lo, hi] in target.intervals() {
        backward = backward.max(nearest(lo)).max(nearest(hi));
        for w in sorted.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if mid > lo && mid < hi {
                backward = backward.max(nearest(mid));
            }
        }
    }
    (forward, backward)
}

/// Roundoff floor added to the membership tolerance for the shifted
/// operator, whose eigenvalues near 1 are only resolved to `O(ε)`.
pub const SHIFT_FLOOR: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftReport {
    pub alpha: f64,
    pub radius: f64,
    /// `min |λ - α|` over the spectrum of `M`.
    pub distance: f64,
    pub in_spectrum: bool,
    /// `min |μ - 1|` over the spectrum of `I - (M-α)(M-α)*/R²`.
    pub shifted_distance: f64,
    /// `tol²/R² + SHIFT_FLOOR`: `|μ - 1| = (λ-α)²/R²`, so this matches the
    /// tolerance `tol` on `|λ - α|` up to roundoff.
    pub shifted_tol: f64,
    pub one_in_shifted: bool,
    pub agree: bool,
}

/// Compares `α ∈ σ(M)` with `1 ∈ σ(I - (M-αI)(M-αI)*/R²)`, computing each
/// side with its own eigensolve.
pub fn spectral_shift_check(m: &OperatorMatrix, alpha: f64, radius: f64, tol: f64) -> Result<ShiftReport> {
    let spectrum = sym_eigs(m)?;
    if radius < 2.0 * spectrum.norm {
        return Err(Error::RadiusTooSmall {
            radius,
            norm: spectrum.norm,
        });
    }
    let distance = spectrum
        .eigenvalues
        .iter()
        .map(|l| (l - alpha).abs())
        .fold(f64::INFINITY, f64::min);
    let in_spectrum = distance <= tol;

    let dim = m.dim();
    let shifted_op = m.to_dense() - DMatrix::<f64>::identity(dim, dim) * alpha;
    let shifted = DMatrix::<f64>::identity(dim, dim)
        - (&shifted_op * shifted_op.transpose()) / (radius * radius);
    let shifted_spectrum = sym_eigs(&OperatorMatrix::from_dense(&shifted))?;
    let shifted_distance = shifted_spectrum
        .eigenvalues
        .iter()
        .map(|mu| (mu - 1.0).abs())
        .fold(f64::INFINITY, f64::min);
    let shifted_tol = tol * tol / (radius * radius) + SHIFT_FLOOR;
    let one_in_shifted = shifted_distance <= shifted_tol;
    Ok(ShiftReport {
        alpha,
        radius,
        distance,
        in_spectrum,
        shifted_distance,
        shifted_tol,
        one_in_shifted,
        agree: in_spectrum == one_in_shifted,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<usize>,
    pub underflow: usize,
    pub overflow: usize,
}

/// Equal-width bins over `[lo, hi]`; the right edge belongs to the last bin.
pub fn eig_histogram(points: &[f64], bins: usize, range: (f64, f64)) -> Histogram {
    let (lo, hi) = range;
    assert!(bins >= 1 && lo < hi, "need bins >= 1 and lo < hi");
    let width = (hi - lo) / bins as f64;
    let mut h = Histogram {
        counts: vec![0; bins],
        underflow: 0,
        overflow: 0,
    };
    for &x in points {
        if x < lo {
            h.underflow += 1;
        } else if x > hi {
            h.overflow += 1;
        } else {
            let k = (((x - lo) / width) as usize).min(bins - 1);
            h.counts[k] += 1;
        }
    }
    h
}
