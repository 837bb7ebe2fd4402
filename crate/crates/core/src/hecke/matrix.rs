use std::io::{self, Write};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// A real square operator matrix in row-compressed form.
///
/// Assembled operators have at most `|supp m|` nonzeros per row, so rows
/// store `(column, value)` pairs sorted by column; [`OperatorMatrix::to_dense`]
/// materializes the full matrix when it is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl OperatorMatrix {
    /// Builds a matrix from `(row, column, value)` triplets. Repeated
    /// positions are summed in input order; exact zeros are dropped.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}x{dim} matrix");
            rows[r].push((c, v));
        }
        for row in &mut rows {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(c, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|&(_, v)| v != 0.0);
            *row = merged;
        }
        OperatorMatrix { dim, rows }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, 1.0)))
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operator matrices are square");
        let dim = m.nrows();
        Self::from_triplets(
            dim,
            (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j, m[(i, j)]))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map_or(0.0, |k| self.rows[i][k].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().map(|(_, _, v)| v.abs()).fold(0.0, f64::max)
    }

    /// `max |M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.triplets()
            .map(|(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// Symmetric up to `1e-12` relative asymmetry.
    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() <= 1e-12 * self.max_abs().max(1.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(i, j, v)| (i, j, v * factor)))
    }

    /// `diag(self, other)`.
    pub fn block_diag(&self, other: &OperatorMatrix) -> Self {
        let shift = self.dim;
        Self::from_triplets(
            self.dim + other.dim,
            self.triplets()
                .chain(other.triplets().map(|(i, j, v)| (i + shift, j + shift, v))),
        )
    }

    /// Dense row-major CSV: one matrix row per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut line = vec![0.0; self.dim];
        for row in &self.rows {
            line.iter_mut().for_each(|x| *x = 0.0);
            for &(j, v) in row {
                line[j] = v;
            }
            let text: Vec<String> = line.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "{}", text.join(","))?;
        }
        Ok(())
    }

    pub fn meta(&self, level: Option<usize>) -> MatrixMeta {
        MatrixMeta {
            dim: self.dim,
            level,
            symmetric: self.is_symmetric(),
        }
    }
}

/// Sidecar metadata written next to an exported matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub dim: usize,
    pub level: Option<usize>,
    pub symmetric: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_are_merged() {
        let m = OperatorMatrix::from_triplets(2, [(0, 1, 1.0), (0, 1, 2.0), (1, 0, 3.0), (1, 1, 0.0)]);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.nnz(), 2);
        assert!(m.is_symmetric());
        assert_eq!(m.matvec(&[1.0, 2.0]), vec![6.0, 3.0]);
    }

    #[test]
    fn csv_and_meta() {
        let m = OperatorMatrix::from_triplets(2, [(0, 0, 0.5), (0, 1, -1.0), (1, 0, 2.0)]);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0.5,-1.0\n2.0,0.0\n");
        let meta = m.meta(Some(1));
        assert!(!meta.symmetric);
        assert_eq!(
            serde_json::to_string(&meta).unwrap(),
            r#"{"dim":2,"level":1,"symmetric":false}"#
        );
    }

    #[test]
    fn block_diag_doubles() {
        let m = OperatorMatrix::identity(2).scaled(3.0);
        let d = m.block_diag(&m);
        assert_eq!(d.dim(), 4);
        assert_eq!(d.to_dense(), DMatrix::identity(4, 4) * 3.0);
    }
}
