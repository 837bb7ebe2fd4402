//! Symmetric tridiagonal eigenproblems: implicit QL for the eigenvalues,
//! inverse iteration for the vectors.

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), in ascending order.
pub fn eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n.max(1), "off-diagonal must have n - 1 entries");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            assert!(iterations <= 100, "implicit QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    d
}

/// Approximate eigenvector for `shift` by inverse iteration on the
/// tridiagonal matrix, normalized to unit length.
pub fn inverse_iteration(diag: &[f64], off: &[f64], shift: f64, sweeps: usize) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .chain(off)
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let lu = ShiftedLu::new(diag, off, shift, f64::EPSILON * scale);
    // Deterministic start vector with no special structure.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut x: Vec<f64> = (0..n)
        .map(|_| {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect();
    for _ in 0..sweeps {
        lu.solve(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

/// LU factorization of `T - shift·I` with partial pivoting (the band layout
/// of LAPACK's `gttrf`). Zero pivots are replaced by `tiny`.
struct ShiftedLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        ShiftedLu {
            lower: dl,
            diag: d,
            upper: du,
            upper2: du2,
            swapped,
        }
    }

    fn solve(&self, x: &mut [f64]) {
        let n = self.diag.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - self.lower[i] * x[i];
            } else {
                x[i + 1] -= self.lower[i] * x[i];
            }
        }
        x[n - 1] /= self.diag[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - self.upper[n - 2] * x[n - 1]) / self.diag[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - self.upper[i] * x[i + 1] - self.upper2[i] * x[i + 2]) / self.diag[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn path_graph_spectrum() {
        // adjacency of the path on n vertices: 2 cos(kπ/(n+1))
        let n = 50;
        let got = eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]);
        let mut expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * PI / (n + 1) as f64).cos())
            .collect();
        expected.sort_by(f64::total_cmp);
        for (x, y) in got.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn decoupled_blocks() {
        let got = eigenvalues(&[1.0, 2.0, 5.0], &[0.0, 0.0]);
        assert_eq!(got, vec![1.0, 2.0, 5.0]);
        assert_eq!(eigenvalues(&[3.0], &[]), vec![3.0]);
    }

    #[test]
    fn inverse_iteration_residuals() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| (i % 3) as f64 * 0.5).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 1.0 + (i % 2) as f64).collect();
        for lambda in eigenvalues(&diag, &off) {
            let v = inverse_iteration(&diag, &off, lambda, 2);
            let mut worst: f64 = 0.0;
            for i in 0..n {
                let mut tv = diag[i] * v[i];
                if i > 0 {
                    tv += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    tv += off[i] * v[i + 1];
                }
                worst = worst.max((tv - lambda * v[i]).abs());
            }
            assert!(worst < 1e-12, "residual {worst} at {lambda}");
        }
    }
}
