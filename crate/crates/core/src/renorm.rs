//! The renormalization map on the `(α, β)` plane and the sets it acts on.
//!
//! `Q(α, β) = -α a + b + c + d - (β + 1) e` fails to be invertible exactly
//! on the region `Ω = {||α| - |β|| ≤ 2, |α| + |β| ≥ 2}`, which is invariant
//! in both directions under
//! `F(α, β) = (2α²/(4-β²), β + α²β/(4-β²))` away from the poles `β = ±2`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use crate::intervals::IntervalUnion;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub alpha: f64,
    pub beta: f64,
}

impl Param {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Param { alpha, beta }
    }

    pub fn is_pole(&self) -> bool {
        self.beta.abs() == 2.0
    }
}

/// `F(α, β)`. Errors on the pole lines `β = ±2`.
pub fn renormalize(p: Param) -> Result<Param> {
    if p.is_pole() {
        return Err(Error::PoleAtBeta(p.beta));
    }
    let denom = 4.0 - p.beta * p.beta;
    let a2 = p.alpha * p.alpha;
    Ok(Param {
        alpha: 2.0 * a2 / denom,
        beta: p.beta + a2 * p.beta / denom,
    })
}

pub fn in_omega(p: Param) -> bool {
    let (a, b) = (p.alpha.abs(), p.beta.abs());
    (a - b).abs() <= 2.0 && a + b >= 2.0
}

/// `min(2 - ||α| - |β||, |α| + |β| - 2)`: nonnegative exactly on `Ω`, and
/// the slack of the tighter defining inequality.
pub fn omega_margin(p: Param) -> f64 {
    let (a, b) = (p.alpha.abs(), p.beta.abs());
    (2.0 - (a - b).abs()).min(a + b - 2.0)
}

/// `4 - β² + α² - 4α cos(2πj/2ⁿ)`; zero exactly on the curve `γ_{n,j}`.
pub fn gamma_residual(n: u32, j: u64, p: Param) -> f64 {
    let theta = 2.0 * PI * j as f64 / (1u64 << n) as f64;
    4.0 - p.beta * p.beta + p.alpha * p.alpha - 4.0 * p.alpha * theta.cos()
}

/// The two branches `β = ±sqrt(α² - 4α cos θ + 4)` of `γ_{n,j}` over `α`.
pub fn gamma_points(n: u32, j: u64, alpha: f64) -> [Param; 2] {
    let theta = 2.0 * PI * j as f64 / (1u64 << n) as f64;
    let beta = (alpha * alpha - 4.0 * alpha * theta.cos() + 4.0).max(0.0).sqrt();
    [Param::new(alpha, beta), Param::new(alpha, -beta)]
}

/// Window of sampled `α` values along each curve, centered on the fixed
/// point `(2, 0)`.
pub const CURVE_ALPHA_RANGE: (f64, f64) = (-4.0, 8.0);

/// Sampled points with `|4 - β²|` below this are skipped as near-poles.
pub const POLE_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub n: u32,
    pub j: u64,
    pub evaluated: usize,
    pub skipped_near_pole: usize,
    pub max_residual: f64,
    pub passed: bool,
}

/// Samples `γ_{n,j}` at `samples` midpoints of [`CURVE_ALPHA_RANGE`] (both
/// branches), maps each point by `F` and evaluates the residual of
/// `γ_{n-1,j}` there.
pub fn curve_invariance_check(n: u32, j: u64, samples: usize, tol: f64) -> CurveReport {
    assert!(n >= 1, "curve invariance needs n >= 1");
    assert!(samples >= 1, "need at least one sample");
    let (lo, hi) = CURVE_ALPHA_RANGE;
    let mut evaluated = 0;
    let mut skipped = 0;
    let mut max_residual: f64 = 0.0;
    for i in 0..samples {
        let alpha = lo + (hi - lo) * (i as f64 + 0.5) / samples as f64;
        for p in gamma_points(n, j, alpha) {
            if (4.0 - p.beta * p.beta).abs() < POLE_MARGIN {
                skipped += 1;
                continue;
            }
            let image = renormalize(p).expect("poles skipped");
            max_residual = max_residual.max(gamma_residual(n - 1, j, image).abs());
            evaluated += 1;
        }
    }
    CurveReport {
        n,
        j,
        evaluated,
        skipped_near_pole: skipped,
        max_residual,
        passed: max_residual <= tol,
    }
}

/// `Λ_t = ({α = t} ∩ Ω) + 1`, the shift acting on the `β` coordinate.
///
/// With `s = |t|` the slice is `|β| ∈ [|s - 2|, s + 2]`, so
/// `Λ_t = [-s-1, 1-|s-2|] ∪ [1+|s-2|, s+3]`.
pub fn lambda_slice(t: f64) -> IntervalUnion {
    let s = t.abs();
    let inner = (s - 2.0).abs();
    IntervalUnion::new(vec![[-s - 1.0, 1.0 - inner], [1.0 + inner, s + 3.0]])
        .expect("finite ordered endpoints")
}

pub const SAMPLE_DEDUP_TOL: f64 = 1e-12;

/// `{1 ± sqrt(t² - 4t cos(2πj/2ⁿ) + 4) : 0 ≤ j < 2ⁿ}`, sorted, with values
/// closer than [`SAMPLE_DEDUP_TOL`] collapsed.
pub fn slice_spectrum_samples(t: f64, n: u32) -> Vec<f64> {
    let count = 1u64 << n;
    let mut values: Vec<f64> = (0..count)
        .flat_map(|j| {
            let root = gamma_points(n, j, t)[0].beta;
            [1.0 - root, 1.0 + root]
        })
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|x, y| (*x - *y).abs() <= SAMPLE_DEDUP_TOL);
    values
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub z: f64,
    pub distance_to_attractor: f64,
}

/// Iterates `h(z) = 4z / (2 - z)`, which has a repelling fixed point at 0
/// and an attracting one at -2.
pub fn h_orbit(z0: f64, steps: usize) -> Result<Vec<OrbitStep>> {
    let mut z = z0;
    let mut out = Vec::with_capacity(steps + 1);
    for step in 0..=steps {
        out.push(OrbitStep {
            z,
            distance_to_attractor: (z + 2.0).abs(),
        });
        if step == steps {
            break;
        }
        if (z - 2.0).abs() < 1e-12 {
            return Err(Error::PoleHit { step });
        }
        z = 4.0 * z / (2.0 - z);
    }
    Ok(out)
}

/// Static SVG of `Ω` over `α, β ∈ [-6, 6]` (800×800) with the curves
/// `γ_{n,j}` for `n ≤ max_curve_level` and optional vertical lines `α = t`.
pub fn omega_svg(max_curve_level: u32, slice_lines: &[f64]) -> String {
    const SIZE: f64 = 800.0;
    const EXTENT: f64 = 6.0;
    let px = |alpha: f64| (alpha + EXTENT) / (2.0 * EXTENT) * SIZE;
    let py = |beta: f64| (EXTENT - beta) / (2.0 * EXTENT) * SIZE;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#
    );
    let _ = writeln!(svg, r#"<rect width="800" height="800" fill="white"/>"#);

    // First-quadrant piece of Ω clipped to the viewport, reflected into the
    // other three quadrants.
    let quadrant = [(2.0, 0.0), (6.0, 4.0), (6.0, 6.0), (4.0, 6.0), (0.0, 2.0)];
    for (sa, sb) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        let pts: Vec<String> = quadrant
            .iter()
            .map(|&(a, b)| format!("{:.2},{:.2}", px(sa * a), py(sb * b)))
            .collect();
        let _ = writeln!(
            svg,
            r##"<polygon points="{}" fill="#c8d8f0" stroke="none"/>"##,
            pts.join(" ")
        );
    }
    let _ = writeln!(
        svg,
        r#"<line x1="0" y1="{0:.2}" x2="800" y2="{0:.2}" stroke="black" stroke-width="1"/>"#,
        py(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{0:.2}" y1="0" x2="{0:.2}" y2="800" stroke="black" stroke-width="1"/>"#,
        px(0.0)
    );

    const CURVE_SAMPLES: usize = 400;
    for n in 0..=max_curve_level {
        for j in 0..(1u64 << n) {
            for branch in 0..2 {
                let pts: Vec<String> = (0..=CURVE_SAMPLES)
                    .map(|i| -EXTENT + 2.0 * EXTENT * i as f64 / CURVE_SAMPLES as f64)
                    .map(|alpha| gamma_points(n, j, alpha)[branch])
                    .filter(|p| p.beta.abs() <= EXTENT)
                    .map(|p| format!("{:.2},{:.2}", px(p.alpha), py(p.beta)))
                    .collect();
                if pts.len() > 1 {
                    let _ = writeln!(
                        svg,
                        r##"<polyline points="{}" fill="none" stroke="#d04020" stroke-width="0.6"/>"##,
                        pts.join(" ")
                    );
                }
            }
        }
    }
    for &t in slice_lines {
        if t.abs() <= EXTENT {
            let _ = writeln!(
                svg,
                r##"<line x1="{0:.2}" y1="0" x2="{0:.2}" y2="800" stroke="#208040" stroke-width="1.5" stroke-dasharray="6,4"/>"##,
                px(t)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalize_examples() {
        assert_eq!(renormalize(Param::new(2.0, 0.0)).unwrap(), Param::new(2.0, 0.0));
        assert_eq!(renormalize(Param::new(-2.0, 0.0)).unwrap(), Param::new(2.0, 0.0));
        for beta in [-5.0, -1.5, 0.0, 0.3, 1.99, 7.0] {
            assert_eq!(renormalize(Param::new(0.0, beta)).unwrap(), Param::new(0.0, beta));
        }
        assert!(matches!(renormalize(Param::new(1.0, 2.0)), Err(Error::PoleAtBeta(b)) if b == 2.0));
        assert!(renormalize(Param::new(1.0, -2.0)).is_err());
    }

    #[test]
    fn omega_examples() {
        assert!(in_omega(Param::new(-1.0, 2.0)));
        assert!(!in_omega(Param::new(0.0, 1.0)));
        assert!(!in_omega(Param::new(-1.0, 0.0)));
        assert!(in_omega(Param::new(2.0, 0.0)));
        assert!(!in_omega(Param::new(5.0, 0.0)));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_residual(0, 0, Param::new(2.0, 0.0)), 0.0);
        assert!(gamma_residual(1, 1, Param::new(-2.0, 0.0)).abs() < 1e-15);
        for n in 0..5 {
            for j in 0..(1u64 << n) {
                assert_eq!(gamma_residual(n, j, Param::new(0.0, 2.0)), 0.0);
            }
        }
    }

    #[test]
    fn curve_invariance_examples() {
        assert!(curve_invariance_check(1, 1, 10_000, 1e-9).passed);
        assert!(curve_invariance_check(3, 2, 10_000, 1e-9).passed);
        let single = curve_invariance_check(1, 0, 1, 1e-12);
        assert_eq!(single.evaluated, 2);
        assert_eq!(single.max_residual, 0.0);
        assert_eq!(gamma_points(1, 0, 2.0)[0], Param::new(2.0, 0.0));
    }

    #[test]
    fn lambda_slice_examples() {
        assert_eq!(lambda_slice(-1.0).intervals(), &[[-2.0, 0.0], [2.0, 4.0]]);
        assert_eq!(lambda_slice(0.0).intervals(), &[[-1.0, -1.0], [3.0, 3.0]]);
        assert_eq!(lambda_slice(-1.5).intervals(), &[[-2.5, 0.5], [1.5, 4.5]]);
        // a single interval at |t| = 2
        assert_eq!(lambda_slice(2.0).intervals(), &[[-3.0, 5.0]]);
        assert_eq!(lambda_slice(3.0).intervals(), &[[-4.0, 0.0], [2.0, 6.0]]);
    }

    #[test]
    fn slice_sample_examples() {
        assert_eq!(slice_spectrum_samples(-1.0, 1), vec![-2.0, 0.0, 2.0, 4.0]);
        for n in 0..6 {
            assert_eq!(slice_spectrum_samples(0.0, n), vec![-1.0, 3.0]);
        }
        let s5 = 5f64.sqrt();
        let expected = [-2.0, 1.0 - s5, 0.0, 2.0, 1.0 + s5, 4.0];
        let got = slice_spectrum_samples(-1.0, 2);
        assert_eq!(got.len(), expected.len());
        for (x, y) in got.iter().zip(expected) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn h_orbit_examples() {
        assert!(h_orbit(0.0, 10).unwrap().iter().all(|s| s.z == 0.0));
        assert!(h_orbit(-2.0, 10).unwrap().iter().all(|s| s.z == -2.0));
        let orbit = h_orbit(-0.1, 30).unwrap();
        assert!(orbit.last().unwrap().distance_to_attractor < 1e-6);
        // contraction rate approaches |h'(-2)| = 1/2
        let d: Vec<f64> = orbit.iter().map(|s| s.distance_to_attractor).collect();
        let ratio = d[25] / d[24];
        assert!((ratio - 0.5).abs() < 1e-3, "ratio {ratio}");
        assert!(matches!(h_orbit(2.0, 3), Err(Error::PoleHit { step: 0 })));
        assert!(matches!(h_orbit(2.0 / 3.0, 3), Err(Error::PoleHit { step: 1 })));
    }

    #[test]
    fn svg_is_static_and_deterministic() {
        let svg = omega_svg(2, &[-1.0]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"width="800" height="800""#));
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg, omega_svg(2, &[-1.0]));
    }
}
