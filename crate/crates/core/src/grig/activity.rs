use serde::{Deserialize, Serialize};

use super::tree::BoundaryPoint;
use super::word::GroupWord;
use super::wreath::{is_identity, wreath_decompose};

/// Number of nontrivial sections of `w` at the vertices of level `n`.
///
/// Trivial sections are dropped while unfolding since all their sections
/// are trivial too.
pub fn activity_count(w: &GroupWord, n: usize) -> usize {
    let mut live: Vec<GroupWord> = vec![w.reduced()];
    live.retain(|s| !is_identity(s));
    for _ in 0..n {
        live = live
            .iter()
            .flat_map(|s| {
                let dec = wreath_decompose(s);
                [dec.section0.reduced(), dec.section1.reduced()]
            })
            .filter(|s| !is_identity(s))
            .collect();
        if live.is_empty() {
            break;
        }
    }
    live.len()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubexpSample {
    pub bounded: bool,
    /// `k_n(w) γ^n` for `n = 1..=N`.
    pub trace: Vec<f64>,
}

/// Finite-sample evidence that `k_n(w) γ^n → 0`. Not a proof.
///
/// The sample counts as decaying when the maximum of the trace over the
/// second half of the levels is strictly below the maximum over the first
/// half (or the trace vanishes identically).
pub fn is_subexp_bounded_sample(w: &GroupWord, gamma: f64, max_level: usize) -> SubexpSample {
    assert!(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
    assert!(max_level >= 1, "need at least one level");
    let trace: Vec<f64> = (1..=max_level)
        .map(|n| activity_count(w, n) as f64 * gamma.powi(n as i32))
        .collect();
    let half = trace.len().div_ceil(2);
    let head = trace[..half].iter().copied().fold(0.0, f64::max);
    let tail = trace[half..].iter().copied().fold(0.0, f64::max);
    let bounded = tail < head || (head == 0.0 && tail == 0.0);
    SubexpSample { bounded, trace }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rigidity {
    RigidAt(usize),
    NotRigidUpTo(usize),
}

/// Least `n` in `1..=max_depth` at which the section of `w` along the
/// prefix of `x` of length `n` is trivial.
pub fn rigidity_depth(x: &BoundaryPoint, w: &GroupWord, max_depth: usize) -> Rigidity {
    assert!(max_depth >= 1, "max_depth must be at least 1");
    let mut section = w.reduced();
    for n in 1..=max_depth {
        section = wreath_decompose(&section).section(x.bit(n - 1)).reduced();
        if is_identity(&section) {
            return Rigidity::RigidAt(n);
        }
    }
    Rigidity::NotRigidUpTo(max_depth)
}
