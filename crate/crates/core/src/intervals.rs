use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of closed real intervals, kept sorted and disjoint.
/// Degenerate intervals `[x, x]` are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct IntervalUnion {
    intervals: Vec<[f64; 2]>,
}

impl IntervalUnion {
    /// Overlapping or touching intervals are merged.
    pub fn new(mut intervals: Vec<[f64; 2]>) -> Result<Self> {
        if let Some(bad) = intervals
            .iter()
            .find(|[lo, hi]| !(lo.is_finite() && hi.is_finite() && lo <= hi))
        {
            return Err(Error::InvalidArgument(format!(
                "interval [{}, {}] is not a finite closed interval",
                bad[0], bad[1]
            )));
        }
        intervals.sort_by(|x, y| x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])));
        let mut merged: Vec<[f64; 2]> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv[0] <= last[1] => last[1] = last[1].max(iv[1]),
                _ => merged.push(iv),
            }
        }
        Ok(IntervalUnion { intervals: merged })
    }

    pub fn intervals(&self) -> &[[f64; 2]] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Distance from `x` to the set (infinite for the empty set).
    pub fn distance(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|&[lo, hi]| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.distance(x) <= tol
    }

    /// All interval endpoints in ascending order (degenerate intervals
    /// contribute their point twice).
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals.iter().flat_map(|&[lo, hi]| [lo, hi]).collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for IntervalUnion {
    type Error = Error;

    fn try_from(value: Vec<[f64; 2]>) -> Result<Self> {
        IntervalUnion::new(value)
    }
}

impl From<IntervalUnion> for Vec<[f64; 2]> {
    fn from(value: IntervalUnion) -> Self {
        value.intervals
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_sorts() {
        let u = IntervalUnion::new(vec![[2.0, 4.0], [-2.0, 0.0], [3.0, 5.0]]).unwrap();
        assert_eq!(u.intervals(), &[[-2.0, 0.0], [2.0, 5.0]]);
        let touching = IntervalUnion::new(vec![[-3.0, 1.0], [1.0, 5.0]]).unwrap();
        assert_eq!(touching.intervals(), &[[-3.0, 5.0]]);
        assert!(IntervalUnion::new(vec![[1.0, 0.0]]).is_err());
    }

    #[test]
    fn membership_and_distance() {
        let u = IntervalUnion::new(vec![[-0.5, 0.0], [0.5, 1.0]]).unwrap();
        assert!(u.contains(0.75, 0.0));
        assert!(!u.contains(0.25, 1e-9));
        assert_eq!(u.distance(0.25), 0.25);
        assert_eq!(u.distance(-1.0), 0.5);
        let points = IntervalUnion::new(vec![[3.0, 3.0], [-1.0, -1.0]]).unwrap();
        assert_eq!(points.endpoints(), vec![-1.0, -1.0, 3.0, 3.0]);
    }

    #[test]
    fn json_is_a_list_of_pairs() {
        let u = IntervalUnion::new(vec![[-2.0, 0.0], [2.0, 4.0]]).unwrap();
        let json = serde_json::to_string(&u).unwrap();
        assert_eq!(json, "[[-2.0,0.0],[2.0,4.0]]");
        assert_eq!(serde_json::from_str::<IntervalUnion>(&json).unwrap(), u);
        assert!(serde_json::from_str::<IntervalUnion>("[[1.0,0.0]]").is_err());
    }
}
