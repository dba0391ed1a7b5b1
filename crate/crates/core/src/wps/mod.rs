//! Weighted projective spaces and the Fano families they host.

mod family;
mod member;
mod stratum;

pub use family::{
    classify_case, CaseMark, FamilyTable, FanoFamily, Kind, Recipe, RowReport, Variant,
    EMBEDDED_DATA,
};
pub use member::{generic_member, restrict_descrf, variable_names, Condition, Descr, DESCR_FAMILIES};
pub use stratum::{stratum_singular_points, StratumPoints};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WpsError {
    #[error("family {0} is not in the table")]
    UnknownFamily(u32),
    #[error("family {0} is not a hypersurface")]
    NotHypersurface(u32),
    #[error("no coefficient description is recorded for family {0}")]
    NoDescription(u32),
    #[error("polynomial is not weighted-homogeneous of degree {expected}")]
    DegreeMismatch { expected: u64 },
    #[error("stratum has dimension {0}; only dimension at most 1 is supported")]
    StratumTooLarge(i64),
    #[error("stratum has {0} free coordinates; at most 3 are supported")]
    TooManyFreeCoordinates(usize),
    #[error("the singular locus on the stratum is not finite")]
    NotFinite,
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("family data: {0}")]
    Data(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Weights `a_0, ..., a_n` in the given order, with the sorted form kept
/// alongside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightSystem {
    weights: Vec<u32>,
    sorted: Vec<u32>,
}

impl From<Vec<u32>> for WeightSystem {
    fn from(weights: Vec<u32>) -> Self {
        let mut sorted = weights.clone();
        sorted.sort_unstable();
        WeightSystem { weights, sorted }
    }
}

impl From<WeightSystem> for Vec<u32> {
    fn from(w: WeightSystem) -> Self {
        w.weights
    }
}

impl WeightSystem {
    /// Panics on a zero weight.
    pub fn new(weights: Vec<u32>) -> Self {
        assert!(weights.iter().all(|&a| a >= 1), "weights must be positive");
        weights.into()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.weights
    }

    pub fn sorted(&self) -> &[u32] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().map(|&a| a as u64).sum()
    }

    pub fn product(&self) -> u64 {
        self.weights.iter().map(|&a| a as u64).product()
    }

    /// Largest `lcm(a_i, a_j)` over pairs drawn from `indices` (including
    /// `i = j`). Zero for an empty set.
    pub fn max_lcm(&self, indices: &[usize]) -> u64 {
        let mut best = 0;
        for &i in indices {
            for &j in indices {
                best = best.max((self.weights[i] as u64).lcm(&(self.weights[j] as u64)));
            }
        }
        best
    }

    /// Whether a point with the given nonzero coordinates lies in the
    /// singular locus of the ambient space.
    pub fn is_quotient_support(&self, nonzero: &[usize]) -> bool {
        nonzero
            .iter()
            .fold(0u32, |g, &i| g.gcd(&self.weights[i]))
            > 1
    }
}

/// Coordinates forced to vanish, with an optional coordinate forced to be
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateStratum {
    pub zero: Vec<usize>,
    pub chart: Option<usize>,
}

impl CoordinateStratum {
    pub fn new(zero: Vec<usize>, chart: Option<usize>) -> Result<Self, WpsError> {
        if let Some(c) = chart {
            if zero.contains(&c) {
                return Err(WpsError::InvalidStratum(format!(
                    "chart {c} is also forced to vanish"
                )));
            }
        }
        Ok(CoordinateStratum { zero, chart })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_bounds() {
        let w = WeightSystem::new(vec![1, 2, 3, 5, 8]);
        assert_eq!(w.max_lcm(&[0, 1, 2, 3, 4]), 40);
        assert_eq!(w.max_lcm(&[0, 1, 2]), 6);
        assert_eq!(w.max_lcm(&[]), 0);
    }

    #[test]
    fn quotient_support() {
        let w = WeightSystem::new(vec![1, 1, 3, 4, 6]);
        assert!(w.is_quotient_support(&[2, 4]));
        assert!(w.is_quotient_support(&[3, 4]));
        assert!(!w.is_quotient_support(&[0, 4]));
    }

    #[test]
    fn stratum_rejects_chart_in_zero_set() {
        assert!(CoordinateStratum::new(vec![0, 1], Some(1)).is_err());
        assert!(CoordinateStratum::new(vec![0, 1], Some(2)).is_ok());
    }
}
