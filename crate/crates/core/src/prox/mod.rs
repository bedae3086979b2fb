//! Proximity operators of the OSCAR regularizer
//!
//! OSCAR penalizes `lambda1 * ||x||_1 + lambda2 * sum_{i<j} max(|x_i|, |x_j|)`. Sorting the
//! magnitudes of `x` in non-increasing order turns it into the weighted sorted l1 norm
//! `sum_i w_i |x~_i|` with `w_i = lambda1 + lambda2 * (n - i)` (1-based `i`), which is what
//! every operator here works with.
//!
//! Two operators are provided:
//!
//! * [`oscar_gpo`], the exact proximity operator: sort, pool adjacent gap violators into
//!   coherent groups, threshold the group averages, then undo the sort.
//! * [`oscar_apo`], the approximate operator that skips the pooling step and soft-thresholds
//!   each sorted magnitude by its own weight. It agrees with the exact operator whenever
//!   [`apo_condition_holds`] is true.

mod grouping;
pub mod oracle;
mod sorted;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, OscarError, Result};

pub use grouping::{group_and_average, Group, GroupPartition};
pub use oracle::brute_force_prox_oracle;
pub use sorted::{sort_by_magnitude, SortedDecomposition};

/// The pair `(lambda1, lambda2)` defining an OSCAR penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscarParams {
    lambda1: f64,
    lambda2: f64,
}

impl OscarParams {
    /// Both weights must be finite and nonnegative. `(0, 0)` is allowed and makes every
    /// proximity operator the identity.
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        for (name, value) in [("lambda1", lambda1), ("lambda2", lambda2)] {
            if !value.is_finite() || value < 0.0 {
                return Err(OscarError::InvalidParameter(format!(
                    "{name} must be finite and nonnegative, got {value}"
                )));
            }
        }
        Ok(Self { lambda1, lambda2 })
    }

    pub const ZERO: Self = Self {
        lambda1: 0.0,
        lambda2: 0.0,
    };

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    /// Both weights multiplied by `factor`, e.g. `1 / L` for a prox step of length `1 / L`.
    pub fn scaled(&self, factor: f64) -> Self {
        debug_assert!(factor.is_finite() && factor >= 0.0);
        Self {
            lambda1: self.lambda1 * factor,
            lambda2: self.lambda2 * factor,
        }
    }
}

/// Weights `w_i = lambda1 + lambda2 * (n - i)` of the sorted-l1 form, stored 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    params: OscarParams,
    w: Vec<f64>,
}

impl WeightVector {
    pub(crate) fn new_unchecked(n: usize, params: OscarParams) -> Self {
        let w = (0..n).map(|i| weight_at(n, i, params)).collect();
        Self { params, w }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn params(&self) -> OscarParams {
        self.params
    }

    /// Mean weight over the 0-based inclusive range `start..=end`, in closed form.
    pub fn group_mean(&self, start: usize, end: usize) -> f64 {
        group_weight_mean(self.w.len(), start, end, self.params)
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.w[i]
    }
}

/// `w_i` for 0-based `i`. Must stay bit-identical to `group_weight_mean(n, i, i, _)`.
#[inline]
fn weight_at(n: usize, i: usize, params: OscarParams) -> f64 {
    params.lambda1 + params.lambda2 * ((n - 1 - i) as f64)
}

#[inline]
pub(crate) fn group_weight_mean(n: usize, start: usize, end: usize, params: OscarParams) -> f64 {
    let offset = (n - 1) as f64 - (start + end) as f64 / 2.0;
    params.lambda1 + params.lambda2 * offset
}

/// Builds the weight vector for a signal of length `n`.
pub fn weight_vector(n: usize, params: OscarParams) -> Result<WeightVector> {
    if n == 0 {
        return Err(OscarError::EmptyInput);
    }
    Ok(WeightVector::new_unchecked(n, params))
}

/// `sign(v) * max(|v| - tau, 0)` with a single threshold.
pub fn soft_threshold(v: &[f64], tau: f64) -> Vec<f64> {
    debug_assert!(tau >= 0.0);
    v.iter().map(|&x| shrink(x, tau)).collect()
}

/// Element-wise soft thresholding with one threshold per component.
pub fn soft_threshold_each(v: &[f64], tau: &[f64]) -> Result<Vec<f64>> {
    check_len(v.len(), tau.len())?;
    Ok(v.iter().zip(tau).map(|(&x, &t)| shrink(x, t)).collect())
}

#[inline]
fn shrink(x: f64, tau: f64) -> f64 {
    sign(x) * (x.abs() - tau).max(0.0)
}

/// Sign with the convention `sign(0) = +1`.
#[inline]
pub(crate) fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Exact proximity operator of the OSCAR penalty,
/// `argmin_x r(x) + 0.5 * ||x - v||^2`.
pub fn oscar_gpo(v: &[f64], params: OscarParams) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let sorted = sort_by_magnitude(v);
    let w = WeightVector::new_unchecked(v.len(), params);
    let partition = grouping::pool(&sorted.magnitudes, &w);
    sorted.unsort(&partition.thresholded())
}

/// Approximate proximity operator: soft-thresholds the `i`-th largest magnitude by `w_i`
/// without pooling.
pub fn oscar_apo(v: &[f64], params: OscarParams) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let sorted = sort_by_magnitude(v);
    let n = v.len();
    let b: Vec<f64> = sorted
        .magnitudes
        .iter()
        .enumerate()
        .map(|(i, &m)| (m - weight_at(n, i, params)).max(0.0))
        .collect();
    sorted.unsort(&b)
}

/// True when the sorted gaps `|v~_i| - w_i` are already non-increasing, in which case
/// [`oscar_apo`] returns the exact proximity operator.
///
/// The gaps are compared exactly as the pooling step compares them, so a `true` here means
/// the exact operator forms only singleton groups unless two gaps tie.
pub fn apo_condition_holds(v: &[f64], params: OscarParams) -> bool {
    let n = v.len();
    let sorted = sort_by_magnitude(v);
    let gaps: Vec<f64> = sorted
        .magnitudes
        .iter()
        .enumerate()
        .map(|(i, &m)| m - weight_at(n, i, params))
        .collect();
    gaps.windows(2).all(|g| g[0] >= g[1])
}

/// Evaluates the OSCAR penalty through its sorted form `sum_i w_i |x~_i|`.
pub fn oscar_value(x: &[f64], params: OscarParams) -> f64 {
    let n = x.len();
    if n == 0 {
        return 0.0;
    }
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    mags.iter()
        .enumerate()
        .map(|(i, &m)| weight_at(n, i, params) * m)
        .sum()
}

/// The O(n^2) pairwise definition `lambda1 ||x||_1 + lambda2 sum_{i<j} max(|x_i|, |x_j|)`.
/// Kept as a reference for [`oscar_value`].
pub fn oscar_value_pairwise(x: &[f64], params: OscarParams) -> f64 {
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    let mut pairs = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            pairs += x[i].abs().max(x[j].abs());
        }
    }
    params.lambda1 * l1 + params.lambda2 * pairs
}

#[cfg(test)]
mod tests;
