use super::{group_weight_mean, WeightVector};
use crate::error::{check_len, OscarError, Result};

/// A run `start..=end` (0-based, inclusive) of sorted positions sharing one output value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Group {
    pub start: usize,
    pub end: usize,
    /// Sum of the sorted magnitudes in the group. Means are derived from it on demand.
    pub magnitude_sum: f64,
    /// Mean weight over the group, `lambda1 + lambda2 * (n - (s + t) / 2)` in 1-based terms.
    pub weight_mean: f64,
}

impl Group {
    pub fn size(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn magnitude_mean(&self) -> f64 {
        self.magnitude_sum / self.size() as f64
    }

    /// `v̄ - w̄`, the quantity pooled across groups.
    pub fn gap(&self) -> f64 {
        self.magnitude_mean() - self.weight_mean
    }

    /// The common output magnitude `max(v̄ - w̄, 0)`.
    pub fn value(&self) -> f64 {
        self.gap().max(0.0)
    }
}

/// Consecutive groups covering `0..n` whose gaps `v̄_j - w̄_j` strictly decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPartition {
    pub groups: Vec<Group>,
    pub n: usize,
}

impl GroupPartition {
    /// Expands the per-group values back to a length-`n` vector in sorted order.
    pub fn thresholded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n);
        for g in &self.groups {
            let value = g.value();
            out.extend(std::iter::repeat_n(value, g.size()));
        }
        out
    }

    /// The per-position group means `(v̄̄, w̄̄)`.
    pub fn averages(&self) -> (Vec<f64>, Vec<f64>) {
        let mut v = Vec::with_capacity(self.n);
        let mut w = Vec::with_capacity(self.n);
        for g in &self.groups {
            v.extend(std::iter::repeat_n(g.magnitude_mean(), g.size()));
            w.extend(std::iter::repeat_n(g.weight_mean, g.size()));
        }
        (v, w)
    }
}

/// Partitions non-increasing magnitudes into coherent groups and averages within each.
///
/// Fails if the lengths differ or the magnitudes increase anywhere.
pub fn group_and_average(magnitudes: &[f64], w: &WeightVector) -> Result<GroupPartition> {
    check_len(w.len(), magnitudes.len())?;
    if let Some(index) = magnitudes
        .windows(2)
        .position(|p| p[0] < p[1] || p[0].is_nan())
    {
        return Err(OscarError::NotSorted { index });
    }
    Ok(pool(magnitudes, w))
}

struct Pending {
    group: Group,
    weight_sum: f64,
}

/// Stack-based pool-adjacent-violators on the gap sequence `m_i - w_i`: the two top groups
/// are merged while the later one's mean gap is at least the earlier one's.
pub(super) fn pool(magnitudes: &[f64], w: &WeightVector) -> GroupPartition {
    let n = magnitudes.len();
    let params = w.params();
    let mut stack: Vec<Pending> = Vec::with_capacity(n);
    for (i, &m) in magnitudes.iter().enumerate() {
        let mut top = Pending {
            group: Group {
                start: i,
                end: i,
                magnitude_sum: m,
                weight_mean: group_weight_mean(n, i, i, params),
            },
            weight_sum: w[i],
        };
        while let Some(prev) = stack.last() {
            if top.group.gap() < prev.group.gap() {
                break;
            }
            let prev = stack.pop().unwrap();
            let (start, end) = (prev.group.start, top.group.end);
            top = Pending {
                group: Group {
                    start,
                    end,
                    magnitude_sum: prev.group.magnitude_sum + top.group.magnitude_sum,
                    weight_mean: group_weight_mean(n, start, end, params),
                },
                weight_sum: prev.weight_sum + top.weight_sum,
            };
            debug_assert!({
                let averaged = top.weight_sum / top.group.size() as f64;
                (averaged - top.group.weight_mean).abs() <= 1e-9 * (1.0 + averaged.abs())
            });
        }
        stack.push(top);
    }
    GroupPartition {
        groups: stack.into_iter().map(|p| p.group).collect(),
        n,
    }
}
