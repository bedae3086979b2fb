use super::sign;

/// A vector viewed through its magnitudes in non-increasing order.
///
/// `perm[k]` is the original index of the `k`-th largest magnitude and `signs` holds the
/// signs of the original entries in their original order (with `sign(0) = +1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SortedDecomposition {
    pub magnitudes: Vec<f64>,
    pub perm: Vec<usize>,
    pub signs: Vec<f64>,
}

impl SortedDecomposition {
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Maps a vector indexed in sorted order back to the original order and reapplies the
    /// original signs: `out[perm[k]] = signs[perm[k]] * sorted[k]`.
    pub fn unsort(&self, sorted: &[f64]) -> Vec<f64> {
        assert_eq!(sorted.len(), self.perm.len());
        let mut out = vec![0.0; sorted.len()];
        for (&b, &idx) in sorted.iter().zip(&self.perm) {
            out[idx] = self.signs[idx] * b;
        }
        out
    }

    /// The original signed input.
    pub fn reconstruct(&self) -> Vec<f64> {
        self.unsort(&self.magnitudes)
    }
}

/// Sorts `v` by decreasing magnitude. Ties keep their input order, so the result is a
/// deterministic function of `v`.
pub fn sort_by_magnitude(v: &[f64]) -> SortedDecomposition {
    let mut keyed: Vec<(f64, usize)> = v.iter().enumerate().map(|(i, x)| (x.abs(), i)).collect();
    // `sort_by` is stable.
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (magnitudes, perm) = keyed.into_iter().unzip();
    SortedDecomposition {
        magnitudes,
        perm,
        signs: v.iter().map(|&x| sign(x)).collect(),
    }
}
