//! Exhaustive reference for the exact proximity operator.
//!
//! The exact prox of OSCAR, after sorting magnitudes, is constant on some partition of the
//! sorted positions into consecutive runs, with each run's value given by its thresholded
//! average. Enumerating all `2^(n-1)` such partitions and keeping the candidate with the
//! lowest prox objective therefore finds it. The objective is evaluated with the pairwise
//! definition of the penalty, and the sorting here is independent of [`super::sort_by_magnitude`].

use super::{oscar_value_pairwise, OscarParams};
use crate::error::{OscarError, Result};

pub const ORACLE_MAX_LEN: usize = 12;

pub fn brute_force_prox_oracle(v: &[f64], params: OscarParams) -> Result<Vec<f64>> {
    let n = v.len();
    if n > ORACLE_MAX_LEN {
        return Err(OscarError::TooLarge {
            len: n,
            max: ORACLE_MAX_LEN,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // insertion sort, stable, by decreasing magnitude
    let mut order: Vec<usize> = (0..n).collect();
    for i in 1..n {
        let mut j = i;
        while j > 0 && v[order[j - 1]].abs() < v[order[j]].abs() {
            order.swap(j - 1, j);
            j -= 1;
        }
    }
    let mags: Vec<f64> = order.iter().map(|&i| v[i].abs()).collect();
    let weights: Vec<f64> = (1..=n)
        .map(|i| params.lambda1() + params.lambda2() * (n - i) as f64)
        .collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for cuts in 0u32..(1u32 << (n - 1)) {
        let mut sorted_out = vec![0.0; n];
        let mut start = 0;
        for end in 0..n {
            // bit `end` set means a boundary after position `end`
            let closes = end == n - 1 || cuts & (1 << end) != 0;
            if !closes {
                continue;
            }
            let len = (end - start + 1) as f64;
            let m: f64 = mags[start..=end].iter().sum::<f64>() / len;
            let w: f64 = weights[start..=end].iter().sum::<f64>() / len;
            let value = (m - w).max(0.0);
            sorted_out[start..=end].fill(value);
            start = end + 1;
        }

        let mut candidate = vec![0.0; n];
        for (k, &idx) in order.iter().enumerate() {
            candidate[idx] = if v[idx] < 0.0 {
                -sorted_out[k]
            } else {
                sorted_out[k]
            };
        }
        let fit: f64 = candidate
            .iter()
            .zip(v)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            * 0.5;
        let objective = oscar_value_pairwise(&candidate, params) + fit;
        if best.as_ref().is_none_or(|(b, _)| objective < *b) {
            best = Some((objective, candidate));
        }
    }
    Ok(best.map(|(_, x)| x).unwrap())
}
