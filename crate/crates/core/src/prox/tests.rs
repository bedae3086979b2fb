use proptest::prelude::*;

use super::*;

fn params(l1: f64, l2: f64) -> OscarParams {
    OscarParams::new(l1, l2).unwrap()
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) {
    assert_eq!(a.len(), b.len());
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).abs() <= tol, "index {i}: {x} vs {y} (tol {tol})");
    }
}

#[test]
fn params_reject_negative_and_nan() {
    assert!(OscarParams::new(-0.1, 0.0).is_err());
    assert!(OscarParams::new(0.0, -1.0).is_err());
    assert!(OscarParams::new(f64::NAN, 0.0).is_err());
    assert!(OscarParams::new(0.0, 0.0).is_ok());
}

#[test]
fn soft_threshold_examples() {
    assert_eq!(soft_threshold(&[3.0, -1.0, 0.5], 1.0), vec![2.0, 0.0, 0.0]);
    let v = [1.5, -2.25, 0.0, 7.0];
    assert_eq!(soft_threshold(&v, 0.0), v.to_vec());
    assert_eq!(
        soft_threshold_each(&[2.0, -2.0], &[0.5, 3.0]).unwrap(),
        vec![1.5, 0.0]
    );
    assert_eq!(
        soft_threshold_each(&[1.0, 2.0], &[1.0]),
        Err(OscarError::Dimension {
            expected: 2,
            found: 1
        })
    );
}

#[test]
fn weight_vector_examples() {
    let w = weight_vector(3, params(0.1, 0.01)).unwrap();
    assert_close(w.as_slice(), &[0.12, 0.11, 0.10], 1e-15);

    let w = weight_vector(5, params(0.3, 0.0)).unwrap();
    assert!(w.as_slice().iter().all(|&x| x == 0.3));

    let w = weight_vector(1000, params(0.1, 0.001)).unwrap();
    assert!((w[0] - 1.099).abs() < 1e-12);
    assert_eq!(w[999], 0.1);

    assert_eq!(
        weight_vector(0, params(1.0, 1.0)),
        Err(OscarError::EmptyInput)
    );
}

#[test]
fn weight_group_mean_matches_average() {
    let w = weight_vector(17, params(0.4, 0.3)).unwrap();
    for s in 0..17 {
        for t in s..17 {
            let avg = w.as_slice()[s..=t].iter().sum::<f64>() / (t - s + 1) as f64;
            assert!((avg - w.group_mean(s, t)).abs() < 1e-12);
        }
    }
}

#[test]
fn sort_examples() {
    let d = sort_by_magnitude(&[1.0, -3.0, 2.0]);
    assert_eq!(d.magnitudes, vec![3.0, 2.0, 1.0]);
    assert_eq!(d.perm, vec![1, 2, 0]);
    assert_eq!(d.signs, vec![1.0, -1.0, 1.0]);

    let d = sort_by_magnitude(&[5.0, -5.0]);
    assert_eq!(d.perm, vec![0, 1]);
    assert_eq!(d.magnitudes, vec![5.0, 5.0]);

    let d = sort_by_magnitude(&[0.0, 0.0, 0.0]);
    assert_eq!(d.magnitudes, vec![0.0; 3]);
    assert_eq!(d.signs, vec![1.0; 3]);

    assert!(sort_by_magnitude(&[]).is_empty());
}

#[test]
fn group_and_average_examples() {
    let w = weight_vector(2, params(0.0, 1.0)).unwrap();
    let p = group_and_average(&[3.0, 2.9], &w).unwrap();
    assert_eq!(p.groups.len(), 1);
    let g = p.groups[0];
    assert_eq!((g.start, g.end, g.size()), (0, 1, 2));
    assert!((g.magnitude_mean() - 2.95).abs() < 1e-15);
    assert!((g.weight_mean - 0.5).abs() < 1e-15);

    let w = weight_vector(2, params(0.0, 2.0)).unwrap();
    let p = group_and_average(&[4.0, 1.0], &w).unwrap();
    let means: Vec<_> = p
        .groups
        .iter()
        .map(|g| (g.magnitude_mean(), g.weight_mean))
        .collect();
    assert_eq!(means, vec![(4.0, 2.0), (1.0, 0.0)]);

    let w = weight_vector(4, params(0.7, 0.0)).unwrap();
    let p = group_and_average(&[9.0, 4.0, 2.0, 1.0], &w).unwrap();
    assert_eq!(p.groups.len(), 4);
}

#[test]
fn group_and_average_rejects_bad_input() {
    let w = weight_vector(3, params(0.0, 1.0)).unwrap();
    assert_eq!(
        group_and_average(&[1.0, 2.0, 0.0], &w),
        Err(OscarError::NotSorted { index: 0 })
    );
    assert!(matches!(
        group_and_average(&[1.0, 0.5], &w),
        Err(OscarError::Dimension { .. })
    ));
}

#[test]
fn gpo_examples() {
    assert_close(
        &oscar_gpo(&[3.0, 2.9], params(0.0, 1.0)),
        &[2.45, 2.45],
        1e-14,
    );
    assert_close(
        &oscar_gpo(&[1.0, 4.0], params(0.0, 2.0)),
        &[1.0, 2.0],
        1e-14,
    );
    assert_close(
        &oscar_gpo(&[-3.0, 2.9], params(0.0, 1.0)),
        &[-2.45, 2.45],
        1e-14,
    );
    let v = [0.3, -7.0, 2.0, 2.0];
    assert_eq!(oscar_gpo(&v, OscarParams::ZERO), v.to_vec());
}

#[test]
fn apo_examples() {
    assert_eq!(oscar_apo(&[3.0, 2.9], params(0.0, 1.0)), vec![2.0, 2.9]);
    assert_eq!(oscar_apo(&[1.0, 4.0], params(0.0, 2.0)), vec![1.0, 2.0]);
    let v = [0.3, -7.0, 2.0, 2.0, -0.1];
    assert_eq!(oscar_apo(&v, params(0.25, 0.0)), soft_threshold(&v, 0.25));
}

#[test]
fn apo_condition_examples() {
    assert!(apo_condition_holds(&[4.0, 1.0], params(0.0, 2.0)));
    assert!(!apo_condition_holds(&[3.0, 2.9], params(0.0, 1.0)));
    assert!(apo_condition_holds(
        &[1.0, 1.0, -1.0, 0.2],
        params(0.8, 0.0)
    ));
}

#[test]
fn oscar_value_examples() {
    assert_eq!(oscar_value(&[1.0, 2.0], params(1.0, 1.0)), 5.0);
    assert_eq!(oscar_value_pairwise(&[1.0, 2.0], params(1.0, 1.0)), 5.0);
    assert_eq!(oscar_value(&[0.0; 6], params(0.3, 0.2)), 0.0);
    assert_eq!(oscar_value(&[-2.5], params(0.4, 9.0)), 0.4 * 2.5);
}

#[test]
fn degenerate_lengths() {
    assert!(oscar_gpo(&[], params(1.0, 1.0)).is_empty());
    assert!(oscar_apo(&[], params(1.0, 1.0)).is_empty());
    assert_eq!(oscar_gpo(&[-3.0], params(1.0, 5.0)), vec![-2.0]);
    assert_eq!(oscar_apo(&[-3.0], params(1.0, 5.0)), vec![-2.0]);
}

#[test]
fn oracle_examples() {
    let x = brute_force_prox_oracle(&[3.0, 2.9], params(0.0, 1.0)).unwrap();
    assert_close(&x, &[2.45, 2.45], 1e-14);
    let v = [1.0, -2.0, 0.5];
    assert_eq!(
        brute_force_prox_oracle(&v, OscarParams::ZERO).unwrap(),
        v.to_vec()
    );
    assert_eq!(
        brute_force_prox_oracle(&[0.0; 13], OscarParams::ZERO),
        Err(OscarError::TooLarge { len: 13, max: 12 })
    );
}

fn vec_and_params(max_len: usize) -> impl Strategy<Value = (Vec<f64>, OscarParams)> {
    (
        prop::collection::vec(-5.0f64..5.0, 1..=max_len),
        0.0f64..2.0,
        0.0f64..2.0,
    )
        .prop_map(|(v, l1, l2)| (v, OscarParams::new(l1, l2).unwrap()))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #[test]
    fn gpo_matches_oracle((v, p) in vec_and_params(10)) {
        let fast = oscar_gpo(&v, p);
        let slow = brute_force_prox_oracle(&v, p).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn decomposition_reconstructs_input(v in prop::collection::vec(-5.0f64..5.0, 0..40)) {
        let d = sort_by_magnitude(&v);
        prop_assert_eq!(d.reconstruct(), v.clone());
        prop_assert!(d.magnitudes.windows(2).all(|p| p[0] >= p[1]));
        let mut seen = d.perm.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..v.len()).collect::<Vec<_>>());
    }

    #[test]
    fn sign_equivariance((v, p) in vec_and_params(30)) {
        let abs: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        for op in [oscar_gpo, oscar_apo] {
            let signed = op(&v, p);
            let unsigned = op(&abs, p);
            for i in 0..v.len() {
                prop_assert_eq!(signed[i], sign(v[i]) * unsigned[i]);
            }
        }
    }

    #[test]
    fn nonexpansive((u, p) in vec_and_params(30), shift in prop::collection::vec(-1.0f64..1.0, 30)) {
        let v: Vec<f64> = u.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let pu = oscar_gpo(&u, p);
        let pv = oscar_gpo(&v, p);
        let diff: Vec<f64> = pu.iter().zip(&pv).map(|(a, b)| a - b).collect();
        let input: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a - b).collect();
        prop_assert!(norm(&diff) <= norm(&input) * (1.0 + 1e-12) + 1e-12);
        prop_assert!(norm(&pu) <= norm(&u) * (1.0 + 1e-12));
    }

    #[test]
    fn lambda2_zero_is_soft_threshold(v in prop::collection::vec(-5.0f64..5.0, 0..30), l1 in 0.0f64..2.0) {
        let p = OscarParams::new(l1, 0.0).unwrap();
        let expected = soft_threshold(&v, l1);
        prop_assert_eq!(oscar_gpo(&v, p), expected.clone());
        prop_assert_eq!(oscar_apo(&v, p), expected);
    }

    #[test]
    fn value_forms_agree(x in prop::collection::vec(-5.0f64..5.0, 0..200), l1 in 0.0f64..2.0, l2 in 0.0f64..2.0) {
        let p = OscarParams::new(l1, l2).unwrap();
        let sorted = oscar_value(&x, p);
        let pairwise = oscar_value_pairwise(&x, p);
        prop_assert!((sorted - pairwise).abs() <= 1e-9 * pairwise.abs().max(1.0));
    }

    #[test]
    fn pooled_gaps_strictly_decrease((v, p) in vec_and_params(60)) {
        let d = sort_by_magnitude(&v);
        let w = weight_vector(v.len(), p).unwrap();
        let part = group_and_average(&d.magnitudes, &w).unwrap();
        prop_assert!(part.groups.windows(2).all(|g| g[0].gap() > g[1].gap()));
        prop_assert_eq!(part.groups[0].start, 0);
        prop_assert_eq!(part.groups.last().unwrap().end, v.len() - 1);
        for pair in part.groups.windows(2) {
            prop_assert_eq!(pair[1].start, pair[0].end + 1);
        }
    }
}
