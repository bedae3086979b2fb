use oscar_cli::io::{format_matrix, format_vector, parse_matrix, parse_vector};
use oscar_cli::CliError;
use oscar_core::DenseMatrix;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

proptest! {
    #[test]
    fn vector_round_trip_is_exact(v in prop::collection::vec(finite(), 0..50)) {
        let back = parse_vector(&format_vector(&v), "v").unwrap();
        prop_assert_eq!(back.len(), v.len());
        for (a, b) in back.iter().zip(&v) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn matrix_round_trip_is_exact(
        (rows, cols, data) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(finite(), r * c))
        })
    ) {
        let a = DenseMatrix::new(rows, cols, data).unwrap();
        let back = parse_matrix(&format_matrix(&a), "a").unwrap();
        prop_assert_eq!((back.rows(), back.cols()), (rows, cols));
        for (x, y) in back.as_slice().iter().zip(a.as_slice()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn vector_accepts_comments_blank_lines_and_crlf() {
    let v = parse_vector("# header\r\n1.5\r\n\r\n-2\r\n  3e-2 \n", "v").unwrap();
    assert_eq!(v, vec![1.5, -2.0, 0.03]);
}

#[test]
fn vector_errors_carry_line_numbers() {
    match parse_vector("1\n# c\nfoo\n", "in.txt") {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    assert!(parse_vector("1\nNaN\n", "v").is_err());
    assert!(parse_vector("inf\n", "v").is_err());
}

#[test]
fn matrix_parsing() {
    let a = parse_matrix("# m x n\n1, 2, 3\n4,5,6\r\n", "a").unwrap();
    assert_eq!((a.rows(), a.cols()), (2, 3));
    assert_eq!(a.as_slice(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    match parse_matrix("1,2\n3\n", "a") {
        Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(parse_matrix("1,x\n", "a").is_err());
    assert!(parse_matrix("# nothing\n", "a").is_err());
}
