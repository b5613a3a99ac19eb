use ordkit::classify::{classify, is_compatible, ClassifierKind};
use ordkit::encoding::{Encoding, EncodingKind, OrdinalScale};
use proptest::prelude::*;

fn matrix(kind: EncodingKind, k: usize) -> ordkit::encoding::TargetMatrix {
    Encoding::new(kind)
        .target_matrix(&OrdinalScale::new(k).unwrap())
        .unwrap()
}

#[test]
fn rows_are_pairwise_distinct() {
    for kind in EncodingKind::ALL {
        for k in 2..=10 {
            let m = matrix(kind, k);
            assert_eq!(m.dim(), Encoding::new(kind).vector_length(k).unwrap());
            for a in 1..=k {
                for b in a + 1..=k {
                    assert_ne!(m.row(a), m.row(b), "{kind:?} K={k} rows {a},{b}");
                }
            }
        }
    }
}

#[test]
fn gaussian_peaks_at_class() {
    for k in 2..=10 {
        let m = matrix(EncodingKind::Gaussian, k);
        for class in 1..=k {
            let row = m.row(class);
            for i in 1..=k {
                for j in 1..=k {
                    if i.abs_diff(class) < j.abs_diff(class) {
                        assert!(row[i - 1] > row[j - 1]);
                    }
                }
            }
        }
    }
}

#[test]
fn continuous_is_equidistant() {
    for k in 2..=10 {
        let m = matrix(EncodingKind::Continuous, k);
        let gap = 1.0 / (k - 1) as f64;
        for class in 1..k {
            let d = m.row(class + 1)[0] - m.row(class)[0];
            assert!(d > 0.0);
            assert!((d - gap).abs() < 1e-12);
        }
    }
}

#[test]
fn progress_bars_are_monotone_and_nested() {
    for kind in [EncodingKind::ProgressBar, EncodingKind::SoftProgressBar] {
        for k in 2..=10 {
            let m = matrix(kind, k);
            for class in 1..=k {
                assert!(m.row(class).windows(2).all(|w| w[0] >= w[1]));
                if class < k {
                    let (lo, hi) = (m.row(class), m.row(class + 1));
                    assert!(lo.iter().zip(hi).all(|(a, b)| b >= a));
                }
            }
        }
    }
}

#[test]
fn binary_rows_decode_to_class() {
    for k in 2..=10 {
        let m = matrix(EncodingKind::BinaryNumber, k);
        for class in 1..=k {
            let value = m
                .row(class)
                .iter()
                .fold(0usize, |acc, bit| acc * 2 + *bit as usize);
            assert_eq!(value, class);
        }
    }
}

#[test]
fn encode_is_bit_reproducible() {
    let scale = OrdinalScale::new(7).unwrap();
    for kind in EncodingKind::ALL {
        let e = Encoding::new(kind);
        for class in 1..=7 {
            let a = e.encode(&scale, class).unwrap();
            let b = e.encode(&scale, class).unwrap();
            assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
    }
}

#[test]
fn every_compatible_pair_roundtrips() {
    let mut checked = 0;
    for kind in EncodingKind::ALL {
        for classifier in ClassifierKind::ALL {
            if !is_compatible(kind, classifier) {
                continue;
            }
            for k in 2..=10 {
                let m = matrix(kind, k);
                for class in 1..=k {
                    assert_eq!(
                        classify(classifier, m.row(class), &m).unwrap(),
                        class,
                        "{kind:?}/{classifier:?} K={k}"
                    );
                    checked += 1;
                }
            }
        }
    }
    // 12 pairs, sum_{K=2}^{10} K = 54 classes each
    assert_eq!(checked, 12 * 54);
}

/// Nearest grid point of a scalar on {0, 1/(K-1), ..., 1}, lower on ties.
fn nearest_grid_point(y: f64, k: usize) -> usize {
    let mut best = 1;
    let mut best_d = f64::INFINITY;
    for class in 1..=k {
        let d = (y - (class - 1) as f64 / (k - 1) as f64).abs();
        if d < best_d {
            best = class;
            best_d = d;
        }
    }
    best
}

#[test]
fn l1_on_continuous_is_grid_rounding() {
    for k in 2..=10 {
        let m = matrix(EncodingKind::Continuous, k);
        for step in 0..=4000 {
            let y = -0.5 + 2.0 * step as f64 / 4000.0;
            assert_eq!(
                classify(ClassifierKind::L1Nearest, &[y], &m).unwrap(),
                nearest_grid_point(y, k),
                "K={k} y={y}"
            );
        }
    }
}

fn kinds() -> impl Strategy<Value = EncodingKind> {
    prop::sample::select(EncodingKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn positive_scaling_keeps_argmax_and_dot(
        kind in prop::sample::select(vec![EncodingKind::OneHot, EncodingKind::Gaussian,
                                          EncodingKind::SoftProgressBar, EncodingKind::BinaryNumber]),
        k in 2usize..=10,
        seed in prop::collection::vec(-2.0f64..2.0, 10),
        c in 0.01f64..100.0,
    ) {
        let m = matrix(kind, k);
        let y: Vec<f64> = seed[..m.dim()].to_vec();
        prop_assume!(y.iter().any(|v| *v != 0.0));
        let scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
        for classifier in [ClassifierKind::Argmax, ClassifierKind::DotNearest] {
            if is_compatible(kind, classifier) {
                prop_assert_eq!(
                    classify(classifier, &y, &m).unwrap(),
                    classify(classifier, &scaled, &m).unwrap()
                );
            }
        }
    }

    #[test]
    fn decoded_class_is_in_range(
        kind in kinds(),
        k in 2usize..=10,
        seed in prop::collection::vec(-3.0f64..3.0, 10),
    ) {
        let m = matrix(kind, k);
        let y = &seed[..m.dim()];
        for classifier in ClassifierKind::ALL {
            if is_compatible(kind, classifier) {
                let class = classify(classifier, y, &m).unwrap();
                prop_assert!((1..=k).contains(&class));
            }
        }
    }
}
