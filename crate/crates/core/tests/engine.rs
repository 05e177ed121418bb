use std::path::PathBuf;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpband_core::{
    compute_matrix, dataset::parse_ucr, load_ucr_files, nn_graph, znormalize, BandSpec, CostKind,
    Dataset, GroundCost, MatchSpec, MeasureConfig, Parallelism, TimeSeries,
};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/ucr")
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, len: usize, ragged: bool) -> Dataset {
    let series = (0..n)
        .map(|id| {
            let l = if ragged {
                rng.gen_range(len / 2..=len)
            } else {
                len
            };
            let mut x = 0.0;
            let values = (0..l)
                .map(|_| {
                    x += rng.gen_range(-1.0..1.0);
                    x
                })
                .collect();
            TimeSeries::new(id, rng.gen_range(0..3), values).unwrap()
        })
        .collect();
    Dataset::new("random", series, "generated")
}

fn configs() -> Vec<MeasureConfig> {
    vec![
        MeasureConfig::Dtw {
            band: BandSpec::Unconstrained,
            cost: GroundCost::default(),
        },
        MeasureConfig::Dtw {
            band: BandSpec::Percent(10.0),
            cost: GroundCost::new(CostKind::Absolute, false),
        },
        MeasureConfig::Lcs {
            band: BandSpec::Percent(25.0),
            matching: MatchSpec::absolute(0.3).unwrap(),
        },
        MeasureConfig::Lcs {
            band: BandSpec::Unconstrained,
            matching: MatchSpec::relative(0.2).unwrap(),
        },
    ]
}

#[test]
fn values_do_not_depend_on_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = random_dataset(&mut rng, 17, 40, true);
    for config in configs() {
        let one = compute_matrix(&d, &config, Parallelism::threads(1)).unwrap();
        for threads in [2, 4, 7] {
            let many = compute_matrix(&d, &config, Parallelism::threads(threads)).unwrap();
            assert!(
                one.same_values(&many),
                "{config} differs at {threads} threads"
            );
            assert_eq!(many.timing.threads, threads);
        }
        let again = compute_matrix(&d, &config, Parallelism::Auto).unwrap();
        assert!(one.same_values(&again));
    }
}

#[test]
fn mirrored_triangle_equals_naive_full_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = random_dataset(&mut rng, 9, 30, false);
    for config in configs().into_iter().filter(MeasureConfig::is_symmetric) {
        let m = compute_matrix(&d, &config, Parallelism::threads(3)).unwrap();
        for (i, a) in d.series().iter().enumerate() {
            for (j, b) in d.series().iter().enumerate() {
                let naive = if i == j {
                    0.0
                } else {
                    config.distance(a, b).unwrap()
                };
                assert_eq!(m.get(i, j).to_bits(), naive.to_bits(), "{config} ({i},{j})");
            }
        }
    }
}

#[test]
fn asymmetric_matrix_stores_each_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let d = random_dataset(&mut rng, 6, 20, false);
    let config = MeasureConfig::Lcs {
        band: BandSpec::Percent(50.0),
        matching: MatchSpec::relative(0.3).unwrap(),
    };
    let m = compute_matrix(&d, &config, Parallelism::threads(2)).unwrap();
    assert_eq!(m.timing.pair_count, 30);
    for (i, a) in d.series().iter().enumerate() {
        for (j, b) in d.series().iter().enumerate() {
            if i != j {
                assert_eq!(m.get(i, j), config.distance(a, b).unwrap());
            }
        }
    }
}

#[test]
fn zero_band_matrix_equals_euclidean_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = random_dataset(&mut rng, 12, 50, false);
    let e = compute_matrix(&d, &MeasureConfig::Euclidean, Parallelism::Auto).unwrap();
    let z = compute_matrix(
        &d,
        &MeasureConfig::Dtw {
            band: BandSpec::Percent(0.0),
            cost: GroundCost::default(),
        },
        Parallelism::Auto,
    )
    .unwrap();
    assert!(e.same_values(&z));
}

#[test]
fn graphs_ignore_final_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let d = random_dataset(&mut rng, 15, 24, true);
        for band in [
            BandSpec::Unconstrained,
            BandSpec::Percent(10.0),
            BandSpec::Percent(0.0),
        ] {
            let graph = |root| {
                let m = compute_matrix(
                    &d,
                    &MeasureConfig::Dtw {
                        band,
                        cost: GroundCost::new(CostKind::Squared, root),
                    },
                    Parallelism::Auto,
                )
                .unwrap();
                nn_graph(&m).neighbors().to_vec()
            };
            assert_eq!(graph(true), graph(false));
        }
    }
}

#[test]
fn graph_invariant_under_monotone_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = random_dataset(&mut rng, 20, 30, false);
    let config = MeasureConfig::Dtw {
        band: BandSpec::Percent(20.0),
        cost: GroundCost::default(),
    };
    let m = compute_matrix(&d, &config, Parallelism::Auto).unwrap();
    let g = nn_graph(&m);
    for i in 0..m.len() {
        let row = m.row(i);
        let transformed: Vec<f64> = row.iter().map(|v| (3.0 * v + 1.0).ln()).collect();
        let best = (0..row.len())
            .filter(|&j| j != i)
            .min_by(|&a, &b| transformed[a].total_cmp(&transformed[b]).then(a.cmp(&b)))
            .unwrap();
        assert_eq!(g.neighbors()[i], best);
    }
}

#[test]
fn bundled_coffee_loads() {
    let d = load_ucr_files(&[
        data_dir().join("Coffee_TRAIN.txt"),
        data_dir().join("Coffee_TEST.txt"),
    ])
    .unwrap();
    assert_eq!(d.name, "Coffee");
    assert_eq!(d.len(), 56);
    assert!(d.is_equal_length());
    assert_eq!(d.max_len(), 286);
    let labels: std::collections::BTreeSet<i64> =
        d.series().iter().map(TimeSeries::label).collect();
    assert_eq!(labels.into_iter().collect::<Vec<_>>(), vec![0, 1]);
    assert!(d.series().iter().enumerate().all(|(k, s)| s.id() == k));
}

#[test]
fn bundled_tab_separated_file_loads() {
    let d = load_ucr_files(&[data_dir().join("ArrowHead_TRAIN.tsv")]).unwrap();
    assert_eq!(
        (d.name.as_str(), d.len(), d.max_len()),
        ("ArrowHead", 36, 251)
    );
}

#[test]
fn missing_file_is_an_io_error() {
    let err = load_ucr_files(&[data_dir().join("does-not-exist.txt")]).unwrap_err();
    assert!(matches!(err, warpband_core::Error::Io { .. }));
}

proptest! {
    #[test]
    fn ucr_text_round_trip(rows in prop::collection::vec(
        (-5i64..5, prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..20)),
        1..10,
    )) {
        let series = rows
            .iter()
            .enumerate()
            .map(|(id, (label, v))| TimeSeries::new(id, *label, v.clone()).unwrap())
            .collect();
        let d = Dataset::new("rt", series, "mem");
        let back = parse_ucr(&d.to_ucr_text(), "rt", "mem").unwrap();
        prop_assert_eq!(back.series(), d.series());
    }

    #[test]
    fn znormalize_is_idempotent(v in prop::collection::vec(-100.0f64..100.0, 2..60)) {
        let s = TimeSeries::from_values(v).unwrap();
        let once = znormalize(&s);
        let twice = znormalize(&once);
        for (a, b) in once.values().iter().zip(twice.values()) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        let n = once.len() as f64;
        let mean = once.values().iter().sum::<f64>() / n;
        prop_assert!(mean.abs() < 1e-9);
    }
}
