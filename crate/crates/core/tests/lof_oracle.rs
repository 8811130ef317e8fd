//! LOF scores against a direct O(n²) evaluation of k-distance, reachability
//! distance, local reachability density and the outlier factor.

use evoensemble::outlier::{filter_outliers, lof_scores};
use evoensemble::dataio::synthetic_frame;
use evoensemble::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::lof::{close, oracle, random_dataset};

#[test]
fn fifty_random_datasets_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut with_duplicates = 0;
    for case in 0..50 {
        let (pts, k) = random_dataset(&mut rng, case);
        let want = oracle(&pts, k);
        let got = lof_scores(&Matrix::from_rows(&pts).unwrap(), k).unwrap();
        if want.lrd.iter().any(|v| v.is_infinite()) {
            with_duplicates += 1;
        }
        for i in 0..pts.len() {
            assert!(close(got.lrd[i], want.lrd[i]), "case {case} point {i}: lrd {} vs {}", got.lrd[i], want.lrd[i]);
            assert!(close(got.lof[i], want.lof[i]), "case {case} point {i}: lof {} vs {}", got.lof[i], want.lof[i]);
        }
    }
    assert!(with_duplicates > 0, "no dataset exercised the duplicate rules");
}

#[test]
fn cluster_of_copies_with_one_stray() {
    let mut pts = vec![vec![1.0, 1.0]; 8];
    pts.push(vec![4.0, 5.0]);
    let want = oracle(&pts, 3);
    let got = lof_scores(&Matrix::from_rows(&pts).unwrap(), 3).unwrap();
    for i in 0..pts.len() {
        assert!(close(got.lof[i], want.lof[i]));
    }
    assert!((got.lof[0] - 1.0).abs() < 1e-12);
    assert_eq!(got.lof[8], f64::MAX);
}

#[test]
fn uniform_cloud_scores_near_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pts: Vec<Vec<f64>> = (0..400).map(|_| vec![rng.random(), rng.random()]).collect();
    let r = lof_scores(&Matrix::from_rows(&pts).unwrap(), 20).unwrap();
    let mean = r.lof.iter().sum::<f64>() / r.lof.len() as f64;
    assert!((mean - 1.0).abs() < 0.1, "mean lof {mean}");
}

#[test]
fn filter_masks_only_scored_outliers() {
    let frame = synthetic_frame(600, 12);
    let mut cols = frame.feature_names(false);
    cols.push(frame.target_name().to_string());
    let (kept, report) = filter_outliers(&frame, &cols, 20, 1.5).unwrap();
    assert_eq!(kept.n_active() + report.outliers.len(), frame.n_active());
    for (i, &row) in report.row_ids.iter().enumerate() {
        assert_eq!(kept.active_mask()[row], report.lof[i] <= 1.5);
    }
    assert!(filter_outliers(&frame, &cols, 20, 1.0).is_err());
}
