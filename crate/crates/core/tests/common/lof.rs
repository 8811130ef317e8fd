//! Direct O(n²) evaluation of k-distance, reachability distance, local
//! reachability density and the outlier factor.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Oracle {
    pub lrd: Vec<f64>,
    pub lof: Vec<f64>,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn oracle(points: &[Vec<f64>], k: usize) -> Oracle {
    let n = points.len();
    let mut kdist = vec![0.0; n];
    let mut hood: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        let mut d: Vec<f64> = (0..n).filter(|&o| o != p).map(|o| dist(&points[p], &points[o])).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        kdist[p] = d[k - 1];
        for o in 0..n {
            if o != p && dist(&points[p], &points[o]) <= kdist[p] {
                hood[p].push(o);
            }
        }
    }
    let mut lrd = vec![0.0; n];
    for p in 0..n {
        let mut sum = 0.0;
        for &o in &hood[p] {
            let reach = if kdist[o] > dist(&points[p], &points[o]) {
                kdist[o]
            } else {
                dist(&points[p], &points[o])
            };
            sum += reach;
        }
        lrd[p] = if sum == 0.0 { f64::INFINITY } else { hood[p].len() as f64 / sum };
    }
    let mut lof = vec![0.0; n];
    for p in 0..n {
        let mut total = 0.0;
        for &o in &hood[p] {
            let ratio = if lrd[o].is_infinite() && lrd[p].is_infinite() {
                1.0
            } else if lrd[p].is_infinite() {
                0.0
            } else if lrd[o].is_infinite() {
                f64::MAX
            } else {
                lrd[o] / lrd[p]
            };
            total += ratio / hood[p].len() as f64;
        }
        lof[p] = if total > f64::MAX { f64::MAX } else { total };
    }
    Oracle { lrd, lof }
}

pub fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() || a == f64::MAX || b == f64::MAX {
        a == b
    } else {
        (a - b).abs() <= 1e-9 * (1.0 + b.abs())
    }
}

pub fn random_dataset(rng: &mut ChaCha8Rng, case: usize) -> (Vec<Vec<f64>>, usize) {
    let n = rng.random_range(12..=300);
    let dim = rng.random_range(1..=5);
    let mut pts: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random_range(-10.0..10.0)).collect())
        .collect();
    // every third dataset gets exact duplicates, some of them in large runs
    if case % 3 == 0 {
        let copies = rng.random_range(1..n / 3);
        for _ in 0..copies {
            let src = rng.random_range(0..n);
            let dst = rng.random_range(0..n);
            pts[dst] = pts[src].clone();
        }
    }
    // every fifth dataset sits on an integer grid, so distances tie often
    if case % 5 == 0 {
        for p in &mut pts {
            for v in p.iter_mut() {
                *v = v.round();
            }
        }
    }
    let k = rng.random_range(1..=20.min(n - 1));
    (pts, k)
}
