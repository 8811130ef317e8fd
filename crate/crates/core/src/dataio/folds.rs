use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Shuffled k-fold assignment plus the (test, validation) fold pair of each
/// repeat. Training uses every remaining fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub repeats: Vec<(usize, usize)>,
}

/// Row ids of one repeat, each list ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

pub fn make_folds(n_rows: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::invalid(format!("fold count {k} < 2")));
    }
    if k > n_rows {
        return Err(Error::invalid(format!("fold count {k} exceeds {n_rows} rows")));
    }
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.shuffle(&mut seed::rng_for(seed, &[0xF01D]));
    let mut assignments = vec![0; n_rows];
    for (pos, &row) in order.iter().enumerate() {
        assignments[row] = pos % k;
    }
    let repeats = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Ok(FoldPlan {
        k,
        assignments,
        repeats,
    })
}

impl FoldPlan {
    pub fn n_rows(&self) -> usize {
        self.assignments.len()
    }

    pub fn fold_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.n_rows())
            .filter(|&r| self.assignments[r] == fold)
            .collect()
    }

    pub fn split(&self, repeat: usize) -> Split {
        let (test_fold, val_fold) = self.repeats[repeat];
        let mut s = Split {
            train: Vec::new(),
            validation: Vec::new(),
            test: Vec::new(),
        };
        for (r, &f) in self.assignments.iter().enumerate() {
            if f == test_fold {
                s.test.push(r);
            } else if f == val_fold {
                s.validation.push(r);
            } else {
                s.train.push(r);
            }
        }
        s
    }

    /// Plain k-fold split: fold `fold` held out, everything else trains.
    pub fn holdout(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut held = Vec::new();
        for (r, &f) in self.assignments.iter().enumerate() {
            if f == fold {
                held.push(r);
            } else {
                train.push(r);
            }
        }
        (train, held)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hundred_rows_ten_folds() {
        let plan = make_folds(100, 10, 7).unwrap();
        for f in 0..10 {
            assert_eq!(plan.fold_rows(f).len(), 10);
        }
        for r in 0..10 {
            let s = plan.split(r);
            assert_eq!((s.train.len(), s.validation.len(), s.test.len()), (80, 10, 10));
        }
        assert_eq!(plan.repeats[9], (9, 0));
    }

    #[test]
    fn one_row_per_fold() {
        let plan = make_folds(10, 10, 1).unwrap();
        for f in 0..10 {
            assert_eq!(plan.fold_rows(f).len(), 1);
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        assert_eq!(make_folds(57, 5, 3).unwrap(), make_folds(57, 5, 3).unwrap());
        assert_ne!(
            make_folds(57, 5, 3).unwrap().assignments,
            make_folds(57, 5, 4).unwrap().assignments
        );
    }

    #[test]
    fn rejects_bad_k() {
        assert!(make_folds(5, 1, 0).is_err());
        assert!(make_folds(5, 6, 0).is_err());
    }
}
