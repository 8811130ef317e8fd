use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub selected: Vec<T>,
    /// Candidate index tried at each step, its score and the change against
    /// the current ensemble.
    pub steps: Vec<SelectionStep>,
    /// Score after each accepted candidate.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionStep {
    pub candidate: usize,
    pub score: f64,
    pub delta: f64,
    pub accepted: bool,
}

/// Walks `candidates` (ranked best first) once. The first `min_keep` are
/// always taken; after that a candidate stays only if it raises the score.
pub fn greedy_forward_select<T: Clone>(
    candidates: &[T],
    mut evaluate: impl FnMut(&[T]) -> f64,
    min_keep: usize,
) -> Result<Selection<T>> {
    if candidates.is_empty() {
        return Err(Error::invalid("no candidates to select from"));
    }
    let min_keep = min_keep.clamp(1, candidates.len());
    let mut selected: Vec<T> = Vec::new();
    let mut current = f64::NEG_INFINITY;
    let mut steps = Vec::new();
    let mut trace = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        selected.push(c.clone());
        let mut score = evaluate(&selected);
        if score.is_nan() {
            score = f64::NEG_INFINITY;
        }
        let delta = score - current;
        let accepted = i < min_keep || delta > 0.0;
        steps.push(SelectionStep {
            candidate: i,
            score,
            delta,
            accepted,
        });
        if accepted {
            current = score;
            trace.push(score);
        } else {
            selected.pop();
        }
    }
    Ok(Selection {
        selected,
        steps,
        trace,
    })
}
