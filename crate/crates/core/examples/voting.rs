use evoensemble::dataio::{make_folds, synthetic_frame};
use evoensemble::ensemble::{vote_average, vote_majority, ModelSpec};
use evoensemble::experiment::{adaptive_voting, voting_candidates};
use evoensemble::metaopt::NelderMeadOptions;

fn main() {
    // weighted average of three member outputs
    println!("average vote: {}", vote_average(&[1.0, 1.0, 2.0], &[10.0, 20.0, 30.0]).unwrap());
    println!("majority vote: {}", vote_majority(&[2, 1, 2, 1], &[1.0; 4]).unwrap());

    let design = synthetic_frame(1500, 8).design(false).unwrap();
    let mut plan = make_folds(design.y.len(), 10, 8).unwrap();
    plan.repeats.truncate(3);

    // smaller forests keep the example quick
    let cands: Vec<_> = voting_candidates()
        .into_iter()
        .map(|mut c| {
            if let ModelSpec::Bagging(b) = &mut c.spec {
                b.members = 20;
            }
            c
        })
        .collect();
    let opts = NelderMeadOptions { budget: 200, ..Default::default() };
    let v = adaptive_voting(&cands, &design.x, &design.y, &plan, 8, &opts).unwrap();

    for (c, s) in cands.iter().zip(&v.solo_scores) {
        println!("  {:<14} solo R {s:.4}", c.name);
    }
    for step in &v.prune_trace {
        println!("  dropped {} -> R {:.4}", cands[step.removed].name, step.score);
    }
    println!("kept {:?} with weights {:.3?}", v.names, v.spec.weights);
    println!("equal weights R {:.4}, refined R {:.4}", v.pruned_score, v.refined_score);
}
