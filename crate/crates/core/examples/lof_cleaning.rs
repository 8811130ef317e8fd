use evoensemble::dataio::synthetic_frame;
use evoensemble::outlier::{filter_outliers, lof_scores};
use evoensemble::Matrix;

fn main() {
    // a tight cluster with two stragglers
    let mut pts: Vec<[f64; 2]> = (0..40)
        .map(|i| {
            let a = i as f64 * 0.157;
            [a.cos() * (1.0 + 0.1 * (i % 3) as f64), a.sin()]
        })
        .collect();
    pts.push([6.0, 6.0]);
    pts.push([-5.0, 4.0]);
    let report = lof_scores(&Matrix::from_rows(&pts).unwrap(), 5).unwrap().with_threshold(1.5);
    println!("toy cloud: outliers at rows {:?}", report.outliers);
    for &i in &report.outliers {
        println!("  row {i}: lof = {:.2}", report.lof[i]);
    }

    // the same filter on a sensor table, over features and target together
    let frame = synthetic_frame(1500, 3);
    let mut cols = frame.feature_names(false);
    cols.push(frame.target_name().to_string());
    let (kept, report) = filter_outliers(&frame, &cols, 20, 1.5).unwrap();
    let worst = report.lof.iter().copied().fold(f64::MIN, f64::max);
    println!(
        "sensor table: kept {} of {} rows, max lof {worst:.2}",
        kept.n_active(),
        frame.n_rows()
    );
}
