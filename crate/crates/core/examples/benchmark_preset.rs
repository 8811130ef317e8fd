use std::path::PathBuf;

use evoensemble::dataio::write_synthetic_csv;
use evoensemble::ensemble::ModelSpec;
use evoensemble::experiment::{run, ExperimentConfig};

fn main() {
    let preset = std::env::args().nth(1).unwrap_or_else(|| "paper-baselines".into());
    let mut config = ExperimentConfig::from_preset(&preset).expect("known preset");

    if std::env::var_os("EVOENSEMBLE_DATA").is_none() {
        // synthetic stand-in; shrink forests and repeats to match
        let p: PathBuf = std::env::temp_dir().join("evoensemble-benchmark.csv");
        write_synthetic_csv(&p, 1500, 1).unwrap();
        config.dataset = Some(p);
        config.folds.repeats = Some(3);
        for m in &mut config.models {
            if let ModelSpec::Bagging(b) = &mut m.spec {
                b.members = b.members.min(15);
            }
        }
    }

    let report = run(&config).unwrap();
    print!("{}", report.render());
    report.write_summary_csv(std::io::stdout()).unwrap();
}
