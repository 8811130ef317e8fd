use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evoensemble::dataio::write_synthetic_csv;
use evoensemble::experiment::{BenchmarkReport, ExperimentConfig, NamedModel, SpaceRef, TuningBlock};
use evoensemble::learners::LearnerSpec;
use evoensemble::metaopt::{Algorithm, OptimizerConfig};

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
    data: PathBuf,
    config: PathBuf,
}

fn workspace() -> Workspace {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path().to_path_buf();
    let data = root.join("energy.csv");
    write_synthetic_csv(&data, 400, 9).unwrap();
    let mut c = ExperimentConfig {
        models: vec![
            NamedModel {
                name: "cart".into(),
                spec: LearnerSpec::cart().with("max_depth", 5.0).into(),
            },
            NamedModel {
                name: "gbt".into(),
                spec: LearnerSpec::gbt().with("n_est", 15.0).into(),
            },
        ],
        ..ExperimentConfig::default()
    };
    c.folds.repeats = Some(3);
    c.tuning.push(TuningBlock {
        name: "gbt-pso".into(),
        target: "gbt".into(),
        space: SpaceRef::Named("gbt".into()),
        optimizer: OptimizerConfig::new(Algorithm::Pso, 3, 3, 1),
    });
    let config = root.join("config.json");
    std::fs::write(&config, serde_json::to_string_pretty(&c).unwrap()).unwrap();
    Workspace {
        _dir: dir,
        root,
        data,
        config,
    }
}

fn evo(ws: &Workspace, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evoensemble"))
        .args(args)
        .arg("--out")
        .arg(ws.root.join("out"))
        .arg("--data")
        .arg(&ws.data)
        .env_remove("EVOENSEMBLE_DATA")
        .output()
        .unwrap()
}

fn ok(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn train_then_repredict_matches() {
    let ws = workspace();
    let cfg = ws.config.to_str().unwrap();
    ok(&evo(&ws, &["train", "--config", cfg, "--model", "gbt"]));
    let out = ws.root.join("out");
    let trained = read(&out.join("gbt.predictions.csv"));
    assert!(trained.starts_with("row_id,prediction\n"));

    let model = out.join("gbt.model.json");
    ok(&evo(&ws, &["report", "--config", cfg, "--model", model.to_str().unwrap()]));
    assert_eq!(read(&out.join("report.predictions.csv")), trained);
}

#[test]
fn benchmark_then_report() {
    let ws = workspace();
    let cfg = ws.config.to_str().unwrap();
    let table = ok(&evo(&ws, &["benchmark", "--config", cfg, "--jobs", "2"]));
    assert!(table.contains("cart") && table.contains("gbt"));
    let out = ws.root.join("out");
    for f in ["summary.csv", "folds.csv", "report.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let report = BenchmarkReport::load(&out.join("report.json")).unwrap();
    assert!(report.is_consistent());

    let csv = ok(&evo(&ws, &["report", "--config", cfg, "--csv"]));
    assert_eq!(csv, read(&out.join("summary.csv")));

    // a different seed is a different experiment
    let refused = evo(&ws, &["report", "--config", cfg, "--seed", "7"]);
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("provenance"));
}

#[test]
fn tune_with_budget_equal_to_population() {
    let ws = workspace();
    let cfg = ws.config.to_str().unwrap();
    let text = ok(&evo(&ws, &["tune", "--config", cfg, "--block", "gbt-pso"]));
    assert!(text.contains("after 3 evaluations"));
    let dir = ws.root.join("out/gbt-pso");
    let trace = read(&dir.join("trace.csv"));
    assert_eq!(trace.lines().count(), 2);
    let params: serde_json::Value = serde_json::from_str(&read(&dir.join("best_params.json"))).unwrap();
    assert_eq!(params.as_object().unwrap().len(), 9);
    assert!(dir.join("best_spec.json").exists());
}

#[test]
fn describe_and_clean() {
    let ws = workspace();
    let text = ok(&evo(&ws, &["describe", "--columns", "Appliances,T1"]));
    assert!(text.contains("Appliances") && text.contains("T1"));
    assert_eq!(read(&ws.root.join("out/describe.csv")).lines().count(), 3);

    let text = ok(&evo(&ws, &["clean"]));
    assert!(text.starts_with("kept "));
    let cleaned = read(&ws.root.join("out/cleaned.csv"));
    let lof = read(&ws.root.join("out/lof.csv"));
    assert_eq!(lof.lines().count(), 401);
    assert!(cleaned.lines().count() <= 401);
}

#[test]
fn failures_name_their_stage() {
    let ws = workspace();
    let o = evo(&ws, &["benchmark"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("config") && err.contains("--preset"), "{err}");

    let o = evo(&ws, &["train", "--config", ws.config.to_str().unwrap(), "--model", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("train"));

    let o = Command::new(env!("CARGO_BIN_EXE_evoensemble"))
        .args(["describe", "--data"])
        .arg(ws.root.join("missing.csv"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage load"));

    let o = evo(&ws, &["describe", "--columns", "NotAColumn"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage describe"));
}
