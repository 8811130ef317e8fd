use std::path::PathBuf;

use evoensemble::dataio::{describe, load_csv, pearson_matrix, write_synthetic_csv, SchemaMode};

/// The real file if `EVOENSEMBLE_DATA` points at it, else a synthetic stand-in.
fn dataset() -> PathBuf {
    if let Some(p) = std::env::var_os("EVOENSEMBLE_DATA") {
        return p.into();
    }
    let p = std::env::temp_dir().join("evoensemble-describe.csv");
    write_synthetic_csv(&p, 2000, 7).expect("write synthetic data");
    p
}

fn main() {
    let path = dataset();
    let frame = load_csv(&path, SchemaMode::Strict).expect("load");
    println!("{} rows from {}", frame.n_rows(), path.display());

    println!("{:<12} {:>10} {:>10} {:>10} {:>10} {:>10}", "column", "min", "max", "mean", "median", "std");
    for name in ["Appliances", "lights", "T1", "RH_1", "T_out", "Windspeed"] {
        let s = describe(&frame, name).unwrap();
        println!(
            "{name:<12} {:>10.3} {:>10.3} {:>10.3} {:>10.3} {:>10.3}",
            s.min, s.max, s.mean, s.median, s.std
        );
    }

    // correlation of the target with each sensor
    let mut cols = vec!["Appliances".to_string()];
    cols.extend(frame.feature_names(false));
    let r = pearson_matrix(&frame, &cols).unwrap();
    let mut ranked: Vec<(&String, f64)> = cols[1..].iter().zip(r[0][1..].iter().copied()).collect();
    ranked.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    println!("\nstrongest correlations with Appliances:");
    for (name, v) in ranked.iter().take(6) {
        println!("  {name:<12} {v:+.3}");
    }
}
