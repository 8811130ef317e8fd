//! Synthetic sensor tables with the exact layout of the appliances-energy
//! file. Used by the examples and tests when the public dataset is not on
//! disk. The target responds to occupancy, which leaks into lights, kitchen
//! humidity and a few room temperatures, so learners have real signal.

use std::path::Path;

use chrono::{Duration, NaiveDate, Timelike};
use rand::Rng as _;
use rand_distr::{Distribution, Exp, Normal};

use super::frame::{ColumnData, Frame};
use super::schema::{standard_schema, STANDARD_HEADER, TIMESTAMP_FORMAT};
use crate::error::{Error, Result};
use crate::seed;

pub fn synthetic_frame(n_rows: usize, seed_value: u64) -> Frame {
    let mut rng = seed::rng_for(seed_value, &[0x5EED]);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let spike = Exp::new(1.0 / 120.0).expect("positive rate");
    let start = NaiveDate::from_ymd_opt(2016, 1, 11)
        .and_then(|d| d.and_hms_opt(17, 0, 0))
        .expect("valid start");

    let width = STANDARD_HEADER.len();
    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(n_rows); width];
    let mut stamps = Vec::with_capacity(n_rows);

    let mut drift = 0.0f64;
    let mut humid_drift = 0.0f64;
    let mut occupancy = 0.3f64;
    for i in 0..n_rows {
        let t = start + Duration::minutes(10 * i as i64);
        stamps.push(t.format(TIMESTAMP_FORMAT).to_string());
        let hour = t.hour() as f64 + t.minute() as f64 / 60.0;
        let days = i as f64 / 144.0;
        let daily = (std::f64::consts::TAU * (hour - 9.0) / 24.0).sin();

        drift = 0.995 * drift + 0.08 * noise.sample(&mut rng);
        humid_drift = 0.99 * humid_drift + 0.3 * noise.sample(&mut rng);
        let base_activity = match hour {
            h if h < 6.0 => 0.05,
            h if h < 9.0 => 0.6,
            h if h < 17.0 => 0.3,
            h if h < 22.0 => 0.8,
            _ => 0.2,
        };
        occupancy = (0.85 * occupancy + 0.15 * base_activity + 0.05 * noise.sample(&mut rng))
            .clamp(0.0, 1.0);

        let t_out = 6.0 + 0.08 * days + 4.0 * daily + 3.0 * drift + 0.3 * noise.sample(&mut rng);
        let lights = if occupancy > 0.55 && !(9.0..17.0).contains(&hour) {
            (10.0 * (occupancy * 5.0).floor()).min(70.0)
        } else {
            0.0
        };
        let cooking = if (7.0..8.5).contains(&hour) || (18.0..20.0).contains(&hour) {
            occupancy
        } else {
            0.0
        };
        let appliances = 40.0
            + 90.0 * occupancy
            + 250.0 * cooking
            + 1.5 * lights
            + if rng.random::<f64>() < 0.06 { spike.sample(&mut rng) } else { 0.0 }
            + 12.0 * noise.sample(&mut rng);
        let appliances = (10.0 * (appliances / 10.0).round()).clamp(10.0, 1080.0);

        let mut row = vec![0.0; width];
        row[1] = appliances;
        row[2] = lights;
        for room in 0..9 {
            let offset = [0.0, -1.3, 0.6, -0.8, -2.1, -13.8, -1.4, 0.3, -2.2][room];
            let t_col = 3 + 2 * room;
            let temp = if room == 5 {
                t_out + 0.5 * noise.sample(&mut rng)
            } else {
                21.7 + offset
                    + 0.08 * t_out
                    + 0.6 * occupancy * f64::from(room < 3)
                    + 0.4 * daily
                    + 0.15 * noise.sample(&mut rng)
            };
            let rh = if room == 5 {
                (80.0 - 2.0 * t_out + 4.0 * noise.sample(&mut rng)).clamp(1.0, 99.9)
            } else {
                40.0 + humid_drift
                    + 8.0 * cooking * f64::from(room == 0 || room == 4)
                    + 0.5 * room as f64
                    + 0.5 * noise.sample(&mut rng)
            };
            row[t_col] = round3(temp);
            row[t_col + 1] = round3(rh);
        }
        row[21] = round3(t_out);
        row[22] = round3(755.0 + 6.0 * (days / 9.0).sin() + 0.3 * noise.sample(&mut rng));
        row[23] = round3((85.0 - 3.0 * daily * 4.0 + 3.0 * noise.sample(&mut rng)).clamp(24.0, 100.0));
        row[24] = round3((4.0 + 2.0 * noise.sample(&mut rng)).clamp(0.0, 14.0));
        row[25] = round3((40.0 + 10.0 * noise.sample(&mut rng)).clamp(1.0, 66.0));
        row[26] = round3(t_out - 3.5 + 0.5 * noise.sample(&mut rng));
        let rv = rng.random_range(0.005..49.997);
        row[27] = rv;
        row[28] = rv;
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }

    let columns = cols
        .into_iter()
        .enumerate()
        .map(|(j, v)| {
            if j == 0 {
                ColumnData::Text(std::mem::take(&mut stamps))
            } else {
                ColumnData::Numeric(v)
            }
        })
        .collect();
    Frame::new(standard_schema(), columns).expect("synthetic frame is well formed")
}

pub fn write_synthetic_csv(path: impl AsRef<Path>, n_rows: usize, seed_value: u64) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    synthetic_frame(n_rows, seed_value).write_csv(file)
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}
