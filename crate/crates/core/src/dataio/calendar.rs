use chrono::{Datelike, NaiveDateTime};

use super::frame::Frame;
use super::schema::{ColumnKind, ColumnSchema, TIMESTAMP_FORMAT};
use crate::error::{Error, Result};

pub const WEEK_STATUS_COLUMN: &str = "Ws";
pub const DAY_OF_WEEK_COLUMN: &str = "Day";

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT).ok()
}

/// Day of week with Monday = 1 and Sunday = 7.
pub fn day_of_week(t: &NaiveDateTime) -> u32 {
    t.weekday().number_from_monday()
}

/// 1 on weekdays, 0 on Saturday and Sunday.
pub fn week_status(t: &NaiveDateTime) -> u32 {
    u32::from(day_of_week(t) <= 5)
}

/// Adds the `Ws` (week status) and `Day` (day of week) feature columns.
/// Every timestamp is parsed, masked rows included.
pub fn derive_calendar(frame: &Frame) -> Result<Frame> {
    let stamps = frame.timestamps();
    let mut ws = Vec::with_capacity(stamps.len());
    let mut day = Vec::with_capacity(stamps.len());
    for (i, s) in stamps.iter().enumerate() {
        let t = parse_timestamp(s).ok_or_else(|| Error::Timestamp {
            row: i + 2,
            value: s.clone(),
        })?;
        ws.push(f64::from(week_status(&t)));
        day.push(f64::from(day_of_week(&t)));
    }
    frame
        .with_column(
            ColumnSchema::new(WEEK_STATUS_COLUMN, "1,0", ColumnKind::Feature),
            ws,
        )?
        .with_column(
            ColumnSchema::new(DAY_OF_WEEK_COLUMN, "[1,7]", ColumnKind::Feature),
            day,
        )
}
