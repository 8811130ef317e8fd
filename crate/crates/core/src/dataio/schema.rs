use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    Feature,
    Target,
    Timestamp,
    RandomControl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSchema {
    pub name: String,
    pub unit: String,
    pub kind: ColumnKind,
}

impl ColumnSchema {
    pub fn new(name: impl Into<String>, unit: impl Into<String>, kind: ColumnKind) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
            kind,
        }
    }
}

pub const TIMESTAMP_COLUMN: &str = "date";
pub const TARGET_COLUMN: &str = "Appliances";
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%d %H:%M:%S";

/// Header of the appliances-energy sensor file, in file order.
pub const STANDARD_HEADER: [&str; 29] = [
    "date",
    "Appliances",
    "lights",
    "T1",
    "RH_1",
    "T2",
    "RH_2",
    "T3",
    "RH_3",
    "T4",
    "RH_4",
    "T5",
    "RH_5",
    "T6",
    "RH_6",
    "T7",
    "RH_7",
    "T8",
    "RH_8",
    "T9",
    "RH_9",
    "T_out",
    "Press_mm_hg",
    "RH_out",
    "Windspeed",
    "Visibility",
    "Tdewpoint",
    "rv1",
    "rv2",
];

/// Schema entry for a column of the standard file; unknown names become
/// unitless features.
pub fn standard_column(name: &str) -> ColumnSchema {
    let (unit, kind) = match name {
        TIMESTAMP_COLUMN => ("", ColumnKind::Timestamp),
        TARGET_COLUMN => ("Wh", ColumnKind::Target),
        "lights" => ("Wh", ColumnKind::Feature),
        "rv1" | "rv2" => ("unitless", ColumnKind::RandomControl),
        "T_out" | "Tdewpoint" => ("°C", ColumnKind::Feature),
        "RH_out" => ("%", ColumnKind::Feature),
        "Press_mm_hg" => ("mm Hg", ColumnKind::Feature),
        "Windspeed" => ("m/s", ColumnKind::Feature),
        "Visibility" => ("km", ColumnKind::Feature),
        n if n.starts_with("RH_") => ("%", ColumnKind::Feature),
        n if n.starts_with('T') && n[1..].chars().all(|c| c.is_ascii_digit()) && n.len() > 1 => {
            ("°C", ColumnKind::Feature)
        }
        _ => ("unitless", ColumnKind::Feature),
    };
    ColumnSchema::new(name, unit, kind)
}

pub fn standard_schema() -> Vec<ColumnSchema> {
    STANDARD_HEADER.iter().map(|n| standard_column(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_schema_has_one_target_and_timestamp() {
        let s = standard_schema();
        assert_eq!(s.iter().filter(|c| c.kind == ColumnKind::Target).count(), 1);
        assert_eq!(
            s.iter().filter(|c| c.kind == ColumnKind::Timestamp).count(),
            1
        );
        assert_eq!(
            s.iter()
                .filter(|c| c.kind == ColumnKind::RandomControl)
                .count(),
            2
        );
        assert_eq!(standard_column("T7").unit, "°C");
        assert_eq!(standard_column("RH_9").unit, "%");
        assert_eq!(standard_column("Appliances").unit, "Wh");
    }
}
