//! Loading, describing and partitioning the appliances-energy sensor table.

pub mod calendar;
pub mod folds;
pub mod frame;
pub mod load;
pub mod schema;
pub mod stats;
pub mod synthetic;

pub use calendar::derive_calendar;
pub use folds::{make_folds, FoldPlan, Split};
pub use frame::{ColumnData, Design, Frame};
pub use load::{load_csv, read_csv, SchemaMode};
pub use schema::{ColumnKind, ColumnSchema};
pub use stats::{describe, pearson_matrix, write_stats_csv, ColumnStats};
pub use synthetic::{synthetic_frame, write_synthetic_csv};
