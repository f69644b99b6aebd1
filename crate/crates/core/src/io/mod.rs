//! Configuration files, snapshots and reports.

pub mod config;
pub mod report;
pub mod snapshot;
pub mod trajectory;

pub use config::{parse_config, parse_config_str};
pub use report::{write_norm_table, write_norm_table_file, Provenance, RunReport};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, snapshot_to_csv, write_snapshot};
pub use trajectory::{read_trajectory, write_trajectory};
