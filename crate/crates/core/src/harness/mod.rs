//! Scenario registry, Monte Carlo driver and table output.

mod config;
mod presets;
mod report;
mod run;

pub use config::{
    meta_preset, AlphaSpec, DgpConfig, EstimatorSpec, MetaSpec, PolicyConfig, ScenarioConfig, META_PRESETS,
};
pub use presets::{all_presets, preset, table_presets, DEFAULT_SEED, TABLES};
pub use report::{csv_records, emit_table, parse_csv, CsvRecord, TableFormat, CSV_HEADER};
pub use run::{
    run_prepared, run_replication, run_scenario, CellSummary, McSummary, PreparedScenario, ReplicationOutput, TruthSummary,
};
