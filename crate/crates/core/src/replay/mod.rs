//! Mechanical replay of proof scripts.

mod engine;
mod render;
mod script;
mod state;
mod sweep;
mod table;

pub use engine::{
    replay, replay_with, CaseReport, CertRecord, ReplayOptions, ReplayReport, SplitSummary,
    StepReport, TableRecord, AXIOM_PATH_COMPOSITION, AXIOM_ZERO_K4,
};
pub use render::{replay_markdown, sweep_markdown, table_markdown};
pub use script::*;
pub use sweep::{
    sweep_k10, SilentClass, SweepMode, SweepOptions, SweepReport, FULL_QUOTIENT_CLASSES,
    SILENT_KEEP,
};
pub use table::{run_table, RowReport, TableReport};
