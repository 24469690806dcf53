//! Config-driven parameter sweeps, emitters and Wigner grids.

pub mod config;
pub mod emit;
pub mod run;
pub mod wigner;

pub use config::{parse_config, Axis, ConfigError, MeasureId, MeasureSpec, OutputFormat, SweepConfig};
pub use emit::{emit, emit_csv, emit_json};
pub use run::{evaluate_measure, evaluate_point, run_sweep, Cell, SweepGrid, CONVERGENCE_TOL};
pub use wigner::{emit_wigner_csv, wigner_command, WignerOutput};
