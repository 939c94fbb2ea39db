//! Scenario files in, data tables and reports out.
//!
//! Exit statuses used by the command-line front end: 0 success, 2 validation error,
//! 3 runtime error, 4 fit did not converge.

mod run;
mod scenario;

pub use run::{run_scenario, RunError, RunOutcome, Table};
pub use scenario::{
    parse_scenario, FlopKind, FramesConfig, Format, GridConfig, Mode, NamedState, NoiseConfig, OutputConfig,
    ProtocolSection, RecordedState, Scenario, ScenarioError, SweepConfig, TGrid, TrialsConfig, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
