//! Configuration, initial data, run orchestration and file I/O behind the
//! `hermion` binary.

mod config;
mod datum;
mod kernel_file;
mod output;
mod run;
mod verify;

pub use config::{BasisConfig, OutputConfig, RunConfig, VerifyConfig, VERSION};
pub use datum::{make_datum, Coefficient, Datum, DatumSpec, Point, RoughTail, PARSEVAL_TOLERANCE};
pub use kernel_file::load_grid_kernel;
pub use output::{read_trace, write_coefficients, TraceHeader, TraceWriter, PLOT_FILE, SNAPSHOT_DIR, TRACE_FILE};
pub use run::{config_datum, run_evolve, run_norm, run_report, EvolveSummary, TraceSummary};
pub use verify::{
    run_verify, thread_cap, write_verify, CheckResult, VerifyReport, VerifyRun, CHECK_IDS, REPORT_FILE, THREADS_VAR,
    TIMINGS_FILE,
};
