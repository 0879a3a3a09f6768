//! Command-line harness for the flexkit solvers: problem specifications,
//! trace files, benchmark orchestration and report output.

pub mod bench;
pub mod problem;
pub mod reference;
pub mod setup;
pub mod trace_io;

pub use bench::{run_benchmark, BenchmarkConfig, Summary, SummaryRow};
pub use problem::{BuiltProblem, Lambda, ProblemSpec};
pub use setup::{DirectionKind, MethodSetup};
pub use trace_io::{read_trace_csv, write_trace_csv, TraceRow};
