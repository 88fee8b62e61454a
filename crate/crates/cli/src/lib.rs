//! Library surface of the command-line tool: JSON document schemas and the
//! command implementations, kept separate from argument parsing so tests
//! can drive them directly.

pub mod commands;
pub mod docs;

pub use commands::{
    cmd_classify, cmd_oracle, cmd_random, cmd_reduce, cmd_selftest, CliError,
    ORACLE_DEFAULT_BUDGET,
};
pub use docs::{
    CheckDocument, Entry, FormDocument, MatrixDocument, OrbitReportDocument,
    OrbitSummaryDocument, ResultDocument,
};
