//! Verification and report harness over the counting/transform library:
//! set-family construction, the exact-law suite, ratio sweeps, and
//! machine-readable reports. The CLI in `main.rs` is a thin shell over
//! these modules.

pub mod checks;
pub mod config;
pub mod error;
pub mod eval;
pub mod family;
pub mod report;
pub mod sweep;

pub use checks::run_exact_suite;
pub use config::Config;
pub use error::{HarnessError, Result};
pub use eval::eval_row;
pub use family::{FamilySpec, TrinomDescriptor};
pub use report::{row_from_json_line, write_csv, write_jsonl, CheckOutcome, ReportRow};
pub use sweep::{default_plan, plan_from_config, replay, run_plan, PlanEntry};
