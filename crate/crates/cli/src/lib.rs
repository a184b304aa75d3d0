//! Library surface of the batch tool: instance and report schemas, the
//! command implementations, and the deterministic generators. The binary
//! in `main.rs` is a thin I/O wrapper so that integration tests can drive
//! everything in-process.

pub mod commands;
pub mod gen;
pub mod instance;
pub mod report;

pub use commands::{
    run_extend, run_fuzz, run_hahn, run_validate, AlgebraMode, CliError, FuzzCheck,
    FuzzOptions,
};
pub use instance::{
    cube_skeleton, parse_instance, resolve_instance, to_canonical_json, InputError,
    InstanceFile, ResolvedInstance,
};
pub use report::{Outcome, RunReport};
