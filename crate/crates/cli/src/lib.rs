//! Session interpreter and fuzzing harness behind the `jex` binary.

pub mod fuzz;
pub mod session;
