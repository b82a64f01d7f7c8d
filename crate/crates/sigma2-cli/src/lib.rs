//! Library half of the `sigma2` binary, so the job schema can be re-parsed in tests.

pub mod job;
pub mod run;
