//! Library surface of the command-line driver, exposed for the end-to-end
//! test suite.

pub mod commands;
pub mod emit;
pub mod input;
pub mod report;
