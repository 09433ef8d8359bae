//! Std companion to `cocoa-core`: flight import, dataset files, answer
//! files, reports and the subcommands behind the `cocoa` binary.

pub mod answers;
pub mod commands;
pub mod dataset;
pub mod exec;
pub mod flights;
pub mod report;
