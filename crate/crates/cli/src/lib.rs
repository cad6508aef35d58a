//! File formats, command implementations and verification sweeps for the
//! `apportion` command-line tool.

pub mod app;
pub mod format;
pub mod names;
pub mod sweep;
