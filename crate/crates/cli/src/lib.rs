//! File I/O, report rendering, and command implementations behind the
//! `cascade-noise` binary.

pub mod commands;
pub mod error;
pub mod input;
pub mod number;
pub mod output;

pub use error::CliError;
pub use output::{Format, RenderOptions};
