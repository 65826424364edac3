//! File formats, report rendering and the `pairdisc` command-line tool on top
//! of [`pairdisc_core`].

pub mod cli;
mod error;
pub mod io;
pub mod report;

pub use error::{Error, Result};
