//! File formats, motion-capture ingestion, SVG plots and the command-line
//! front end for [`modboat_core`].

pub mod cli;
pub mod error;
pub mod mocap;
pub mod params;
pub mod plot;
pub mod runner;
pub mod tables;
pub mod trajectory_csv;

pub use error::FormatError;
