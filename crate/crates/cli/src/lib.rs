//! Dataset formats, synthetic data generation, evaluation pipelines and the
//! command-line front end for the evaluation library.

pub mod cli;
pub mod formats;
pub mod manifest;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use cli::run_cli;
