//! Command-line front end and benchmark harness for `charforge`.

pub mod bench;
pub mod cli;
pub mod svg;
