//! IO, file formats, parallel drivers, and the `hjlab` command line tool.

pub mod cli;
pub mod drivers;
pub mod format;
pub mod report;
