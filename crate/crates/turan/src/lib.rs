//! Oracle, execution, reports and command-line front end on top of
//! `turan-core`.

pub mod certify;
pub mod cli;
pub mod exec;
pub mod oracle;
pub mod report;
pub mod runs;
pub mod suites;
