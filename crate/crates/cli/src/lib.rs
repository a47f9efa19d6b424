//! File-driven front end for the `ogpd` library: a TOML text format for
//! ordered groupoids, functors, subgroupoids, actions and homotopy squares,
//! and the commands behind the `ogpd` binary.

pub mod error;
pub mod format;
pub mod model;
pub mod report;
pub mod run;

pub use error::{CliError, Location};
pub use format::{parse, GroupoidFile, Writer};
pub use model::{check_all, same_functor, same_structure, Model};
pub use report::{RunReport, Verdict};
pub use run::{run, Cli, Command, Outcome};
