//! The `quorder` command line tool.
//!
//! Everything lives in the library so integration tests can reuse the
//! model loader and formatter; `main` only forwards to [`main_entry`].

pub mod app;
pub mod model;
pub mod report;

pub use app::{main_entry, Cli, Command, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
pub use model::{LoadedModel, ModelError, ModelFile};
