//! Command-line tool and HTTP service over `quiverforge-core`.

pub mod cli;
pub mod http;
pub mod ops;
pub mod session;
