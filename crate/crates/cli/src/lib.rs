//! Session format, command surface and bundled corpus for the factorization
//! engine. The binary in `main.rs` is a thin wrapper over these modules.

pub mod commands;
pub mod corpus;
pub mod parser;
pub mod report;
pub mod session;
