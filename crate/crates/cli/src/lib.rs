//! Command-line tools and the HTTP play service for the Juniper Green engine.

pub mod commands;
pub mod engine;
pub mod server;
