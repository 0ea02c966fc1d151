//! File formats, model files, reports and the command line around
//! [`snpassoc_core`].

pub use snpassoc_core as core;

pub mod cli;
pub mod config;
pub mod corpus_io;
pub mod models;
pub mod report;
pub mod resources;
pub mod trees;
