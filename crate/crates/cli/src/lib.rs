//! Pipeline commands and configuration for the `srclog` binary.

pub mod commands;
pub mod config;
