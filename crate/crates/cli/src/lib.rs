//! Pipeline stages behind the `eigenprog` binary.

pub mod commands;
pub mod config;
pub mod selftest;
pub mod workdir;
