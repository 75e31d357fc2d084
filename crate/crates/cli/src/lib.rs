// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment orchestration for the `natfim` command-line tool.

pub mod config;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod verify;

pub use config::{ExperimentConfig, Mode};
pub use error::{CliError, CliResult};
