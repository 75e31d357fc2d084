// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid site index {0} (expected 1 or 2)")]
    InvalidSite(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is not on the unit sphere (norm = {norm})")]
    NotUnitVector { norm: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_diagonal:e})")]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid state: trace {trace:e} too small to renormalize")]
    InvalidState { trace: f64 },

    #[error("numerical blow-up at step {step}: non-finite entries in the state")]
    NumericalBlowup { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
