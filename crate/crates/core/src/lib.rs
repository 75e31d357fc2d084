// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit transverse-field Ising model with amplitude damping and a
//! weak nonassociative feedback term derived from a twisted Poisson
//! structure on the spin phase space.
//!
//! The crate provides the small dense linear algebra it needs
//! ([`qlinalg`]), the model operators, bath kernels, the phase-space
//! associator machinery, the master-equation generator, an RK4 integrator
//! and the reported observables.

pub mod bath;
pub mod error;
pub mod generator;
pub mod integrator;
pub mod observables;
pub mod operators;
pub mod phase_space;
pub mod qlinalg;

pub use error::{Error, Result};
pub use generator::GeneratorContext;
pub use integrator::{evolve, IntegratorConfig, Trajectory, TrajectoryRecord};
pub use observables::{steady_state_summary, LogBase, SteadyStateSummary};
pub use operators::SystemParams;
pub use qlinalg::{ComplexMatrix, DensityMatrix, Site, C64};
