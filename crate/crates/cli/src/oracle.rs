// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact propagation of the linear (κ = 0) master equation through the
//! eigendecomposition of its 16×16 superoperator.
//!
//! The superoperator is assembled from Kronecker products, independently of
//! the generator code path, and diagonalized with a general complex
//! eigensolver. With row-major vectorization vec(AρB) = (A ⊗ Bᵀ) vec(ρ).

use faer::linalg::solvers::Solve;
use faer::Mat;
use nonassoc_tfim::operators::{build_tfim, embed, sigma_minus};
use nonassoc_tfim::qlinalg::kron;
use nonassoc_tfim::{ComplexMatrix, Site, SystemParams, C64};

use crate::error::{CliError, CliResult};

const DIM: usize = 4;
const SUPER: usize = DIM * DIM;

fn transpose(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.dim(), |i, j| m[(j, i)])
}

/// Superoperator of ρ̇ = −i[H,ρ] + Σ_a Γ₊^(a) D[σ₋^(a)]ρ (feedback omitted).
pub fn linear_superoperator(p: &SystemParams) -> CliResult<ComplexMatrix> {
    let id = ComplexMatrix::identity(DIM);
    let h = build_tfim(p);
    let mut sup = &kron(&h, &id) - &kron(&id, &transpose(&h));
    sup = sup.scale(C64::new(0.0, -1.0));
    for site in Site::ALL {
        let rate = p.gamma_plus[site.index()];
        let l = embed(&sigma_minus(), site)?;
        let lhl = l.adjoint().matmul(&l);
        let mut d = kron(&l, &l.conj());
        d.add_scaled(C64::new(-0.5, 0.0), &kron(&lhl, &id));
        d.add_scaled(C64::new(-0.5, 0.0), &kron(&id, &transpose(&lhl)));
        sup.add_scaled(C64::new(rate, 0.0), &d);
    }
    Ok(sup)
}

/// ρ(t) = U e^{Λt} U⁻¹ vec ρ(0) for a diagonalizable superoperator.
pub struct LiouvillianPropagator {
    eigenvalues: Vec<C64>,
    eigenvectors: Mat<C64>,
    coefficients: Vec<C64>,
}

impl LiouvillianPropagator {
    pub fn new(p: &SystemParams, rho0: &ComplexMatrix) -> CliResult<Self> {
        let sup = linear_superoperator(p)?;
        let a = Mat::<C64>::from_fn(SUPER, SUPER, |i, j| sup[(i, j)]);
        let eig = a
            .eigen()
            .map_err(|e| CliError::Numerical(nonassoc_tfim::Error::InvalidArgument(format!("superoperator eigendecomposition failed: {e:?}"))))?;
        let eigenvalues: Vec<C64> = eig.S().column_vector().iter().copied().collect();
        let eigenvectors = eig.U().to_owned();

        let mut rhs = Mat::<C64>::from_fn(SUPER, 1, |k, _| rho0[(k / DIM, k % DIM)]);
        eigenvectors.partial_piv_lu().solve_in_place(rhs.as_mut());
        let coefficients = (0..SUPER).map(|k| rhs[(k, 0)]).collect();
        Ok(Self { eigenvalues, eigenvectors, coefficients })
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigenvalues
    }

    pub fn state_at(&self, t: f64) -> ComplexMatrix {
        let weights: Vec<C64> = self
            .eigenvalues
            .iter()
            .zip(&self.coefficients)
            .map(|(l, c)| (l * t).exp() * c)
            .collect();
        ComplexMatrix::from_fn(DIM, |i, j| {
            let row = i * DIM + j;
            (0..SUPER).map(|k| self.eigenvectors[(row, k)] * weights[k]).sum()
        })
    }
}
