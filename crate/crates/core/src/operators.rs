// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli algebra, site embeddings, the two-site transverse-field Ising
//! Hamiltonian and the model parameters.
//!
//! Conventions: σ_z = diag(1, −1) with |0⟩ = (1, 0)ᵀ, and
//! σ₋ = ½(σ_x − iσ_y) = |1⟩⟨0|, so amplitude damping drives ⟨σ_z⟩ → −1.
//! ħ = 1 throughout.

use crate::error::{Error, Result};
use crate::qlinalg::{c, kron, ComplexMatrix, DensityMatrix, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match axis {
        Axis::X => ComplexMatrix::from_rows([[o, l], [l, o]]),
        Axis::Y => ComplexMatrix::from_rows([[o, -i], [i, o]]),
        Axis::Z => ComplexMatrix::from_rows([[l, o], [o, -l]]),
    }
}

/// ½(σ_x − iσ_y).
pub fn sigma_minus() -> ComplexMatrix {
    (&pauli(Axis::X) - &pauli(Axis::Y).scale(c(0.0, 1.0))).scale_re(0.5)
}

/// ½(σ_x + iσ_y).
pub fn sigma_plus() -> ComplexMatrix {
    sigma_minus().adjoint()
}

/// Lifts a single-qubit operator onto `site` of the two-qubit space.
pub fn embed(op: &ComplexMatrix, site: Site) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    let id = ComplexMatrix::identity(2);
    Ok(match site {
        Site::One => kron(op, &id),
        Site::Two => kron(&id, op),
    })
}

/// `embed(pauli(axis), site)`.
pub fn site_pauli(axis: Axis, site: Site) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match site {
        Site::One => kron(&pauli(axis), &id),
        Site::Two => kron(&id, &pauli(axis)),
    }
}

/// Parameters of the two-site model and its local baths.
///
/// Per-site arrays are indexed by [`Site::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParams {
    /// Ising coupling J.
    pub j: f64,
    pub h1: f64,
    pub h2: f64,
    /// System–bath coupling prefactors g_a.
    pub g: [f64; 2],
    /// Emission rates Γ₊^(a).
    pub gamma_plus: [f64; 2],
    /// Dispersive shifts ε₊^(a).
    pub eps_plus: [f64; 2],
    /// Absorption rates Γ₋^(a); zero in the vacuum (T = 0) limit.
    pub gamma_minus: [f64; 2],
    /// Absorption-channel dispersive shifts ε₋^(a); zero at T = 0.
    pub eps_minus: [f64; 2],
    /// Nonassociativity strengths κ_a.
    pub kappa: [f64; 2],
}

impl Default for SystemParams {
    fn default() -> Self {
        Self::weak_coupling()
    }
}

impl SystemParams {
    /// J = 1, h = 0.25, g = 0.2, Γ₊ = 0.05, ε₊ = 0.01, T = 0, κ = 0.
    pub fn weak_coupling() -> Self {
        Self {
            j: 1.0,
            h1: 0.25,
            h2: 0.25,
            g: [0.2; 2],
            gamma_plus: [0.05; 2],
            eps_plus: [0.01; 2],
            gamma_minus: [0.0; 2],
            eps_minus: [0.0; 2],
            kappa: [0.0; 2],
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = [kappa; 2];
        self
    }

    /// Sets h₁ = h₂ = `h`.
    pub fn with_field(mut self, h: f64) -> Self {
        self.h1 = h;
        self.h2 = h;
        self
    }

    pub fn field(&self, site: Site) -> f64 {
        match site {
            Site::One => self.h1,
            Site::Two => self.h2,
        }
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.gamma_minus == [0.0; 2] && self.eps_minus == [0.0; 2]
    }

    /// Feedback strength λ_a = (g_a²/16)·ε₊^(a)·κ_a.
    pub fn feedback_strength(&self, site: Site) -> f64 {
        let a = site.index();
        self.g[a] * self.g[a] / 16.0 * self.eps_plus[a] * self.kappa[a]
    }

    /// λ_a / Γ₊^(a), the dimensionless feedback ratio.
    pub fn lambda_over_gamma(&self, site: Site) -> f64 {
        self.feedback_strength(site) / self.gamma_plus[site.index()]
    }

    pub fn validate(&self) -> Result<()> {
        let scalars = [self.j, self.h1, self.h2];
        let arrays = [self.g, self.gamma_plus, self.eps_plus, self.gamma_minus, self.eps_minus, self.kappa];
        if scalars.iter().chain(arrays.iter().flatten()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("system parameters must be finite".into()));
        }
        if self.gamma_plus.iter().chain(&self.gamma_minus).any(|&g| g < 0.0) {
            return Err(Error::InvalidArgument("damping rates must be non-negative".into()));
        }
        Ok(())
    }
}

/// H = −J σ_z⊗σ_z − (h₁/2) σ_x⊗I − (h₂/2) I⊗σ_x.
pub fn build_tfim(p: &SystemParams) -> ComplexMatrix {
    let zz = kron(&pauli(Axis::Z), &pauli(Axis::Z));
    let mut h = zz.scale_re(-p.j);
    h.add_scaled(c(-0.5 * p.h1, 0.0), &site_pauli(Axis::X, Site::One));
    h.add_scaled(c(-0.5 * p.h2, 0.0), &site_pauli(Axis::X, Site::Two));
    h
}

/// |+⟩⟨+| ⊗ |+⟩⟨+|.
pub fn initial_plus_product() -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix::from_fn(4, |_, _| c(0.25, 0.0)))
}

/// Computational basis projector |k⟩⟨k| on `dim` levels.
pub fn basis_projector(dim: usize, k: usize) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    m[(k, k)] = c(1.0, 0.0);
    DensityMatrix::new_unchecked(m)
}
