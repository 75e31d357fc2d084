// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Right-hand side of the nonlinear master equation
//!
//! ρ̇ = −i[H, ρ] + Σ_a Γ₊^(a) D[σ₋^(a)]ρ + N[ρ],   N[ρ] = −Σ_a λ_a r_z^(a) σ_z^(a),
//!
//! together with the general six-associator form it reduces to at T = 0
//! and the Bohr-frequency decomposition of jump operators.

use crate::bath::{lambda_coefficients, BathKernels};
use crate::error::{Error, Result};
use crate::operators::{build_tfim, embed, sigma_minus, sigma_plus, site_pauli, Axis, SystemParams};
use crate::qlinalg::{c, hermitian_eig, ComplexMatrix, Site, C64};

/// A jump operator L with its rate and cached L†L.
#[derive(Clone, Debug)]
pub struct JumpOperator {
    pub site: Site,
    pub op: ComplexMatrix,
    pub rate: f64,
    lhl: ComplexMatrix,
}

impl JumpOperator {
    pub fn new(site: Site, op: ComplexMatrix, rate: f64) -> Self {
        let lhl = op.adjoint().matmul(&op);
        Self { site, op, rate, lhl }
    }
}

/// Everything the generator needs, fixed at construction.
#[derive(Clone, Debug)]
pub struct GeneratorContext {
    params: SystemParams,
    hamiltonian: ComplexMatrix,
    jumps: Vec<JumpOperator>,
    lambda: [f64; 2],
    sigma_z: [ComplexMatrix; 2],
    baths: [BathKernels; 2],
    fast: FastGenerator,
}

/// Fixed-size 4×4 complex matrix used on the hot path.
pub(crate) type M4 = [[C64; 4]; 4];

pub(crate) fn to_m4(m: &ComplexMatrix) -> M4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

pub(crate) fn from_m4(m: &M4) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| m[i][j])
}

/// The generator rewritten for the two-qubit hot path:
/// −i(H_eff ρ − ρ H_eff†) + Σ Γ LρL† + N[ρ], with H_eff = H − (i/2) Σ Γ L†L.
#[derive(Clone, Debug)]
struct FastGenerator {
    h_eff: M4,
    h_eff_adj: M4,
    /// (Γ, L, L†) per jump.
    jumps: Vec<(f64, M4, M4)>,
    /// Diagonal of σ_z^(a).
    z_diag: [[f64; 4]; 2],
}

impl FastGenerator {
    fn new(h: &ComplexMatrix, jumps: &[JumpOperator]) -> Self {
        let mut h_eff = h.clone();
        for j in jumps {
            h_eff.add_scaled(c(0.0, -0.5 * j.rate), &j.lhl);
        }
        let z = |site: Site| {
            let sz = site_pauli(Axis::Z, site);
            [0, 1, 2, 3].map(|k| sz[(k, k)].re)
        };
        Self {
            h_eff: to_m4(&h_eff),
            h_eff_adj: to_m4(&h_eff.adjoint()),
            jumps: jumps.iter().map(|j| (j.rate, to_m4(&j.op), to_m4(&j.op.adjoint()))).collect(),
            z_diag: [z(Site::One), z(Site::Two)],
        }
    }
}

#[inline]
fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            if aik.re == 0.0 && aik.im == 0.0 {
                continue;
            }
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// [`rhs`] on fixed-size storage, with λ_a taken from `ctx`.
pub(crate) fn rhs_m4(rho: &M4, ctx: &GeneratorContext) -> M4 {
    let f = &ctx.fast;
    let left = mul4(&f.h_eff, rho);
    let right = mul4(rho, &f.h_eff_adj);
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let d = left[i][j] - right[i][j];
            out[i][j] = c(d.im, -d.re);
        }
    }
    for (rate, l, l_adj) in &f.jumps {
        let jump = mul4(&mul4(l, rho), l_adj);
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] += jump[i][j] * *rate;
            }
        }
    }
    for (a, z) in f.z_diag.iter().enumerate() {
        let lambda = ctx.lambda[a];
        if lambda != 0.0 {
            let r_z: f64 = (0..4).map(|k| rho[k][k].re * z[k]).sum();
            for k in 0..4 {
                out[k][k].re -= lambda * r_z * z[k];
            }
        }
    }
    out
}

impl GeneratorContext {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        let mut jumps = Vec::new();
        for site in Site::ALL {
            let a = site.index();
            if params.gamma_plus[a] > 0.0 {
                jumps.push(JumpOperator::new(site, embed(&sigma_minus(), site)?, params.gamma_plus[a]));
            }
            if params.gamma_minus[a] > 0.0 {
                jumps.push(JumpOperator::new(site, embed(&sigma_plus(), site)?, params.gamma_minus[a]));
            }
        }
        let bath = |a: usize| {
            BathKernels::from_rates(
                params.gamma_plus[a],
                params.eps_plus[a],
                params.gamma_minus[a],
                params.eps_minus[a],
            )
        };
        let hamiltonian = build_tfim(params);
        let fast = FastGenerator::new(&hamiltonian, &jumps);
        Ok(Self {
            params: params.clone(),
            hamiltonian,
            jumps,
            lambda: [params.feedback_strength(Site::One), params.feedback_strength(Site::Two)],
            sigma_z: [site_pauli(Axis::Z, Site::One), site_pauli(Axis::Z, Site::Two)],
            baths: [bath(0), bath(1)],
            fast,
        })
    }

    /// Replaces the bath kernels used by [`general_linear_generator`]
    /// (for instance kernels derived from a spectral density).
    pub fn with_baths(mut self, baths: [BathKernels; 2]) -> Self {
        self.baths = baths;
        self
    }

    /// Multiplies every λ_a by `scale`. A scale of −1 flips the sign of the
    /// feedback; used to check that the verification harness notices.
    pub fn with_feedback_scale(mut self, scale: f64) -> Self {
        self.lambda = self.lambda.map(|l| l * scale);
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jump_operators(&self) -> &[JumpOperator] {
        &self.jumps
    }

    pub fn lambda(&self, site: Site) -> f64 {
        self.lambda[site.index()]
    }

    pub fn sigma_z(&self, site: Site) -> &ComplexMatrix {
        &self.sigma_z[site.index()]
    }

    pub fn bath(&self, site: Site) -> &BathKernels {
        &self.baths[site.index()]
    }

    /// r_z^(a) = Re Tr(ρ σ_z^(a)).
    pub fn r_z(&self, rho: &ComplexMatrix, site: Site) -> f64 {
        // σ_z^(a) is diagonal, so only the diagonal of ρ contributes.
        let sz = &self.sigma_z[site.index()];
        (0..4).map(|k| rho[(k, k)].re * sz[(k, k)].re).sum()
    }
}

/// D[L]ρ = LρL† − ½(L†Lρ + ρL†L).
pub fn dissipator(l: &ComplexMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if l.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: l.dim() });
    }
    let lhl = l.adjoint().matmul(l);
    Ok(dissipator_cached(l, &lhl, rho))
}

fn dissipator_cached(l: &ComplexMatrix, lhl: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let mut out = l.matmul(rho).matmul(&l.adjoint());
    out.add_scaled(c(-0.5, 0.0), &lhl.anticommutator(rho));
    out
}

/// Closed-form associators A₁ … A₆ of one site (index 0 holds A₁).
///
/// A₁ = A₃ = A₆ = −X, A₂ = A₄ = A₅ = +X, with X = C₀ r_z κ σ_z and C₀ = −i g²/48.
pub fn closed_form_associators(rho: &ComplexMatrix, params: &SystemParams, site: Site) -> [ComplexMatrix; 6] {
    let x = associator_x(rho, params, site);
    let minus_x = x.scale_re(-1.0);
    [minus_x.clone(), x.clone(), minus_x.clone(), x.clone(), x, minus_x]
}

/// X^(a) = C₀^(a) r_z^(a) κ_a σ_z^(a).
pub fn associator_x(rho: &ComplexMatrix, params: &SystemParams, site: Site) -> ComplexMatrix {
    let a = site.index();
    let sz = site_pauli(Axis::Z, site);
    let r_z = crate::qlinalg::expectation(rho, &sz).map(|z| z.re).unwrap_or(0.0);
    let c0 = c(0.0, -params.g[a] * params.g[a] / 48.0);
    sz.scale(c0 * r_z * params.kappa[a])
}

/// N[ρ] = −Σ_a λ_a r_z^(a) σ_z^(a).
pub fn feedback(rho: &ComplexMatrix, ctx: &GeneratorContext) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4);
    for site in Site::ALL {
        let lambda = ctx.lambda(site);
        if lambda != 0.0 {
            out.add_scaled(c(-lambda * ctx.r_z(rho, site), 0.0), ctx.sigma_z(site));
        }
    }
    out
}

fn coherent_and_dissipative(rho: &ComplexMatrix, ctx: &GeneratorContext) -> ComplexMatrix {
    let mut out = ctx.hamiltonian.commutator(rho).scale(c(0.0, -1.0));
    for jump in &ctx.jumps {
        out.add_scaled(c(jump.rate, 0.0), &dissipator_cached(&jump.op, &jump.lhl, rho));
    }
    out
}

/// Full right-hand side −i[H,ρ] + Σ_a Γ D[L_a]ρ + N[ρ].
///
/// The jump set holds σ₋^(a) at rate Γ₊^(a), plus σ₊^(a) at rate Γ₋^(a) when
/// an absorption channel is configured (never at T = 0).
pub fn rhs(rho: &ComplexMatrix, ctx: &GeneratorContext) -> ComplexMatrix {
    if rho.dim() == 4 {
        return from_m4(&rhs_m4(&to_m4(rho), ctx));
    }
    let mut out = coherent_and_dissipative(rho, ctx);
    out += &feedback(rho, ctx);
    out
}

/// The six-associator form: the commutator and dissipator core plus
/// Σ_a Σ_j Λ_j^(a) A_j^(a), with Λ_j from the bath kernels of the context.
///
/// Equals [`rhs`] whenever K₋ = 0. Finite-temperature use is experimental.
pub fn general_linear_generator(rho: &ComplexMatrix, ctx: &GeneratorContext) -> ComplexMatrix {
    let mut out = coherent_and_dissipative(rho, ctx);
    for site in Site::ALL {
        let lambdas = lambda_coefficients(ctx.bath(site));
        // Λ₁(A₁+A₃+A₆) + Λ₂(A₂+A₄+A₅) collapses to 3(Λ₂ − Λ₁)X.
        let x = associator_x(rho, &ctx.params, site);
        out.add_scaled((lambdas[1] - lambdas[0]) * 3.0, &x);
    }
    out
}

/// One Bohr-frequency component of a system operator.
#[derive(Clone, Debug)]
pub struct BohrComponent {
    pub omega: f64,
    pub op: ComplexMatrix,
}

/// Splits `s` into S(ω) = Σ_{E_b − E_a = ω} P_a S P_b over the eigenprojectors
/// of `h`, so that [h, S(ω)] = −ω S(ω) and S(t) = Σ_ω e^{−iωt} S(ω).
/// For h = σ_z the lowering operator σ₋ sits at ω = +2.
///
/// Energies closer than 1e-9·max|E| share a projector, and frequencies
/// closer than that are merged. Components that vanish are dropped;
/// frequencies come back in ascending order.
pub fn bohr_decompose(h: &ComplexMatrix, s: &ComplexMatrix) -> Result<Vec<BohrComponent>> {
    if h.dim() != s.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: s.dim() });
    }
    let eig = hermitian_eig(h)?;
    let scale = eig.values.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);

    // Group (ascending) eigenvalues into degenerate levels.
    let mut levels: Vec<(f64, ComplexMatrix)> = Vec::new();
    for (k, &e) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        let proj = ComplexMatrix::outer(&v, &v)?;
        match levels.last_mut() {
            Some((e0, p)) if (e - *e0).abs() <= tol => *p += &proj,
            _ => levels.push((e, proj)),
        }
    }

    let mut comps: Vec<BohrComponent> = Vec::new();
    let negligible = 1e-14 * s.max_abs().max(f64::MIN_POSITIVE);
    for (ea, pa) in &levels {
        for (eb, pb) in &levels {
            let block = pa.matmul(s).matmul(pb);
            if block.max_abs() <= negligible {
                continue;
            }
            let omega = eb - ea;
            match comps.iter_mut().find(|b| (b.omega - omega).abs() <= tol) {
                Some(existing) => existing.op += &block,
                None => comps.push(BohrComponent { omega, op: block }),
            }
        }
    }
    comps.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    Ok(comps)
}

/// Convenience: the component list as (ω, S(ω)) pairs.
pub fn bohr_pairs(h: &ComplexMatrix, s: &ComplexMatrix) -> Result<Vec<(f64, ComplexMatrix)>> {
    Ok(bohr_decompose(h, s)?.into_iter().map(|b| (b.omega, b.op)).collect())
}
