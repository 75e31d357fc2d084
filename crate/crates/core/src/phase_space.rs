// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Spin phase space: the Stratonovich–Weyl kernel and symbol map on S²,
//! the leading-order associator of a twisted Poisson structure in the
//! ambient coordinates σ = √3·n, and a finite-difference verifier for the
//! Jacobiator of the magnetic-monopole Poisson bracket.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operators::{pauli, Axis};
use crate::qlinalg::{c, kron, ComplexMatrix, Site, C64};

const UNIT_TOL: f64 = 1e-12;
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// A point on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochPoint {
    n: [f64; 3],
}

impl BlochPoint {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = norm3(&n);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self { n })
    }

    /// Projects a non-zero vector onto the sphere.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(&v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self { n: v.map(|x| x / norm) })
    }

    /// Polar angle θ from +z, azimuth φ.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self { n: [st * cp, st * sp, ct] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.n
    }

    /// Ambient coordinates σ = √3·n.
    pub fn sigma_coordinates(&self) -> [f64; 3] {
        self.n.map(|x| SQRT3 * x)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Δ(n) = ½(I + √3 n·σ).
pub fn sw_kernel(n: &BlochPoint) -> ComplexMatrix {
    let mut k = ComplexMatrix::identity(2).scale_re(0.5);
    for (axis, &ni) in Axis::ALL.iter().zip(&n.n) {
        k.add_scaled(c(0.5 * SQRT3 * ni, 0.0), &pauli(*axis));
    }
    k
}

/// Symbol Ã(n) = Tr[A Δ(n)] of a one-qubit operator, or Tr[A Δ(n¹)⊗Δ(n²)]
/// of a two-qubit operator when `n2` is given.
pub fn symbol(a: &ComplexMatrix, n1: &BlochPoint, n2: Option<&BlochPoint>) -> Result<C64> {
    let kernel = match (a.dim(), n2) {
        (2, None) => sw_kernel(n1),
        (4, Some(n2)) => kron(&sw_kernel(n1), &sw_kernel(n2)),
        (2, Some(_)) => {
            return Err(Error::InvalidArgument("one-qubit operator takes a single point".into()));
        }
        (4, None) => {
            return Err(Error::InvalidArgument("two-qubit operator needs two points".into()));
        }
        (d, _) => return Err(Error::DimensionMismatch { expected: 2, found: d }),
    };
    crate::qlinalg::expectation(&kernel, a)
}

/// Linear extension of a one-qubit symbol off the sphere:
/// Ã(σ) = Tr[A·½(I + σ·σ⃗)], which agrees with [`symbol`] at σ = √3·n.
pub fn ambient_symbol(a: &ComplexMatrix, sigma: [f64; 3]) -> Result<C64> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.dim() });
    }
    let mut k = ComplexMatrix::identity(2).scale_re(0.5);
    for (axis, &s) in Axis::ALL.iter().zip(&sigma) {
        k.add_scaled(c(0.5 * s, 0.0), &pauli(*axis));
    }
    crate::qlinalg::expectation(&k, a)
}

/// Inverse symbol map: recovers a one-qubit operator from its symbols at
/// +x̂, −x̂, +ŷ and +ẑ.
pub fn reconstruct_from_symbols(at_px: C64, at_mx: C64, at_py: C64, at_pz: C64) -> ComplexMatrix {
    let a0 = (at_px + at_mx) * 0.5;
    let ax = (at_px - at_mx) / (2.0 * SQRT3);
    let ay = (at_py - a0) / SQRT3;
    let az = (at_pz - a0) / SQRT3;
    let mut m = ComplexMatrix::identity(2).scale(a0);
    m.add_scaled(ax, &pauli(Axis::X));
    m.add_scaled(ay, &pauli(Axis::Y));
    m.add_scaled(az, &pauli(Axis::Z));
    m
}

/// Gradient of a symbol with respect to the ambient coordinates σ^(a) of one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymbolGradient {
    pub site: Site,
    pub grad: [C64; 3],
}

impl SymbolGradient {
    pub fn new(site: Site, grad: [C64; 3]) -> Self {
        Self { site, grad }
    }

    pub fn real(site: Site, grad: [f64; 3]) -> Self {
        Self { site, grad: grad.map(|x| c(x, 0.0)) }
    }

    pub fn is_finite(&self) -> bool {
        self.grad.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// ∇_σ of the symbol of a one-qubit operator A = a₀I + a⃗·σ⃗, i.e. a⃗ = Tr(Aσ⃗)/2.
pub fn operator_gradient(a: &ComplexMatrix, site: Site) -> Result<SymbolGradient> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.dim() });
    }
    let mut grad = [c(0.0, 0.0); 3];
    for (g, axis) in grad.iter_mut().zip(Axis::ALL) {
        *g = crate::qlinalg::expectation(a, &pauli(axis))? * 0.5;
    }
    Ok(SymbolGradient { site, grad })
}

/// Gradients of the jump operator S = g·σ₋ and of S† on `site`:
/// ∇S = g(½, −i/2, 0), ∇S† = g(½, i/2, 0).
pub fn jump_symbol_gradients(g: f64, site: Site) -> (SymbolGradient, SymbolGradient) {
    let s = SymbolGradient::new(site, [c(0.5 * g, 0.0), c(0.0, -0.5 * g), c(0.0, 0.0)]);
    let s_dag = SymbolGradient::new(site, [c(0.5 * g, 0.0), c(0.0, 0.5 * g), c(0.0, 0.0)]);
    (s, s_dag)
}

/// ∇_σ^(a) of the linearized product-state symbol
/// ¼(I⊗I + r¹·σ¹⊗I + I⊗r²·σ²), which is ¼·r^(a).
pub fn density_symbol_gradient(bloch: [f64; 3], site: Site) -> SymbolGradient {
    SymbolGradient::real(site, bloch.map(|x| 0.25 * x))
}

/// Bilinear cross product (no complex conjugation).
pub fn cross(a: &[C64; 3], b: &[C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Bilinear dot product (no complex conjugation).
pub fn dot(a: &[C64; 3], b: &[C64; 3]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Central-difference gradient of a scalar function of the ambient coordinates.
pub fn numerical_gradient(f: impl Fn([f64; 3]) -> C64, point: [f64; 3], step: f64) -> [C64; 3] {
    let mut grad = [c(0.0, 0.0); 3];
    for (i, g) in grad.iter_mut().enumerate() {
        let mut up = point;
        let mut down = point;
        up[i] += step;
        down[i] -= step;
        *g = (f(up) - f(down)) / (2.0 * step);
    }
    grad
}

/// Per-site coefficient χ^(a)(σ) of the twisted bivector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TwistField {
    /// χ^(a)(σ) = κ_a·σ_z.
    IsingAligned { kappa: [f64; 2] },
    /// Position-independent χ^(a).
    Uniform { chi: [f64; 2] },
}

impl TwistField {
    pub fn untwisted() -> Self {
        TwistField::Uniform { chi: [0.0; 2] }
    }

    pub fn chi(&self, site: Site, sigma: [f64; 3]) -> f64 {
        match self {
            TwistField::IsingAligned { kappa } => kappa[site.index()] * sigma[2],
            TwistField::Uniform { chi } => chi[site.index()],
        }
    }
}

/// Leading-order associator of three symbols,
/// [f, g, h]⋆ = (−i/6)·χ^(a)(σ)·(∇f × ∇g)·∇h (ħ = 1),
/// with all gradients taken on the same site a at ambient point `sigma`.
pub fn associator(
    f: &SymbolGradient,
    g: &SymbolGradient,
    h: &SymbolGradient,
    chi: &TwistField,
    sigma: [f64; 3],
) -> Result<C64> {
    if f.site != g.site || g.site != h.site {
        return Err(Error::InvalidArgument(format!(
            "associator gradients live on different sites ({}, {}, {})",
            f.site, g.site, h.site
        )));
    }
    let triple = dot(&cross(&f.grad, &g.grad), &h.grad);
    Ok(c(0.0, -1.0 / 6.0) * chi.chi(f.site, sigma) * triple)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// (1/4π)∮ f dΩ by Gauss–Legendre in cos θ (32 nodes) and a uniform
/// 64-point rule in φ.
pub fn sphere_average(f: impl Fn(&BlochPoint) -> C64) -> C64 {
    const N_THETA: usize = 32;
    const N_PHI: usize = 64;
    let (nodes, weights) = gauss_legendre(N_THETA);
    let mut acc = c(0.0, 0.0);
    for (&u, &w) in nodes.iter().zip(&weights) {
        let theta = u.acos();
        for k in 0..N_PHI {
            let phi = 2.0 * PI * k as f64 / N_PHI as f64;
            acc += f(&BlochPoint::from_angles(theta, phi)) * w;
        }
    }
    // Σw = 2 over cos θ, N_PHI points over 2π.
    acc / (2.0 * N_PHI as f64)
}

/// Levi-Civita symbol on 0-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

const JACOBIATOR_STEP: f64 = 1e-4;

/// Phase-space point (x₁, x₂, x₃, p₁, p₂, p₃).
type PhasePoint = [f64; 6];

/// Cyclic Jacobiator of the momenta under the magnetic Poisson bracket
/// {x_i, p_j} = δ_ij, {p_i, p_j} = q ε_ijk B_k(x), evaluated entirely by
/// finite differences of the bracket:
///
/// J = {{p_i, p_j}, p_k} + {{p_j, p_k}, p_i} + {{p_k, p_i}, p_j},
///
/// which equals q ε_ijk ∇·B. (The opposite nesting {p_i, {p_j, p_k}} + cyc.
/// is its negative.) Indices are 1-based.
pub fn monopole_jacobiator(
    b_field: impl Fn([f64; 3]) -> [f64; 3],
    q: f64,
    point: [f64; 3],
    indices: (usize, usize, usize),
) -> Result<f64> {
    let (i, j, k) = indices;
    if [i, j, k].iter().any(|&m| !(1..=3).contains(&m)) {
        return Err(Error::InvalidArgument(format!("momentum indices {indices:?} must lie in 1..=3")));
    }
    let (i, j, k) = (i - 1, j - 1, k - 1);
    let z: PhasePoint = [point[0], point[1], point[2], 0.0, 0.0, 0.0];
    let momentum = |m: usize| move |z: &PhasePoint| z[3 + m];
    let b = &b_field;

    let outer = |a: usize, bb: usize, cc: usize| {
        let inner = |y: &PhasePoint| poisson_bracket(&momentum(a), &momentum(bb), y, b, q);
        poisson_bracket(&inner, &momentum(cc), &z, b, q)
    };
    Ok(outer(i, j, k) + outer(j, k, i) + outer(k, i, j))
}

fn poisson_bracket(
    f: &dyn Fn(&PhasePoint) -> f64,
    g: &dyn Fn(&PhasePoint) -> f64,
    z: &PhasePoint,
    b_field: &dyn Fn([f64; 3]) -> [f64; 3],
    q: f64,
) -> f64 {
    let df = phase_gradient(f, z);
    let dg = phase_gradient(g, z);
    let bx = b_field([z[0], z[1], z[2]]);
    let mut acc = 0.0;
    for m in 0..3 {
        acc += df[m] * dg[3 + m] - df[3 + m] * dg[m];
    }
    for m in 0..3 {
        for n in 0..3 {
            for (l, bl) in bx.iter().enumerate() {
                let eps = levi_civita(m, n, l);
                if eps != 0.0 {
                    acc += q * eps * bl * df[3 + m] * dg[3 + n];
                }
            }
        }
    }
    acc
}

// Central differences at steps h and h/2 combined by one Richardson pass.
fn phase_gradient(f: &dyn Fn(&PhasePoint) -> f64, z: &PhasePoint) -> [f64; 6] {
    let central = |idx: usize, h: f64| {
        let mut up = *z;
        let mut down = *z;
        up[idx] += h;
        down[idx] -= h;
        (f(&up) - f(&down)) / (2.0 * h)
    };
    let mut grad = [0.0; 6];
    for (idx, g) in grad.iter_mut().enumerate() {
        let coarse = central(idx, JACOBIATOR_STEP);
        let fine = central(idx, 0.5 * JACOBIATOR_STEP);
        *g = (4.0 * fine - coarse) / 3.0;
    }
    grad
}
