// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for the small Hilbert spaces used here
//! (one qubit: dimension 2, two qubits: dimension 4).
//!
//! Two-qubit operators use the basis |00⟩, |01⟩, |10⟩, |11⟩ with site 1 as
//! the left tensor factor, which is the block layout produced by [`kron`].

use std::fmt;
use std::ops::{Add, AddAssign, Deref, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity and trace tolerance for density matrices.
pub const HERM_TOL: f64 = 1e-12;
/// Tolerance for eigen-decomposition residuals.
pub const EIG_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// One of the two qubit sites of the two-site model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    One,
    Two,
}

impl Site {
    pub const ALL: [Site; 2] = [Site::One, Site::Two];

    /// Site from its 1-based label.
    pub fn new(label: usize) -> Result<Self> {
        match label {
            1 => Ok(Site::One),
            2 => Ok(Site::Two),
            other => Err(Error::InvalidSite(other)),
        }
    }

    /// Zero-based array index (0 for site 1).
    pub fn index(self) -> usize {
        match self {
            Site::One => 0,
            Site::Two => 1,
        }
    }

    pub fn label(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; `data.len()` must be a perfect square.
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| rows[i][j])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: C64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik.re == 0.0 && aik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in mat_vec");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn anticommutator(&self, other: &ComplexMatrix) -> ComplexMatrix {
        &self.matmul(other) + &other.matmul(self)
    }

    /// (M + M†)/2.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |M − M†| over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.add_scaled(c(1.0, 0.0), rhs);
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Tensor product with block layout `out[(i·db+k),(j·db+l)] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim, b.dim);
    ComplexMatrix::from_fn(da * db, |r, s| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (s / db, s % db);
        a[(i, j)] * b[(k, l)]
    })
}

/// Reduced operator of a two-qubit operator on the kept site.
pub fn partial_trace(m: &ComplexMatrix, keep: Site) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim,
        });
    }
    let reduced = match keep {
        Site::One => ComplexMatrix::from_fn(2, |i, j| (0..2).map(|k| m[(2 * i + k, 2 * j + k)]).sum()),
        Site::Two => ComplexMatrix::from_fn(2, |k, l| (0..2).map(|i| m[(2 * i + k, 2 * i + l)]).sum()),
    };
    Ok(reduced)
}

/// `Tr(ρ · obs)`.
pub fn expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<C64> {
    if rho.dim != obs.dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim,
            found: obs.dim,
        });
    }
    let n = rho.dim;
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * obs[(j, i)];
        }
    }
    Ok(acc)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// The `k`-th eigenvector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim).map(|i| self.vectors[(i, k)]).collect()
    }

    /// V f(Λ) V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim;
        let v = &self.vectors;
        let fvals: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * fvals[k] * v[(j, k)].conj()).sum())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|x| x)
    }
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Only the Hermitian part of `m` is used. Eigenvalues come back ascending.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Eigen> {
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = scale == 0.0 || n == 1;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off_diagonal_norm(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|e| e.values)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Zeroes a[p,q] with the unitary V = D·J, where D removes the phase of a[p,q]
// and J is the real Jacobi rotation of the resulting real symmetric pivot.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = c(0.0, 0.0);
        a[(q, p)] = c(0.0, 0.0);
        return;
    }
    let phase_conj = (apq / mag).conj();
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    let v_pp = c(cs, 0.0);
    let v_qp = phase_conj * (-sn);
    let v_pq = c(sn, 0.0);
    let v_qq = phase_conj * cs;

    let n = a.dim;
    // A <- A V
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * v_pp + akq * v_qp;
        a[(k, q)] = akp * v_pq + akq * v_qq;
    }
    // A <- V† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = v_pp.conj() * apk + v_qp.conj() * aqk;
        a[(q, k)] = v_pq.conj() * apk + v_qq.conj() * aqk;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);
    // V_acc <- V_acc V
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * v_pp + vkq * v_qp;
        v[(k, q)] = vkp * v_pq + vkq * v_qq;
    }
}

/// A Hermitian, unit-trace operator. Positivity is not enforced.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace within [`HERM_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermiticity_residual();
        if herm > HERM_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix is not Hermitian (residual {herm:e})"
            )));
        }
        let tr = mat.trace();
        if (tr - c(1.0, 0.0)).norm() > HERM_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr == 0.0 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let scaled: Vec<C64> = psi.iter().map(|z| z / norm_sqr.sqrt()).collect();
        Ok(Self::new_unchecked(ComplexMatrix::outer(&scaled, &scaled)?))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new_unchecked(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    /// Tensor product of two density matrices.
    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        Self::new_unchecked(kron(&a.mat, &b.mat))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl Deref for DensityMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{pauli, Axis};
    use proptest::prelude::*;

    fn basis(dim: usize, k: usize) -> Vec<C64> {
        (0..dim).map(|i| c(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    fn bell_phi_plus() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap()
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&id2, &id2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_sigma_z_identity_is_block_diagonal() {
        let m = kron(&pauli(Axis::Z), &ComplexMatrix::identity(2));
        assert_eq!(m, ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_xx_flips_both_qubits() {
        let xx = kron(&pauli(Axis::X), &pauli(Axis::X));
        assert_eq!(xx.mat_vec(&basis(4, 0)), basis(4, 3));
    }

    #[test]
    fn partial_trace_examples() {
        let rho_a = DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let rho_b = DensityMatrix::maximally_mixed(2);
        let prod = DensityMatrix::product(&rho_a, &rho_b);
        assert!(partial_trace(&prod, Site::One).unwrap().max_abs_diff(&rho_a) < 1e-15);
        assert!(partial_trace(&prod, Site::Two).unwrap().max_abs_diff(&rho_b) < 1e-15);

        let mixed = DensityMatrix::maximally_mixed(4);
        let half_id = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(partial_trace(&mixed, Site::Two).unwrap().max_abs_diff(&half_id) < 1e-15);

        let bell = bell_phi_plus();
        assert!(partial_trace(&bell, Site::One).unwrap().max_abs_diff(&half_id) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_dimension() {
        let err = partial_trace(&ComplexMatrix::identity(2), Site::One).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 4, found: 2 });
        assert_eq!(Site::new(3).unwrap_err(), Error::InvalidSite(3));
    }

    #[test]
    fn eig_known_spectra() {
        let z = hermitian_eig(&pauli(Axis::Z)).unwrap();
        assert_eq!(z.values, vec![-1.0, 1.0]);
        let x = eigvalsh(&pauli(Axis::X)).unwrap();
        assert!((x[0] + 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        let mixed = eigvalsh(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert!(mixed.iter().all(|&v| (v - 0.25).abs() < 1e-15));
    }

    #[test]
    fn eig_reconstructs_complex_hermitian() {
        let y = pauli(Axis::Y);
        let m = &(&kron(&y, &pauli(Axis::X)) + &kron(&pauli(Axis::Z), &y).scale_re(0.3))
            + &ComplexMatrix::from_real_diagonal(&[0.1, -0.4, 0.7, 0.0]);
        let e = hermitian_eig(&m).unwrap();
        assert!(e.reconstruct().max_abs_diff(&m) < EIG_TOL);
        let vtv = e.vectors.adjoint().matmul(&e.vectors);
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn expectation_examples() {
        let z = pauli(Axis::Z);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(expectation(&mixed, &z).unwrap(), c(0.0, 0.0));
        let zero = DensityMatrix::pure(&basis(2, 0)).unwrap();
        assert_eq!(expectation(&zero, &z).unwrap(), c(1.0, 0.0));
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((expectation(&plus, &pauli(Axis::X)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(expectation(&plus, &ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let mut m = ComplexMatrix::identity(2).scale_re(0.5);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    fn arb_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
            .prop_map(|v| ComplexMatrix::from_vec(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    fn arb_hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        arb_matrix(dim).prop_map(|m| m.hermitian_part())
    }

    fn arb_density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
        arb_matrix(dim).prop_map(|m| {
            let p = m.matmul(&m.adjoint());
            let tr = p.trace().re;
            DensityMatrix::new_unchecked(p.scale_re(1.0 / tr))
        })
    }

    proptest! {
        #[test]
        fn kron_is_bilinear(a in arb_matrix(2), b in arb_matrix(2), d in arb_matrix(2), s in -2.0..2.0f64) {
            let lhs = kron(&(&a + &d.scale_re(s)), &b);
            let rhs = &kron(&a, &b) + &kron(&d, &b).scale_re(s);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            let lhs = kron(&b, &(&a + &d.scale_re(s)));
            let rhs = &kron(&b, &a) + &kron(&b, &d).scale_re(s);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_is_associative(a in arb_matrix(2), b in arb_matrix(2), d in arb_matrix(2)) {
            let lhs = kron(&kron(&a, &b), &d);
            let rhs = kron(&a, &kron(&b, &d));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        }

        #[test]
        fn partial_trace_of_product(a in arb_matrix(2), b in arb_matrix(2)) {
            let ab = kron(&a, &b);
            let keep1 = partial_trace(&ab, Site::One).unwrap();
            prop_assert!(keep1.max_abs_diff(&a.scale(b.trace())) < 1e-12);
            let keep2 = partial_trace(&ab, Site::Two).unwrap();
            prop_assert!(keep2.max_abs_diff(&b.scale(a.trace())) < 1e-12);
            prop_assert!((keep1.trace() - ab.trace()).norm() < 1e-12);
        }

        #[test]
        fn eigenvalues_sum_to_trace(m in arb_hermitian(4)) {
            let e = hermitian_eig(&m).unwrap();
            let sum: f64 = e.values.iter().sum();
            prop_assert!((sum - m.trace().re).abs() < EIG_TOL);
            prop_assert!(e.reconstruct().max_abs_diff(&m) < EIG_TOL);
        }

        #[test]
        fn expectation_of_adjoint_is_conjugate(rho in arb_density(4), a in arb_matrix(4)) {
            let direct = expectation(&rho, &a.adjoint()).unwrap();
            let conj = expectation(&rho, &a).unwrap().conj();
            prop_assert!((direct - conj).norm() < 1e-12);
        }
    }
}
