// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Scalar diagnostics of two-qubit states and steady-state extraction.

use log::warn;

use crate::error::{Error, Result};
use crate::integrator::TrajectoryRecord;
use crate::operators::{pauli, site_pauli, Axis};
use crate::qlinalg::{expectation, hermitian_eig, kron, ComplexMatrix, Site};

/// Eigenvalues this far below zero are clipped silently; anything more
/// negative is clipped with a warning.
const CLIP_WARN: f64 = 1e-10;

/// Tr(ρ²), computed as Σ|ρ_ij|² (valid for Hermitian ρ).
pub fn purity(rho: &ComplexMatrix) -> f64 {
    rho.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LogBase {
    #[default]
    Natural,
    Binary,
}

impl LogBase {
    pub fn name(self) -> &'static str {
        match self {
            LogBase::Natural => "natural",
            LogBase::Binary => "binary",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "natural" | "e" | "ln" => Ok(LogBase::Natural),
            "binary" | "2" | "log2" => Ok(LogBase::Binary),
            other => Err(Error::InvalidArgument(format!("unknown log base '{other}'"))),
        }
    }

    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Binary => x.log2(),
        }
    }
}

/// −Σ λ ln λ over the eigenvalues of ρ.
pub fn von_neumann_entropy(rho: &ComplexMatrix) -> Result<f64> {
    entropy_in_base(rho, LogBase::Natural)
}

pub fn entropy_in_base(rho: &ComplexMatrix, base: LogBase) -> Result<f64> {
    let eig = hermitian_eig(&rho.hermitian_part())?;
    if eig.values[0] < -CLIP_WARN {
        warn!("clipping eigenvalue {:e} in entropy", eig.values[0]);
    }
    Ok(entropy_of_spectrum(&eig.values, base))
}

/// Entropy of an ascending spectrum with negative eigenvalues clipped to 0.
/// Callers decide whether the clip deserves a warning.
pub(crate) fn entropy_of_spectrum(values: &[f64], base: LogBase) -> f64 {
    values.iter().filter(|&&l| l > 0.0).map(|&l| -l * base.log(l)).sum()
}

/// Wootters concurrence, using the eigenvalues of the Hermitian matrix
/// √ρ ρ̃ √ρ with ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn concurrence(rho: &ComplexMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    let rho_h = rho.hermitian_part();
    let yy = kron(&pauli(Axis::Y), &pauli(Axis::Y));
    let tilde = yy.matmul(&rho_h.conj()).matmul(&yy);
    let sqrt_rho = hermitian_eig(&rho_h)?.map_spectrum(|l| l.max(0.0).sqrt());
    let r = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho).hermitian_part();
    let mut roots: Vec<f64> = hermitian_eig(&r)?.values.iter().map(|l| l.max(0.0).sqrt()).collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Tr(ρ σ_axis^(site)).
pub fn site_bloch(rho: &ComplexMatrix, site: Site, axis: Axis) -> Result<f64> {
    Ok(expectation(rho, &site_pauli(axis, site))?.re)
}

/// ⟨σ_z⊗σ_z⟩.
pub fn zz_correlation(rho: &ComplexMatrix) -> Result<f64> {
    Ok(expectation(rho, &kron(&pauli(Axis::Z), &pauli(Axis::Z)))?.re)
}

/// Smallest eigenvalue of ρ.
pub fn min_eigenvalue(rho: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(&rho.hermitian_part())?.values[0])
}

/// Steady-state figures read off a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyStateSummary {
    pub c_ss: f64,
    pub c_max: f64,
    pub purity_ss: f64,
    pub entropy_ss: f64,
    pub t_evaluated: f64,
}

/// Reads the last record with t ≤ `t_eval`; C_max runs over every record.
pub fn steady_state_summary(records: &[TrajectoryRecord], t_eval: f64) -> Result<SteadyStateSummary> {
    let tol = 1e-9 * t_eval.abs().max(1.0);
    let last_t = records.last().map(|r| r.t).unwrap_or(f64::NEG_INFINITY);
    if last_t < t_eval - tol {
        return Err(Error::InvalidArgument(format!(
            "trajectory ends at t = {last_t} before the evaluation time {t_eval}"
        )));
    }
    let at = records
        .iter()
        .rev()
        .find(|r| r.t <= t_eval + tol)
        .ok_or_else(|| Error::InvalidArgument(format!("no record at or before t = {t_eval}")))?;
    let c_max = records.iter().map(|r| r.concurrence).fold(f64::NEG_INFINITY, f64::max);
    Ok(SteadyStateSummary {
        c_ss: at.concurrence,
        c_max,
        purity_ss: at.purity,
        entropy_ss: at.entropy,
        t_evaluated: at.t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{basis_projector, initial_plus_product};
    use crate::qlinalg::{c, DensityMatrix, C64};
    use proptest::prelude::*;

    fn phi_plus() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        DensityMatrix::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap().into_matrix()
    }

    fn werner(p: f64) -> ComplexMatrix {
        let mut m = phi_plus().scale_re(p);
        m.add_scaled(c((1.0 - p) / 4.0, 0.0), &ComplexMatrix::identity(4));
        m
    }

    fn record(t: f64, conc: f64) -> TrajectoryRecord {
        TrajectoryRecord { t, sz1: 0.0, sx1: 0.0, zz: 0.0, purity: 1.0, entropy: 0.0, concurrence: conc, min_eig: 0.0 }
    }

    fn arb_density(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(-1.0..1.0f64, 2 * dim * dim).prop_map(move |v| {
            let a = ComplexMatrix::from_fn(dim, |i, j| c(v[2 * (dim * i + j)], v[2 * (dim * i + j) + 1]));
            let m = a.matmul(&a.adjoint());
            let tr = m.trace().re;
            m.scale_re(1.0 / tr)
        })
    }

    fn arb_unitary_2() -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec(-3.0..3.0f64, 4).prop_map(|v| {
            // U = e^{iα} Rz(β) Ry(γ) Rz(δ)
            let (a, b, g, d) = (v[0], v[1], v[2], v[3]);
            let ph = |x: f64| C64::from_polar(1.0, x);
            let (cg, sg) = ((g / 2.0).cos(), (g / 2.0).sin());
            ComplexMatrix::from_rows([
                [ph(a - b / 2.0 - d / 2.0) * cg, -ph(a - b / 2.0 + d / 2.0) * sg],
                [ph(a + b / 2.0 - d / 2.0) * sg, ph(a + b / 2.0 + d / 2.0) * cg],
            ])
        })
    }

    // Concurrence via the eigenvalues of the non-Hermitian product ρρ̃,
    // found as roots of its characteristic polynomial by Durand–Kerner.
    fn concurrence_brute_force(rho: &ComplexMatrix) -> f64 {
        let yy = kron(&pauli(Axis::Y), &pauli(Axis::Y));
        let m = rho.matmul(&yy.matmul(&rho.conj()).matmul(&yy));
        // Faddeev–LeVerrier coefficients.
        let n = 4;
        let mut coeffs = vec![c(1.0, 0.0)];
        let mut mk = ComplexMatrix::zeros(n);
        for k in 1..=n {
            let mut next = m.matmul(&mk);
            next.add_scaled(coeffs[k - 1], &ComplexMatrix::identity(n));
            mk = next;
            let ck = -(m.matmul(&mk).trace()) / k as f64;
            coeffs.push(ck);
        }
        let poly = |z: C64| coeffs.iter().fold(c(0.0, 0.0), |acc, &a| acc * z + a);
        let mut roots: Vec<C64> = (0..n).map(|k| C64::from_polar(0.9, 0.4 + k as f64 * 1.3)).collect();
        for _ in 0..500 {
            for i in 0..n {
                let mut denom = c(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = poly(roots[i]) / denom;
                roots[i] -= step;
            }
        }
        let mut s: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        (s[0] - s[1] - s[2] - s[3]).max(0.0)
    }

    #[test]
    fn purity_limits() {
        assert!((purity(&initial_plus_product()) - 1.0).abs() < 1e-15);
        assert!((purity(&ComplexMatrix::identity(4).scale_re(0.25)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn entropy_limits() {
        assert!(von_neumann_entropy(&initial_plus_product()).unwrap().abs() < 1e-12);
        let mixed = ComplexMatrix::identity(4).scale_re(0.25);
        assert!((von_neumann_entropy(&mixed).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!((entropy_in_base(&mixed, LogBase::Binary).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(LogBase::parse("log2").unwrap(), LogBase::Binary);
        assert!(LogBase::parse("ten").is_err());
    }

    #[test]
    fn concurrence_reference_states() {
        assert!(concurrence(&initial_plus_product()).unwrap() < 1e-7);
        assert!((concurrence(&phi_plus()).unwrap() - 1.0).abs() < 1e-7);
        assert!(concurrence(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn werner_concurrence() {
        let w = werner(0.5);
        let direct = concurrence(&w).unwrap();
        assert!((direct - 0.25).abs() < 1e-10, "{direct}");
        assert!((concurrence_brute_force(&w) - 0.25).abs() < 1e-8);
        for p in [0.2, 1.0 / 3.0, 0.7, 0.95] {
            let expected = ((3.0 * p - 1.0) / 2.0f64).max(0.0);
            assert!((concurrence(&werner(p)).unwrap() - expected).abs() < 1e-7);
        }
    }

    #[test]
    fn bloch_and_correlations() {
        let plus = initial_plus_product();
        assert!((site_bloch(&plus, Site::One, Axis::X).unwrap() - 1.0).abs() < 1e-15);
        assert!(site_bloch(&plus, Site::One, Axis::Z).unwrap().abs() < 1e-15);
        let mixed = ComplexMatrix::identity(4).scale_re(0.25);
        for axis in Axis::ALL {
            assert_eq!(site_bloch(&mixed, Site::Two, axis).unwrap(), 0.0);
        }
        assert_eq!(zz_correlation(&basis_projector(4, 0)).unwrap(), 1.0);
        assert_eq!(zz_correlation(&basis_projector(4, 1)).unwrap(), -1.0);
        assert_eq!(zz_correlation(&mixed).unwrap(), 0.0);
    }

    #[test]
    fn steady_state_reads_last_record() {
        let flat: Vec<_> = (0..5).map(|k| record(k as f64, 0.3)).collect();
        let s = steady_state_summary(&flat, 4.0).unwrap();
        assert_eq!(s.c_ss, s.c_max);
        let rising: Vec<_> = (0..=10).map(|k| record(k as f64, if k == 3 { 0.8 } else { 0.1 * k as f64 / 10.0 })).collect();
        let s = steady_state_summary(&rising, 7.5).unwrap();
        assert_eq!(s.t_evaluated, 7.0);
        assert_eq!(s.c_max, 0.8);
        assert!(steady_state_summary(&rising, 11.0).is_err());
        assert!(steady_state_summary(&[], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn concurrence_local_unitary_invariance(rho in arb_density(4), u1 in arb_unitary_2(), u2 in arb_unitary_2()) {
            let u = kron(&u1, &u2);
            let rotated = u.matmul(&rho).matmul(&u.adjoint());
            prop_assert!((concurrence(&rotated).unwrap() - concurrence(&rho).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn concurrence_matches_brute_force(rho in arb_density(4)) {
            prop_assert!((concurrence(&rho).unwrap() - concurrence_brute_force(&rho)).abs() < 1e-6);
        }

        #[test]
        fn entropy_concavity(a in arb_density(4), b in arb_density(4)) {
            let mix = (&a.scale_re(0.5)) + (&b.scale_re(0.5));
            let lhs = von_neumann_entropy(&mix).unwrap();
            let rhs = 0.5 * von_neumann_entropy(&a).unwrap() + 0.5 * von_neumann_entropy(&b).unwrap();
            prop_assert!(lhs >= rhs - 1e-10);
        }

        #[test]
        fn purity_and_entropy_bounds(rho in arb_density(4)) {
            let p = purity(&rho);
            prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
            let s = von_neumann_entropy(&rho).unwrap();
            prop_assert!(s >= -1e-12);
            if s <= 1e-9 {
                prop_assert!((p - 1.0).abs() < 1e-6);
            }
            let zz = zz_correlation(&rho).unwrap();
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&zz));
        }

        #[test]
        fn pure_states_have_zero_entropy(v in proptest::collection::vec(-1.0..1.0f64, 8)) {
            let psi: Vec<C64> = (0..4).map(|k| c(v[2 * k], v[2 * k + 1])).collect();
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            let psi: Vec<C64> = psi.iter().map(|z| z / norm).collect();
            let rho = DensityMatrix::pure(&psi).unwrap();
            prop_assert!((purity(&rho) - 1.0).abs() < 1e-12);
            prop_assert!(von_neumann_entropy(&rho).unwrap() <= 1e-9);
        }
    }
}
