// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Integrated bath correlators K± = (Γ± + iε±)/2, the six associator
//! coefficients Λ_j built from them, and the derivation of (Γ±, ε±) from a
//! spectral density J(ω) with Fermi occupations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qlinalg::{c, C64};

/// Time-integrated bath correlators of one local bath.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BathKernels {
    pub k_plus: C64,
    pub k_minus: C64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
}

impl BathKernels {
    pub fn from_rates(gamma_plus: f64, eps_plus: f64, gamma_minus: f64, eps_minus: f64) -> Self {
        Self {
            k_plus: c(gamma_plus, eps_plus) * 0.5,
            k_minus: c(gamma_minus, eps_minus) * 0.5,
            gamma_plus,
            gamma_minus,
            eps_plus,
            eps_minus,
        }
    }

    /// Vacuum bath: the absorption channel is frozen (K₋ = 0).
    pub fn zero_temperature(gamma_plus: f64, eps_plus: f64) -> Self {
        Self::from_rates(gamma_plus, eps_plus, 0.0, 0.0)
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.k_minus == c(0.0, 0.0)
    }
}

/// Λ₁ … Λ₆ (index 0 holds Λ₁).
///
/// Λ₁ = Λ₃ = Λ₆ = K₊ − K₊*, Λ₂ = Λ₄ = Λ₅ = K₋ − K₋*. Both chains are purely
/// imaginary and depend only on the dispersive shifts.
pub fn lambda_coefficients(k: &BathKernels) -> [C64; 6] {
    let plus = k.k_plus - k.k_plus.conj();
    let minus = k.k_minus - k.k_minus.conj();
    [plus, minus, plus, minus, minus, plus]
}

/// Fermi occupation n_F(ω) = 1/(e^{ω/T} + 1), with the step limit at T = 0.
pub fn fermi_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return if omega > 0.0 {
            0.0
        } else if omega < 0.0 {
            1.0
        } else {
            0.5
        };
    }
    let x = omega / temperature;
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralShape {
    /// J(ω) = amplitude on [lower, upper], zero elsewhere.
    FlatBand { amplitude: f64, lower: f64, upper: f64 },
    /// J(ω) = amplitude·ω·exp(−ω/cutoff) for ω ≥ 0.
    Ohmic { amplitude: f64, cutoff: f64 },
    /// Piecewise-linear interpolation of samples; zero outside the table.
    Tabulated { omegas: Vec<f64>, values: Vec<f64> },
}

/// A bath spectral density together with the system transition frequency ω⋆.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDensity {
    pub shape: SpectralShape,
    pub omega_star: f64,
}

// Ohmic tails are truncated where exp(−ω/ω_c) drops below ~1e-26.
const OHMIC_TAIL_CUTOFFS: f64 = 60.0;

impl SpectralDensity {
    pub fn new(shape: SpectralShape, omega_star: f64) -> Result<Self> {
        let sd = Self { shape, omega_star };
        sd.validate()?;
        Ok(sd)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        match &self.shape {
            SpectralShape::FlatBand { amplitude, lower, upper } => {
                if *amplitude < 0.0 || !(lower < upper) {
                    return bad("flat band needs amplitude >= 0 and lower < upper");
                }
            }
            SpectralShape::Ohmic { amplitude, cutoff } => {
                if *amplitude < 0.0 || *cutoff <= 0.0 {
                    return bad("ohmic density needs amplitude >= 0 and cutoff > 0");
                }
            }
            SpectralShape::Tabulated { omegas, values } => {
                if omegas.len() < 2 || omegas.len() != values.len() {
                    return bad("tabulated density needs >= 2 matching samples");
                }
                if omegas.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("tabulated frequencies must be strictly increasing");
                }
                if values.iter().any(|&v| v < 0.0) {
                    return bad("tabulated density must be non-negative");
                }
            }
        }
        Ok(())
    }

    /// J(ω).
    pub fn eval(&self, omega: f64) -> f64 {
        match &self.shape {
            SpectralShape::FlatBand { amplitude, lower, upper } => {
                if omega >= *lower && omega <= *upper {
                    *amplitude
                } else {
                    0.0
                }
            }
            SpectralShape::Ohmic { amplitude, cutoff } => {
                if omega >= 0.0 {
                    amplitude * omega * (-omega / cutoff).exp()
                } else {
                    0.0
                }
            }
            SpectralShape::Tabulated { omegas, values } => {
                let n = omegas.len();
                if omega < omegas[0] || omega > omegas[n - 1] {
                    return 0.0;
                }
                let k = omegas.partition_point(|&w| w <= omega).clamp(1, n - 1);
                let (w0, w1) = (omegas[k - 1], omegas[k]);
                let t = (omega - w0) / (w1 - w0);
                values[k - 1] * (1.0 - t) + values[k] * t
            }
        }
    }

    /// Points where J(ω) is not smooth.
    fn kinks(&self) -> Vec<f64> {
        match &self.shape {
            SpectralShape::FlatBand { lower, upper, .. } => vec![*lower, *upper],
            SpectralShape::Ohmic { .. } => Vec::new(),
            SpectralShape::Tabulated { omegas, .. } => omegas.clone(),
        }
    }

    /// Integration range: the support intersected with ω ≥ 0.
    fn integration_range(&self) -> (f64, f64) {
        let (lo, hi) = match &self.shape {
            SpectralShape::FlatBand { lower, upper, .. } => (*lower, *upper),
            SpectralShape::Ohmic { cutoff, .. } => (0.0, OHMIC_TAIL_CUTOFFS * cutoff),
            SpectralShape::Tabulated { omegas, .. } => (omegas[0], omegas[omegas.len() - 1]),
        };
        (lo.max(0.0), hi)
    }
}

/// Γ± = 2π J(ω⋆) f±(ω⋆) and ε± = −2 P∫₀^∞ dω J(ω) f±(ω)/(ω − ω⋆), with
/// f₊ = 1 − n_F and f₋ = n_F.
pub fn rates_from_spectral_density(sd: &SpectralDensity, temperature: f64) -> Result<BathKernels> {
    if !(temperature >= 0.0) {
        return Err(Error::InvalidArgument(format!("temperature {temperature} must be >= 0")));
    }
    sd.validate()?;
    let w0 = sd.omega_star;
    let (lo, hi) = sd.integration_range();
    if !(w0 > lo && w0 < hi) {
        return Err(Error::Domain(format!(
            "omega_star = {w0} is not inside the integration range ({lo}, {hi})"
        )));
    }

    let n_f = |w: f64| fermi_occupation(w, temperature);
    let gamma_plus = 2.0 * PI * sd.eval(w0) * (1.0 - n_f(w0));
    let gamma_minus = 2.0 * PI * sd.eval(w0) * n_f(w0);

    let kinks = sd.kinks();
    // On ω ≥ 0 the T = 0 weights are f₊ = 1 and f₋ = 0 almost everywhere.
    let f_plus = |w: f64| if temperature == 0.0 { 1.0 } else { 1.0 - n_f(w) };
    let eps_plus = -2.0 * principal_value_with_kinks(|w| sd.eval(w) * f_plus(w), lo, hi, w0, &kinks)?;
    let eps_minus = if temperature == 0.0 {
        0.0
    } else {
        -2.0 * principal_value_with_kinks(|w| sd.eval(w) * n_f(w), lo, hi, w0, &kinks)?
    };
    Ok(BathKernels::from_rates(gamma_plus, eps_plus, gamma_minus, eps_minus))
}

const EXCISION_WIDTHS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
const QUAD_REL_TOL: f64 = 1e-12;
const QUAD_MAX_PANELS: usize = 1 << 18;

/// P∫_a^b f(ω)/(ω − ω⋆) dω by symmetric excision of (ω⋆ − δ, ω⋆ + δ),
/// Richardson-extrapolated to δ → 0.
///
/// The excised integral behaves as I(δ) = P − c₁δ − c₃δ³ − …, so two
/// Richardson passes (factors 2 and 8) remove the δ and δ³ terms.
pub fn principal_value(f: impl Fn(f64) -> f64, a: f64, b: f64, omega_star: f64) -> Result<f64> {
    principal_value_with_kinks(f, a, b, omega_star, &[])
}

/// [`principal_value`] for an integrand with known non-smooth points, which
/// become panel boundaries of the quadrature.
pub fn principal_value_with_kinks(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    omega_star: f64,
    kinks: &[f64],
) -> Result<f64> {
    if !(a < omega_star && omega_star < b) {
        return Err(Error::Domain(format!("pole {omega_star} not inside ({a}, {b})")));
    }
    let scale = omega_star.abs().max(f64::MIN_POSITIVE);
    let widths = EXCISION_WIDTHS.map(|w| w * scale);
    if widths[0] >= (omega_star - a).min(b - omega_star) {
        return Err(Error::Domain(format!(
            "pole {omega_star} too close to the integration boundary"
        )));
    }
    let mut excised = [0.0; 3];
    for (slot, &delta) in excised.iter_mut().zip(&widths) {
        *slot = excised_integral(&f, a, b, omega_star, delta, kinks)?;
    }
    let r1 = [2.0 * excised[1] - excised[0], 2.0 * excised[2] - excised[1]];
    Ok((8.0 * r1[1] - r1[0]) / 7.0)
}

// ∫ over [a, ω⋆−δ] ∪ [ω⋆+δ, b] of f/(ω−ω⋆). With u = |ω − ω⋆| = e^s each side
// becomes a smooth integral ±∫ f(ω⋆ ± e^s) ds.
fn excised_integral(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    w0: f64,
    delta: f64,
    kinks: &[f64],
) -> Result<f64> {
    let side = |sign: f64, reach: f64| -> Result<f64> {
        let mut cuts: Vec<f64> = kinks
            .iter()
            .map(|&k| sign * (k - w0))
            .filter(|&u| u > delta && u < reach)
            .map(f64::ln)
            .collect();
        cuts.push(delta.ln());
        cuts.push(reach.ln());
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            total += adaptive_simpson(|s| f((w0 + sign * s.exp()).clamp(a, b)), w[0], w[1])?;
        }
        Ok(total)
    };
    Ok(side(1.0, b - w0)? - side(-1.0, w0 - a)?)
}

// Composite Simpson with panel doubling until the relative change is below
// QUAD_REL_TOL (absolute for near-zero integrals).
fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let mut n = 256;
    let mut prev = composite_simpson(&f, a, b, n);
    while n < QUAD_MAX_PANELS {
        n *= 2;
        let cur = composite_simpson(&f, a, b, n);
        if (cur - prev).abs() <= QUAD_REL_TOL * cur.abs().max(1e-300) || (cur - prev).abs() < 1e-300 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "Simpson rule on [{a}, {b}] did not converge with {QUAD_MAX_PANELS} panels"
    )))
}

pub(crate) fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 0 { n } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}
