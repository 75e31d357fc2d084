// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-step RK4 evolution of the nonlinear master equation.
//!
//! Every stage re-evaluates the generator on its own intermediate state, so
//! the feedback sees the current r_z^(a). After each full step the state is
//! Hermitized and renormalized; positivity is monitored but never enforced.

use log::warn;

use crate::error::{Error, Result};
use crate::generator::{from_m4, rhs, rhs_m4, to_m4, GeneratorContext, M4};
use crate::observables::{concurrence, entropy_of_spectrum, purity, site_bloch, zz_correlation, LogBase};
use crate::operators::Axis;
use crate::qlinalg::{c, hermitian_eig, ComplexMatrix, DensityMatrix, Site};

/// Traces smaller than this in magnitude cannot be renormalized.
const MIN_TRACE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Steps between recorded samples.
    pub record_stride: usize,
    /// Minimum eigenvalues below −cp_tol are reported as CP violations.
    pub cp_tol: f64,
    pub log_base: LogBase,
}

impl Default for IntegratorConfig {
    /// Δt = 0.05, t_max = 4000 (200/Γ₊ at Γ₊ = 0.05), one record per unit time.
    fn default() -> Self {
        Self { dt: 0.05, t_max: 4000.0, record_stride: 20, cp_tol: 1e-12, log_base: LogBase::Natural }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("t_max = {} must be at least dt = {}", self.t_max, self.dt)));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidArgument("record_stride must be at least 1".into()));
        }
        if !(self.cp_tol >= 0.0) {
            return Err(Error::InvalidArgument("cp_tol must be non-negative".into()));
        }
        Ok(())
    }

    /// Number of full steps, rounding t_max/dt to the nearest integer.
    pub fn n_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }
}

/// Observables at one recorded time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub sz1: f64,
    pub sx1: f64,
    pub zz: f64,
    pub purity: f64,
    pub entropy: f64,
    pub concurrence: f64,
    pub min_eig: f64,
}

impl TrajectoryRecord {
    pub fn measure(t: f64, rho: &ComplexMatrix, base: LogBase) -> Result<Self> {
        let eig = hermitian_eig(rho)?;
        Ok(Self {
            t,
            sz1: site_bloch(rho, Site::One, Axis::Z)?,
            sx1: site_bloch(rho, Site::One, Axis::X)?,
            zz: zz_correlation(rho)?,
            purity: purity(rho),
            entropy: entropy_of_spectrum(&eig.values, base),
            concurrence: concurrence(rho)?,
            min_eig: eig.values[0],
        })
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    /// Smallest eigenvalue over all recorded states.
    pub min_eig_global: f64,
    /// Recorded times whose minimum eigenvalue fell below −cp_tol.
    pub cp_violations: Vec<f64>,
    pub final_state: DensityMatrix,
}

/// The four RK4 slopes k₁ … k₄ of one step.
pub fn rk4_stages(rho: &ComplexMatrix, ctx: &GeneratorContext, dt: f64) -> [ComplexMatrix; 4] {
    let shifted = |k: &ComplexMatrix, h: f64| {
        let mut y = rho.clone();
        y.add_scaled(c(h, 0.0), k);
        y
    };
    let k1 = rhs(rho, ctx);
    let k2 = rhs(&shifted(&k1, 0.5 * dt), ctx);
    let k3 = rhs(&shifted(&k2, 0.5 * dt), ctx);
    let k4 = rhs(&shifted(&k3, dt), ctx);
    [k1, k2, k3, k4]
}

/// One classical RK4 step, without post-step enforcement.
pub fn rk4_step(rho: &ComplexMatrix, ctx: &GeneratorContext, dt: f64) -> ComplexMatrix {
    if rho.dim() == 4 {
        return from_m4(&rk4_step_m4(&to_m4(rho), ctx, dt));
    }
    let [k1, k2, k3, k4] = rk4_stages(rho, ctx, dt);
    let mut out = rho.clone();
    let w = dt / 6.0;
    out.add_scaled(c(w, 0.0), &k1);
    out.add_scaled(c(2.0 * w, 0.0), &k2);
    out.add_scaled(c(2.0 * w, 0.0), &k3);
    out.add_scaled(c(w, 0.0), &k4);
    out
}

fn rk4_step_m4(rho: &M4, ctx: &GeneratorContext, dt: f64) -> M4 {
    let shifted = |k: &M4, h: f64| {
        let mut y = *rho;
        for (row, krow) in y.iter_mut().zip(k) {
            for (x, dk) in row.iter_mut().zip(krow) {
                *x += dk * h;
            }
        }
        y
    };
    let k1 = rhs_m4(rho, ctx);
    let k2 = rhs_m4(&shifted(&k1, 0.5 * dt), ctx);
    let k3 = rhs_m4(&shifted(&k2, 0.5 * dt), ctx);
    let k4 = rhs_m4(&shifted(&k3, dt), ctx);
    let w = dt / 6.0;
    let mut out = *rho;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += k1[i][j] * w + k2[i][j] * (2.0 * w) + k3[i][j] * (2.0 * w) + k4[i][j] * w;
        }
    }
    out
}

/// ((ρ+ρ†)/2) / Tr((ρ+ρ†)/2). Does not touch the spectrum otherwise.
pub fn enforce_valid(rho: &ComplexMatrix) -> Result<DensityMatrix> {
    let h = rho.hermitian_part();
    let tr = h.trace().re;
    if !(tr.abs() >= MIN_TRACE) {
        return Err(Error::InvalidState { trace: tr });
    }
    let mut out = h.scale_re(1.0 / tr);
    // Put the rounding residue of the trace on the largest diagonal entry so
    // that the recorded trace is 1 to the last bit where possible.
    let residue = 1.0 - out.trace().re;
    if residue != 0.0 {
        let k = (0..out.dim()).max_by(|&a, &b| out[(a, a)].re.total_cmp(&out[(b, b)].re)).unwrap_or(0);
        out[(k, k)].re += residue;
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Integrates from `rho0` to t_max, recording step 0, every
/// `record_stride`-th step and the final step.
pub fn evolve(rho0: &DensityMatrix, ctx: &GeneratorContext, cfg: &IntegratorConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let n_steps = cfg.n_steps();
    let mut rho = rho0.matrix().clone();
    let mut records = Vec::with_capacity(n_steps / cfg.record_stride + 2);
    let mut cp_violations = Vec::new();
    let mut min_eig_global = f64::INFINITY;

    let mut record = |step: usize, rho: &ComplexMatrix| -> Result<()> {
        let t = step as f64 * cfg.dt;
        let r = TrajectoryRecord::measure(t, rho, cfg.log_base)?;
        if r.min_eig < -cfg.cp_tol {
            if cp_violations.is_empty() {
                warn!("complete-positivity alarm at t = {t}: min eigenvalue {:e}", r.min_eig);
            }
            cp_violations.push(t);
        }
        min_eig_global = min_eig_global.min(r.min_eig);
        records.push(r);
        Ok(())
    };

    record(0, &rho)?;
    for step in 1..=n_steps {
        let next = rk4_step(&rho, ctx, cfg.dt);
        if !next.is_finite() {
            return Err(Error::NumericalBlowup { step });
        }
        rho = enforce_valid(&next)?.into_matrix();
        if step % cfg.record_stride == 0 || step == n_steps {
            record(step, &rho)?;
        }
    }
    if cp_violations.len() > 1 {
        warn!(
            "complete-positivity alarm at {} recorded times; most negative eigenvalue {min_eig_global:e}",
            cp_violations.len()
        );
    }
    Ok(Trajectory { records, min_eig_global, cp_violations, final_state: DensityMatrix::new_unchecked(rho) })
}

/// Evolves without recording, returning the state at every requested step count.
pub fn states_at_steps(rho0: &ComplexMatrix, ctx: &GeneratorContext, dt: f64, steps: &[usize]) -> Result<Vec<ComplexMatrix>> {
    let mut out = Vec::with_capacity(steps.len());
    let mut rho = rho0.clone();
    let mut done = 0;
    for &target in steps {
        if target < done {
            return Err(Error::InvalidArgument("step counts must be non-decreasing".into()));
        }
        while done < target {
            done += 1;
            let next = rk4_step(&rho, ctx, dt);
            if !next.is_finite() {
                return Err(Error::NumericalBlowup { step: done });
            }
            rho = enforce_valid(&next)?.into_matrix();
        }
        out.push(rho.clone());
    }
    Ok(out)
}
