// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Release gate: runs the property suites of every module and the
//! weak-coupling reference runs, one report line per property.

use std::fmt;

use nonassoc_tfim::generator::{bohr_decompose, closed_form_associators, feedback, general_linear_generator, rhs};
use nonassoc_tfim::integrator::states_at_steps;
use nonassoc_tfim::operators::{build_tfim, embed, initial_plus_product, sigma_minus, site_pauli, Axis};
use nonassoc_tfim::phase_space::{
    associator, density_symbol_gradient, jump_symbol_gradients, monopole_jacobiator, reconstruct_from_symbols,
    sphere_average, symbol, BlochPoint, SymbolGradient, TwistField,
};
use nonassoc_tfim::qlinalg::kron;
use nonassoc_tfim::{ComplexMatrix, GeneratorContext, Site, SystemParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments::{sweep_kappa_scaled, SweepRow};
use crate::oracle::LiouvillianPropagator;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation from the target.
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn bound(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Self { name, passed: residual <= tolerance, residual, tolerance }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{},{},{:.6e}", self.name, status, self.residual)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `name,status,residual` lines under a fixed header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,residual\n");
        for c in &self.checks {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn into_result(self) -> CliResult<Self> {
        if self.all_passed() {
            Ok(self)
        } else {
            Err(CliError::VerificationFailed { failed: self.failed().len(), total: self.checks.len() })
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Multiplies the feedback strength in every trajectory run by the gate.
    /// 1 in production; −1 injects a sign error.
    pub feedback_scale: f64,
    /// Skip the long reference trajectories.
    pub skip_trajectories: bool,
    pub workers: usize,
}

impl VerifyOptions {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self { seed: cfg.seed, feedback_scale: 1.0, skip_trajectories: false, workers: cfg.workers }
    }
}

pub fn random_density(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = a.matmul(&a.adjoint());
    let tr = m.trace().re;
    m.scale_re(1.0 / tr)
}

pub fn random_bloch_vector(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return v;
        }
    }
}

pub fn qubit_state(r: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2).scale_re(0.5);
    for (axis, x) in Axis::ALL.iter().zip(r) {
        m.add_scaled(C64::new(0.5 * x, 0.0), &nonassoc_tfim::operators::pauli(*axis));
    }
    m
}

// ---- phase space -------------------------------------------------------

/// Jacobiator residuals for B = x (∇·B = 3), a mixed nonlinear field and a
/// divergence-free field.
pub fn jacobiator_checks() -> CliResult<Vec<CheckResult>> {
    let point = [0.3, -0.7, 0.45];
    let radial = monopole_jacobiator(|x| x, 1.0, point, (1, 2, 3))?;
    let q = 1.7;
    let mixed_field = |x: [f64; 3]| [x[0] * x[0], x[1] * x[2], x[2].sin()];
    let div_mixed = 2.0 * point[0] + point[2] + point[2].cos();
    let mixed = monopole_jacobiator(mixed_field, q, point, (1, 2, 3))?;
    let mixed_rev = monopole_jacobiator(mixed_field, q, point, (3, 2, 1))?;
    let free = monopole_jacobiator(|x| [x[1] * x[2], (x[0] * x[2]).sin(), x[0] - x[1]], 2.0, point, (1, 2, 3))?;
    let repeated = monopole_jacobiator(|x| x, 1.0, point, (1, 1, 2))?;
    Ok(vec![
        CheckResult::bound("jacobiator_radial_field", (radial - 3.0).abs(), 1e-6),
        CheckResult::bound(
            "jacobiator_mixed_field",
            (mixed - q * div_mixed).abs().max((mixed_rev + q * div_mixed).abs()),
            1e-6,
        ),
        CheckResult::bound("jacobiator_divergence_free", free.abs().max(repeated.abs()), 1e-8),
    ])
}

pub fn symbol_map_checks(rng: &mut impl Rng) -> CliResult<Vec<CheckResult>> {
    let mut trace_res: f64 = 0.0;
    let mut inv_res: f64 = 0.0;
    for _ in 0..20 {
        let (d0, d1) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (re, im) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = ComplexMatrix::from_rows([[C64::new(d0, 0.0), C64::new(re, im)], [C64::new(re, -im), C64::new(d1, 0.0)]]);
        let avg = sphere_average(|n| symbol(&a, n, None).unwrap_or(C64::new(f64::NAN, 0.0)));
        trace_res = trace_res.max((avg - a.trace() * 0.5).norm());

        let b = ComplexMatrix::from_fn(2, |_, _| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        let at = |v: [f64; 3]| -> CliResult<C64> { Ok(symbol(&b, &BlochPoint::new(v)?, None)?) };
        let rebuilt =
            reconstruct_from_symbols(at([1.0, 0.0, 0.0])?, at([-1.0, 0.0, 0.0])?, at([0.0, 1.0, 0.0])?, at([0.0, 0.0, 1.0])?);
        inv_res = inv_res.max(rebuilt.max_abs_diff(&b));
    }
    Ok(vec![
        CheckResult::bound("sw_traciality", trace_res, 1e-8),
        CheckResult::bound("sw_invertibility", inv_res, 1e-10),
    ])
}

/// Symbol-level associators of one site, in the order A₁ … A₆, as operators:
/// the value at unit σ_z coordinate multiplies σ_z^(a).
pub fn symbol_level_associators(params: &SystemParams, r: [f64; 3], site: Site) -> CliResult<[ComplexMatrix; 6]> {
    let a = site.index();
    let (s, s_dag) = jump_symbol_gradients(params.g[a], site);
    let rho = density_symbol_gradient(r, site);
    let mut kappa = [0.0; 2];
    kappa[a] = params.kappa[a];
    let twist = TwistField::IsingAligned { kappa };
    let orders: [[&SymbolGradient; 3]; 6] = [
        [&s_dag, &s, &rho],
        [&s, &s_dag, &rho],
        [&s, &rho, &s_dag],
        [&s_dag, &rho, &s],
        [&rho, &s, &s_dag],
        [&rho, &s_dag, &s],
    ];
    let sz = site_pauli(Axis::Z, site);
    let mut coeffs = [C64::new(0.0, 0.0); 6];
    for (slot, [f, g, h]) in coeffs.iter_mut().zip(orders) {
        *slot = associator(f, g, h, &twist, [0.0, 0.0, 1.0])?;
    }
    Ok(coeffs.map(|c| sz.scale(c)))
}

/// Closed-form vs symbol-level associators on random product states:
/// direct agreement, and agreement up to the global factor −i.
pub fn associator_checks(rng: &mut impl Rng) -> CliResult<Vec<CheckResult>> {
    let mut direct: f64 = 0.0;
    let mut phased: f64 = 0.0;
    for _ in 0..100 {
        let (r1, r2) = (random_bloch_vector(rng), random_bloch_vector(rng));
        let rho = kron(&qubit_state(r1), &qubit_state(r2));
        let mut params = SystemParams::weak_coupling();
        params.kappa = [rng.gen_range(0.0..200.0), rng.gen_range(0.0..200.0)];
        for (site, r) in [(Site::One, r1), (Site::Two, r2)] {
            let closed = closed_form_associators(&rho, &params, site);
            let literal = symbol_level_associators(&params, r, site)?;
            for (c, l) in closed.iter().zip(&literal) {
                direct = direct.max(c.max_abs_diff(l));
                phased = phased.max(c.max_abs_diff(&l.scale(C64::new(0.0, -1.0))));
            }
        }
    }
    Ok(vec![
        CheckResult::bound("associator_closed_form_vs_symbol_level", direct, 1e-12),
        CheckResult::bound("associator_closed_form_equals_minus_i_symbol_level", phased, 1e-12),
    ])
}

// ---- generator ---------------------------------------------------------

pub fn generator_checks(rng: &mut impl Rng, n_states: usize) -> CliResult<Vec<CheckResult>> {
    let mut trace: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut homog: f64 = 0.0;
    let mut split: f64 = 0.0;
    let mut t0: f64 = 0.0;
    let base_ctx = GeneratorContext::new(&SystemParams::weak_coupling())?;
    for _ in 0..n_states {
        let rho = random_density(rng, 4);
        let kappa = rng.gen_range(0.0..200.0);
        let params = SystemParams::weak_coupling().with_kappa(kappa);
        let ctx = GeneratorContext::new(&params)?;
        let d = rhs(&rho, &ctx);
        trace = trace.max(d.trace().norm());
        herm = herm.max(d.hermiticity_residual());
        let doubled = GeneratorContext::new(&params.clone().with_kappa(2.0 * kappa))?;
        homog = homog.max(feedback(&rho, &doubled).max_abs_diff(&feedback(&rho, &ctx).scale_re(2.0)));
        split = split.max((&d - &rhs(&rho, &base_ctx)).max_abs_diff(&feedback(&rho, &ctx)));
        t0 = t0.max(general_linear_generator(&rho, &ctx).max_abs_diff(&d));
    }
    Ok(vec![
        CheckResult::bound("rhs_trace", trace, 1e-13),
        CheckResult::bound("rhs_hermiticity", herm, 1e-13),
        CheckResult::bound("feedback_kappa_homogeneity", homog, 0.0),
        CheckResult::bound("rhs_kappa_split", split, 1e-15),
        CheckResult::bound("general_generator_zero_temperature", t0, 1e-14),
    ])
}

pub fn bohr_checks() -> CliResult<Vec<CheckResult>> {
    let h = build_tfim(&SystemParams::weak_coupling());
    let mut completeness: f64 = 0.0;
    let mut relation: f64 = 0.0;
    for site in Site::ALL {
        let s = embed(&sigma_minus(), site)?;
        let comps = bohr_decompose(&h, &s)?;
        let mut sum = ComplexMatrix::zeros(4);
        for c in &comps {
            sum += &c.op;
            relation = relation.max(h.commutator(&c.op).max_abs_diff(&c.op.scale_re(-c.omega)));
        }
        completeness = completeness.max(sum.max_abs_diff(&s));
    }
    Ok(vec![
        CheckResult::bound("bohr_completeness", completeness, 1e-10),
        CheckResult::bound("bohr_commutator_relation", relation, 1e-10),
    ])
}

// ---- integrator --------------------------------------------------------

/// Maximum entrywise deviation of RK4 from the exact κ = 0 propagator at
/// the given times, for one step size.
pub fn oracle_deviation(params: &SystemParams, dt: f64, times: &[f64], feedback_scale: f64) -> CliResult<Vec<f64>> {
    let rho0 = initial_plus_product();
    let exact = LiouvillianPropagator::new(params, &rho0)?;
    let ctx = GeneratorContext::new(params)?.with_feedback_scale(feedback_scale);
    let steps: Vec<usize> = times.iter().map(|t| (t / dt).round() as usize).collect();
    let states = states_at_steps(&rho0, &ctx, dt, &steps)?;
    Ok(times.iter().zip(&states).map(|(&t, rho)| rho.max_abs_diff(&exact.state_at(t))).collect())
}

pub const ORACLE_TIMES: [f64; 3] = [1.0, 10.0, 100.0];

pub fn oracle_checks(dt: f64, feedback_scale: f64) -> CliResult<Vec<CheckResult>> {
    let params = SystemParams::weak_coupling();
    let coarse = oracle_deviation(&params, dt, &ORACLE_TIMES, feedback_scale)?;
    let fine = oracle_deviation(&params, dt / 2.0, &ORACLE_TIMES, feedback_scale)?;
    let worst = coarse.iter().fold(0.0f64, |m, &d| m.max(d));
    let ratio_dev = coarse.iter().zip(&fine).map(|(c, f)| (c / f - 16.0).abs()).fold(0.0f64, f64::max);
    Ok(vec![
        CheckResult::bound("kappa0_oracle_entrywise", worst, 1e-6),
        CheckResult::bound("kappa0_oracle_fourth_order", ratio_dev, 4.0),
    ])
}

// ---- reference runs ----------------------------------------------------

/// Checks on the κ ∈ {0, 50, 100, 150, 200} weak-coupling sweep.
pub fn reference_run_checks(rows: &[SweepRow]) -> Vec<CheckResult> {
    let at = |kappa: f64| rows.iter().find(|r| r.kappa == kappa);
    let mut out = Vec::new();
    let (Some(r0), Some(r200)) = (at(0.0), at(200.0)) else {
        return vec![CheckResult { name: "reference_runs_present", passed: false, residual: f64::INFINITY, tolerance: 0.0 }];
    };
    out.push(CheckResult::bound("c_ss_kappa0", (r0.c_ss - 0.306).abs(), 0.01));
    out.push(CheckResult::bound("c_ss_kappa200", (r200.c_ss - 0.125).abs(), 0.01));
    let suppression = (r0.c_ss - r200.c_ss) / r0.c_ss;
    out.push(CheckResult::bound("suppression_ratio", (suppression - 0.59).abs(), 0.03));
    out.push(CheckResult::bound(
        "purity_ss",
        (r0.purity_ss - 0.742).abs().max((r200.purity_ss - 0.547).abs()),
        0.02,
    ));
    out.push(CheckResult::bound(
        "entropy_ss",
        (r0.entropy_ss - 0.533).abs().max((r200.entropy_ss - 0.890).abs()),
        0.02,
    ));
    let mut mono: f64 = 0.0;
    for w in rows.windows(2) {
        mono = mono.max(w[1].c_ss - w[0].c_ss).max(w[0].entropy_ss - w[1].entropy_ss);
    }
    out.push(CheckResult::bound("kappa_monotonicity", mono.max(0.0), 0.0));
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), r| (l.min(r.c_max), h.max(r.c_max)));
    out.push(CheckResult::bound("c_max_spread", (hi - lo) / hi, 2e-3));
    let min_eig = rows.iter().map(|r| r.min_eig_global).fold(f64::INFINITY, f64::min);
    out.push(CheckResult::bound("cp_monitor", (-min_eig).max(0.0), 1e-12));
    out
}

pub fn run_verify(cfg: &ExperimentConfig, opts: &VerifyOptions) -> CliResult<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut checks = Vec::new();
    checks.extend(jacobiator_checks()?);
    checks.extend(symbol_map_checks(&mut rng)?);
    checks.extend(associator_checks(&mut rng)?);
    checks.extend(generator_checks(&mut rng, 1000)?);
    checks.extend(bohr_checks()?);
    checks.extend(oracle_checks(0.05, opts.feedback_scale)?);
    if !opts.skip_trajectories {
        let mut reference = ExperimentConfig { workers: opts.workers, ..ExperimentConfig::default() };
        reference.kappa_list = crate::config::DEFAULT_KAPPAS.to_vec();
        reference.integrator.log_base = cfg.integrator.log_base;
        let rows = sweep_kappa_scaled(&reference, opts.feedback_scale)?;
        checks.extend(reference_run_checks(&rows));
    }
    Ok(VerifyReport { checks })
}
