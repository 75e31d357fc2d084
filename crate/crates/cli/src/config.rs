// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` experiment configuration.
//!
//! Keys carry a section prefix (`system.`, `integrator.`, `sweep.`, `run.`,
//! `analysis.`). Lists are comma-separated. Per-site parameters accept one
//! value (both sites) or two. Lines starting with `#` are comments.
//! Floating-point values are written in shortest round-trip form, so
//! `parse(serialize(cfg)) == cfg` holds exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nonassoc_tfim::{IntegratorConfig, LogBase, SystemParams};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    SweepKappa,
    SweepField,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::SweepKappa => "sweep-kappa",
            Mode::SweepField => "sweep-field",
            Mode::Verify => "verify",
        }
    }
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "simulate" => Ok(Mode::Simulate),
            "sweep-kappa" => Ok(Mode::SweepKappa),
            "sweep-field" => Ok(Mode::SweepField),
            "verify" => Ok(Mode::Verify),
            other => Err(CliError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub system: SystemParams,
    pub integrator: IntegratorConfig,
    pub kappa_list: Vec<f64>,
    /// Transverse-field values h/J for the field scan (J is held fixed).
    pub field_grid: Vec<f64>,
    /// Steady-state evaluation time; 200/Γ₊ for the default parameters.
    pub t_eval: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Upper bound on concurrently running trajectories.
    pub workers: usize,
}

pub const DEFAULT_KAPPAS: [f64; 5] = [0.0, 50.0, 100.0, 150.0, 200.0];

/// 0, 0.025, …, 1.0 (41 points). Built as k/40 so that 0.25 and 0.5 are exact.
pub fn default_field_grid() -> Vec<f64> {
    (0..=40).map(|k| k as f64 / 40.0).collect()
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Simulate,
            system: SystemParams::weak_coupling(),
            integrator: IntegratorConfig::default(),
            kappa_list: DEFAULT_KAPPAS.to_vec(),
            field_grid: default_field_grid(),
            t_eval: 4000.0,
            output_dir: PathBuf::from("out"),
            seed: 20_240_601,
            workers: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> CliResult<()> {
        self.system.validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.integrator.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if self.mode == Mode::SweepKappa && self.kappa_list.is_empty() {
            return Err(CliError::Config("sweep.kappa_list must not be empty".into()));
        }
        if self.kappa_list.iter().any(|k| !k.is_finite()) {
            return Err(CliError::Config("sweep.kappa_list entries must be finite".into()));
        }
        if self.field_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(CliError::Config("sweep.field_grid must be strictly increasing".into()));
        }
        if self.mode == Mode::SweepField && self.field_grid.is_empty() {
            return Err(CliError::Config("sweep.field_grid must not be empty".into()));
        }
        if !(self.t_eval > 0.0 && self.t_eval <= self.integrator.t_max + 1e-9 * self.integrator.t_max) {
            return Err(CliError::Config(format!(
                "analysis.t_eval = {} must lie in (0, integrator.t_max = {}]",
                self.t_eval, self.integrator.t_max
            )));
        }
        if self.workers == 0 {
            return Err(CliError::Config("run.workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Parses a configuration file on top of the defaults.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = split_assignment(line)
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got '{line}'", lineno + 1)))?;
            cfg.set(key, value)
                .map_err(|e| CliError::Config(format!("line {}: {}", lineno + 1, strip_prefix(&e))))?;
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> CliResult<()> {
        let (key, value) = split_assignment(assignment)
            .ok_or_else(|| CliError::Config(format!("override '{assignment}' is not key=value")))?;
        self.set(key, value)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let s = &mut self.system;
        let i = &mut self.integrator;
        match key {
            "mode" => self.mode = value.parse()?,
            "system.J" => s.j = parse_f64(key, value)?,
            "system.h" => {
                let h = parse_f64(key, value)?;
                s.h1 = h;
                s.h2 = h;
            }
            "system.h1" => s.h1 = parse_f64(key, value)?,
            "system.h2" => s.h2 = parse_f64(key, value)?,
            "system.g" => s.g = parse_pair(key, value)?,
            "system.gamma_plus" => s.gamma_plus = parse_pair(key, value)?,
            "system.eps_plus" => s.eps_plus = parse_pair(key, value)?,
            "system.gamma_minus" => s.gamma_minus = parse_pair(key, value)?,
            "system.eps_minus" => s.eps_minus = parse_pair(key, value)?,
            "system.kappa" => s.kappa = parse_pair(key, value)?,
            "integrator.dt" => i.dt = parse_f64(key, value)?,
            "integrator.t_max" => i.t_max = parse_f64(key, value)?,
            "integrator.record_stride" => i.record_stride = parse_int(key, value)?,
            "integrator.cp_tol" => i.cp_tol = parse_f64(key, value)?,
            "analysis.entropy_log_base" => {
                i.log_base = LogBase::parse(value).map_err(|e| CliError::Config(e.to_string()))?
            }
            "analysis.t_eval" => self.t_eval = parse_f64(key, value)?,
            "sweep.kappa_list" => self.kappa_list = parse_list(key, value)?,
            "sweep.field_grid" => self.field_grid = parse_list(key, value)?,
            "run.output_dir" => self.output_dir = PathBuf::from(value),
            "run.seed" => self.seed = parse_int(key, value)?,
            "run.workers" => self.workers = parse_int(key, value)?,
            other => return Err(CliError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let s = &self.system;
        let i = &self.integrator;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("mode", self.mode.name().to_string());
        put("system.J", s.j.to_string());
        put("system.h1", s.h1.to_string());
        put("system.h2", s.h2.to_string());
        put("system.g", join(&s.g));
        put("system.gamma_plus", join(&s.gamma_plus));
        put("system.eps_plus", join(&s.eps_plus));
        put("system.gamma_minus", join(&s.gamma_minus));
        put("system.eps_minus", join(&s.eps_minus));
        put("system.kappa", join(&s.kappa));
        put("integrator.dt", i.dt.to_string());
        put("integrator.t_max", i.t_max.to_string());
        put("integrator.record_stride", i.record_stride.to_string());
        put("integrator.cp_tol", i.cp_tol.to_string());
        put("analysis.entropy_log_base", i.log_base.name().to_string());
        put("analysis.t_eval", self.t_eval.to_string());
        put("sweep.kappa_list", join(&self.kappa_list));
        put("sweep.field_grid", join(&self.field_grid));
        put("run.output_dir", self.output_dir.display().to_string());
        put("run.seed", self.seed.to_string());
        put("run.workers", self.workers.to_string());
        out
    }
}

fn split_assignment(s: &str) -> Option<(&str, &str)> {
    let (k, v) = s.split_once('=')?;
    let (k, v) = (k.trim(), v.trim());
    (!k.is_empty()).then_some((k, v))
}

fn strip_prefix(e: &CliError) -> String {
    match e {
        CliError::Config(msg) => msg.clone(),
        other => other.to_string(),
    }
}

fn parse_f64(key: &str, value: &str) -> CliResult<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Config(format!("{key}: '{value}' is not a number")))
}

fn parse_int<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| CliError::Config(format!("{key}: '{value}' is not a non-negative integer")))
}

fn parse_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value.split(',').map(|v| parse_f64(key, v)).collect()
}

fn parse_pair(key: &str, value: &str) -> CliResult<[f64; 2]> {
    match parse_list(key, value)?.as_slice() {
        [x] => Ok([*x, *x]),
        [x, y] => Ok([*x, *y]),
        _ => Err(CliError::Config(format!("{key}: expected one value or two comma-separated values"))),
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_weak_coupling_run() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.integrator.n_steps(), 80_000);
        assert_eq!(cfg.field_grid.len(), 41);
        assert_eq!(cfg.field_grid[10], 0.25);
        assert_eq!(cfg.t_eval, 200.0 / cfg.system.gamma_plus[0]);
        cfg.validate().unwrap();
    }

    #[test]
    fn parses_sections_comments_and_pairs() {
        let cfg = ExperimentConfig::parse(
            "# comment\nmode = sweep-kappa\nsystem.h = 0.3\nsystem.kappa = 10, 20\n\nsweep.kappa_list = 0,100\nanalysis.entropy_log_base = binary\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::SweepKappa);
        assert_eq!((cfg.system.h1, cfg.system.h2), (0.3, 0.3));
        assert_eq!(cfg.system.kappa, [10.0, 20.0]);
        assert_eq!(cfg.kappa_list, vec![0.0, 100.0]);
        assert_eq!(cfg.integrator.log_base, LogBase::Binary);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("system.J 1").is_err());
        assert!(ExperimentConfig::parse("system.nope = 1").is_err());
        assert!(ExperimentConfig::parse("integrator.dt = fast").is_err());
        assert!(ExperimentConfig::parse("system.g = 1,2,3").is_err());
        assert!(ExperimentConfig::parse("integrator.record_stride = -1").is_err());
        let mut cfg = ExperimentConfig::default();
        cfg.field_grid = vec![0.0, 0.5, 0.5];
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig { mode: Mode::SweepKappa, ..Default::default() };
        cfg.kappa_list.clear();
        assert!(cfg.validate().is_err());
        let cfg = ExperimentConfig { t_eval: 5000.0, ..Default::default() };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 1);
    }

    #[test]
    fn overrides_apply_in_order() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_override("integrator.dt=0.025").unwrap();
        cfg.apply_override("run.workers = 4").unwrap();
        assert_eq!(cfg.integrator.dt, 0.025);
        assert_eq!(cfg.workers, 4);
        assert!(cfg.apply_override("novalue").is_err());
    }

    #[test]
    fn round_trip_is_exact() {
        let mut cfg = ExperimentConfig::default();
        cfg.system.kappa = [0.1, 1.0 / 3.0];
        cfg.system.eps_minus = [1e-17, 2.5e-3];
        cfg.integrator.dt = 0.05 / 3.0;
        cfg.field_grid = vec![0.0, 0.1, 0.7000000000000001];
        cfg.output_dir = PathBuf::from("/tmp/some dir");
        let text = cfg.serialize();
        assert_eq!(ExperimentConfig::parse(&text).unwrap(), cfg);
    }
}
