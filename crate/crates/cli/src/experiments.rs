// Copyright 2026 The nonassoc-tfim Authors
// SPDX-License-Identifier: Apache-2.0

//! Trajectory runs, κ sweeps and transverse-field scans, with CSV output.
//!
//! Independent trajectories run on a rayon pool capped at `workers`
//! threads. Results are collected by index, so output does not depend on
//! the number of workers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::info;
use nonassoc_tfim::operators::initial_plus_product;
use nonassoc_tfim::{evolve, steady_state_summary, GeneratorContext, Site, SystemParams, Trajectory};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

pub const TRAJECTORY_HEADER: &str = "t,sz1,sx1,zz,purity,entropy,concurrence,min_eig";
pub const SWEEP_HEADER: &str = "kappa,lambda_over_gamma,c_ss,c_max,purity_ss,entropy_ss,min_eig_global";

/// 17 significant digits: round-trips every double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs one trajectory from |+⟩⟨+|⊗|+⟩⟨+|.
pub fn run_trajectory(system: &SystemParams, cfg: &ExperimentConfig) -> CliResult<Trajectory> {
    run_trajectory_scaled(system, cfg, 1.0)
}

/// As [`run_trajectory`] with every feedback strength multiplied by `feedback_scale`.
pub fn run_trajectory_scaled(system: &SystemParams, cfg: &ExperimentConfig, feedback_scale: f64) -> CliResult<Trajectory> {
    let ctx = GeneratorContext::new(system)?.with_feedback_scale(feedback_scale);
    Ok(evolve(&initial_plus_product(), &ctx, &cfg.integrator)?)
}

pub(crate) fn pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

/// Runs `f` over `items` on at most `workers` threads, preserving input order.
pub fn par_map<T: Sync, R: Send>(
    workers: usize,
    items: &[T],
    f: impl Fn(&T) -> CliResult<R> + Sync + Send,
) -> CliResult<Vec<R>> {
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    pool(workers)?.install(|| items.par_iter().map(f).collect())
}

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(200 * (traj.records.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in &traj.records {
        let cols = [r.t, r.sz1, r.sx1, r.zz, r.purity, r.entropy, r.concurrence, r.min_eig];
        out.push_str(&cols.map(fmt_f64).join(","));
        out.push('\n');
    }
    out
}

pub fn kappa_label(kappa: f64) -> String {
    if kappa.fract() == 0.0 && kappa.abs() < 1e15 {
        format!("{}", kappa as i64)
    } else {
        format!("{kappa}").replace('.', "p")
    }
}

pub fn trajectory_path(dir: &Path, kappa: f64) -> PathBuf {
    dir.join(format!("trajectory_kappa_{}.csv", kappa_label(kappa)))
}

fn write_metadata(cfg: &ExperimentConfig) -> CliResult<()> {
    let mut text = String::from("# run configuration\n");
    text.push_str(&cfg.serialize());
    text.push_str(&format!("entropy_log_base = {}\n", cfg.integrator.log_base.name()));
    text.push_str(&format!("crate_version = {}\n", env!("CARGO_PKG_VERSION")));
    write_file(&cfg.output_dir.join("run_metadata.txt"), &text)
}

/// One trajectory CSV per κ in `kappa_list`; returns the file paths.
pub fn run_simulate(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    cfg.validate()?;
    create_dir(&cfg.output_dir)?;
    let trajectories = par_map(cfg.workers, &cfg.kappa_list, |&kappa| {
        info!("simulating kappa = {kappa}");
        run_trajectory(&cfg.system.clone().with_kappa(kappa), cfg)
    })?;
    let mut paths = Vec::new();
    for (kappa, traj) in cfg.kappa_list.iter().zip(&trajectories) {
        let path = trajectory_path(&cfg.output_dir, *kappa);
        write_file(&path, &trajectory_csv(traj))?;
        paths.push(path);
    }
    write_metadata(cfg)?;
    Ok(paths)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub lambda_over_gamma: f64,
    pub c_ss: f64,
    pub c_max: f64,
    pub purity_ss: f64,
    pub entropy_ss: f64,
    pub min_eig_global: f64,
}

impl SweepRow {
    pub fn from_trajectory(system: &SystemParams, traj: &Trajectory, t_eval: f64) -> CliResult<Self> {
        let s = steady_state_summary(&traj.records, t_eval)?;
        Ok(Self {
            kappa: system.kappa[0],
            lambda_over_gamma: system.lambda_over_gamma(Site::One),
            c_ss: s.c_ss,
            c_max: s.c_max,
            purity_ss: s.purity_ss,
            entropy_ss: s.entropy_ss,
            min_eig_global: traj.min_eig_global,
        })
    }

    fn csv(&self) -> String {
        [self.kappa, self.lambda_over_gamma, self.c_ss, self.c_max, self.purity_ss, self.entropy_ss, self.min_eig_global]
            .map(fmt_f64)
            .join(",")
    }
}

/// Steady-state summaries for every κ, in `kappa_list` order.
pub fn sweep_kappa(cfg: &ExperimentConfig) -> CliResult<Vec<SweepRow>> {
    sweep_kappa_scaled(cfg, 1.0)
}

pub fn sweep_kappa_scaled(cfg: &ExperimentConfig, feedback_scale: f64) -> CliResult<Vec<SweepRow>> {
    cfg.validate()?;
    par_map(cfg.workers, &cfg.kappa_list, |&kappa| {
        let system = cfg.system.clone().with_kappa(kappa);
        let traj = run_trajectory_scaled(&system, cfg, feedback_scale)?;
        SweepRow::from_trajectory(&system, &traj, cfg.t_eval)
    })
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

pub fn run_sweep_kappa(cfg: &ExperimentConfig) -> CliResult<PathBuf> {
    let rows = sweep_kappa(cfg)?;
    create_dir(&cfg.output_dir)?;
    let path = cfg.output_dir.join("sweep_kappa.csv");
    write_file(&path, &sweep_csv(&rows))?;
    write_metadata(cfg)?;
    Ok(path)
}

/// Steady-state concurrence on the (h/J, κ) grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldScan {
    pub fields: Vec<f64>,
    pub kappas: Vec<f64>,
    /// `c_ss[i][k]` at `fields[i]`, `kappas[k]`.
    pub c_ss: Vec<Vec<f64>>,
}

impl FieldScan {
    /// Grid value maximizing C_ss for the k-th κ (first one on ties).
    pub fn argmax(&self, k: usize) -> f64 {
        let mut best = 0;
        for i in 1..self.fields.len() {
            if self.c_ss[i][k] > self.c_ss[best][k] {
                best = i;
            }
        }
        self.fields[best]
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("h_over_J");
        for &k in &self.kappas {
            out.push_str(&format!(",c_ss_kappa_{}", kappa_label(k)));
        }
        out.push('\n');
        for (h, row) in self.fields.iter().zip(&self.c_ss) {
            out.push_str(&fmt_f64(*h));
            for c in row {
                out.push(',');
                out.push_str(&fmt_f64(*c));
            }
            out.push('\n');
        }
        out.push_str("# argmax_h_over_J");
        for k in 0..self.kappas.len() {
            out.push(',');
            out.push_str(&fmt_f64(self.argmax(k)));
        }
        out.push('\n');
        out
    }
}

/// Runs every (h/J, κ) cell. J is held at its configured value and h₁ = h₂ = (h/J)·J.
pub fn sweep_field(cfg: &ExperimentConfig) -> CliResult<FieldScan> {
    cfg.validate()?;
    let cells: Vec<(f64, f64)> = cfg
        .field_grid
        .iter()
        .flat_map(|&h| cfg.kappa_list.iter().map(move |&k| (h, k)))
        .collect();
    let values = par_map(cfg.workers, &cells, |&(h, kappa)| {
        let system = cfg.system.clone().with_field(h * cfg.system.j).with_kappa(kappa);
        let traj = run_trajectory(&system, cfg)?;
        Ok(steady_state_summary(&traj.records, cfg.t_eval)?.c_ss)
    })?;
    let nk = cfg.kappa_list.len();
    Ok(FieldScan {
        fields: cfg.field_grid.clone(),
        kappas: cfg.kappa_list.clone(),
        c_ss: values.chunks(nk.max(1)).map(|c| c.to_vec()).collect(),
    })
}

pub fn run_sweep_field(cfg: &ExperimentConfig) -> CliResult<PathBuf> {
    let scan = sweep_field(cfg)?;
    create_dir(&cfg.output_dir)?;
    let path = cfg.output_dir.join("sweep_field.csv");
    write_file(&path, &scan.csv())?;
    write_metadata(cfg)?;
    Ok(path)
}

/// Writes gnuplot scripts next to the CSVs they plot; returns their paths.
pub fn write_plot_scripts(cfg: &ExperimentConfig) -> CliResult<Vec<PathBuf>> {
    create_dir(&cfg.output_dir)?;
    let mut paths = Vec::new();

    let mut dynamics = String::from(
        "set datafile separator ','\nset key autotitle columnhead\nset xlabel 't'\nset terminal pngcairo size 1200,900\nset output 'dynamics.png'\nset multiplot layout 2,2\n",
    );
    for (col, label) in [(2, "<sigma_z^(1)>"), (3, "<sigma_x^(1)>"), (5, "purity"), (7, "concurrence")] {
        dynamics.push_str(&format!("set ylabel '{label}'\nplot "));
        let series: Vec<String> = cfg
            .kappa_list
            .iter()
            .map(|&k| {
                let file = trajectory_path(Path::new("."), k);
                format!("'{}' using 1:{col} with lines title 'kappa={}'", file.display(), kappa_label(k))
            })
            .collect();
        dynamics.push_str(&series.join(", "));
        dynamics.push('\n');
    }
    dynamics.push_str("unset multiplot\n");
    let path = cfg.output_dir.join("dynamics.gp");
    write_file(&path, &dynamics)?;
    paths.push(path);

    let sweep = "set datafile separator ','\nset terminal pngcairo size 800,600\nset output 'sweep_kappa.png'\nset xlabel 'kappa'\nset ylabel 'concurrence'\nplot 'sweep_kappa.csv' using 1:3 with linespoints title 'C_ss', '' using 1:4 with linespoints title 'C_max'\n";
    let path = cfg.output_dir.join("sweep_kappa.gp");
    write_file(&path, sweep)?;
    paths.push(path);

    let mut field = String::from(
        "set datafile separator ','\nset datafile commentschars '#'\nset terminal pngcairo size 800,600\nset output 'sweep_field.png'\nset xlabel 'h/J'\nset ylabel 'C_ss'\nplot ",
    );
    let series: Vec<String> = cfg
        .kappa_list
        .iter()
        .enumerate()
        .map(|(k, &kappa)| format!("'sweep_field.csv' using 1:{} with linespoints title 'kappa={}'", k + 2, kappa_label(kappa)))
        .collect();
    field.push_str(&series.join(", "));
    field.push('\n');
    let path = cfg.output_dir.join("sweep_field.gp");
    write_file(&path, &field)?;
    paths.push(path);
    Ok(paths)
}
