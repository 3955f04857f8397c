use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    compute_dp, compute_xp, default_s_grid, fit_decay, initial_data_report, low_series,
    make_initial_data, radial_block_record, write_loglog_svg, DecayParams, FunctionalTable,
    InitialDataReport, InitialDataSpec, PlotSeries, RadialData,
};
use crate::besov::{BlockNormRecord, FreqRange};
use crate::error::{Error, Result};
use crate::linear::{DimensionlessParams, LyapunovData};
use crate::nsf::{nondimensionalize, PhysicalParams, PressureLaw};
use crate::solver::{integrate, write_checkpoint, RecordSpec, Scheme, SolverConfig};
use crate::spectral::GridSpec;
use crate::util::{fmt_f64, geometric_times};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub d: usize,
    pub n: usize,
    pub box_len: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    pub lambda: f64,
    pub mu: f64,
    pub kappa: f64,
    pub cv: f64,
    pub rho_bar: f64,
    #[serde(rename = "T_bar")]
    pub t_bar: f64,
    pub pressure: PressureLaw,
}

impl PhysicsSection {
    pub fn physical(&self) -> PhysicalParams {
        PhysicalParams {
            lambda: self.lambda,
            mu: self.mu,
            kappa: self.kappa,
            cv: self.cv,
            rho_bar: self.rho_bar,
            t_bar: self.t_bar,
        }
    }
}

fn default_eps() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecaySection {
    pub s1: f64,
    pub p: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub j0: i32,
    #[serde(default)]
    pub s_grid: Option<Vec<f64>>,
    /// Time window of the power-law fits.
    #[serde(default)]
    pub fit_window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact linear evolution on the grid.
    Linear,
    /// Full nonlinear evolution on the grid.
    Nonlinear,
    /// Linear and nonlinear runs from the same data.
    Both,
    /// Grid-free linear evolution of radial data.
    Radial,
}

fn default_mode() -> Mode {
    Mode::Nonlinear
}
fn default_dt() -> f64 {
    0.05
}
fn default_scheme() -> Scheme {
    Scheme::IfRk2
}
fn default_t0() -> f64 {
    0.1
}
fn default_q() -> f64 {
    1.25
}
fn default_cfl() -> f64 {
    0.5
}
fn default_radial_j_min() -> i32 {
    -40
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_t0")]
    pub record_t0: f64,
    #[serde(default = "default_q")]
    pub record_q: f64,
    #[serde(default)]
    pub extra_times: Vec<f64>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    /// Lowest block of the grid-free mode.
    #[serde(default = "default_radial_j_min")]
    pub radial_j_min: i32,
}

impl RunSection {
    pub fn solver_config(&self, nonlinear: bool) -> SolverConfig {
        SolverConfig {
            dt: self.dt,
            t_end: self.t_end,
            scheme: self.scheme,
            record_t0: self.record_t0,
            record_q: self.record_q,
            extra_times: self.extra_times.clone(),
            cfl_safety: self.cfl_safety,
            nonlinear,
        }
    }
}

fn default_plots() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    #[serde(default = "default_plots")]
    pub plots: bool,
    /// Dump the final state of grid runs.
    #[serde(default)]
    pub checkpoint: bool,
}

pub type InitialSection = InitialDataSpec;

/// A complete experiment description, usually read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: GridSection,
    pub physics: PhysicsSection,
    pub decay: DecaySection,
    pub initial_data: InitialSection,
    pub solver: RunSection,
    pub outputs: OutputSection,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.d, self.grid.n, self.grid.box_len)
    }

    pub fn decay_params(&self) -> Result<DecayParams> {
        let sec = &self.decay;
        let dp = DecayParams {
            d: self.grid.d,
            s1: sec.s1,
            p: sec.p,
            eps: sec.eps,
            j0: sec.j0,
            s_grid: sec
                .s_grid
                .clone()
                .unwrap_or_else(|| default_s_grid(self.grid.d, sec.s1, sec.eps)),
        };
        dp.validate()?;
        Ok(dp)
    }

    /// Fit window: the configured one, or a default suited to the mode.
    pub fn fit_window(&self) -> [f64; 2] {
        if let Some(w) = self.decay.fit_window {
            return w;
        }
        match self.solver.mode {
            Mode::Radial => [10.0, self.solver.t_end.min(1000.0)],
            _ => {
                let l = self.grid.box_len / (2.0 * std::f64::consts::PI);
                [5.0, self.solver.t_end.min(0.5 * l * l)]
            }
        }
    }
}

/// `(L/2π)²/c0`: beyond this the lowest box mode has decayed and algebraic
/// decay turns exponential.
pub fn saturation_time(box_len: f64, c0: f64) -> f64 {
    let l = box_len / (2.0 * std::f64::consts::PI);
    l * l / c0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRecord {
    pub run: String,
    pub norm_id: String,
    pub window: [f64; 2],
    pub exponent: f64,
    pub r2: f64,
    pub theory_exponent: f64,
    pub intercept: f64,
    pub samples: usize,
    /// The window reaches past the box saturation time.
    pub saturated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub run: String,
    pub steps: usize,
    pub records: usize,
    #[serde(skip)]
    pub record: BlockNormRecord,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub params: DimensionlessParams,
    pub decay: DecayParams,
    pub c0: f64,
    /// `None` for the grid-free mode.
    pub saturation_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_data: Option<InitialDataReport>,
    pub runs: Vec<RunOutput>,
    pub fits: Vec<FitRecord>,
    pub functionals: Vec<(String, FunctionalTable)>,
    pub notes: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn fit(&self, run: &str, norm_id: &str) -> Option<&FitRecord> {
        self.fits
            .iter()
            .find(|f| f.run == run && f.norm_id == norm_id)
    }

    pub fn functional(&self, run: &str, name: &str) -> Option<&FunctionalTable> {
        self.functionals
            .iter()
            .find(|(r, t)| r == run && t.name == name)
            .map(|(_, t)| t)
    }

    pub fn run(&self, run: &str) -> Option<&RunOutput> {
        self.runs.iter().find(|r| r.run == run)
    }
}

/// Identifier of the low-frequency `Ḃ^s_{2,1}` series, e.g. `B1.5_21_low`.
pub fn low_norm_id(s: f64) -> String {
    let s = if s == 0.0 { 0.0 } else { s };
    format!("B{}_21_low", (s * 1e9).round() / 1e9)
}

const LOW: [&str; 3] = ["a", "u", "theta"];

/// Runs every evolution the config asks for and writes the reports into
/// `outputs.dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let dp = cfg.decay_params()?;
    let (params, table) = nondimensionalize(&cfg.physics.physical(), &cfg.physics.pressure)?;
    let ly = LyapunovData::compute(&params, 1.0)?;
    cfg.initial_data.validate()?;
    let window = cfg.fit_window();
    let mut notes = Vec::new();
    let mut checkpoints = Vec::new();
    let mut runs = Vec::new();
    let mut initial = None;
    let saturation = match cfg.solver.mode {
        Mode::Radial => None,
        _ => Some(saturation_time(cfg.grid.box_len, ly.c0)),
    };

    match cfg.solver.mode {
        Mode::Radial => {
            if dp.d != 3 && dp.d != 2 {
                return Err(Error::param("d", "grid-free mode needs d = 2 or 3"));
            }
            let mut times = vec![0.0];
            times.extend(geometric_times(
                cfg.solver.record_t0,
                cfg.solver.record_q,
                cfg.solver.t_end,
            ));
            let data = RadialData {
                spec: cfg.initial_data.clone(),
                decay: dp.clone(),
            };
            let rec =
                radial_block_record(&data, &params, &times, cfg.solver.radial_j_min, dp.j0 + 2)?;
            notes.push("grid-free mode records L2 block norms of (a, u, theta) only; functionals need a grid run".into());
            runs.push(RunOutput {
                run: "radial".into(),
                steps: 0,
                records: rec.times.len(),
                record: rec,
            });
        }
        mode => {
            let grid = cfg.grid_spec()?;
            let u0 = make_initial_data(&cfg.initial_data, grid, &dp)?;
            initial = Some(initial_data_report(&u0, &dp)?);
            let spec = RecordSpec::for_grid(&grid, dp.p);
            let mut wanted = Vec::new();
            if matches!(mode, Mode::Nonlinear | Mode::Both) {
                wanted.push(("nonlinear", true));
            }
            if matches!(mode, Mode::Linear | Mode::Both) {
                wanted.push(("linear", false));
            }
            for (name, nonlinear) in wanted {
                let scfg = cfg.solver.solver_config(nonlinear);
                let out = integrate(&u0, &scfg, &params, &table, &spec, false)?;
                if let Some(last) = out.aux.last() {
                    if last.upper_third_fraction > 1e-6 {
                        notes.push(format!(
                            "{name}: {:.3e} of the energy sits above n/3 at t = {}",
                            last.upper_third_fraction, last.t
                        ));
                    }
                }
                if cfg.outputs.checkpoint {
                    let stem = cfg.outputs.dir.join(format!("final_{name}"));
                    write_checkpoint(
                        &out.final_state,
                        &stem,
                        serde_json::to_value(cfg).map_err(Error::from)?,
                    )?;
                    checkpoints.push(stem.with_extension("bin"));
                    checkpoints.push(stem.with_extension("json"));
                }
                runs.push(RunOutput {
                    run: name.into(),
                    steps: out.steps,
                    records: out.record.times.len(),
                    record: out.record,
                });
            }
        }
    }

    let mut fits = Vec::new();
    let mut functionals = Vec::new();
    let mut series_cols: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for run in &runs {
        for &s in &dp.s_grid {
            let id = low_norm_id(s);
            let series = low_series(&run.record, &LOW, s, FreqRange::Low(dp.j0))?;
            match fit_decay(&series, window) {
                Ok(f) => fits.push(FitRecord {
                    run: run.run.clone(),
                    norm_id: id.clone(),
                    window,
                    exponent: f.exponent,
                    r2: f.r2,
                    theory_exponent: -dp.low_rate(s),
                    intercept: f.intercept,
                    samples: f.samples,
                    saturated: saturation.is_some_and(|ts| window[1] > ts),
                }),
                Err(e) => notes.push(format!("{}: no fit for {id}: {e}", run.run)),
            }
            series_cols.insert(format!("{}:{id}", run.run), series);
        }
        if run.run != "radial" {
            functionals.push((run.run.clone(), compute_dp(&run.record, &dp)?));
            match compute_xp(&run.record, &dp) {
                Ok(x) => functionals.push((run.run.clone(), x)),
                Err(e) => notes.push(format!("{}: X_p unavailable: {e}", run.run)),
            }
        }
    }

    let mut report = ExperimentReport {
        version: crate::VERSION,
        config: cfg.clone(),
        params,
        decay: dp,
        c0: ly.c0,
        saturation_time: saturation,
        initial_data: initial,
        runs,
        fits,
        functionals,
        notes,
        files: checkpoints,
    };
    write_outputs(&mut report, &series_cols)?;
    Ok(report)
}

fn write_outputs(
    report: &mut ExperimentReport,
    series: &BTreeMap<String, Vec<(f64, f64)>>,
) -> Result<()> {
    let dir = report.config.outputs.dir.clone();
    fs::create_dir_all(&dir)?;
    let mut files = std::mem::take(&mut report.files);

    for (i, run) in report.runs.iter().enumerate() {
        let name = if i == 0 {
            "blocks.csv".to_string()
        } else {
            format!("blocks_{}.csv", run.run)
        };
        let path = dir.join(name);
        run.record.write_csv(fs::File::create(&path)?)?;
        files.push(path);
    }

    let path = dir.join("series.csv");
    let mut w = csv::Writer::from_path(&path)?;
    let cols: Vec<&String> = series.keys().collect();
    let mut header = vec!["t".to_string()];
    header.extend(cols.iter().map(|c| c.to_string()));
    w.write_record(&header)?;
    if let Some(first) = series.values().next() {
        for (m, (t, _)) in first.iter().enumerate() {
            let mut row = vec![fmt_f64(*t)];
            row.extend(cols.iter().map(|c| fmt_f64(series[*c][m].1)));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    files.push(path);

    let path = dir.join("fits.json");
    fs::write(&path, serde_json::to_string_pretty(&report.fits)?)?;
    files.push(path);

    let path = dir.join("functionals.json");
    let tables: Vec<serde_json::Value> = report
        .functionals
        .iter()
        .map(|(run, t)| serde_json::json!({ "run": run, "table": t }))
        .collect();
    fs::write(&path, serde_json::to_string_pretty(&tables)?)?;
    files.push(path);

    if report.config.outputs.plots {
        let plots = dir.join("plots");
        fs::create_dir_all(&plots)?;
        for run in &report.runs {
            let fits: Vec<&FitRecord> = report.fits.iter().filter(|f| f.run == run.run).collect();
            let curves: Vec<PlotSeries<'_>> = fits
                .iter()
                .map(|f| PlotSeries {
                    label: &f.norm_id,
                    points: &series[&format!("{}:{}", run.run, f.norm_id)],
                    theory_exponent: Some(f.theory_exponent),
                    window: f.window,
                })
                .collect();
            if curves.is_empty() {
                continue;
            }
            let path = plots.join(format!("{}_low.svg", run.run));
            write_loglog_svg(
                &path,
                &format!("{} run, low-frequency norms", run.run),
                &curves,
            )?;
            files.push(path);
        }
    }

    report.files = files;
    let path = dir.join("report.json");
    report.files.push(path.clone());
    fs::write(&path, serde_json::to_string_pretty(&*report)?)?;
    Ok(())
}
