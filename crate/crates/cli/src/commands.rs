use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use nsf_core::besov::{besov_norm, restricted_besov_norm, BesovParams, FreqRange};
use nsf_core::decay::{fit_decay, run_experiment, ExperimentConfig, ExperimentReport, Mode};
use nsf_core::linear::{
    block_decay_envelope, eigenvalues, mode_semigroup, spectral_abscissa, symbol_matrix,
    DimensionlessParams, LyapunovData, ModeMatrix,
};
use nsf_core::propcheck::{run_suite, tally, Suite};
use nsf_core::solver::read_checkpoint;
use nsf_core::util::parse_exponent;
use nsf_core::VERSION;

use crate::{Command, Groups, SuiteArg};

fn emit(value: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn params(g: &Groups) -> Result<DimensionlessParams> {
    Ok(DimensionlessParams::new(g.beta, g.gamma, g.mu_tilde)?)
}

fn load_config(path: &Path, out: Option<&Path>) -> Result<ExperimentConfig> {
    let mut cfg =
        ExperimentConfig::from_file(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(dir) = out {
        cfg.outputs.dir = dir.to_path_buf();
    }
    Ok(cfg)
}

fn experiment_summary(rep: &ExperimentReport) -> Value {
    json!({
        "version": VERSION,
        "config": rep.config,
        "params": rep.params,
        "c0": rep.c0,
        "saturation_time": rep.saturation_time,
        "initial_data": rep.initial_data,
        "runs": rep.runs,
        "fits": rep.fits,
        "functionals": rep.functionals,
        "notes": rep.notes,
        "files": rep.files,
    })
}

/// Returns whether every requested check passed.
pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Symbol { rho, groups, t } => {
            let p = params(&groups)?;
            let m = symbol_matrix(rho, &p)?;
            let mut out = json!({
                "version": VERSION,
                "config": { "rho": rho, "params": groups, "t": t },
                "matrix": m,
                "eigenvalues": eigenvalues(rho, &p)?,
                "spectral_abscissa": spectral_abscissa(rho, &p)?,
            });
            if let Some(t) = t {
                let (e, transverse) = mode_semigroup(rho, t, &p)?;
                out["semigroup"] = json!(ModeMatrix { rho, entries: e });
                out["transverse_factor"] = json!(transverse);
            }
            emit(&out)?;
            Ok(true)
        }
        Command::Lyapunov { groups, rho0 } => {
            let p = params(&groups)?;
            let data = LyapunovData::compute(&p, rho0)?;
            emit(&json!({
                "version": VERSION,
                "config": { "params": groups, "rho0": rho0 },
                "lyapunov": data,
            }))?;
            Ok(true)
        }
        Command::LinearDecay { config, grid, out } => {
            let mut cfg = load_config(&config, out.as_deref())?;
            cfg.solver.mode = if grid { Mode::Linear } else { Mode::Radial };
            let rep = run_experiment(&cfg)?;
            let ly = LyapunovData::compute(&rep.params, 1.0)?;
            let envelopes = (-4..=rep.decay.j0)
                .map(|j| block_decay_envelope(j, rep.decay.j0, &rep.params, &ly, 64))
                .collect::<nsf_core::Result<Vec<_>>>()?;
            let envelopes: Vec<Value> = envelopes
                .iter()
                .map(|e| {
                    json!({
                        "j": e.j, "rate": e.rate, "c": e.c, "c_reference": e.c_reference,
                        "ratio": e.ratio, "within_factor_4": e.within_factor_4,
                        "monotone": e.monotone, "certified": e.certified,
                    })
                })
                .collect();
            let mut summary = experiment_summary(&rep);
            summary["envelopes"] = json!(envelopes);
            emit(&summary)?;
            Ok(true)
        }
        Command::Simulate { config, out } => {
            let cfg = load_config(&config, out.as_deref())?;
            if cfg.solver.mode == Mode::Radial {
                bail!("simulate needs a grid mode; use linear-decay for the grid-free study");
            }
            let rep = run_experiment(&cfg)?;
            emit(&experiment_summary(&rep))?;
            Ok(true)
        }
        Command::Norms {
            checkpoint,
            s,
            p,
            r,
            j0,
        } => {
            let r = parse_exponent(&r).ok_or_else(|| anyhow!("bad summability index {r:?}"))?;
            let bp = BesovParams::new(s, p, r)?;
            let (state, meta) = read_checkpoint(&checkpoint)?;
            let mut rows = Vec::new();
            for (name, field) in [
                ("a", &state.a),
                ("u", &state.upsilon),
                ("theta", &state.theta),
            ] {
                rows.push(json!({
                    "component": name,
                    "full": besov_norm(field, &bp),
                    "low": restricted_besov_norm(field, &bp, FreqRange::Low(j0)),
                    "high": restricted_besov_norm(field, &bp, FreqRange::High(j0)),
                }));
            }
            emit(&json!({
                "version": VERSION,
                "config": { "checkpoint": checkpoint, "s": s, "p": p, "r": r, "j0": j0 },
                "t": meta.t,
                "grid": meta.grid,
                "norms": rows,
            }))?;
            Ok(true)
        }
        Command::Fit {
            csv,
            column,
            window,
        } => {
            let series = read_series(&csv, &column)?;
            let window = match parse_window(&window)? {
                Some(w) => w,
                None => {
                    let ts: Vec<f64> = series.iter().map(|p| p.0).filter(|t| *t > 0.0).collect();
                    [
                        ts.iter().cloned().fold(f64::INFINITY, f64::min),
                        ts.iter().cloned().fold(0.0, f64::max),
                    ]
                }
            };
            let fit = fit_decay(&series, window)?;
            emit(&json!({
                "version": VERSION,
                "config": { "csv": csv, "column": column, "window": window },
                "fit": fit,
            }))?;
            Ok(true)
        }
        Command::Propcheck { suite, seed } => {
            let suite = match suite {
                SuiteArg::Spectral => Suite::Spectral,
                SuiteArg::Besov => Suite::Besov,
                SuiteArg::Linear => Suite::Linear,
                SuiteArg::Nsf => Suite::Nsf,
                SuiteArg::Solver => Suite::Solver,
                SuiteArg::All => Suite::All,
            };
            let results = run_suite(suite, seed);
            let (passed, total) = tally(&results);
            for r in &results {
                eprintln!(
                    "{} {}/{}: {:e} ({})",
                    if r.passed { "pass" } else { "FAIL" },
                    r.suite,
                    r.name,
                    r.value,
                    r.tolerance
                );
            }
            emit(&json!({
                "version": VERSION,
                "config": { "suite": suite, "seed": seed },
                "passed": passed,
                "total": total,
                "checks": results,
            }))?;
            Ok(passed == total)
        }
    }
}

fn parse_window(args: &[String]) -> Result<Option<[f64; 2]>> {
    let parts: Vec<&str> = match args {
        [] => return Ok(None),
        [one] => one.split(':').collect(),
        [a, b] => vec![a.as_str(), b.as_str()],
        _ => bail!("--window takes two times"),
    };
    let [a, b] = parts.as_slice() else {
        bail!("--window expects A:B, got {:?}", args.join(" "));
    };
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| anyhow!("--window: {s:?} is not a number"))
    };
    Ok(Some([num(a)?, num(b)?]))
}

fn read_series(path: &Path, column: &str) -> Result<Vec<(f64, f64)>> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        if let Some(i) = headers.iter().position(|h| h == name) {
            return Ok(i);
        }
        let suffix = format!(":{name}");
        let hits: Vec<usize> = (0..headers.len())
            .filter(|&i| headers[i].ends_with(&suffix))
            .collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            [] => bail!("{}: no column {name:?}", path.display()),
            _ => bail!(
                "{}: {name:?} is ambiguous ({}); give the full column name",
                path.display(),
                hits.iter()
                    .map(|&i| &headers[i])
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    };
    let (ti, vi) = (find("t")?, find(column)?);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.get(vi).is_some_and(|v| v.trim().is_empty()) {
            continue;
        }
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| anyhow!("{}: bad number on data line {}", path.display(), line + 1))
        };
        out.push((parse(ti)?, parse(vi)?));
    }
    Ok(out)
}
