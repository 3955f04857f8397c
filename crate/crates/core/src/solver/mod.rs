//! Integrating-factor (Lawson) Runge-Kutta time stepping. The linear part
//! is propagated exactly with the 3×3 mode exponentials; only the
//! nonlinearity is treated explicitly.

mod checkpoint;

pub use checkpoint::{read_checkpoint, write_checkpoint, CheckpointMeta};

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::besov::{block_lp_norms, BlockNormRecord};
use crate::error::{Error, Result};
use crate::linear::{DimensionlessParams, ModeExpCache};
use crate::nsf::{dealias_state, effective_velocity, nonlinear_rhs, CoefficientTable, State};
use crate::spectral::{block_range, gradient, inverse_transform, GridSpec, SpectralField};
use crate::util::{det_max_range, geometric_times};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "if-rk2")]
    IfRk2,
    #[serde(rename = "if-rk4")]
    IfRk4,
}

impl Scheme {
    pub fn order(&self) -> u32 {
        match self {
            Scheme::IfRk2 => 2,
            Scheme::IfRk4 => 4,
        }
    }
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
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Upper bound on the step; the advective bound may shrink it.
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    /// Geometric record times `t0 q^m ≤ t_end`.
    #[serde(default = "default_t0")]
    pub record_t0: f64,
    #[serde(default = "default_q")]
    pub record_q: f64,
    /// Additional record times (merged into the geometric set).
    #[serde(default)]
    pub extra_times: Vec<f64>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    /// `false` integrates only the linear part.
    #[serde(default = "default_true")]
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, t_end: f64, scheme: Scheme) -> Self {
        SolverConfig {
            dt,
            t_end,
            scheme,
            record_t0: default_t0(),
            record_q: default_q(),
            extra_times: Vec::new(),
            cfl_safety: default_cfl(),
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("dt", "must be positive"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param("t_end", "must be a nonnegative time"));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return Err(Error::param("cfl_safety", "must lie in (0, 1)"));
        }
        if !(self.record_t0 > 0.0 && self.record_q > 1.0) {
            return Err(Error::param(
                "record_q",
                "record grid needs t0 > 0 and q > 1",
            ));
        }
        if self
            .extra_times
            .iter()
            .any(|t| !(*t > 0.0 && t.is_finite()))
        {
            return Err(Error::param("extra_times", "must be positive times"));
        }
        Ok(())
    }

    /// Sorted record times after `t = 0`, all `≤ t_end`.
    pub fn record_times(&self) -> Vec<f64> {
        let mut ts = geometric_times(self.record_t0, self.record_q, self.t_end);
        ts.extend(
            self.extra_times
                .iter()
                .copied()
                .filter(|&t| t <= self.t_end),
        );
        ts.sort_by(|a, b| a.total_cmp(b));
        ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
        ts
    }
}

/// One time step of the chosen scheme, with exponential caches reused
/// across steps of equal size.
pub struct Stepper<'a> {
    pub params: &'a DimensionlessParams,
    pub table: &'a CoefficientTable,
    pub scheme: Scheme,
    pub nonlinear: bool,
    caches: HashMap<u64, Arc<ModeExpCache>>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        params: &'a DimensionlessParams,
        table: &'a CoefficientTable,
        scheme: Scheme,
        nonlinear: bool,
    ) -> Self {
        Stepper {
            params,
            table,
            scheme,
            nonlinear,
            caches: HashMap::new(),
        }
    }

    fn cache(&mut self, grid: GridSpec, h: f64) -> Arc<ModeExpCache> {
        if self.caches.len() > 16 {
            self.caches.clear();
        }
        let params = self.params;
        self.caches
            .entry(h.to_bits())
            .or_insert_with(|| Arc::new(ModeExpCache::new(grid, params, h)))
            .clone()
    }

    fn rhs(&self, u: &State) -> Result<State> {
        if self.nonlinear {
            nonlinear_rhs(u, self.table, self.params)
        } else {
            Ok(State::zeros(u.grid()))
        }
    }

    /// Advances `u` by `h`.
    pub fn step(&mut self, u: &State, h: f64) -> Result<State> {
        let grid = u.grid();
        let e_full = self.cache(grid, h);
        if !self.nonlinear {
            return Ok(e_full.propagate(u));
        }
        let mut next = match self.scheme {
            Scheme::IfRk2 => {
                let k1 = self.rhs(u)?;
                let star = e_full.propagate(&u.axpy(h, &k1)?);
                let k2 = self.rhs(&star)?;
                e_full
                    .propagate(&u.axpy(0.5 * h, &k1)?)
                    .axpy(0.5 * h, &k2)?
            }
            Scheme::IfRk4 => {
                let e_half = self.cache(grid, 0.5 * h);
                let k1 = self.rhs(u)?;
                let u2 = e_half.propagate(&u.axpy(0.5 * h, &k1)?);
                let k2 = self.rhs(&u2)?;
                let eu_half = e_half.propagate(u);
                let u3 = eu_half.axpy(0.5 * h, &k2)?;
                let k3 = self.rhs(&u3)?;
                let u4 = e_full.propagate(u).axpy(h, &e_half.propagate(&k3))?;
                let k4 = self.rhs(&u4)?;
                // E(h)(U + h/6 k1) + h/3 E(h/2)(k2 + k3) + h/6 k4
                let mid = e_half.propagate(&k2.axpy(1.0, &k3)?);
                e_full
                    .propagate(&u.axpy(h / 6.0, &k1)?)
                    .axpy(h / 3.0, &mid)?
                    .axpy(h / 6.0, &k4)?
            }
        };
        next.t = u.t + h;
        if !next.is_finite() {
            return Err(Error::Blowup {
                t: next.t,
                detail: format!("non-finite coefficients after a step of size {h}"),
            });
        }
        Ok(next)
    }
}

/// Which block norms to record.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSpec {
    pub ps: Vec<f64>,
    pub j_lo: i32,
    pub j_hi: i32,
}

impl RecordSpec {
    /// `L^2` and `L^p` norms over every grid-representable block.
    pub fn for_grid(grid: &GridSpec, p: f64) -> Self {
        let (j_lo, j_hi) = block_range(grid);
        let mut ps = vec![2.0];
        if p != 2.0 {
            ps.push(p);
        }
        RecordSpec { ps, j_lo, j_hi }
    }
}

/// Names under which [`observe`] stores block norms.
pub const RECORDED: [&str; 6] = ["a", "u", "theta", "grad_a", "grad_u", "w"];

/// Scalar diagnostics stored next to the block norms.
#[derive(Debug, Clone, Serialize)]
pub struct AuxSample {
    pub t: f64,
    pub min_one_plus_a: f64,
    pub max_velocity: f64,
    /// Share of `L^2` energy in modes with some `|k_i| > n/3`.
    pub upper_third_fraction: f64,
    pub energy: f64,
}

fn gradient_of_vector(u: &SpectralField) -> Result<SpectralField> {
    let parts: Vec<SpectralField> = (0..u.comps)
        .map(|i| gradient(&u.extract(i)))
        .collect::<Result<_>>()?;
    let refs: Vec<&SpectralField> = parts.iter().collect();
    SpectralField::stack(&refs)
}

/// Records block norms of `(a, υ, θ, ∇a, ∇υ, w)` at the state's time.
pub fn observe(state: &State, spec: &RecordSpec, rec: &mut BlockNormRecord) -> Result<()> {
    rec.begin_time(state.t)?;
    let fields: [(&str, SpectralField); 6] = [
        ("a", state.a.clone()),
        ("u", state.upsilon.clone()),
        ("theta", state.theta.clone()),
        ("grad_a", gradient(&state.a)?),
        ("grad_u", gradient_of_vector(&state.upsilon)?),
        ("w", effective_velocity(state)),
    ];
    for (name, f) in fields.iter() {
        for &p in &spec.ps {
            rec.insert(name, p, block_lp_norms(f, p, spec.j_lo, spec.j_hi))?;
        }
    }
    Ok(())
}

fn aux_sample(state: &State) -> AuxSample {
    let grid = state.grid();
    let a = inverse_transform(&state.a);
    let v = inverse_transform(&state.upsilon);
    let cut = (grid.n / 3) as i64;
    let len = grid.len();
    let mut total = 0.0;
    let mut upper = 0.0;
    for f in [&state.a, &state.upsilon, &state.theta] {
        for (i, z) in f.coeffs.iter().enumerate() {
            let e = z.norm_sqr();
            total += e;
            if grid.mode(i % len)[..grid.d].iter().any(|k| k.abs() > cut) {
                upper += e;
            }
        }
    }
    AuxSample {
        t: state.t,
        min_one_plus_a: 1.0 + a.values.iter().cloned().fold(f64::INFINITY, f64::min),
        max_velocity: det_max_range(len, |i| v.magnitude(i)).max(0.0),
        upper_third_fraction: if total > 0.0 { upper / total } else { 0.0 },
        energy: state.l2_norm_sq(),
    }
}

/// Everything produced by [`integrate`].
#[derive(Debug, Clone)]
pub struct Integration {
    pub final_state: State,
    pub record: BlockNormRecord,
    pub aux: Vec<AuxSample>,
    /// States at the record times, kept only on request.
    pub snapshots: Vec<State>,
    pub steps: usize,
}

/// Advances `state0` to `cfg.t_end`, landing exactly on every record time.
pub fn integrate(
    state0: &State,
    cfg: &SolverConfig,
    params: &DimensionlessParams,
    table: &CoefficientTable,
    spec: &RecordSpec,
    keep_snapshots: bool,
) -> Result<Integration> {
    cfg.validate()?;
    let grid = state0.grid();
    let mut state = state0.clone();
    if cfg.nonlinear {
        dealias_state(&mut state);
    }
    let mut rec = BlockNormRecord::new(spec.j_lo, spec.j_hi);
    let mut aux = Vec::new();
    let mut snapshots = Vec::new();
    observe(&state, spec, &mut rec)?;
    aux.push(aux_sample(&state));
    if keep_snapshots {
        snapshots.push(state.clone());
    }
    let mut stepper = Stepper::new(params, table, cfg.scheme, cfg.nonlinear);
    let mut steps = 0;
    let h_grid = grid.spacing();
    let mut targets = cfg.record_times();
    if targets.last().is_none_or(|&t| t < cfg.t_end) && cfg.t_end > 0.0 {
        targets.push(cfg.t_end);
    }
    let recorded: Vec<f64> = cfg.record_times();
    for target in targets {
        while state.t < target * (1.0 - 1e-14) {
            let remaining = target - state.t;
            let mut h = if cfg.nonlinear {
                let bound = cfg.cfl_safety * h_grid / aux_velocity(&state).max(1.0);
                cfg.dt.min(bound)
            } else {
                // the linear propagator is exact for any step
                remaining
            };
            if h >= remaining * (1.0 - 1e-9) {
                h = remaining;
            } else {
                // even out the steps that remain before the target
                let n = (remaining / h).ceil();
                h = remaining / n;
            }
            state = stepper.step(&state, h)?;
            steps += 1;
        }
        state.t = target;
        if recorded.contains(&target) {
            observe(&state, spec, &mut rec)?;
            aux.push(aux_sample(&state));
            if keep_snapshots {
                snapshots.push(state.clone());
            }
        }
    }
    Ok(Integration {
        final_state: state,
        record: rec,
        aux,
        snapshots,
        steps,
    })
}

fn aux_velocity(state: &State) -> f64 {
    let v = inverse_transform(&state.upsilon);
    det_max_range(v.grid.len(), |i| v.magnitude(i)).max(0.0)
}
