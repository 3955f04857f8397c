use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{weighted_lr, FreqRange, TimeWeight};
use crate::error::{Error, Result};
use crate::util::{fmt_exponent, fmt_f64, parse_exponent};

/// Per-time, per-block Lebesgue norms of named components.
///
/// `series[(component, p)][m][i]` is `‖Δ̇_{j_lo+i} z(t_m)‖_{L^p}`; `p` is keyed
/// by its text form (`"2"`, `"3.5"`, `"inf"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockNormRecord {
    pub times: Vec<f64>,
    pub j_lo: i32,
    pub j_hi: i32,
    pub series: BTreeMap<(String, String), Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    t: String,
    component: String,
    p: String,
    j: i32,
    value: String,
}

impl BlockNormRecord {
    pub fn new(j_lo: i32, j_hi: i32) -> Self {
        BlockNormRecord {
            times: Vec::new(),
            j_lo,
            j_hi,
            series: BTreeMap::new(),
        }
    }

    pub fn n_blocks(&self) -> usize {
        (self.j_hi - self.j_lo + 1).max(0) as usize
    }

    pub fn js(&self) -> impl Iterator<Item = i32> {
        self.j_lo..=self.j_hi
    }

    /// Starts a new sample time, which must exceed every earlier one.
    pub fn begin_time(&mut self, t: f64) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if t <= last {
                return Err(Error::param(
                    "t",
                    format!("record times must increase strictly ({t} after {last})"),
                ));
            }
        }
        self.times.push(t);
        Ok(())
    }

    /// Stores the block norms of `component` at the most recent time.
    pub fn insert(&mut self, component: &str, p: f64, values: Vec<f64>) -> Result<()> {
        if values.len() != self.n_blocks() {
            return Err(Error::param(
                "values",
                format!("expected {} blocks, got {}", self.n_blocks(), values.len()),
            ));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonFinite {
                what: "block norm",
                index: i,
            });
        }
        let m = self.times.len();
        if m == 0 {
            return Err(Error::param("t", "insert before begin_time"));
        }
        let entry = self
            .series
            .entry((component.to_string(), fmt_exponent(p)))
            .or_default();
        if entry.len() != m - 1 {
            return Err(Error::param(
                "component",
                format!("series {component}/p={p} is not aligned with the time axis"),
            ));
        }
        entry.push(values);
        Ok(())
    }

    pub fn has(&self, component: &str, p: f64) -> bool {
        self.series
            .contains_key(&(component.to_string(), fmt_exponent(p)))
    }

    /// The `[time][block]` table of one series.
    pub fn get(&self, component: &str, p: f64) -> Result<&Vec<Vec<f64>>> {
        self.series
            .get(&(component.to_string(), fmt_exponent(p)))
            .ok_or_else(|| {
                Error::MissingNorms(vec![format!("{component} (p={})", fmt_exponent(p))])
            })
    }

    /// Fails with the full list of absent `(component, p)` series.
    pub fn require(&self, needs: &[(&str, f64)]) -> Result<()> {
        let missing: Vec<String> = needs
            .iter()
            .filter(|(c, p)| !self.has(c, *p))
            .map(|(c, p)| format!("{c} (p={})", fmt_exponent(*p)))
            .collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::MissingNorms(missing))
        }
    }

    /// Copy keeping only samples with `t ≤ t_max`.
    pub fn truncated(&self, t_max: f64) -> Self {
        let keep = self
            .times
            .iter()
            .take_while(|&&t| t <= t_max * (1.0 + 1e-12))
            .count();
        BlockNormRecord {
            times: self.times[..keep].to_vec(),
            j_lo: self.j_lo,
            j_hi: self.j_hi,
            series: self
                .series
                .iter()
                .map(|(k, v)| (k.clone(), v[..keep.min(v.len())].to_vec()))
                .collect(),
        }
    }

    /// Writes `t,component,p,j,value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for (m, &t) in self.times.iter().enumerate() {
            for ((comp, p), table) in &self.series {
                let Some(row) = table.get(m) else { continue };
                for (i, v) in row.iter().enumerate() {
                    wr.serialize(CsvRow {
                        t: fmt_f64(t),
                        component: comp.clone(),
                        p: p.clone(),
                        j: self.j_lo + i as i32,
                        value: fmt_f64(*v),
                    })?;
                }
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "component", "p", "j", "value"] {
            return Err(Error::Config(format!(
                "unexpected block CSV header: {}",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut rows: Vec<(f64, String, String, i32, f64)> = Vec::new();
        for (line, rec) in rd.deserialize::<CsvRow>().enumerate() {
            let rec = rec?;
            let parse = |s: &str| {
                parse_exponent(s)
                    .ok_or_else(|| Error::Config(format!("line {}: bad number `{s}`", line + 2)))
            };
            let p = parse(&rec.p)?;
            rows.push((
                parse(&rec.t)?,
                rec.component,
                fmt_exponent(p),
                rec.j,
                parse(&rec.value)?,
            ));
        }
        let j_lo = rows.iter().map(|r| r.3).min().unwrap_or(0);
        let j_hi = rows.iter().map(|r| r.3).max().unwrap_or(-1);
        let mut times: Vec<f64> = rows.iter().map(|r| r.0).collect();
        times.sort_by(|a, b| a.total_cmp(b));
        times.dedup();
        let nb = (j_hi - j_lo + 1).max(0) as usize;
        let mut series: BTreeMap<(String, String), Vec<Vec<f64>>> = BTreeMap::new();
        for (t, comp, p, j, v) in rows {
            let m = times
                .binary_search_by(|x| x.total_cmp(&t))
                .expect("time present");
            let table = series
                .entry((comp, p))
                .or_insert_with(|| vec![vec![f64::NAN; nb]; times.len()]);
            table[m][(j - j_lo) as usize] = v;
        }
        for ((comp, p), table) in &series {
            if table.iter().flatten().any(|v| v.is_nan()) {
                return Err(Error::Config(format!(
                    "block CSV has gaps in series {comp} (p={p})"
                )));
            }
        }
        Ok(BlockNormRecord {
            times,
            j_lo,
            j_hi,
            series,
        })
    }
}

/// `Σ_z Σ_j 2^{js} sup_t w(t) ‖Δ̇_j z(t)‖_{L^p}` over the selected blocks.
pub fn tilde_sup_norm(
    rec: &BlockNormRecord,
    components: &[&str],
    s: f64,
    p: f64,
    weight: TimeWeight,
    range: FreqRange,
) -> Result<f64> {
    let needs: Vec<(&str, f64)> = components.iter().map(|c| (*c, p)).collect();
    rec.require(&needs)?;
    let mut total = 0.0;
    for comp in components {
        let table = rec.get(comp, p)?;
        let sups: Vec<f64> = (0..rec.n_blocks())
            .map(|i| {
                table
                    .iter()
                    .zip(&rec.times)
                    .map(|(row, &t)| weight.eval(t) * row[i])
                    .fold(0.0, f64::max)
            })
            .collect();
        total += weighted_lr(&sups, rec.j_lo, s, 1.0, range);
    }
    Ok(total)
}

/// `sup_t w(t) Σ_z Σ_j 2^{js} ‖Δ̇_j z(t)‖_{L^p}` (time sup outside the sum).
pub fn sup_norm(
    rec: &BlockNormRecord,
    components: &[&str],
    s: f64,
    p: f64,
    weight: TimeWeight,
    range: FreqRange,
) -> Result<f64> {
    let needs: Vec<(&str, f64)> = components.iter().map(|c| (*c, p)).collect();
    rec.require(&needs)?;
    let tables: Vec<&Vec<Vec<f64>>> = components
        .iter()
        .map(|c| rec.get(c, p))
        .collect::<Result<_>>()?;
    let mut best: f64 = 0.0;
    for (m, &t) in rec.times.iter().enumerate() {
        let sum: f64 = tables
            .iter()
            .map(|tab| weighted_lr(&tab[m], rec.j_lo, s, 1.0, range))
            .sum();
        best = best.max(weight.eval(t) * sum);
    }
    Ok(best)
}

/// `Σ_z Σ_j 2^{js} ∫ ‖Δ̇_j z(t)‖_{L^p} dt` by the trapezoid rule on the
/// recorded times.
pub fn time_l1_norm(
    rec: &BlockNormRecord,
    components: &[&str],
    s: f64,
    p: f64,
    range: FreqRange,
) -> Result<f64> {
    let needs: Vec<(&str, f64)> = components.iter().map(|c| (*c, p)).collect();
    rec.require(&needs)?;
    if rec.times.len() < 2 {
        return Err(Error::NotEnoughSamples {
            needed: 2,
            have: rec.times.len(),
        });
    }
    let mut total = 0.0;
    for comp in components {
        let table = rec.get(comp, p)?;
        let integrals: Vec<f64> = (0..rec.n_blocks())
            .map(|i| {
                rec.times
                    .windows(2)
                    .zip(table.windows(2))
                    .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0][i] + v[1][i]))
                    .sum()
            })
            .collect();
        total += weighted_lr(&integrals, rec.j_lo, s, 1.0, range);
    }
    Ok(total)
}
