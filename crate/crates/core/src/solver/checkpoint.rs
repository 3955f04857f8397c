//! Raw binary state dumps with a JSON sidecar.
//!
//! The `.bin` file holds little-endian `f64` pairs `(re, im)`, component
//! major in the order `a, υ_1..υ_d, θ`; within a component modes follow the
//! row-major grid order with the last axis fastest, and axis position `i`
//! stands for the signed index `i` if `i < n/2`, else `i - n`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nsf::State;
use crate::spectral::{GridSpec, SpectralField};

pub const LAYOUT: &str =
    "f64-le (re,im) pairs; component-major; row-major modes, last axis fastest";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub grid: GridSpec,
    pub t: f64,
    pub components: Vec<String>,
    pub layout: String,
    /// Free-form run parameters.
    #[serde(default)]
    pub params: serde_json::Value,
}

fn component_names(d: usize) -> Vec<String> {
    let mut names = vec!["a".to_string()];
    names.extend((1..=d).map(|i| format!("u{i}")));
    names.push("theta".into());
    names
}

fn paths(stem: &Path) -> (PathBuf, PathBuf) {
    (stem.with_extension("bin"), stem.with_extension("json"))
}

/// Writes `<stem>.bin` and `<stem>.json`.
pub fn write_checkpoint(state: &State, stem: &Path, params: serde_json::Value) -> Result<()> {
    let (bin, json) = paths(stem);
    let stacked = state.stacked();
    let mut bytes = Vec::with_capacity(stacked.coeffs.len() * 16);
    for z in &stacked.coeffs {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    if let Some(dir) = bin.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(&bin, bytes)?;
    let meta = CheckpointMeta {
        grid: state.grid(),
        t: state.t,
        components: component_names(state.grid().d),
        layout: LAYOUT.into(),
        params,
    };
    fs::write(&json, serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

/// Reads a checkpoint written by [`write_checkpoint`].
pub fn read_checkpoint(stem: &Path) -> Result<(State, CheckpointMeta)> {
    let (bin, json) = paths(stem);
    let meta: CheckpointMeta = serde_json::from_str(&fs::read_to_string(&json)?)?;
    meta.grid.validate()?;
    let comps = meta.grid.d + 2;
    if meta.components.len() != comps {
        return Err(Error::Components {
            expected: comps,
            found: meta.components.len(),
        });
    }
    let bytes = fs::read(&bin)?;
    let expected = comps * meta.grid.len() * 16;
    if bytes.len() != expected {
        return Err(Error::Config(format!(
            "{}: expected {expected} bytes, found {}",
            bin.display(),
            bytes.len()
        )));
    }
    let word = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let coeffs: Vec<Complex64> = bytes
        .chunks_exact(16)
        .map(|c| Complex64::new(word(&c[..8]), word(&c[8..])))
        .collect();
    let field = SpectralField::from_coeffs(meta.grid, comps, coeffs)?;
    Ok((State::from_stacked(meta.t, &field)?, meta))
}
