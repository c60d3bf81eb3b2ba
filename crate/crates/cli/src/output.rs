// Copyright 2026 The mintime Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


//! File output: atomic writes and trajectory tables.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Decimal with 17 significant digits; enough for an exact read-back.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Trajectory table `t, x_1..x_n, u_1..u_m, norm_x, norm_u[, solved]`.
///
/// Row `t` holds the state at `t` and the input applied at `t`; the final
/// row has no input, so its input fields are empty.
pub fn trajectory_csv(states: &[Vec<f64>], inputs: &[Vec<f64>], n_u: usize, solved_at: Option<&[usize]>) -> Result<Vec<u8>> {
    let n = states.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=n_u).map(|i| format!("u_{i}")));
    header.extend(["norm_x".into(), "norm_u".into()]);
    if solved_at.is_some() {
        header.push("solved".into());
    }
    w.write_record(&header)?;
    let norm = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>().sqrt();
    for (t, x) in states.iter().enumerate() {
        let mut rec = vec![t.to_string()];
        rec.extend(x.iter().map(|v| fmt_float(*v)));
        match inputs.get(t) {
            Some(u) => rec.extend(u.iter().map(|v| fmt_float(*v))),
            None => rec.extend(std::iter::repeat_n(String::new(), n_u)),
        }
        rec.push(fmt_float(norm(x)));
        rec.push(inputs.get(t).map(|u| fmt_float(norm(u))).unwrap_or_default());
        if let Some(marks) = solved_at {
            rec.push(if marks.contains(&t) { "1" } else { "0" }.into());
        }
        w.write_record(&rec)?;
    }
    w.into_inner().context("flushing table")
}
