//! Column-wise comparison of the CSV artifacts in two run directories.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ColumnDiff {
    pub file: String,
    pub column: String,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Mean of `b - a` over rows where both cells are numeric.
    pub mean_delta: f64,
}

#[derive(Debug, Default)]
pub struct Report {
    pub structural: Vec<String>,
    pub columns: Vec<ColumnDiff>,
}

impl Report {
    pub fn worst(&self) -> f64 {
        self.columns.iter().map(|c| c.max_rel).fold(0.0, f64::max)
    }
}

fn csv_names(dir: &Path) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for e in std::fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let name = e?.file_name().to_string_lossy().into_owned();
        if name.ends_with(".csv") {
            out.insert(name);
        }
    }
    Ok(out)
}

fn load(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = rd.headers()?.iter().map(str::to_string).collect();
    let rows = rd.records().map(|r| Ok(r?.iter().map(str::to_string).collect())).collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

fn cell_diff(a: &str, b: &str) -> (f64, f64, Option<f64>) {
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) if x == y || (x.is_nan() && y.is_nan()) => (0.0, 0.0, Some(0.0)),
        (Ok(x), Ok(y)) => {
            let abs = (y - x).abs();
            let scale = x.abs().max(y.abs());
            let rel = if scale > 0.0 { abs / scale } else { 0.0 };
            let rel = if rel.is_nan() { f64::INFINITY } else { rel };
            (abs, rel, Some(y - x).filter(|d| d.is_finite()))
        }
        _ if a == b => (0.0, 0.0, None),
        _ => (f64::INFINITY, 1.0, None),
    }
}

pub fn compare(a: &Path, b: &Path) -> Result<Report> {
    let (na, nb) = (csv_names(a)?, csv_names(b)?);
    let mut rep = Report::default();
    for name in na.union(&nb) {
        if !na.contains(name) || !nb.contains(name) {
            let side = if na.contains(name) { b } else { a };
            rep.structural.push(format!("{name}: missing from {}", side.display()));
            continue;
        }
        let (ha, ra) = load(&a.join(name))?;
        let (hb, rb) = load(&b.join(name))?;
        if ha != hb {
            rep.structural.push(format!("{name}: header differs ({} vs {})", ha.join(","), hb.join(",")));
            continue;
        }
        if ra.len() != rb.len() {
            rep.structural.push(format!("{name}: {} rows vs {}", ra.len(), rb.len()));
            continue;
        }
        for (j, col) in ha.iter().enumerate() {
            let (mut abs, mut rel, mut sum, mut n) = (0.0f64, 0.0f64, 0.0, 0usize);
            for (x, y) in ra.iter().zip(&rb) {
                let (d, r, delta) = cell_diff(&x[j], &y[j]);
                abs = abs.max(d);
                rel = rel.max(r);
                if let Some(delta) = delta {
                    sum += delta;
                    n += 1;
                }
            }
            let mean_delta = if n > 0 { sum / n as f64 } else { 0.0 };
            rep.columns.push(ColumnDiff { file: name.clone(), column: col.clone(), max_abs: abs, max_rel: rel, mean_delta });
        }
    }
    Ok(rep)
}
