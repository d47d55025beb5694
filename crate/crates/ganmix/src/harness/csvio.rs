//! CSV and JSON serialization.
//!
//! Files are self-describing: a block of `# key=value` lines echoes the full
//! configuration (plus the tool version and terminal status) ahead of the
//! header row. No timestamps or machine identifiers — rerunning the same
//! command yields byte-identical output. Floats are written with Rust's
//! shortest round-trip formatting (`inf`, `-inf`, and `NaN` included), so
//! parsing recovers exact bit patterns.

use std::io::{self, Write};

use super::{FigureRun, HeatmapResult, SweepSummary};
use crate::Error;

/// Shortest round-trip decimal form of `v`.
fn fmt(v: f64) -> String {
    format!("{v}")
}

/// Writes the `# key=value` metadata block.
fn write_meta<W: Write>(w: &mut W, meta: &[(&str, String)]) -> io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(())
}

/// Serializes a demo trajectory run as CSV.
///
/// Columns: `iter, mu_hat_1, mu_hat_2, l1, r1, l2, r2, loss, tv`. For the
/// optimal-discriminator variant the endpoint columns hold the per-iterate
/// witness (unused slots as `inf`).
pub fn write_trajectory_csv<W: Write>(w: &mut W, run: &FigureRun) -> io::Result<()> {
    let c = &run.config;
    let init_mu = run.init.mu();
    let init_d = run.init.endpoints().as_array();
    let meta = [
        ("kind", "trajectory".to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("figure", run.figure.to_string()),
        ("curated", run.curated.to_string()),
        ("variant", c.variant.to_string()),
        ("target", format!("{},{}", fmt(run.target.mu1()), fmt(run.target.mu2()))),
        ("init_mu", format!("{},{}", fmt(init_mu[0]), fmt(init_mu[1]))),
        (
            "init_endpoints",
            format!(
                "{},{},{},{}",
                fmt(init_d[0]),
                fmt(init_d[1]),
                fmt(init_d[2]),
                fmt(init_d[3])
            ),
        ),
        ("eta_g", fmt(c.eta_g)),
        ("eta_d", fmt(c.eta_d)),
        ("iterations", c.iterations.to_string()),
        ("unroll_k", c.unroll_k.to_string()),
        ("noise_sigma", fmt(c.noise_sigma)),
        ("seed", c.seed.to_string()),
        ("success_tv", fmt(c.success_tv)),
        ("status", run.trajectory.status.to_string()),
    ];
    write_meta(w, &meta)?;
    writeln!(w, "iter,mu_hat_1,mu_hat_2,l1,r1,l2,r2,loss,tv")?;
    for r in &run.trajectory.records {
        let e = r.endpoints.as_array();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.iter,
            fmt(r.mu[0]),
            fmt(r.mu[1]),
            fmt(e[0]),
            fmt(e[1]),
            fmt(e[2]),
            fmt(e[3]),
            fmt(r.loss),
            fmt(r.tv)
        )?;
    }
    Ok(())
}

/// Serializes a heatmap as CSV, row-major over the grid.
///
/// Columns: `mu1_init, mu2_init, success_prob, n_converged, n_diverged,
/// n_mode_collapsed, n_disc_collapsed, n_budget`.
pub fn write_heatmap_csv<W: Write>(w: &mut W, result: &HeatmapResult) -> io::Result<()> {
    let c = &result.config;
    let meta = [
        ("kind", "heatmap".to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("variant", c.variant.to_string()),
        ("target", format!("{},{}", fmt(c.target.mu1()), fmt(c.target.mu2()))),
        ("grid_lo", fmt(c.grid_lo)),
        ("grid_hi", fmt(c.grid_hi)),
        ("grid_n", c.grid_n.to_string()),
        ("trials", c.trials.to_string()),
        ("eta_g", fmt(c.eta_g)),
        ("eta_d", fmt(c.eta_d)),
        ("iterations", c.iterations.to_string()),
        ("unroll_k", c.unroll_k.to_string()),
        ("success_tv", fmt(c.success_tv)),
        ("disc_init_lo", fmt(c.disc_init_lo)),
        ("disc_init_hi", fmt(c.disc_init_hi)),
        ("seed", c.seed.to_string()),
    ];
    write_meta(w, &meta)?;
    writeln!(
        w,
        "mu1_init,mu2_init,success_prob,n_converged,n_diverged,n_mode_collapsed,n_disc_collapsed,n_budget"
    )?;
    let values = c.grid_values();
    for i in 0..c.grid_n {
        for j in 0..c.grid_n {
            let cell = result.cell(i, j);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                fmt(values[i]),
                fmt(values[j]),
                fmt(result.success_prob(i, j)),
                cell.converged,
                cell.diverged,
                cell.mode_collapsed,
                cell.disc_collapsed,
                cell.budget
            )?;
        }
    }
    Ok(())
}

/// Serializes a sweep summary as pretty-printed JSON (trailing newline).
pub fn write_sweep_json<W: Write>(w: &mut W, summary: &SweepSummary) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, summary)?;
    writeln!(w)
}

/// A parsed trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryData {
    /// The `# key=value` metadata lines, in file order.
    pub meta: Vec<(String, String)>,
    /// One row per iterate: `[iter, mu1, mu2, l1, r1, l2, r2, loss, tv]`.
    pub rows: Vec<[f64; 9]>,
}

impl TrajectoryData {
    /// Metadata value lookup.
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// One parsed heatmap row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapRow {
    pub mu1_init: f64,
    pub mu2_init: f64,
    pub success_prob: f64,
}

/// A parsed heatmap CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapData {
    pub meta: Vec<(String, String)>,
    pub grid_n: usize,
    /// Row-major over the grid, as written.
    pub rows: Vec<HeatmapRow>,
}

impl HeatmapData {
    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// Either kind of parsed CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedCsv {
    Trajectory(TrajectoryData),
    Heatmap(HeatmapData),
}

fn parse_f64(s: &str, line_no: usize) -> Result<f64, Error> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::MalformedInput(format!("line {line_no}: bad float {s:?}")))
}

/// Parses a CSV produced by [`write_trajectory_csv`] or
/// [`write_heatmap_csv`], recognizing the kind from the `# kind=` line (or
/// from the header row as a fallback).
pub fn parse_csv(text: &str) -> Result<ParsedCsv, Error> {
    let mut meta = Vec::new();
    let mut header: Option<(&str, usize)> = None;
    let mut data_rows: Vec<(&str, usize)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some((k, v)) = rest.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if header.is_none() {
            header = Some((trimmed, line_no));
        } else {
            data_rows.push((trimmed, line_no));
        }
    }

    let (header, header_line) =
        header.ok_or_else(|| Error::MalformedInput("no header row found".into()))?;
    let kind = meta
        .iter()
        .find(|(k, _)| k == "kind")
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| {
            if header.starts_with("iter,") {
                "trajectory"
            } else {
                "heatmap"
            }
        });

    match kind {
        "trajectory" => {
            let expect = "iter,mu_hat_1,mu_hat_2,l1,r1,l2,r2,loss,tv";
            if header != expect {
                return Err(Error::MalformedInput(format!(
                    "line {header_line}: expected trajectory header {expect:?}"
                )));
            }
            let mut rows = Vec::with_capacity(data_rows.len());
            for (row, line_no) in data_rows {
                let fields: Vec<&str> = row.split(',').collect();
                if fields.len() != 9 {
                    return Err(Error::MalformedInput(format!(
                        "line {line_no}: expected 9 fields, got {}",
                        fields.len()
                    )));
                }
                let mut vals = [0.0f64; 9];
                for (slot, f) in vals.iter_mut().zip(&fields) {
                    *slot = parse_f64(f, line_no)?;
                }
                rows.push(vals);
            }
            if rows.is_empty() {
                return Err(Error::MalformedInput("trajectory has no rows".into()));
            }
            Ok(ParsedCsv::Trajectory(TrajectoryData { meta, rows }))
        }
        "heatmap" => {
            let mut rows = Vec::with_capacity(data_rows.len());
            for (row, line_no) in data_rows {
                let fields: Vec<&str> = row.split(',').collect();
                if fields.len() < 3 {
                    return Err(Error::MalformedInput(format!(
                        "line {line_no}: expected at least 3 fields, got {}",
                        fields.len()
                    )));
                }
                rows.push(HeatmapRow {
                    mu1_init: parse_f64(fields[0], line_no)?,
                    mu2_init: parse_f64(fields[1], line_no)?,
                    success_prob: parse_f64(fields[2], line_no)?,
                });
            }
            let grid_n = match meta
                .iter()
                .find(|(k, _)| k == "grid_n")
                .and_then(|(_, v)| v.parse::<usize>().ok())
            {
                Some(n) => n,
                None => {
                    let n = (rows.len() as f64).sqrt().round() as usize;
                    if n * n != rows.len() || n == 0 {
                        return Err(Error::MalformedInput(format!(
                            "cannot infer square grid from {} rows",
                            rows.len()
                        )));
                    }
                    n
                }
            };
            if grid_n * grid_n != rows.len() {
                return Err(Error::MalformedInput(format!(
                    "grid_n={} implies {} rows, file has {}",
                    grid_n,
                    grid_n * grid_n,
                    rows.len()
                )));
            }
            Ok(ParsedCsv::Heatmap(HeatmapData { meta, grid_n, rows }))
        }
        other => Err(Error::MalformedInput(format!("unknown kind {other:?}"))),
    }
}
