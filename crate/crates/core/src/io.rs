//! JSON and CSV input and output.
//!
//! Every CSV has a header row and a fixed column order. The `q`/`value`
//! columns written by [`write_iron_csv`] load back as a tabulated
//! distribution through [`tabulated_from_csv`].

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::contest::ContestSpec;
use crate::distributions::{Distribution, DistributionSpec};
use crate::equilibrium::BidFunction;
use crate::error::{Error, Result};
use crate::ironing::IronedCurve;
use crate::simulation::TrialOutcome;
use crate::virtual_values::VirtualValueReport;

/// Distance from 0 or 1 within which a loaded cdf endpoint is snapped.
pub const CDF_SNAP: f64 = 1e-9;

fn io_err(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{context}: {e}"))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| io_err(path.display(), e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| io_err(path.display(), e))
}

pub fn read_distribution(path: &Path) -> Result<Distribution> {
    read_json::<DistributionSpec>(path)?.build()
}

pub fn read_contest(path: &Path) -> Result<ContestSpec> {
    let c: ContestSpec = read_json(path)?;
    c.validate()?;
    Ok(c)
}

pub fn write_json<W: Write, T: Serialize>(w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(w, value).map_err(|e| io_err("json output", e))
}

fn csv_writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(|e| io_err("csv output", e))?;
    Ok(out)
}

fn write_rows<W: Write>(mut out: csv::Writer<W>, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    for row in rows {
        out.write_record(row.iter().map(|x| x.to_string())).map_err(|e| io_err("csv output", e))?;
    }
    out.flush().map_err(|e| io_err("csv output", e))
}

/// Columns `value, phi, psi, hazard`.
pub fn write_analyze_csv<W: Write>(w: W, rep: &VirtualValueReport) -> Result<()> {
    let out = csv_writer(w, &["value", "phi", "psi", "hazard"])?;
    let rows = (0..rep.grid.len()).map(|k| vec![rep.grid[k], rep.phi[k], rep.psi[k], rep.hazard[k]]);
    write_rows(out, rows)
}

/// Columns `q, value, R, envelope, psi, psi_bar`.
pub fn write_iron_csv<W: Write>(w: W, ic: &IronedCurve) -> Result<()> {
    let out = csv_writer(w, &["q", "value", "R", "envelope", "psi", "psi_bar"])?;
    let c = &ic.curve;
    let rows = (0..c.q.len()).map(|k| vec![c.q[k], c.value[k], c.r[k], ic.envelope[k], c.psi[k], ic.psi_bar[k]]);
    write_rows(out, rows)
}

/// Columns `value, bid`; a jump appears as two rows with the same value.
pub fn write_bid_curve_csv<W: Write>(w: W, bf: &BidFunction) -> Result<()> {
    let out = csv_writer(w, &["value", "bid"])?;
    write_rows(out, bf.grid.iter().zip(&bf.bid).map(|(&v, &b)| vec![v, b]))
}

/// Columns `trial, skill_1..skill_n, bid_1..bid_n, max_bid, sum_bids`.
pub fn write_trace_csv<W: Write>(w: W, n: usize, trials: &[TrialOutcome]) -> Result<()> {
    let mut header = vec!["trial".to_string()];
    header.extend((1..=n).map(|i| format!("skill_{i}")));
    header.extend((1..=n).map(|i| format!("bid_{i}")));
    header.extend(["max_bid".to_string(), "sum_bids".to_string()]);
    let mut out = csv::Writer::from_writer(w);
    out.write_record(&header).map_err(|e| io_err("csv output", e))?;
    for o in trials {
        let mut row = vec![o.trial.to_string()];
        row.extend(o.skills.iter().chain(&o.bids).map(|x| x.to_string()));
        row.extend([o.max_bid.to_string(), o.sum_bids.to_string()]);
        out.write_record(&row).map_err(|e| io_err("csv output", e))?;
    }
    out.flush().map_err(|e| io_err("csv output", e))
}

/// Builds a tabulated distribution from the `value_col` and `cdf_col`
/// columns of a CSV. Cdf endpoints within [`CDF_SNAP`] of 0 and 1 are
/// snapped, and rows repeating the previous value or cdf are skipped.
pub fn tabulated_from_csv<R: Read>(r: R, value_col: &str, cdf_col: &str) -> Result<Distribution> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(|e| io_err("csv input", e))?.clone();
    let column = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Io(format!("csv input: no column {name:?}")))
    };
    let (vi, qi) = (column(value_col)?, column(cdf_col)?);
    let mut points: Vec<[f64; 2]> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| io_err("csv input", e))?;
        let field = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.trim().parse::<f64>().map_err(|e| io_err(format!("csv field {s:?}"), e))
        };
        let p = [field(vi)?, field(qi)?];
        if points.last().is_some_and(|last| p[0] <= last[0] || p[1] <= last[1]) {
            continue;
        }
        points.push(p);
    }
    if let Some(first) = points.first_mut() {
        if first[1].abs() <= CDF_SNAP {
            first[1] = 0.0;
        }
    }
    if let Some(last) = points.last_mut() {
        if (1.0 - last[1]).abs() <= CDF_SNAP {
            last[1] = 1.0;
        }
    }
    Distribution::tabulated(points)
}

pub fn tabulated_from_csv_file(path: &Path, value_col: &str, cdf_col: &str) -> Result<Distribution> {
    let file = File::open(path).map_err(|e| io_err(path.display(), e))?;
    tabulated_from_csv(BufReader::new(file), value_col, cdf_col)
}
