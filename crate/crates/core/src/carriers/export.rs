//! CSV and JSON writers for charge distributions.

use std::io::Write;

use serde::Serialize;

use super::state::ChargeDistribution;
use crate::error::{Error, Result};

pub fn write_charge_csv<W: Write>(charge: &ChargeDistribution, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    let sheet = charge.nodes.iter().all(|n| n[1] == 0.0);
    if sheet {
        w.write_record(["position_m", "charge_per_m"]).map_err(io)?;
        for (node, q) in charge.nodes.iter().zip(&charge.line_charge) {
            w.write_record([format!("{:?}", node[0]), format!("{q:?}")]).map_err(io)?;
        }
    } else {
        w.write_record(["position_m", "depth_m", "charge_per_m"]).map_err(io)?;
        for (node, q) in charge.nodes.iter().zip(&charge.line_charge) {
            w.write_record([format!("{:?}", node[0]), format!("{:?}", node[1]), format!("{q:?}")])
                .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ChargeJson<'a> {
    provenance: &'a str,
    nodes: usize,
    exterior_factor: f64,
    total_charge_per_m: f64,
    position_m: Vec<f64>,
    depth_m: Vec<f64>,
    cell_width_m: &'a [f64],
    charge_per_m: &'a [f64],
}

pub fn charge_to_json(charge: &ChargeDistribution) -> Result<String> {
    let doc = ChargeJson {
        provenance: &charge.provenance,
        nodes: charge.len(),
        exterior_factor: charge.exterior_factor,
        total_charge_per_m: charge.total(),
        position_m: charge.nodes.iter().map(|n| n[0]).collect(),
        depth_m: charge.nodes.iter().map(|n| n[1]).collect(),
        cell_width_m: &charge.cell_width,
        charge_per_m: &charge.line_charge,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Config(e.to_string()))
}

/// `(time_s, deflection_proxy)` rows.
pub fn write_series_csv<W: Write>(header: [&str; 2], rows: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
    w.write_record(header).map_err(io)?;
    for (a, b) in rows {
        w.write_record([format!("{a:?}"), format!("{b:?}")]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
