//! Density CSV/PNG export and the JSON run report.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use visitorsim_core::density::DensityMap;
use visitorsim_core::{RunReport, SimConfig};

use crate::layers::write_gray;
use crate::Error;

/// One line per grid row, cells separated by commas. Values use Rust's
/// shortest round-trip formatting, so parsing gives back identical bits.
pub fn density_csv(map: &DensityMap) -> String {
    let mut out = String::new();
    for row in map.rows() {
        for (i, p) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{p:?}").expect("write to String");
        }
        out.push('\n');
    }
    out
}

pub fn parse_density_csv(text: &str) -> Result<DensityMap, Error> {
    let mut width = None;
    let mut values = Vec::new();
    let mut height = 0u32;
    for (n, line) in text.lines().enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Config(format!("density csv line {}: {e}", n + 1)))?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Config(format!("density csv line {}: ragged row", n + 1)));
            }
            _ => {}
        }
        values.extend(row);
        height += 1;
    }
    let width = width.unwrap_or(0) as u32;
    DensityMap::from_probabilities(width, height, values).ok_or_else(|| Error::Config("density csv: bad shape".into()))
}

pub fn export_density(map: &DensityMap, png: &Path, csv: &Path) -> Result<(), Error> {
    write_gray(map.width(), map.height(), map.to_gray8(), png)?;
    std::fs::write(csv, density_csv(map)).map_err(|e| Error::io(csv, e))
}

#[derive(Serialize)]
pub struct ReportDoc<'a> {
    pub seed: u64,
    pub max_ticks: u64,
    pub weight: f64,
    pub noise_variance: f64,
    pub noise: bool,
    pub replan_after_waits: Option<u32>,
    pub ticks_executed: u64,
    pub agents_spawned: u64,
    pub agents_despawned: u64,
    pub agents_remaining: u64,
    pub peak_agents: u64,
    pub total_agent_ticks: u64,
    pub moves: u64,
    pub waits: u64,
    pub replans: u64,
    pub convergence_tick: Option<u64>,
    pub convergence_agent_ticks: Option<u64>,
    pub last_l1_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<&'a str>,
}

impl<'a> ReportDoc<'a> {
    pub fn new(cfg: &SimConfig, r: &RunReport, density_note: Option<&'a str>) -> Self {
        ReportDoc {
            seed: cfg.seed,
            max_ticks: cfg.max_ticks,
            weight: cfg.planner.weight,
            noise_variance: cfg.planner.noise_variance,
            noise: cfg.planner.noise_enabled,
            replan_after_waits: cfg.replan_after_waits,
            ticks_executed: r.ticks_executed,
            agents_spawned: r.agents_spawned,
            agents_despawned: r.agents_despawned,
            agents_remaining: r.agents_remaining,
            peak_agents: r.peak_agents,
            total_agent_ticks: r.total_agent_ticks,
            moves: r.moves,
            waits: r.waits,
            replans: r.replans,
            convergence_tick: r.convergence_tick,
            convergence_agent_ticks: r.convergence_agent_ticks,
            last_l1_delta: r.last_l1_delta,
            density: density_note,
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape() {
        let m = DensityMap::from_probabilities(2, 2, vec![0.25, 0.5, 0.0, 0.25]).unwrap();
        assert_eq!(density_csv(&m), "0.25,0.5\n0.0,0.25\n");
        assert_eq!(parse_density_csv(&density_csv(&m)).unwrap(), m);
    }

    #[test]
    fn ragged_csv_rejected() {
        assert!(parse_density_csv("0.1,0.2\n0.3\n").is_err());
    }
}
