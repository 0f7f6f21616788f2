//! `validate`, `run` and `plan` subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use visitorsim_core::density::{DensityAccumulator, DensityError};
use visitorsim_core::floorplan::summary;
use visitorsim_core::planner::plan_path_with_stats;
use visitorsim_core::{run, Floorplan, RunOutcome, SimConfig};

use crate::config::{parse_cell, RawConfig, Settings};
use crate::layers::load_floorplan;
use crate::output::{export_density, to_json, ReportDoc};
use crate::sinks::FileSinks;
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "visitorsim", version, about = "Simulate museum visitors on a raster floorplan")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load the layers and report region, boundary and exhibit counts.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the simulation and write density.png, density.csv and report.json.
    Run(RunArgs),
    /// Plan one path and print the expanded-node count and the cells as CSV.
    Plan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_cell)]
        from: visitorsim_core::Cell,
        #[arg(long, value_parser = parse_cell)]
        to: visitorsim_core::Cell,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Flags that shadow config keys.
#[derive(Args, Debug, Default)]
pub struct Overrides {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub weight: Option<f64>,
    #[arg(long)]
    pub no_noise: bool,
    /// Generic `key=value` override for any config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    #[arg(long)]
    pub ticks: Option<u64>,
    #[arg(long)]
    pub replan_after_waits: Option<u32>,
    /// Write `frames/frame_%06d.png` every N ticks (default 1).
    #[arg(long, num_args = 0..=1, default_missing_value = "1", value_name = "N")]
    pub frames: Option<u64>,
    /// Write one `trace.txt` line per agent-tick.
    #[arg(long)]
    pub trace: bool,
    /// Run seeds `a..b` (half-open) in parallel and merge their densities.
    #[arg(long, value_name = "A..B", conflicts_with_all = ["frames", "trace", "seed"])]
    pub seeds: Option<String>,
}

fn settings(config: &Path, o: &Overrides, extra: &[(&str, Option<String>)]) -> Result<Settings, Error> {
    let mut raw = RawConfig::load(config)?;
    for pair in &o.set {
        raw.set_pair(pair)?;
    }
    if let Some(s) = o.seed {
        raw.set("seed", s.to_string())?;
    }
    if let Some(w) = o.weight {
        raw.set("weight", w.to_string())?;
    }
    if o.no_noise {
        raw.set("noise", "false")?;
    }
    for (k, v) in extra {
        if let Some(v) = v {
            raw.set(k, v.clone())?;
        }
    }
    raw.resolve()
}

pub fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { config } => {
            let s = RawConfig::load(&config)?.resolve()?;
            let fp = load_floorplan(&s)?;
            println!("ok {}", summary(&fp));
            Ok(())
        }
        Command::Plan {
            config,
            from,
            to,
            overrides,
        } => {
            let s = settings(&config, &overrides, &[])?;
            let fp = load_floorplan(&s)?;
            let mut rng = ChaCha8Rng::seed_from_u64(s.sim.seed);
            let (path, stats) = plan_path_with_stats(&fp, from, to, &s.sim.planner, &mut rng)?;
            println!("expanded={} cost={}", stats.expanded, path.cost());
            println!("x,y");
            for c in path.cells() {
                println!("{},{}", c.x, c.y);
            }
            Ok(())
        }
        Command::Run(args) => cmd_run(args),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), Error> {
    let extra = [
        ("ticks", args.ticks.map(|t| t.to_string())),
        ("replan_after_waits", args.replan_after_waits.map(|t| t.to_string())),
    ];
    let s = settings(&args.config, &args.overrides, &extra)?;
    let fp = load_floorplan(&s)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;

    if let Some(range) = &args.seeds {
        return sweep(&fp, &s.sim, range, &args.out);
    }

    let mut sinks = FileSinks::new(&args.out, args.trace, args.frames)?;
    let outcome = run(&fp, &s.sim, &mut sinks);
    sinks.finish()?;
    let RunOutcome { report, density } = outcome?;
    let note = write_density(&density, &args.out)?;
    let doc = to_json(&ReportDoc::new(&s.sim, &report, note));
    let path = args.out.join("report.json");
    std::fs::write(&path, &doc).map_err(|e| Error::io(&path, e))?;
    print!("{doc}");
    Ok(())
}

/// Writes density.png/csv, or returns a note when nothing was recorded.
fn write_density(acc: &DensityAccumulator, out: &Path) -> Result<Option<&'static str>, Error> {
    match acc.normalize() {
        Ok(map) => {
            export_density(&map, &out.join("density.png"), &out.join("density.csv"))?;
            Ok(None)
        }
        Err(DensityError::EmptyAccumulator) => Ok(Some("EmptyAccumulator: no agent-ticks recorded")),
        Err(e) => Err(Error::Config(e.to_string())),
    }
}

fn parse_range(s: &str) -> Result<std::ops::Range<u64>, Error> {
    let bad = || Error::Config(format!("--seeds expects A..B, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a >= b {
        return Err(bad());
    }
    Ok(a..b)
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    seeds: Vec<ReportDoc<'a>>,
    merged_agent_ticks: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    density: Option<&'a str>,
}

fn sweep(fp: &Floorplan, base: &SimConfig, range: &str, out: &Path) -> Result<(), Error> {
    let seeds: Vec<u64> = parse_range(range)?.collect();
    let cfgs: Vec<SimConfig> = seeds.iter().map(|&seed| SimConfig { seed, ..base.clone() }).collect();
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = cfgs.iter().map(|cfg| scope.spawn(move || run(fp, cfg, &mut ()))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    });
    let mut merged = DensityAccumulator::for_floorplan(fp);
    let mut reports = Vec::new();
    for r in results {
        let o = r?;
        merged.merge(&o.density).expect("same floorplan");
        reports.push(o.report);
    }
    let note = write_density(&merged, out)?;
    let doc = to_json(&SweepDoc {
        seeds: cfgs.iter().zip(&reports).map(|(c, r)| ReportDoc::new(c, r, None)).collect(),
        merged_agent_ticks: merged.total_agent_ticks(),
        density: note,
    });
    let path = out.join("report.json");
    std::fs::write(&path, &doc).map_err(|e| Error::io(&path, e))?;
    print!("{doc}");
    Ok(())
}
