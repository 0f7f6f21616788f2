//! Flat `key = value` config files.
//!
//! `#` starts a comment. `spawn` and `exit` may repeat and take either a
//! single cell `x,y` or an inclusive rectangle `x0,y0,x1,y1`; every other
//! key appears at most once. Overrides replace whole keys before parsing, so
//! a flag and an equal file value behave identically.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use visitorsim_core::floorplan::{EntryConfig, Layer};
use visitorsim_core::grid::Cell;
use visitorsim_core::planner::PlannerConfig;
use visitorsim_core::SimConfig;

use crate::Error;

pub const LAYER_KEYS: [&str; 6] = ["window", "structure", "exhibit", "region", "boundary", "floorplan"];

const SCALAR_KEYS: [&str; 13] = [
    "seed",
    "ticks",
    "spawn_interval",
    "spawn_threshold",
    "spawn_batch_max",
    "spawn_enabled",
    "weight",
    "noise_variance",
    "noise",
    "replan_after_waits",
    "convergence_interval",
    "convergence_epsilon",
    "stop_on_convergence",
];

const REPEATABLE_KEYS: [&str; 2] = ["spawn", "exit"];

pub fn is_known_key(key: &str) -> bool {
    LAYER_KEYS.contains(&key) || SCALAR_KEYS.contains(&key) || REPEATABLE_KEYS.contains(&key)
}

/// Unparsed key/value pairs; repeatable keys keep every value in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig {
    values: BTreeMap<String, Vec<String>>,
    base_dir: PathBuf,
}

impl RawConfig {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, Error> {
        let mut raw = RawConfig {
            values: BTreeMap::new(),
            base_dir: base_dir.into(),
        };
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !is_known_key(k) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", n + 1)));
            }
            let slot = raw.values.entry(k.to_string()).or_default();
            if !slot.is_empty() && !REPEATABLE_KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
            slot.push(v.to_string());
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        RawConfig::parse(&text, base)
    }

    /// Replaces every value of `key`.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), Error> {
        if !is_known_key(key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_string(), vec![value.into()]);
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), Error> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{pair}` is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(|v| v.last()).map(String::as_str)
    }

    fn scalar<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, Error> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{s}`"))),
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool, Error> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "on" | "yes" | "1") => Ok(true),
            Some("false" | "off" | "no" | "0") => Ok(false),
            Some(s) => Err(Error::Config(format!("`{key}`: expected a boolean, got `{s}`"))),
        }
    }

    fn cells(&self, key: &str) -> Result<Vec<Cell>, Error> {
        let mut out = Vec::new();
        for v in self.values.get(key).into_iter().flatten() {
            out.extend(parse_cells(v).map_err(|m| Error::Config(format!("`{key}`: {m}")))?);
        }
        Ok(out)
    }

    pub fn resolve(&self) -> Result<Settings, Error> {
        let mut layer_paths = Vec::with_capacity(6);
        for (key, layer) in LAYER_KEYS.iter().zip(Layer::ALL) {
            let rel = self
                .get(key)
                .ok_or_else(|| Error::Config(format!("missing layer path `{key}`")))?;
            layer_paths.push((layer, self.base_dir.join(rel)));
        }
        let entry = EntryConfig {
            spawn_cells: self.cells("spawn")?,
            exit_cells: self.cells("exit")?,
        };

        let d = SimConfig::default();
        let replan_after_waits = match self.get("replan_after_waits") {
            None | Some("off" | "none") => None,
            Some(s) => Some(
                s.parse()
                    .map_err(|_| Error::Config(format!("`replan_after_waits`: cannot parse `{s}`")))?,
            ),
        };
        let sim = SimConfig {
            seed: self.scalar("seed", d.seed)?,
            max_ticks: self.scalar("ticks", d.max_ticks)?,
            spawn_interval: self.scalar("spawn_interval", d.spawn_interval)?,
            spawn_threshold: self.scalar("spawn_threshold", d.spawn_threshold)?,
            spawn_batch_max: self.scalar("spawn_batch_max", d.spawn_batch_max)?,
            spawn_enabled: self.flag("spawn_enabled", d.spawn_enabled)?,
            planner: PlannerConfig {
                weight: self.scalar("weight", d.planner.weight)?,
                noise_variance: self.scalar("noise_variance", d.planner.noise_variance)?,
                noise_enabled: self.flag("noise", d.planner.noise_enabled)?,
            },
            replan_after_waits,
            convergence_interval: self.scalar("convergence_interval", d.convergence_interval)?,
            convergence_epsilon: self.scalar("convergence_epsilon", d.convergence_epsilon)?,
            stop_on_convergence: self.flag("stop_on_convergence", d.stop_on_convergence)?,
        };
        sim.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(Settings {
            layer_paths,
            entry,
            sim,
        })
    }
}

/// Fully parsed configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub layer_paths: Vec<(Layer, PathBuf)>,
    pub entry: EntryConfig,
    pub sim: SimConfig,
}

/// `x,y` or inclusive `x0,y0,x1,y1`.
pub fn parse_cells(s: &str) -> Result<Vec<Cell>, String> {
    let nums: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("bad coordinate list `{s}`"))?;
    match nums[..] {
        [x, y] => Ok(vec![Cell::new(x, y)]),
        [x0, y0, x1, y1] => Ok(EntryConfig::rect(x0, y0, x1, y1)),
        _ => Err(format!("expected x,y or x0,y0,x1,y1, got `{s}`")),
    }
}

pub fn parse_cell(s: &str) -> Result<Cell, String> {
    match parse_cells(s)?[..] {
        [c] => Ok(c),
        _ => Err(format!("expected a single cell x,y, got `{s}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = "window = w.png\nstructure = s.png\nexhibit = e.png\nregion = r.png\n\
                         boundary = b.png\nfloorplan = f.png\nspawn = 0,0,1,1\nexit = 5,5\nexit = 6,6\n";

    #[test]
    fn defaults_match_core() {
        let s = RawConfig::parse(BASIC, "/data").unwrap().resolve().unwrap();
        assert_eq!(s.sim, SimConfig::default());
        assert_eq!(s.entry.spawn_cells.len(), 4);
        assert_eq!(s.entry.exit_cells, vec![Cell::new(5, 5), Cell::new(6, 6)]);
        assert_eq!(s.layer_paths[0], (Layer::Window, PathBuf::from("/data/w.png")));
    }

    #[test]
    fn override_equals_file_value() {
        let mut a = RawConfig::parse(BASIC, "").unwrap();
        a.set_pair("weight=3").unwrap();
        a.set("replan_after_waits", "5").unwrap();
        let b = RawConfig::parse(&format!("{BASIC}weight = 3\nreplan_after_waits = 5\n"), "").unwrap();
        assert_eq!(a.resolve().unwrap(), b.resolve().unwrap());
        assert_eq!(a.resolve().unwrap().sim.replan_after_waits, Some(5));
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(RawConfig::parse("colour = red", "").is_err());
        assert!(RawConfig::parse("seed = 1\nseed = 2", "").is_err());
        assert!(RawConfig::parse(BASIC, "").unwrap().set("nope", "1").is_err());
    }

    #[test]
    fn rejects_bad_values() {
        let mut r = RawConfig::parse(BASIC, "").unwrap();
        r.set("weight", "0.5").unwrap();
        assert!(r.resolve().is_err());
        r.set("weight", "ten").unwrap();
        assert!(r.resolve().is_err());
        assert!(parse_cells("1,2,3").is_err());
    }
}
