use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use visitorsim::layers::{read_raster, write_layers, write_raster};
use visitorsim::output::parse_density_csv;
use visitorsim::synthetic;
use visitorsim_core::floorplan::id_color;
use visitorsim_core::grid::{Raster, WHITE};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_visitorsim"))
}

fn gallery_cfg() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets/gallery/gallery.cfg")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stderr_lines(o: &Output) -> Vec<String> {
    String::from_utf8_lossy(&o.stderr).lines().map(str::to_string).collect()
}

/// Writes the synthetic plan into `dir` after letting `edit` change it.
fn plan_dir(dir: &Path, edit: impl FnOnce(&mut visitorsim_core::LayerRasters)) -> PathBuf {
    let mut layers = synthetic::layers();
    edit(&mut layers);
    write_layers(&layers, dir).unwrap();
    let cfg = dir.join("gallery.cfg");
    std::fs::write(&cfg, synthetic::config_text()).unwrap();
    cfg
}

#[test]
fn validate_bundled_plan() {
    let o = run(&["validate", "--config", gallery_cfg().to_str().unwrap()]);
    assert!(o.status.success(), "{:?}", stderr_lines(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("regions=2 boundaries=4 exhibits=9"), "{out}");
}

#[test]
fn validate_names_dimension_mismatch() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = plan_dir(tmp.path(), |_| {});
    write_raster(&Raster::filled(100, 100, WHITE), &tmp.path().join("window.png")).unwrap();
    let o = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr_lines(&o);
    assert_eq!(err.len(), 1, "{err:?}");
    assert!(err[0].contains("DimensionMismatch") && err[0].contains("window"), "{err:?}");
}

#[test]
fn validate_names_unreachable_region() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = plan_dir(tmp.path(), |l| l.region.fill_rect(240, 280, 255, 286, id_color(2)));
    let o = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr_lines(&o);
    assert_eq!(err.len(), 1, "{err:?}");
    assert!(err[0].contains("UnreachableRegion"), "{err:?}");
}

#[test]
fn config_and_usage_errors_exit_1_with_one_line() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.cfg");
    std::fs::write(&bad, "colour = red\n").unwrap();
    for args in [
        vec!["validate", "--config", bad.to_str().unwrap()],
        vec!["validate", "--config", "/nonexistent/x.cfg"],
        vec!["run", "--config", gallery_cfg().to_str().unwrap(), "--set", "bogus=1"],
        vec!["run", "--bogus-flag"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_lines(&o).len(), 1, "{args:?}: {:?}", stderr_lines(&o));
    }
}

fn run_to(out: &Path, extra: &[&str]) -> Output {
    let cfg = gallery_cfg();
    let mut args = vec![
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert!(o.status.success(), "{:?}", stderr_lines(&o));
    o
}

#[test]
fn seeded_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let flags = ["--seed", "42", "--ticks", "1500", "--trace", "--replan-after-waits", "5"];
    let oa = run_to(&a, &flags);
    let ob = run_to(&b, &flags);
    assert_eq!(oa.stdout, ob.stdout);
    for f in ["density.csv", "density.png", "trace.txt", "report.json", "convergence.log"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let other = tmp.path().join("c");
    run_to(&other, &["--seed", "43", "--ticks", "1500", "--trace", "--replan-after-waits", "5"]);
    assert_ne!(
        std::fs::read(a.join("trace.txt")).unwrap(),
        std::fs::read(other.join("trace.txt")).unwrap()
    );
}

#[test]
fn zero_ticks_writes_report_only() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_to(tmp.path(), &["--ticks", "0"]);
    let report = String::from_utf8(o.stdout).unwrap();
    assert!(report.contains("EmptyAccumulator"), "{report}");
    assert!(tmp.path().join("report.json").exists());
    assert!(!tmp.path().join("density.csv").exists());
    assert!(!tmp.path().join("density.png").exists());
}

#[test]
fn flag_and_config_value_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_to(&a, &["--ticks", "300", "--weight", "3", "--no-noise"]);
    run_to(&b, &["--set", "ticks=300", "--set", "weight=3", "--set", "noise=false"]);
    assert_eq!(
        std::fs::read(a.join("density.csv")).unwrap(),
        std::fs::read(b.join("density.csv")).unwrap()
    );
}

/// Recomputes the density from the trace's positions and checks it against
/// the exported CSV.
#[test]
fn trace_reproduces_density() {
    let tmp = tempfile::tempdir().unwrap();
    run_to(tmp.path(), &["--ticks", "120", "--trace"]);
    let trace = std::fs::read_to_string(tmp.path().join("trace.txt")).unwrap();
    let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
    let mut total = 0u64;
    for line in trace.lines() {
        let fields: HashMap<&str, &str> = line.split(' ').filter_map(|f| f.split_once('=')).collect();
        if fields["left"] == "1" {
            continue;
        }
        let (x, y) = fields["pos"].split_once(',').unwrap();
        *counts.entry((x.parse().unwrap(), y.parse().unwrap())).or_default() += 1;
        total += 1;
    }
    assert!(total >= 100, "only {total} agent-ticks");
    let map = parse_density_csv(&std::fs::read_to_string(tmp.path().join("density.csv")).unwrap()).unwrap();
    let mut nonzero = 0;
    for y in 0..map.height() {
        for x in 0..map.width() {
            let expect = counts.get(&(x, y)).map_or(0.0, |&c| c as f64 / total as f64);
            assert_eq!(map.get(visitorsim_core::Cell::new(x, y)), expect, "cell {x},{y}");
            nonzero += usize::from(expect > 0.0);
        }
    }
    assert_eq!(nonzero, counts.len());
}

#[test]
fn frames_are_written() {
    let tmp = tempfile::tempdir().unwrap();
    run_to(tmp.path(), &["--ticks", "30", "--frames", "10"]);
    let mut names: Vec<String> = std::fs::read_dir(tmp.path().join("frames"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["frame_000000.png", "frame_000010.png", "frame_000020.png"]);
    let f = read_raster(&tmp.path().join("frames/frame_000000.png")).unwrap();
    assert_eq!((f.width(), f.height()), (320, 320));
}

#[test]
fn seed_sweep_merges() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_to(tmp.path(), &["--ticks", "200", "--seeds", "1..4"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let seeds = doc["seeds"].as_array().unwrap();
    assert_eq!(seeds.len(), 3);
    let sum: u64 = seeds.iter().map(|s| s["total_agent_ticks"].as_u64().unwrap()).sum();
    assert_eq!(doc["merged_agent_ticks"].as_u64().unwrap(), sum);
    assert!(tmp.path().join("density.csv").exists());
}

#[test]
fn plan_prints_expanded_count_and_csv() {
    let o = run(&[
        "plan",
        "--config",
        gallery_cfg().to_str().unwrap(),
        "--from",
        "10,300",
        "--to",
        "100,80",
        "--weight",
        "1",
        "--no-noise",
    ]);
    assert!(o.status.success(), "{:?}", stderr_lines(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    let mut lines = out.lines();
    let head = lines.next().unwrap();
    assert!(head.starts_with("expanded="), "{head}");
    assert_eq!(lines.next(), Some("x,y"));
    let cells: Vec<&str> = lines.collect();
    assert_eq!(cells.first(), Some(&"10,300"));
    assert_eq!(cells.last(), Some(&"100,80"));
    let cost: usize = head.split("cost=").nth(1).unwrap().parse().unwrap();
    assert_eq!(cost + 1, cells.len());

    let blocked = run(&["plan", "--config", gallery_cfg().to_str().unwrap(), "--from", "0,0", "--to", "10,300"]);
    assert_eq!(blocked.status.code(), Some(1));
    assert!(stderr_lines(&blocked)[0].contains("InvalidEndpoint"));
}
