//! Observers that stream per-tick output to disk.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use visitorsim_core::density::render_frame;
use visitorsim_core::engine::{Observer, TickReport, World};

use crate::layers::write_raster;
use crate::Error;

/// One line per agent-tick:
/// `tick=T agent=A prev=S0 state=S1 pos=X,Y intent=I left=0|1`, where
/// `left=1` marks the agent's last tick on the floor.
pub fn trace_line(step: &visitorsim_core::engine::AgentStep, tick: u64) -> String {
    format!(
        "tick={} agent={} prev={} state={} pos={},{} intent={} left={}",
        tick,
        step.agent,
        step.state_before.name(),
        step.state_after.name(),
        step.to.x,
        step.to.y,
        step.intent,
        u8::from(step.despawned)
    )
}

/// Fans out to the optional trace, frame and convergence-log writers.
/// The first IO error is kept and later output is dropped.
pub struct FileSinks {
    trace: Option<BufWriter<File>>,
    frames: Option<(PathBuf, u64)>,
    convergence: BufWriter<File>,
    error: Option<Error>,
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

impl FileSinks {
    pub fn new(out_dir: &Path, trace: bool, frame_every: Option<u64>) -> Result<Self, Error> {
        let frames = match frame_every {
            Some(n) => {
                let dir = out_dir.join("frames");
                std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
                Some((dir, n.max(1)))
            }
            None => None,
        };
        Ok(FileSinks {
            trace: if trace { Some(create(&out_dir.join("trace.txt"))?) } else { None },
            frames,
            convergence: create(&out_dir.join("convergence.log"))?,
            error: None,
        })
    }

    fn keep(&mut self, r: Result<(), Error>) {
        if let Err(e) = r {
            self.error.get_or_insert(e);
        }
    }

    pub fn finish(mut self) -> Result<(), Error> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        if let Some(t) = self.trace.as_mut() {
            t.flush().map_err(|e| Error::io(Path::new("trace.txt"), e))?;
        }
        self.convergence
            .flush()
            .map_err(|e| Error::io(Path::new("convergence.log"), e))
    }
}

impl Observer for FileSinks {
    fn on_tick(&mut self, world: &World<'_>, report: &TickReport) {
        if self.error.is_some() {
            return;
        }
        if let Some(t) = self.trace.as_mut() {
            let mut r = Ok(());
            for s in &report.steps {
                if let Err(e) = writeln!(t, "{}", trace_line(s, report.tick)) {
                    r = Err(Error::io(Path::new("trace.txt"), e));
                    break;
                }
            }
            self.keep(r);
        }
        if let Some((dir, every)) = &self.frames {
            if report.tick.is_multiple_of(*every) {
                let img = render_frame(world.floorplan(), world.positions());
                let r = write_raster(&img, &dir.join(format!("frame_{:06}.png", report.tick)));
                self.keep(r);
            }
        }
    }

    fn on_snapshot(&mut self, tick: u64, l1_delta: Option<f64>) {
        if let Some(d) = l1_delta {
            let r = writeln!(self.convergence, "{tick} {d:?}").map_err(|e| Error::io(Path::new("convergence.log"), e));
            self.keep(r);
        }
    }
}
