//! Per-cell occupancy accumulation, normalisation, convergence checks and
//! the pixel-level encodings used by the exporters.
//!
//! The estimator is plain visit frequency: every agent-tick adds one to the
//! agent's cell, and the map is `counts / total_agent_ticks`. Stationary
//! (viewing) agents count the same as walking ones.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::floorplan::Floorplan;
use crate::grid::{Cell, Raster, BLACK, BLUE, GREEN, RED, WHITE};

pub const DEFAULT_CONVERGENCE_INTERVAL: u64 = 1000;
pub const DEFAULT_CONVERGENCE_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("OutOfBounds: cell {cell} outside the {width}x{height} accumulator")]
    OutOfBounds { cell: Cell, width: u32, height: u32 },
    #[error("EmptyAccumulator: no agent-ticks recorded")]
    EmptyAccumulator,
    #[error("accumulator dimensions differ")]
    DimensionMismatch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityAccumulator {
    width: u32,
    height: u32,
    counts: Vec<u64>,
    total_agent_ticks: u64,
    snapshots: VecDeque<Vec<f64>>,
}

impl DensityAccumulator {
    pub fn new(width: u32, height: u32) -> Self {
        DensityAccumulator {
            width,
            height,
            counts: vec![0; width as usize * height as usize],
            total_agent_ticks: 0,
            snapshots: VecDeque::with_capacity(2),
        }
    }

    pub fn for_floorplan(fp: &Floorplan) -> Self {
        Self::new(fp.width(), fp.height())
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, cell: Cell) -> u64 {
        self.counts[cell.y as usize * self.width as usize + cell.x as usize]
    }

    pub fn total_agent_ticks(&self) -> u64 {
        self.total_agent_ticks
    }

    /// Adds one agent-tick per position. Nothing is recorded if any
    /// position is out of bounds.
    pub fn record_tick<I>(&mut self, positions: I) -> Result<(), DensityError>
    where
        I: IntoIterator<Item = Cell>,
        I::IntoIter: Clone,
    {
        let iter = positions.into_iter();
        if let Some(cell) = iter.clone().find(|c| c.x >= self.width || c.y >= self.height) {
            return Err(DensityError::OutOfBounds {
                cell,
                width: self.width,
                height: self.height,
            });
        }
        for c in iter {
            self.counts[c.y as usize * self.width as usize + c.x as usize] += 1;
            self.total_agent_ticks += 1;
        }
        Ok(())
    }

    pub fn normalize(&self) -> Result<DensityMap, DensityError> {
        if self.total_agent_ticks == 0 {
            return Err(DensityError::EmptyAccumulator);
        }
        let total = self.total_agent_ticks as f64;
        Ok(DensityMap {
            width: self.width,
            height: self.height,
            probabilities: self.counts.iter().map(|&c| c as f64 / total).collect(),
        })
    }

    /// Stores the current normalised map, keeping the two most recent.
    /// Returns the L1 delta to the previous snapshot when one exists.
    /// An empty accumulator is not snapshotted.
    pub fn snapshot(&mut self) -> Option<f64> {
        let map = self.normalize().ok()?;
        if self.snapshots.len() == 2 {
            self.snapshots.pop_front();
        }
        self.snapshots.push_back(map.probabilities);
        self.last_delta()
    }

    /// L1 distance between the two most recent snapshots.
    pub fn last_delta(&self) -> Option<f64> {
        match (self.snapshots.len(), self.snapshots.front(), self.snapshots.back()) {
            (2, Some(prev), Some(cur)) => Some(l1_distance(prev, cur)),
            _ => None,
        }
    }

    /// Converged iff two snapshots exist and their L1 distance is below `epsilon`.
    pub fn converged(&self, epsilon: f64) -> bool {
        self.last_delta().is_some_and(|d| d < epsilon)
    }

    /// Count-wise sum of two accumulators over the same grid. Snapshots are
    /// not merged.
    pub fn merge(&mut self, other: &DensityAccumulator) -> Result<(), DensityError> {
        if other.width != self.width || other.height != self.height {
            return Err(DensityError::DimensionMismatch);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_agent_ticks += other.total_agent_ticks;
        Ok(())
    }
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Normalised per-cell occupancy frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMap {
    width: u32,
    height: u32,
    probabilities: Vec<f64>,
}

impl DensityMap {
    pub fn from_probabilities(width: u32, height: u32, probabilities: Vec<f64>) -> Option<Self> {
        (probabilities.len() == width as usize * height as usize).then_some(DensityMap {
            width,
            height,
            probabilities,
        })
    }

    pub fn zeros(width: u32, height: u32) -> Self {
        DensityMap {
            width,
            height,
            probabilities: vec![0.0; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, cell: Cell) -> f64 {
        self.probabilities[cell.y as usize * self.width as usize + cell.x as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.probabilities.chunks(self.width.max(1) as usize)
    }

    pub fn sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.probabilities.iter().copied().fold(0.0, f64::max)
    }

    /// 8-bit brightness scaled by the maximum: `round(255 * p / p_max)`.
    /// An all-zero map is all black.
    pub fn to_gray8(&self) -> Vec<u8> {
        let max = self.max();
        if max <= 0.0 {
            return vec![0; self.probabilities.len()];
        }
        self.probabilities
            .iter()
            .map(|&p| libm::round(255.0 * p / max) as u8)
            .collect()
    }
}

/// Static composite: structure black, window red, exhibit green on white.
pub fn render_static(fp: &Floorplan) -> Raster {
    let mut img = Raster::filled(fp.width(), fp.height(), WHITE);
    let w = fp.width();
    for (i, flags) in fp.cell_flags().iter().enumerate() {
        let color = if flags.structure {
            BLACK
        } else if flags.window {
            RED
        } else if flags.exhibit {
            GREEN
        } else {
            continue;
        };
        img.set(Cell::new(i as u32 % w, i as u32 / w), color);
    }
    img
}

/// The static composite with agents drawn in blue.
pub fn render_frame<I: IntoIterator<Item = Cell>>(fp: &Floorplan, agents: I) -> Raster {
    let mut img = render_static(fp);
    for c in agents {
        img.set(c, BLUE);
    }
    img
}
