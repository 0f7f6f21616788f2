//! Weighted A* over 4-connected unit-cost grids with a noisy heuristic, and
//! a breadth-first oracle for exact costs.
//!
//! Nodes are ordered by `g + w * max(0, h + noise)` where `h` is the
//! Manhattan distance to the goal. The noise term is Gaussian with the
//! configured variance, drawn once per node per search the first time the
//! node is generated. Ties prefer the larger `g`, then the lower
//! (row, column). Closed nodes are never reopened.

use alloc::collections::{BinaryHeap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::grid::{Cell, Walkable};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerConfig {
    pub weight: f64,
    pub noise_variance: f64,
    pub noise_enabled: bool,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            weight: 10.0,
            noise_variance: 1000.0,
            noise_enabled: true,
        }
    }
}

impl PlannerConfig {
    pub fn new(weight: f64, noise_variance: f64, noise_enabled: bool) -> Result<Self, PlanError> {
        let cfg = PlannerConfig {
            weight,
            noise_variance,
            noise_enabled,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Plain A*: weight 1, no noise.
    pub fn exact() -> Self {
        PlannerConfig {
            weight: 1.0,
            noise_variance: 0.0,
            noise_enabled: false,
        }
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.weight >= 1.0 && self.weight.is_finite()) {
            return Err(PlanError::InvalidConfig("weight must be a finite value >= 1"));
        }
        if !(self.noise_variance >= 0.0 && self.noise_variance.is_finite()) {
            return Err(PlanError::InvalidConfig("noise variance must be finite and >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("NoPath: goal {goal} unreachable from {start}")]
    NoPath { start: Cell, goal: Cell },
    #[error("InvalidEndpoint: {cell} is out of bounds or not walkable")]
    InvalidEndpoint { cell: Cell },
    #[error("invalid planner config: {0}")]
    InvalidConfig(&'static str),
}

/// Ordered 4-connected cell list, start and goal inclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    cells: Vec<Cell>,
}

impl Path {
    /// Checks contiguity and non-emptiness; walkability is the caller's concern.
    pub fn from_cells(cells: Vec<Cell>) -> Option<Path> {
        let contiguous = cells.windows(2).all(|w| w[0].is_adjacent(w[1]));
        (!cells.is_empty() && contiguous).then_some(Path { cells })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn start(&self) -> Cell {
        self.cells[0]
    }

    pub fn goal(&self) -> Cell {
        self.cells[self.cells.len() - 1]
    }

    /// Number of unit steps.
    pub fn cost(&self) -> u32 {
        (self.cells.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Contiguity, endpoint and walkability check against a grid.
    pub fn is_valid_on<G: Walkable + ?Sized>(&self, grid: &G, start: Cell, goal: Cell) -> bool {
        self.start() == start
            && self.goal() == goal
            && self.cells.windows(2).all(|w| w[0].is_adjacent(w[1]))
            && self.cells.iter().all(|&c| grid.in_bounds(c) && grid.walkable(c))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: usize,
    pub generated: usize,
}

pub fn manhattan(a: Cell, b: Cell) -> u32 {
    a.x.abs_diff(b.x) + a.y.abs_diff(b.y)
}

/// Zero-mean Gaussian perturbation added to the heuristic.
#[derive(Clone, Copy, Debug)]
pub struct HeuristicNoise {
    normal: Option<Normal<f64>>,
}

impl HeuristicNoise {
    pub fn new(cfg: &PlannerConfig) -> Self {
        let normal = (cfg.noise_enabled && cfg.noise_variance > 0.0)
            .then(|| Normal::new(0.0, libm::sqrt(cfg.noise_variance)).expect("finite std dev"));
        HeuristicNoise { normal }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.normal {
            Some(n) => n.sample(rng),
            None => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Frontier {
    f: f64,
    g: u32,
    cell: Cell,
}

impl PartialEq for Frontier {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    // BinaryHeap pops the greatest element, so "greater" means "expand first".
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.cmp(&other.g))
            .then(other.cell.row_major().cmp(&self.cell.row_major()))
    }
}

const UNSEEN: u32 = u32::MAX;

pub fn plan_path<G, R>(grid: &G, start: Cell, goal: Cell, cfg: &PlannerConfig, rng: &mut R) -> Result<Path, PlanError>
where
    G: Walkable + ?Sized,
    R: Rng + ?Sized,
{
    plan_path_with_stats(grid, start, goal, cfg, rng).map(|(p, _)| p)
}

pub fn plan_path_with_stats<G, R>(
    grid: &G,
    start: Cell,
    goal: Cell,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> Result<(Path, SearchStats), PlanError>
where
    G: Walkable + ?Sized,
    R: Rng + ?Sized,
{
    cfg.validate()?;
    for cell in [start, goal] {
        if !grid.in_bounds(cell) || !grid.walkable(cell) {
            return Err(PlanError::InvalidEndpoint { cell });
        }
    }
    let (w, h) = (grid.width(), grid.height());
    let idx = |c: Cell| c.y as usize * w as usize + c.x as usize;
    let n = w as usize * h as usize;

    let noise = HeuristicNoise::new(cfg);
    let mut g = vec![UNSEEN; n];
    let mut parent = vec![u32::MAX; n];
    let mut closed = vec![false; n];
    let mut stats = SearchStats::default();
    let mut heap = BinaryHeap::new();

    let key = |cell: Cell, g: u32, eps: f64| {
        let h = f64::from(manhattan(cell, goal)) + eps;
        f64::from(g) + cfg.weight * h.max(0.0)
    };

    // Noise memo lives alongside g: drawn the first time a node is generated.
    let mut eps = vec![0.0f64; n];
    g[idx(start)] = 0;
    eps[idx(start)] = noise.sample(rng);
    stats.generated += 1;
    heap.push(Frontier {
        f: key(start, 0, eps[idx(start)]),
        g: 0,
        cell: start,
    });

    while let Some(Frontier { g: gc, cell, .. }) = heap.pop() {
        let ci = idx(cell);
        if closed[ci] || gc != g[ci] {
            continue;
        }
        closed[ci] = true;
        stats.expanded += 1;
        if cell == goal {
            return Ok((reconstruct(&parent, start, goal, w), stats));
        }
        let ng = gc + 1;
        for nb in cell.neighbors(w, h) {
            let ni = idx(nb);
            if closed[ni] || !grid.walkable(nb) {
                continue;
            }
            if g[ni] == UNSEEN {
                eps[ni] = noise.sample(rng);
                stats.generated += 1;
            } else if ng >= g[ni] {
                continue;
            }
            g[ni] = ng;
            parent[ni] = ci as u32;
            heap.push(Frontier {
                f: key(nb, ng, eps[ni]),
                g: ng,
                cell: nb,
            });
        }
    }
    Err(PlanError::NoPath { start, goal })
}

fn reconstruct(parent: &[u32], start: Cell, goal: Cell, width: u32) -> Path {
    let mut cells = vec![goal];
    let mut cur = goal;
    while cur != start {
        let p = parent[cur.y as usize * width as usize + cur.x as usize];
        cur = Cell::new(p % width, p / width);
        cells.push(cur);
    }
    cells.reverse();
    Path { cells }
}

/// Exact shortest 4-connected path cost by breadth-first search.
pub fn bfs_oracle<G: Walkable + ?Sized>(grid: &G, start: Cell, goal: Cell) -> Result<u32, PlanError> {
    for cell in [start, goal] {
        if !grid.in_bounds(cell) || !grid.walkable(cell) {
            return Err(PlanError::InvalidEndpoint { cell });
        }
    }
    let (w, h) = (grid.width(), grid.height());
    let mut dist = vec![UNSEEN; w as usize * h as usize];
    let mut queue = VecDeque::new();
    dist[start.y as usize * w as usize + start.x as usize] = 0;
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        let d = dist[c.y as usize * w as usize + c.x as usize];
        if c == goal {
            return Ok(d);
        }
        for nb in c.neighbors(w, h) {
            let i = nb.y as usize * w as usize + nb.x as usize;
            if dist[i] == UNSEEN && grid.walkable(nb) {
                dist[i] = d + 1;
                queue.push_back(nb);
            }
        }
    }
    Err(PlanError::NoPath { start, goal })
}
