//! Discrete-time tick loop.
//!
//! Each tick: spawn (every `spawn_interval` ticks while the population is
//! below `spawn_threshold`), then every agent in ascending id order decides
//! and acts. A move is granted only if the destination is free in the live
//! occupancy map, which already reflects moves granted earlier in the same
//! tick. All randomness comes from one world-owned stream consumed in that
//! fixed order, so a seed fully determines a run.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::behavior::{
    complete_move, decide, is_allowed_edge, replan_current, sample_profile, Agent, AgentProfile, BehaviorState, Edge,
    Intent,
};
use crate::density::{DensityAccumulator, DEFAULT_CONVERGENCE_EPSILON, DEFAULT_CONVERGENCE_INTERVAL};
use crate::floorplan::Floorplan;
use crate::grid::{Cell, Occupancy, Walkable};
use crate::planner::PlannerConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub max_ticks: u64,
    pub spawn_interval: u64,
    pub spawn_threshold: usize,
    pub spawn_batch_max: usize,
    pub spawn_enabled: bool,
    pub planner: PlannerConfig,
    /// Replan around the blocker after this many consecutive waits.
    pub replan_after_waits: Option<u32>,
    pub convergence_interval: u64,
    pub convergence_epsilon: f64,
    pub stop_on_convergence: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            seed: 0,
            max_ticks: 20_000,
            spawn_interval: 50,
            spawn_threshold: 30,
            spawn_batch_max: 10,
            spawn_enabled: true,
            planner: PlannerConfig::default(),
            replan_after_waits: None,
            convergence_interval: DEFAULT_CONVERGENCE_INTERVAL,
            convergence_epsilon: DEFAULT_CONVERGENCE_EPSILON,
            stop_on_convergence: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("spawn_interval must be >= 1")]
    SpawnInterval,
    #[error("spawn_threshold must be >= 1")]
    SpawnThreshold,
    #[error("spawn_batch_max must be >= 1")]
    SpawnBatch,
    #[error("convergence_interval must be >= 1")]
    ConvergenceInterval,
    #[error("convergence_epsilon must be > 0")]
    ConvergenceEpsilon,
    #[error(transparent)]
    Planner(#[from] crate::planner::PlanError),
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.spawn_interval == 0 {
            return Err(ConfigError::SpawnInterval);
        }
        if self.spawn_threshold == 0 {
            return Err(ConfigError::SpawnThreshold);
        }
        if self.spawn_batch_max == 0 {
            return Err(ConfigError::SpawnBatch);
        }
        if self.convergence_interval == 0 {
            return Err(ConfigError::ConvergenceInterval);
        }
        if self.convergence_epsilon.is_nan() || self.convergence_epsilon <= 0.0 {
            return Err(ConfigError::ConvergenceEpsilon);
        }
        self.planner.validate()?;
        Ok(())
    }

    /// Largest population the spawn rule can produce.
    pub fn max_population(&self) -> usize {
        self.spawn_threshold - 1 + self.spawn_batch_max
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantViolation {
    #[error("agents {a} and {b} share cell {cell}")]
    SharedCell { a: u32, b: u32, cell: Cell },
    #[error("agent {agent} stands on non-walkable cell {cell}")]
    NotWalkable { agent: u32, cell: Cell },
    #[error("occupancy map disagrees with agent {agent} at {cell}")]
    OccupancyMismatch { agent: u32, cell: Cell },
    #[error("occupancy holds {occupied} cells for {agents} agents")]
    OccupancyCount { occupied: usize, agents: usize },
    #[error("agent {agent} jumped from {from} to {to}")]
    NonAdjacentMove { agent: u32, from: Cell, to: Cell },
    #[error("{count} agents exceed the bound of {bound}")]
    TooManyAgents { count: usize, bound: usize },
    #[error("agent {agent} took edge {from} -> {to} outside the decision table")]
    IllegalTransition {
        agent: u32,
        from: BehaviorState,
        to: BehaviorState,
    },
}

/// What one agent did during one tick.
#[derive(Clone, Debug, PartialEq)]
pub struct AgentStep {
    pub agent: u32,
    pub from: Cell,
    pub to: Cell,
    pub state_before: BehaviorState,
    pub state_after: BehaviorState,
    pub intent: Intent,
    pub edges: Vec<Edge>,
    pub waited: bool,
    pub replanned: bool,
    pub despawned: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TickReport {
    pub tick: u64,
    pub moves: usize,
    pub waits: usize,
    pub despawns: usize,
    pub spawns: usize,
    pub replans: usize,
    pub steps: Vec<AgentStep>,
}

pub struct World<'a> {
    floorplan: &'a Floorplan,
    agents: BTreeMap<u32, Agent>,
    occupancy: Occupancy,
    tick: u64,
    rng: ChaCha8Rng,
    next_id: u32,
    spawned: u64,
    despawned: u64,
}

impl<'a> World<'a> {
    pub fn new(floorplan: &'a Floorplan, seed: u64) -> Self {
        World {
            floorplan,
            agents: BTreeMap::new(),
            occupancy: Occupancy::new(floorplan.width(), floorplan.height()),
            tick: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            next_id: 0,
            spawned: 0,
            despawned: 0,
        }
    }

    pub fn floorplan(&self) -> &'a Floorplan {
        self.floorplan
    }

    pub fn tick_count(&self) -> u64 {
        self.tick
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.agents.values()
    }

    pub fn agent(&self, id: u32) -> Option<&Agent> {
        self.agents.get(&id)
    }

    pub fn agent_mut(&mut self, id: u32) -> Option<&mut Agent> {
        self.agents.get_mut(&id)
    }

    pub fn positions(&self) -> impl Iterator<Item = Cell> + Clone + '_ {
        self.agents.values().map(|a| a.position)
    }

    pub fn occupancy(&self) -> &Occupancy {
        &self.occupancy
    }

    pub fn rng_mut(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn spawned_total(&self) -> u64 {
        self.spawned
    }

    pub fn despawned_total(&self) -> u64 {
        self.despawned
    }

    /// Places a new agent in `InFloor`. Returns `None` if the cell is taken,
    /// out of bounds or not walkable.
    pub fn place_agent(&mut self, position: Cell, profile: AgentProfile) -> Option<u32> {
        if !self.floorplan.in_bounds(position)
            || !self.floorplan.walkable(position)
            || !self.occupancy.is_free(position)
        {
            return None;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.occupancy.place(position, id);
        self.agents.insert(id, Agent::new(id, position, profile));
        self.spawned += 1;
        Some(id)
    }

    /// Places up to `k` freshly sampled agents on free spawn cells in
    /// row-major order.
    pub fn spawn_batch(&mut self, k: usize) -> usize {
        let free: Vec<Cell> = self
            .floorplan
            .spawn_cells()
            .iter()
            .copied()
            .filter(|&c| self.occupancy.is_free(c))
            .take(k)
            .collect();
        for &cell in &free {
            let profile = sample_profile(&mut self.rng);
            self.place_agent(cell, profile);
        }
        free.len()
    }

    /// Spawn rule: below the threshold, add a uniform 1..=batch_max agents.
    pub fn spawn_agents(&mut self, cfg: &SimConfig) -> usize {
        if self.agents.len() >= cfg.spawn_threshold {
            return 0;
        }
        let k = self.rng.random_range(1..=cfg.spawn_batch_max);
        self.spawn_batch(k)
    }

    pub fn tick(&mut self, cfg: &SimConfig) -> TickReport {
        let mut report = TickReport {
            tick: self.tick,
            ..TickReport::default()
        };
        if cfg.spawn_enabled && self.tick.is_multiple_of(cfg.spawn_interval) {
            report.spawns = self.spawn_agents(cfg);
        }

        let fp = self.floorplan;
        let ids: Vec<u32> = self.agents.keys().copied().collect();
        let mut edges = Vec::new();
        let mut yielded: Vec<u32> = Vec::new();
        for id in ids {
            let agent = self.agents.get_mut(&id).expect("id snapshot");
            edges.clear();
            let from = agent.position;
            let state_before = agent.state;
            let waits_before = agent.wait_ticks;

            let intent = decide(agent, fp, &self.occupancy, &cfg.planner, &mut self.rng, &mut edges);
            let mut despawn = intent == Intent::Despawn;
            if let Intent::MoveTo(dest) = intent {
                let granted = self.occupancy.is_free(dest);
                if granted {
                    self.occupancy.clear(from);
                    self.occupancy.place(dest, id);
                    report.moves += 1;
                }
                despawn = complete_move(agent, fp, granted, &mut edges);
            }
            let waited = agent.wait_ticks > waits_before;
            if waited {
                report.waits += 1;
            }

            let mut replanned = false;
            if let Some(budget) = cfg.replan_after_waits {
                // An agent whose blocker already detoured this tick keeps waiting;
                // the blocker steps away next tick.
                let blocked_at = agent.next_cell();
                let blocker_yielded = blocked_at
                    .and_then(|c| self.occupancy.get(c))
                    .is_some_and(|b| yielded.contains(&b));
                if waited && agent.wait_ticks > budget && !blocker_yielded {
                    let avoid: Vec<Cell> = blocked_at.into_iter().collect();
                    replanned = replan_current(agent, fp, &cfg.planner, &mut self.rng, &avoid);
                    if replanned {
                        yielded.push(id);
                        report.replans += 1;
                    }
                }
            }

            report.steps.push(AgentStep {
                agent: id,
                from,
                to: agent.position,
                state_before,
                state_after: agent.state,
                intent,
                edges: edges.clone(),
                waited,
                replanned,
                despawned: despawn,
            });
            if despawn {
                let gone = self.agents.remove(&id).expect("despawning agent exists");
                self.occupancy.clear(gone.position);
                self.despawned += 1;
                report.despawns += 1;
            }
        }
        self.tick += 1;
        report
    }

    /// Checks the world-level invariants plus the per-step ones of `report`.
    pub fn check_invariants(&self, report: &TickReport, max_agents: Option<usize>) -> Result<(), InvariantViolation> {
        for a in self.agents.values() {
            if !self.floorplan.walkable(a.position) {
                return Err(InvariantViolation::NotWalkable {
                    agent: a.id,
                    cell: a.position,
                });
            }
            match self.occupancy.get(a.position) {
                Some(o) if o == a.id => {}
                Some(o) => {
                    return Err(InvariantViolation::SharedCell {
                        a: a.id,
                        b: o,
                        cell: a.position,
                    })
                }
                None => {
                    return Err(InvariantViolation::OccupancyMismatch {
                        agent: a.id,
                        cell: a.position,
                    })
                }
            }
        }
        if self.occupancy.occupied_count() != self.agents.len() {
            return Err(InvariantViolation::OccupancyCount {
                occupied: self.occupancy.occupied_count(),
                agents: self.agents.len(),
            });
        }
        if let Some(bound) = max_agents {
            if self.agents.len() > bound {
                return Err(InvariantViolation::TooManyAgents {
                    count: self.agents.len(),
                    bound,
                });
            }
        }
        for s in &report.steps {
            if s.from != s.to && !s.from.is_adjacent(s.to) {
                return Err(InvariantViolation::NonAdjacentMove {
                    agent: s.agent,
                    from: s.from,
                    to: s.to,
                });
            }
            if let Some(&(from, to)) = s.edges.iter().find(|&&(f, t)| !is_allowed_edge(f, t)) {
                return Err(InvariantViolation::IllegalTransition {
                    agent: s.agent,
                    from,
                    to,
                });
            }
        }
        Ok(())
    }
}

/// Hooks invoked by [`run`]. All methods default to no-ops.
pub trait Observer {
    fn on_tick(&mut self, _world: &World<'_>, _report: &TickReport) {}
    fn on_snapshot(&mut self, _tick: u64, _l1_delta: Option<f64>) {}
}

impl Observer for () {}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
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
}

pub struct RunOutcome {
    pub report: RunReport,
    pub density: DensityAccumulator,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invariant violated at tick {tick}: {violation}")]
    Invariant { tick: u64, violation: InvariantViolation },
}

/// Runs a fresh world seeded from `cfg.seed`.
pub fn run<O: Observer + ?Sized>(fp: &Floorplan, cfg: &SimConfig, observer: &mut O) -> Result<RunOutcome, RunError> {
    run_world(World::new(fp, cfg.seed), cfg, observer)
}

/// Ticks until `max_ticks` or, when enabled, density convergence. Every
/// tick is invariant-checked; the population bound is only enforced while
/// spawning is on.
pub fn run_world<O: Observer + ?Sized>(
    mut world: World<'_>,
    cfg: &SimConfig,
    observer: &mut O,
) -> Result<RunOutcome, RunError> {
    cfg.validate()?;
    let mut density = DensityAccumulator::for_floorplan(world.floorplan());
    let mut report = RunReport::default();
    let spawned_before = world.spawned_total();
    let despawned_before = world.despawned_total();
    let bound = cfg.spawn_enabled.then(|| cfg.max_population());

    for _ in 0..cfg.max_ticks {
        let tick = world.tick(cfg);
        world
            .check_invariants(&tick, bound)
            .map_err(|violation| RunError::Invariant {
                tick: tick.tick,
                violation,
            })?;
        density
            .record_tick(world.positions())
            .expect("agents stay in bounds");
        report.ticks_executed += 1;
        report.moves += tick.moves as u64;
        report.waits += tick.waits as u64;
        report.replans += tick.replans as u64;
        report.peak_agents = report.peak_agents.max(world.agent_count() as u64);
        observer.on_tick(&world, &tick);

        if report.ticks_executed % cfg.convergence_interval == 0 {
            let delta = density.snapshot();
            observer.on_snapshot(report.ticks_executed, delta);
            if delta.is_some() {
                report.last_l1_delta = delta;
            }
            if report.convergence_tick.is_none() && density.converged(cfg.convergence_epsilon) {
                report.convergence_tick = Some(report.ticks_executed);
                report.convergence_agent_ticks = Some(density.total_agent_ticks());
                if cfg.stop_on_convergence {
                    break;
                }
            }
        }
    }
    report.agents_spawned = world.spawned_total() - spawned_before;
    report.agents_despawned = world.despawned_total() - despawned_before;
    report.agents_remaining = world.agent_count() as u64;
    report.total_agent_ticks = density.total_agent_ticks();
    Ok(RunOutcome { report, density })
}
