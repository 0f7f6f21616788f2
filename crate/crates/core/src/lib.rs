//! Core of a grid-world visitor simulator for architectural floorplans.
//!
//! Visitors are agents driven by a small Markov decision process: they
//! wander between galleries, look at exhibits for an exponentially decaying
//! time, avoid stepping into each other, and eventually leave. Paths come
//! from a weighted A* with a noisy Manhattan heuristic. Accumulated
//! occupancy over agent-ticks gives a density map of where people are
//! likely to be.
//!
//! The crate is `no_std` with `alloc`; decoding images, reading config
//! files and writing outputs live in the companion `visitorsim` crate.

#![no_std]

extern crate alloc;

pub mod behavior;
pub mod components;
pub mod density;
pub mod engine;
pub mod fixtures;
pub mod floorplan;
pub mod grid;
pub mod planner;

pub use behavior::{Agent, AgentProfile, BehaviorState, Intent, TargetKind};
pub use density::{DensityAccumulator, DensityMap};
pub use engine::{run, run_world, Observer, RunOutcome, RunReport, SimConfig, TickReport, World};
pub use floorplan::{EntryConfig, Floorplan, FloorplanError, LayerRasters};
pub use grid::{Cell, Raster};
pub use planner::{bfs_oracle, manhattan, plan_path, Path, PlannerConfig};
