//! Small hand-built scenarios shared by tests and the acceptance suite.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::behavior::{AgentProfile, Target, TargetRef};
use crate::engine::World;
use crate::floorplan::{ascii_layers, EntryConfig, Floorplan};
use crate::grid::Cell;
use crate::planner::{plan_path, PlannerConfig};

pub const CORRIDOR_LEN: u32 = 60;

/// A width-1 corridor, `CORRIDOR_LEN` cells long, with exits at both ends.
/// With `bypass`, a parallel lane two rows down joins the corridor at
/// columns 20 and 40.
pub fn head_on_corridor(bypass: bool) -> Floorplan {
    let n = CORRIDOR_LEN as usize;
    let wall: String = "#".repeat(n);
    let open: String = ".".repeat(n);
    let mut rows: Vec<String> = vec![wall.clone(), open, wall.clone()];
    if bypass {
        let mut link = wall.clone().into_bytes();
        link[20] = b'.';
        link[40] = b'.';
        let mut lane = wall.clone().into_bytes();
        lane[20..=40].fill(b'.');
        rows[2] = String::from_utf8(link).expect("ascii");
        rows.push(String::from_utf8(lane).expect("ascii"));
        rows.push(wall);
    }
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    let ends = vec![Cell::new(0, 1), Cell::new(CORRIDOR_LEN - 1, 1)];
    let entry = EntryConfig {
        spawn_cells: ends.clone(),
        exit_cells: ends,
    };
    Floorplan::from_layers(&ascii_layers(&refs), &entry).expect("fixture is valid")
}

/// Profile that only counts the exit as reached when standing on it.
pub fn exact_arrival_profile() -> AgentProfile {
    AgentProfile {
        p1: 1.0,
        p2: 1.0,
        lambda: 1.0 / 500.0,
        near_threshold: 0,
    }
}

/// Places two agents walking toward opposite exits along the straight
/// corridor: agent 0 from column 10 eastward, agent 1 from column 49
/// westward. Returns their ids.
pub fn seed_head_on(world: &mut World<'_>) -> [u32; 2] {
    let fp = world.floorplan();
    let west = Cell::new(0, 1);
    let east = Cell::new(CORRIDOR_LEN - 1, 1);
    let mut ids = [0; 2];
    for (slot, (start, goal)) in [(Cell::new(10, 1), east), (Cell::new(49, 1), west)].into_iter().enumerate() {
        let path = plan_path(fp, start, goal, &PlannerConfig::exact(), world.rng_mut()).expect("corridor is open");
        let id = world
            .place_agent(start, exact_arrival_profile())
            .expect("start cell free");
        world
            .agent_mut(id)
            .expect("just placed")
            .assign_route(Target { what: TargetRef::Exit, goal }, path);
        ids[slot] = id;
    }
    ids
}
