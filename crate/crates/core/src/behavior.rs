//! Visitor decision model.
//!
//! Each agent runs a small Markov decision process. Mental states
//! (`InFloor`, `InGallery`, `Viewing`, `Leaving`) pick a target kind,
//! "far" states check the next path cell for another agent, and "safe"
//! states take the step. The safe states are transient: an agent passes
//! through one during its move and never rests in it across a tick.
//!
//! | state              | outcome                                                   |
//! |--------------------|-----------------------------------------------------------|
//! | `InFloor`          | p1: plan to nearest unvisited boundary, else `Leaving`    |
//! |                    | 1-p1: plan to nearest exit                                |
//! | `SeekBoundaryFar`  | next cell taken: wait; free: `SeekBoundarySafe`, step     |
//! | `SeekBoundarySafe` | near target: `InGallery`; otherwise `SeekBoundaryFar`     |
//! | `InGallery`        | plan to nearest unvisited exhibit, else `InFloor`         |
//! | `SeekExhibit*`     | as above; near target: `Viewing`                          |
//! | `Viewing`          | stay w.p. `exp(-lambda t)`; else p2: `InGallery`, 1-p2: `InFloor` |
//! | `Leaving`          | plan to nearest exit                                      |
//! | `SeekExit*`        | as above; near target: despawn                            |

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::floorplan::{BoundaryId, ExhibitId, Floorplan, RegionId};
use crate::grid::{Avoiding, Cell, Occupancy};
use crate::planner::{plan_path, Path, PlannerConfig};

pub const PROB_MIN: f64 = 0.5;
pub const PROB_MAX: f64 = 1.0;
pub const LAMBDA_MIN: f64 = 1.0 / 7000.0;
pub const LAMBDA_MAX: f64 = 1.0 / 500.0;
pub const NEAR_MIN: u32 = 10;
pub const NEAR_MAX: u32 = 20;

/// Per-agent characteristic parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentProfile {
    /// Chance of seeking a gallery (rather than the exit) from the open floor.
    pub p1: f64,
    /// Chance of seeking another exhibit after finishing one.
    pub p2: f64,
    /// Per-tick decay rate of the viewing-stay probability.
    pub lambda: f64,
    /// Distance in cells under which a target counts as reached.
    pub near_threshold: u32,
}

impl AgentProfile {
    pub fn in_bounds(&self) -> bool {
        (PROB_MIN..=PROB_MAX).contains(&self.p1)
            && (PROB_MIN..=PROB_MAX).contains(&self.p2)
            && (LAMBDA_MIN..=LAMBDA_MAX).contains(&self.lambda)
            && (NEAR_MIN..=NEAR_MAX).contains(&self.near_threshold)
    }
}

pub fn sample_profile<R: Rng + ?Sized>(rng: &mut R) -> AgentProfile {
    AgentProfile {
        p1: rng.random_range(PROB_MIN..=PROB_MAX),
        p2: rng.random_range(PROB_MIN..=PROB_MAX),
        lambda: rng.random_range(LAMBDA_MIN..=LAMBDA_MAX),
        near_threshold: rng.random_range(NEAR_MIN..=NEAR_MAX),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BehaviorState {
    InFloor,
    Leaving,
    SeekBoundaryFar,
    SeekBoundarySafe,
    InGallery,
    SeekExhibitFar,
    SeekExhibitSafe,
    Viewing,
    SeekExitFar,
    SeekExitSafe,
}

impl BehaviorState {
    pub const ALL: [BehaviorState; 10] = [
        BehaviorState::InFloor,
        BehaviorState::Leaving,
        BehaviorState::SeekBoundaryFar,
        BehaviorState::SeekBoundarySafe,
        BehaviorState::InGallery,
        BehaviorState::SeekExhibitFar,
        BehaviorState::SeekExhibitSafe,
        BehaviorState::Viewing,
        BehaviorState::SeekExitFar,
        BehaviorState::SeekExitSafe,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BehaviorState::InFloor => "InFloor",
            BehaviorState::Leaving => "Leaving",
            BehaviorState::SeekBoundaryFar => "SeekBoundaryFar",
            BehaviorState::SeekBoundarySafe => "SeekBoundarySafe",
            BehaviorState::InGallery => "InGallery",
            BehaviorState::SeekExhibitFar => "SeekExhibitFar",
            BehaviorState::SeekExhibitSafe => "SeekExhibitSafe",
            BehaviorState::Viewing => "Viewing",
            BehaviorState::SeekExitFar => "SeekExitFar",
            BehaviorState::SeekExitSafe => "SeekExitSafe",
        }
    }

    fn far_of(kind: TargetKind) -> Self {
        match kind {
            TargetKind::Boundary => BehaviorState::SeekBoundaryFar,
            TargetKind::Exhibit => BehaviorState::SeekExhibitFar,
            TargetKind::Exit => BehaviorState::SeekExitFar,
        }
    }

    fn safe_of(kind: TargetKind) -> Self {
        match kind {
            TargetKind::Boundary => BehaviorState::SeekBoundarySafe,
            TargetKind::Exhibit => BehaviorState::SeekExhibitSafe,
            TargetKind::Exit => BehaviorState::SeekExitSafe,
        }
    }

    /// The target kind pursued by a seek state.
    pub fn seeking(self) -> Option<TargetKind> {
        match self {
            BehaviorState::SeekBoundaryFar | BehaviorState::SeekBoundarySafe => Some(TargetKind::Boundary),
            BehaviorState::SeekExhibitFar | BehaviorState::SeekExhibitSafe => Some(TargetKind::Exhibit),
            BehaviorState::SeekExitFar | BehaviorState::SeekExitSafe => Some(TargetKind::Exit),
            _ => None,
        }
    }

    pub fn is_far(self) -> bool {
        matches!(
            self,
            BehaviorState::SeekBoundaryFar | BehaviorState::SeekExhibitFar | BehaviorState::SeekExitFar
        )
    }
}

impl fmt::Display for BehaviorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every edge the decision table can produce. `SeekExitSafe` has no
/// outgoing mental-state edge for arrival; the agent despawns instead.
pub fn is_allowed_edge(from: BehaviorState, to: BehaviorState) -> bool {
    use BehaviorState::*;
    matches!(
        (from, to),
        (InFloor, SeekBoundaryFar)
            | (InFloor, Leaving)
            | (InFloor, SeekExitFar)
            | (SeekBoundaryFar, SeekBoundaryFar)
            | (SeekBoundaryFar, SeekBoundarySafe)
            | (SeekBoundarySafe, InGallery)
            | (SeekBoundarySafe, SeekBoundaryFar)
            | (InGallery, SeekExhibitFar)
            | (InGallery, InFloor)
            | (SeekExhibitFar, SeekExhibitFar)
            | (SeekExhibitFar, SeekExhibitSafe)
            | (SeekExhibitSafe, Viewing)
            | (SeekExhibitSafe, SeekExhibitFar)
            | (Viewing, Viewing)
            | (Viewing, InGallery)
            | (Viewing, InFloor)
            | (Leaving, SeekExitFar)
            | (Leaving, Leaving)
            | (SeekExitFar, SeekExitFar)
            | (SeekExitFar, SeekExitSafe)
            | (SeekExitSafe, SeekExitFar)
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetKind {
    Boundary,
    Exhibit,
    Exit,
}

impl TargetKind {
    pub fn name(self) -> &'static str {
        match self {
            TargetKind::Boundary => "boundary",
            TargetKind::Exhibit => "exhibit",
            TargetKind::Exit => "exit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetRef {
    Boundary(BoundaryId),
    Exhibit(ExhibitId),
    Exit,
}

impl TargetRef {
    pub fn kind(self) -> TargetKind {
        match self {
            TargetRef::Boundary(_) => TargetKind::Boundary,
            TargetRef::Exhibit(_) => TargetKind::Exhibit,
            TargetRef::Exit => TargetKind::Exit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Target {
    pub what: TargetRef,
    pub goal: Cell,
}

/// A planned path plus the index of the agent's current cell on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    path: Path,
    cursor: usize,
}

impl Route {
    pub fn new(path: Path) -> Self {
        Route { path, cursor: 0 }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn current(&self) -> Cell {
        self.path.cells()[self.cursor]
    }

    pub fn next(&self) -> Option<Cell> {
        self.path.cells().get(self.cursor + 1).copied()
    }

    fn advance(&mut self) {
        debug_assert!(self.cursor + 1 < self.path.len());
        self.cursor += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Agent {
    pub id: u32,
    pub position: Cell,
    pub profile: AgentProfile,
    pub state: BehaviorState,
    pub target: Option<Target>,
    pub route: Option<Route>,
    pub visited_boundaries: BTreeSet<BoundaryId>,
    pub visited_exhibits: BTreeSet<ExhibitId>,
    /// Gallery of the boundary most recently reached.
    pub current_region: Option<RegionId>,
    pub dwell_ticks: u32,
    pub wait_ticks: u32,
}

impl Agent {
    pub fn new(id: u32, position: Cell, profile: AgentProfile) -> Self {
        Agent {
            id,
            position,
            profile,
            state: BehaviorState::InFloor,
            target: None,
            route: None,
            visited_boundaries: BTreeSet::new(),
            visited_exhibits: BTreeSet::new(),
            current_region: None,
            dwell_ticks: 0,
            wait_ticks: 0,
        }
    }

    /// Puts the agent on `path` toward `target`, in the matching far state.
    pub fn assign_route(&mut self, target: Target, path: Path) {
        self.state = BehaviorState::far_of(target.what.kind());
        self.target = Some(target);
        self.route = Some(Route::new(path));
        self.wait_ticks = 0;
    }

    /// The cell the agent would step onto next, if it is walking a route.
    pub fn next_cell(&self) -> Option<Cell> {
        self.state.seeking().and(self.route.as_ref()).and_then(Route::next)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Intent {
    MoveTo(Cell),
    Stay,
    Despawn,
    Replan(TargetKind),
}

impl fmt::Display for Intent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Intent::MoveTo(c) => write!(f, "MoveTo{c}"),
            Intent::Stay => f.write_str("Stay"),
            Intent::Despawn => f.write_str("Despawn"),
            Intent::Replan(k) => write!(f, "Replan({})", k.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Range {
    Near,
    Far,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BehaviorError {
    #[error("EmptyTarget: range check against an empty cell set")]
    EmptyTarget,
}

/// Near iff the Euclidean distance to the closest target cell is at most
/// `threshold`.
pub fn range_classify(pos: Cell, target_cells: &[Cell], threshold: u32) -> Result<Range, BehaviorError> {
    let best = target_cells
        .iter()
        .map(|&c| pos.dist_sq(c))
        .min()
        .ok_or(BehaviorError::EmptyTarget)?;
    let t = u64::from(threshold);
    Ok(if best <= t * t { Range::Near } else { Range::Far })
}

/// Probability of staying another tick after `t` ticks of viewing.
pub fn stay_probability(t: u32, lambda: f64) -> f64 {
    libm::exp(-lambda * f64::from(t))
}

pub fn dwell_continue<R: Rng + ?Sized>(t: u32, lambda: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < stay_probability(t, lambda)
}

fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < p
}

/// Nearest candidate not yet visited by this agent, or `None`.
pub fn select_target(agent: &Agent, fp: &Floorplan, kind: TargetKind) -> Option<Target> {
    let pos = agent.position;
    match kind {
        TargetKind::Boundary => fp
            .boundaries()
            .iter()
            .filter(|b| !agent.visited_boundaries.contains(&b.id))
            .min_by_key(|b| (pos.dist_sq(b.anchor), b.id))
            .map(|b| Target {
                what: TargetRef::Boundary(b.id),
                goal: b.anchor,
            }),
        TargetKind::Exhibit => {
            let region = agent.current_region?;
            fp.region(region)
                .exhibit_ids
                .iter()
                .filter(|id| !agent.visited_exhibits.contains(id))
                .map(|&id| {
                    let view = nearest(pos, &fp.exhibit(id).viewing_cells);
                    (pos.dist_sq(view), id, view)
                })
                .min_by_key(|&(d, id, _)| (d, id))
                .map(|(_, id, view)| Target {
                    what: TargetRef::Exhibit(id),
                    goal: view,
                })
        }
        TargetKind::Exit => (!fp.exit_cells().is_empty()).then(|| Target {
            what: TargetRef::Exit,
            goal: nearest(pos, fp.exit_cells()),
        }),
    }
}

/// First (row-major) of the cells closest to `pos`. `cells` must be row-major sorted.
fn nearest(pos: Cell, cells: &[Cell]) -> Cell {
    let mut best = cells[0];
    for &c in &cells[1..] {
        if pos.dist_sq(c) < pos.dist_sq(best) {
            best = c;
        }
    }
    best
}

pub fn target_cells<'a>(fp: &'a Floorplan, target: &TargetRef) -> &'a [Cell] {
    match *target {
        TargetRef::Boundary(id) => &fp.boundary(id).cells,
        TargetRef::Exhibit(id) => &fp.exhibit(id).cells,
        TargetRef::Exit => fp.exit_cells(),
    }
}

pub type Edge = (BehaviorState, BehaviorState);

fn transition(agent: &mut Agent, to: BehaviorState, edges: &mut Vec<Edge>) {
    edges.push((agent.state, to));
    agent.state = to;
}

fn mark_visited(agent: &mut Agent, what: TargetRef) {
    match what {
        TargetRef::Boundary(id) => {
            agent.visited_boundaries.insert(id);
        }
        TargetRef::Exhibit(id) => {
            agent.visited_exhibits.insert(id);
        }
        TargetRef::Exit => {}
    }
}

/// Selects and plans a target of `kind`. Unreachable candidates are marked
/// visited and the next nearest one is tried.
fn acquire<R: Rng + ?Sized>(
    agent: &mut Agent,
    fp: &Floorplan,
    kind: TargetKind,
    cfg: &PlannerConfig,
    rng: &mut R,
) -> bool {
    while let Some(target) = select_target(agent, fp, kind) {
        match plan_path(fp, agent.position, target.goal, cfg, rng) {
            Ok(path) => {
                agent.target = Some(target);
                agent.route = Some(Route::new(path));
                agent.wait_ticks = 0;
                return true;
            }
            Err(_) if kind == TargetKind::Exit => return false,
            Err(_) => mark_visited(agent, target.what),
        }
    }
    false
}

/// Plans toward the current target again with fresh noise, treating the
/// `avoid` cells as walls. Falls back to an unconstrained plan when the
/// constrained one fails. Returns whether a new route was installed.
pub fn replan_current<R: Rng + ?Sized>(
    agent: &mut Agent,
    fp: &Floorplan,
    cfg: &PlannerConfig,
    rng: &mut R,
    avoid: &[Cell],
) -> bool {
    let Some(target) = agent.target else {
        return false;
    };
    let avoiding = Avoiding { inner: fp, blocked: avoid };
    let path = plan_path(&avoiding, agent.position, target.goal, cfg, rng)
        .or_else(|_| plan_path(fp, agent.position, target.goal, cfg, rng));
    match path {
        Ok(p) => {
            agent.route = Some(Route::new(p));
            agent.wait_ticks = 0;
            true
        }
        Err(_) => false,
    }
}

/// One decision for one agent. Mutates only the agent; transitions taken
/// are appended to `edges`.
pub fn decide<R: Rng + ?Sized>(
    agent: &mut Agent,
    fp: &Floorplan,
    occupancy: &Occupancy,
    cfg: &PlannerConfig,
    rng: &mut R,
    edges: &mut Vec<Edge>,
) -> Intent {
    use BehaviorState::*;
    match agent.state {
        InFloor => {
            if bernoulli(agent.profile.p1, rng) {
                if acquire(agent, fp, TargetKind::Boundary, cfg, rng) {
                    transition(agent, SeekBoundaryFar, edges);
                    Intent::Replan(TargetKind::Boundary)
                } else {
                    transition(agent, Leaving, edges);
                    Intent::Stay
                }
            } else if acquire(agent, fp, TargetKind::Exit, cfg, rng) {
                transition(agent, SeekExitFar, edges);
                Intent::Replan(TargetKind::Exit)
            } else {
                transition(agent, Leaving, edges);
                Intent::Stay
            }
        }
        Leaving => {
            if acquire(agent, fp, TargetKind::Exit, cfg, rng) {
                transition(agent, SeekExitFar, edges);
                Intent::Replan(TargetKind::Exit)
            } else {
                transition(agent, Leaving, edges);
                Intent::Stay
            }
        }
        InGallery => {
            if acquire(agent, fp, TargetKind::Exhibit, cfg, rng) {
                transition(agent, SeekExhibitFar, edges);
                Intent::Replan(TargetKind::Exhibit)
            } else {
                transition(agent, InFloor, edges);
                Intent::Stay
            }
        }
        Viewing => {
            if dwell_continue(agent.dwell_ticks, agent.profile.lambda, rng) {
                agent.dwell_ticks += 1;
                transition(agent, Viewing, edges);
            } else {
                agent.dwell_ticks = 0;
                let next = if bernoulli(agent.profile.p2, rng) { InGallery } else { InFloor };
                transition(agent, next, edges);
            }
            Intent::Stay
        }
        SeekBoundaryFar | SeekExhibitFar | SeekExitFar | SeekBoundarySafe | SeekExhibitSafe | SeekExitSafe => {
            let kind = agent.state.seeking().expect("seek state");
            let far = BehaviorState::far_of(kind);
            if agent.state != far {
                // Safe states never persist across ticks; resume from the check.
                agent.state = far;
            }
            match agent.next_cell() {
                None => {
                    transition(agent, BehaviorState::safe_of(kind), edges);
                    if arrive(agent, fp, edges) {
                        Intent::Despawn
                    } else {
                        Intent::Stay
                    }
                }
                Some(next) if !occupancy.is_free(next) => {
                    agent.wait_ticks += 1;
                    transition(agent, far, edges);
                    Intent::Stay
                }
                Some(next) => {
                    transition(agent, BehaviorState::safe_of(kind), edges);
                    Intent::MoveTo(next)
                }
            }
        }
    }
}

/// Resolves a `MoveTo` intent after the engine granted or refused it.
/// Returns true when the agent reached the exit and must despawn.
pub fn complete_move(agent: &mut Agent, fp: &Floorplan, granted: bool, edges: &mut Vec<Edge>) -> bool {
    let kind = agent.state.seeking().expect("complete_move on a seek state");
    let far = BehaviorState::far_of(kind);
    if !granted {
        agent.wait_ticks += 1;
        transition(agent, far, edges);
        return false;
    }
    let route = agent.route.as_mut().expect("moving agent has a route");
    route.advance();
    agent.position = route.current();
    agent.wait_ticks = 0;

    let target = agent.target.expect("moving agent has a target");
    let at_end = route.next().is_none();
    let near = range_classify(agent.position, target_cells(fp, &target.what), agent.profile.near_threshold)
        == Ok(Range::Near);
    if near || at_end {
        arrive(agent, fp, edges)
    } else {
        transition(agent, far, edges);
        false
    }
}

/// Marks the target reached; true means despawn.
fn arrive(agent: &mut Agent, fp: &Floorplan, edges: &mut Vec<Edge>) -> bool {
    let target = agent.target.take().expect("arrival without a target");
    agent.route = None;
    agent.wait_ticks = 0;
    mark_visited(agent, target.what);
    match target.what {
        TargetRef::Boundary(id) => {
            agent.current_region = Some(fp.boundary(id).region_id);
            transition(agent, BehaviorState::InGallery, edges);
            false
        }
        TargetRef::Exhibit(_) => {
            agent.dwell_ticks = 0;
            transition(agent, BehaviorState::Viewing, edges);
            false
        }
        TargetRef::Exit => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{ascii_layers, EntryConfig};
    use alloc::vec;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Always yields zero bits.
    struct ZeroRng;

    impl RngCore for ZeroRng {
        fn next_u32(&mut self) -> u32 {
            0
        }
        fn next_u64(&mut self) -> u64 {
            0
        }
        fn fill_bytes(&mut self, dst: &mut [u8]) {
            dst.fill(0);
        }
    }

    fn profile() -> AgentProfile {
        AgentProfile {
            p1: 1.0,
            p2: 1.0,
            lambda: LAMBDA_MAX,
            near_threshold: 0,
        }
    }

    fn plan(rows: &[&str]) -> Floorplan {
        let layers = ascii_layers(rows);
        let h = rows.len() as u32;
        let e = EntryConfig {
            spawn_cells: vec![Cell::new(0, h - 1)],
            exit_cells: vec![Cell::new(0, h - 1)],
        };
        Floorplan::from_layers(&layers, &e).unwrap()
    }

    #[test]
    fn zero_rng_gives_lower_bounds() {
        let p = sample_profile(&mut ZeroRng);
        assert_eq!(p.p1, 0.5);
        assert_eq!(p.p2, 0.5);
        assert_eq!(p.lambda, LAMBDA_MIN);
        assert_eq!(p.near_threshold, 10);
    }

    #[test]
    fn range_examples() {
        let t = [Cell::new(3, 4)];
        assert_eq!(range_classify(Cell::new(0, 0), &t, 10), Ok(Range::Near));
        assert_eq!(range_classify(Cell::new(0, 0), &t, 5), Ok(Range::Near));
        assert_eq!(range_classify(Cell::new(0, 0), &t, 4), Ok(Range::Far));
        assert_eq!(range_classify(Cell::new(3, 4), &t, 0), Ok(Range::Near));
        assert_eq!(range_classify(Cell::new(0, 0), &[], 4), Err(BehaviorError::EmptyTarget));
    }

    #[test]
    fn dwell_at_zero_always_stays() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..10_000).all(|_| dwell_continue(0, LAMBDA_MAX, &mut rng)));
    }

    #[test]
    fn stay_probability_values() {
        let e_inv = libm::exp(-1.0);
        assert!((stay_probability(500, 1.0 / 500.0) - e_inv).abs() < 1e-12);
        assert!((stay_probability(7000, 1.0 / 7000.0) - e_inv).abs() < 1e-12);
        assert!((e_inv - 0.367879).abs() < 1e-6);
    }

    const TWO_DOORS: [&str; 6] = [
        "........................",
        "..a.................b...",
        "..0.................1...",
        "..0.................1...",
        "........................",
        "........................",
    ];

    #[test]
    fn nearest_unvisited_boundary() {
        let fp = plan(&TWO_DOORS);
        // anchors at (2,1) and (20,1); agent at (5,1): distances 3 and 15
        let mut a = Agent::new(0, Cell::new(5, 1), profile());
        let t = select_target(&a, &fp, TargetKind::Boundary).unwrap();
        assert_eq!(t.what, TargetRef::Boundary(BoundaryId(0)));
        assert_eq!(t.goal, Cell::new(2, 1));
        a.visited_boundaries.insert(BoundaryId(0));
        let t = select_target(&a, &fp, TargetKind::Boundary).unwrap();
        assert_eq!(t.what, TargetRef::Boundary(BoundaryId(1)));
        a.visited_boundaries.insert(BoundaryId(1));
        assert_eq!(select_target(&a, &fp, TargetKind::Boundary), None);
    }

    #[test]
    fn nearer_of_two_boundaries_by_distance() {
        let fp = plan(&TWO_DOORS);
        // from (7,4): to (2,1) is sqrt(25+9)=5.83, to (20,1) is sqrt(169+9)=13.3
        let a = Agent::new(0, Cell::new(7, 4), profile());
        assert_eq!(
            select_target(&a, &fp, TargetKind::Boundary).unwrap().what,
            TargetRef::Boundary(BoundaryId(0))
        );
        // from (16,4): 14.3 vs 5.0
        let a = Agent::new(0, Cell::new(16, 4), profile());
        assert_eq!(
            select_target(&a, &fp, TargetKind::Boundary).unwrap().what,
            TargetRef::Boundary(BoundaryId(1))
        );
    }

    #[test]
    fn gallery_without_exhibits_has_no_target() {
        let fp = plan(&TWO_DOORS);
        let mut a = Agent::new(0, Cell::new(2, 3), profile());
        a.current_region = Some(RegionId(0));
        assert_eq!(select_target(&a, &fp, TargetKind::Exhibit), None);
    }

    #[test]
    fn in_floor_heads_plans_to_boundary() {
        let fp = plan(&TWO_DOORS);
        let occ = Occupancy::new(fp.width(), fp.height());
        let mut a = Agent::new(0, Cell::new(5, 4), profile());
        let mut edges = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let intent = decide(&mut a, &fp, &occ, &PlannerConfig::default(), &mut rng, &mut edges);
        assert_eq!(intent, Intent::Replan(TargetKind::Boundary));
        assert_eq!(a.state, BehaviorState::SeekBoundaryFar);
        let route = a.route.as_ref().unwrap();
        assert!(route.path().is_valid_on(&fp, Cell::new(5, 4), Cell::new(2, 1)));
        assert_eq!(edges, vec![(BehaviorState::InFloor, BehaviorState::SeekBoundaryFar)]);
    }

    #[test]
    fn blocked_next_cell_waits() {
        let fp = plan(&TWO_DOORS);
        let mut occ = Occupancy::new(fp.width(), fp.height());
        let mut a = Agent::new(0, Cell::new(5, 4), profile());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut edges = Vec::new();
        decide(&mut a, &fp, &occ, &PlannerConfig::exact(), &mut rng, &mut edges);
        let next = a.next_cell().unwrap();
        occ.place(next, 9);
        edges.clear();
        let intent = decide(&mut a, &fp, &occ, &PlannerConfig::exact(), &mut rng, &mut edges);
        assert_eq!(intent, Intent::Stay);
        assert_eq!(a.state, BehaviorState::SeekBoundaryFar);
        assert_eq!(a.wait_ticks, 1);
        assert_eq!(edges, vec![(BehaviorState::SeekBoundaryFar, BehaviorState::SeekBoundaryFar)]);
    }

    #[test]
    fn viewing_at_zero_stays_viewing() {
        let fp = plan(&TWO_DOORS);
        let occ = Occupancy::new(fp.width(), fp.height());
        let mut a = Agent::new(0, Cell::new(5, 4), profile());
        a.state = BehaviorState::Viewing;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut edges = Vec::new();
        let intent = decide(&mut a, &fp, &occ, &PlannerConfig::default(), &mut rng, &mut edges);
        assert_eq!(intent, Intent::Stay);
        assert_eq!(a.state, BehaviorState::Viewing);
        assert_eq!(a.dwell_ticks, 1);
    }

    #[test]
    fn walk_to_boundary_then_gallery() {
        let fp = plan(&TWO_DOORS);
        let occ = Occupancy::new(fp.width(), fp.height());
        let mut a = Agent::new(0, Cell::new(5, 4), profile());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut edges = Vec::new();
        let cfg = PlannerConfig::exact();
        decide(&mut a, &fp, &occ, &cfg, &mut rng, &mut edges);
        let steps = a.route.as_ref().unwrap().path().cost();
        for i in 0..steps {
            let intent = decide(&mut a, &fp, &occ, &cfg, &mut rng, &mut edges);
            let before = a.position;
            assert!(matches!(intent, Intent::MoveTo(c) if c.is_adjacent(before)));
            complete_move(&mut a, &fp, true, &mut edges);
            if i + 1 < steps {
                assert_eq!(a.state, BehaviorState::SeekBoundaryFar);
            }
        }
        assert_eq!(a.position, Cell::new(2, 1));
        assert_eq!(a.state, BehaviorState::InGallery);
        assert_eq!(a.current_region, Some(RegionId(0)));
        assert!(a.visited_boundaries.contains(&BoundaryId(0)));
        assert!(edges.iter().all(|&(f, t)| is_allowed_edge(f, t)));
        // no exhibits in gallery 0: back to the floor
        decide(&mut a, &fp, &occ, &cfg, &mut rng, &mut edges);
        assert_eq!(a.state, BehaviorState::InFloor);
    }

    #[test]
    fn unreachable_boundary_is_skipped() {
        let fp = plan(&[
            ".....#a0",
            ".....###",
            "........",
            ".......b",
            ".......1",
        ]);
        let occ = Occupancy::new(fp.width(), fp.height());
        // anchor a at (6,0) is nearer (d^2 16) than b at (7,3) (d^2 18) but walled in
        let mut a = Agent::new(0, Cell::new(4, 0), profile());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut edges = Vec::new();
        decide(&mut a, &fp, &occ, &PlannerConfig::exact(), &mut rng, &mut edges);
        assert!(a.visited_boundaries.contains(&BoundaryId(0)));
        assert_eq!(a.target.unwrap().what, TargetRef::Boundary(BoundaryId(1)));
    }
}
