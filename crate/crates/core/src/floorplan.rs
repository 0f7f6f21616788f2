//! The immutable grid world built from six colour-coded layers.
//!
//! Three layers are binary (window, structure, exhibit): a pixel is an
//! element when its luminance is below 128. Two layers carry ids (region,
//! boundary): every distinct non-white colour is one component. The sixth
//! layer is the rendered composite and only has to agree on dimensions.
//!
//! A cell is walkable iff it is neither structure, window nor exhibit.
//! Region and boundary membership is only recorded on walkable cells.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::components::{extract_components, is_connected, is_element, ComponentMode};
use crate::grid::{sort_row_major, Cell, Raster, Rgb, Walkable, BLACK, WHITE};

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub u16);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(RegionId);
id_type!(BoundaryId);
id_type!(ExhibitId);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CellFlags {
    pub structure: bool,
    pub window: bool,
    pub exhibit: bool,
    pub region: Option<RegionId>,
    pub boundary: Option<BoundaryId>,
}

impl CellFlags {
    #[inline]
    pub fn walkable(&self) -> bool {
        !(self.structure || self.window || self.exhibit)
    }
}

/// A small gallery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub id: RegionId,
    pub cells: Vec<Cell>,
    pub boundary_ids: Vec<BoundaryId>,
    pub exhibit_ids: Vec<ExhibitId>,
}

/// An opening (door, gate) into a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub id: BoundaryId,
    pub cells: Vec<Cell>,
    pub region_id: RegionId,
    /// The boundary cell closest to the region centroid.
    pub anchor: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExhibitSite {
    pub id: ExhibitId,
    pub cells: Vec<Cell>,
    /// Majority region among the viewing cells; `None` for exhibits on the open floor.
    pub region_id: Option<RegionId>,
    pub viewing_cells: Vec<Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layer {
    Window,
    Structure,
    Exhibit,
    Region,
    Boundary,
    Composite,
}

impl Layer {
    pub const ALL: [Layer; 6] = [
        Layer::Window,
        Layer::Structure,
        Layer::Exhibit,
        Layer::Region,
        Layer::Boundary,
        Layer::Composite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Window => "window",
            Layer::Structure => "structure",
            Layer::Exhibit => "exhibit",
            Layer::Region => "region",
            Layer::Boundary => "boundary",
            Layer::Composite => "floorplan",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six decoded input rasters.
#[derive(Clone, Debug)]
pub struct LayerRasters {
    pub window: Raster,
    pub structure: Raster,
    pub exhibit: Raster,
    pub region: Raster,
    pub boundary: Raster,
    pub composite: Raster,
}

impl LayerRasters {
    pub fn get(&self, layer: Layer) -> &Raster {
        match layer {
            Layer::Window => &self.window,
            Layer::Structure => &self.structure,
            Layer::Exhibit => &self.exhibit,
            Layer::Region => &self.region,
            Layer::Boundary => &self.boundary,
            Layer::Composite => &self.composite,
        }
    }
}

/// Where agents appear and leave.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EntryConfig {
    pub spawn_cells: Vec<Cell>,
    pub exit_cells: Vec<Cell>,
}

impl EntryConfig {
    /// Inclusive rectangle of cells, row-major.
    pub fn rect(x0: u32, y0: u32, x1: u32, y1: u32) -> Vec<Cell> {
        let mut cells = Vec::new();
        for y in y0.min(y1)..=y0.max(y1) {
            for x in x0.min(x1)..=x0.max(x1) {
                cells.push(Cell::new(x, y));
            }
        }
        cells
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FloorplanError {
    #[error("DimensionMismatch: layer `{layer}` is {found_w}x{found_h}, expected {expected_w}x{expected_h}")]
    DimensionMismatch {
        layer: Layer,
        expected_w: u32,
        expected_h: u32,
        found_w: u32,
        found_h: u32,
    },
    #[error("UnreachableRegion: region {region} has no adjacent boundary")]
    UnreachableRegion { region: RegionId },
    #[error("OrphanBoundary: boundary {boundary} is not adjacent to any region")]
    OrphanBoundary { boundary: BoundaryId },
    #[error("BlockedExhibit: exhibit {exhibit} has no walkable neighbour")]
    BlockedExhibit { exhibit: ExhibitId },
    #[error("BadSpawn: {which} cell {cell} {reason}")]
    BadSpawn {
        which: &'static str,
        cell: Cell,
        reason: &'static str,
    },
    #[error("BadSpawn: no {which} cells configured")]
    NoEntryCells { which: &'static str },
    #[error("DisconnectedComponent: layer `{layer}` component {index} is not a single 4-connected walkable area")]
    DisconnectedComponent { layer: Layer, index: usize },
    #[error("OutOfBounds: cell {cell} outside {width}x{height}")]
    OutOfBounds { cell: Cell, width: u32, height: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floorplan {
    width: u32,
    height: u32,
    cells: Vec<CellFlags>,
    regions: Vec<Region>,
    boundaries: Vec<Boundary>,
    exhibits: Vec<ExhibitSite>,
    spawn_cells: Vec<Cell>,
    exit_cells: Vec<Cell>,
}

impl Floorplan {
    /// Validates the layers and extracts regions, boundaries and exhibits.
    pub fn from_layers(layers: &LayerRasters, entry: &EntryConfig) -> Result<Self, FloorplanError> {
        let width = layers.structure.width();
        let height = layers.structure.height();
        for layer in Layer::ALL {
            let r = layers.get(layer);
            if r.width() != width || r.height() != height {
                return Err(FloorplanError::DimensionMismatch {
                    layer,
                    expected_w: width,
                    expected_h: height,
                    found_w: r.width(),
                    found_h: r.height(),
                });
            }
        }

        let mut cells: Vec<CellFlags> = (0..(width as usize * height as usize))
            .map(|i| CellFlags {
                structure: is_element(layers.structure.pixels()[i]),
                window: is_element(layers.window.pixels()[i]),
                exhibit: is_element(layers.exhibit.pixels()[i]),
                region: None,
                boundary: None,
            })
            .collect();
        let idx = |c: Cell| c.y as usize * width as usize + c.x as usize;

        let regions_cells = walkable_id_sets(&layers.region, &cells, width, height, Layer::Region)?;
        let boundary_cells =
            walkable_id_sets(&layers.boundary, &cells, width, height, Layer::Boundary)?;

        let mut regions: Vec<Region> = regions_cells
            .into_iter()
            .enumerate()
            .map(|(i, cs)| Region {
                id: RegionId(i as u16),
                cells: cs,
                boundary_ids: Vec::new(),
                exhibit_ids: Vec::new(),
            })
            .collect();
        for r in &regions {
            for &c in &r.cells {
                cells[idx(c)].region = Some(r.id);
            }
        }

        let mut boundaries = Vec::with_capacity(boundary_cells.len());
        for (i, bcells) in boundary_cells.into_iter().enumerate() {
            let id = BoundaryId(i as u16);
            for &c in &bcells {
                cells[idx(c)].boundary = Some(id);
            }
            let region_id = adjacent_majority_region(&bcells, &cells, width, height, regions.len())
                .ok_or(FloorplanError::OrphanBoundary { boundary: id })?;
            let anchor = nearest_to_centroid(&bcells, &regions[region_id.index()].cells);
            regions[region_id.index()].boundary_ids.push(id);
            boundaries.push(Boundary {
                id,
                cells: bcells,
                region_id,
                anchor,
            });
        }
        if let Some(r) = regions.iter().find(|r| r.boundary_ids.is_empty()) {
            return Err(FloorplanError::UnreachableRegion { region: r.id });
        }

        let mut exhibits = Vec::new();
        for (i, ecells) in extract_components(&layers.exhibit, ComponentMode::ByConnectivity)
            .into_iter()
            .enumerate()
        {
            let id = ExhibitId(i as u16);
            let mut viewing: Vec<Cell> = ecells
                .iter()
                .flat_map(|c| c.neighbors(width, height))
                .filter(|&n| cells[idx(n)].walkable())
                .collect();
            sort_row_major(&mut viewing);
            viewing.dedup();
            if viewing.is_empty() {
                return Err(FloorplanError::BlockedExhibit { exhibit: id });
            }
            let mut votes = vec![0usize; regions.len()];
            for &v in &viewing {
                if let Some(r) = cells[idx(v)].region {
                    votes[r.index()] += 1;
                }
            }
            let region_id = argmax_lowest(&votes).map(|r| RegionId(r as u16));
            if let Some(r) = region_id {
                regions[r.index()].exhibit_ids.push(id);
            }
            exhibits.push(ExhibitSite {
                id,
                cells: ecells,
                region_id,
                viewing_cells: viewing,
            });
        }

        let mut fp = Floorplan {
            width,
            height,
            cells,
            regions,
            boundaries,
            exhibits,
            spawn_cells: Vec::new(),
            exit_cells: Vec::new(),
        };
        fp.spawn_cells = fp.checked_entry_cells(&entry.spawn_cells, "spawn")?;
        fp.exit_cells = fp.checked_entry_cells(&entry.exit_cells, "exit")?;
        fp.check_exit_reachable()?;
        Ok(fp)
    }

    fn checked_entry_cells(&self, cells: &[Cell], which: &'static str) -> Result<Vec<Cell>, FloorplanError> {
        if cells.is_empty() {
            return Err(FloorplanError::NoEntryCells { which });
        }
        let mut out = cells.to_vec();
        sort_row_major(&mut out);
        out.dedup();
        for &c in &out {
            if !self.in_bounds(c) {
                return Err(FloorplanError::BadSpawn {
                    which,
                    cell: c,
                    reason: "is out of bounds",
                });
            }
            if !self.walkable(c) {
                return Err(FloorplanError::BadSpawn {
                    which,
                    cell: c,
                    reason: "is not walkable",
                });
            }
        }
        Ok(out)
    }

    fn check_exit_reachable(&self) -> Result<(), FloorplanError> {
        let n = self.cells.len();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<Cell> = VecDeque::new();
        for &c in &self.exit_cells {
            seen[self.index(c)] = true;
            queue.push_back(c);
        }
        while let Some(c) = queue.pop_front() {
            for nb in c.neighbors(self.width, self.height) {
                let i = self.index(nb);
                if !seen[i] && self.cells[i].walkable() {
                    seen[i] = true;
                    queue.push_back(nb);
                }
            }
        }
        match self.spawn_cells.iter().find(|&&c| !seen[self.index(c)]) {
            Some(&cell) => Err(FloorplanError::BadSpawn {
                which: "spawn",
                cell,
                reason: "cannot reach any exit cell",
            }),
            None => Ok(()),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn flags(&self, cell: Cell) -> Result<&CellFlags, FloorplanError> {
        if self.in_bounds(cell) {
            Ok(&self.cells[self.index(cell)])
        } else {
            Err(FloorplanError::OutOfBounds {
                cell,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// True iff the cell is neither structure, window nor exhibit.
    pub fn is_walkable(&self, cell: Cell) -> Result<bool, FloorplanError> {
        self.flags(cell).map(CellFlags::walkable)
    }

    pub fn cell_flags(&self) -> &[CellFlags] {
        &self.cells
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn boundaries(&self) -> &[Boundary] {
        &self.boundaries
    }

    pub fn exhibits(&self) -> &[ExhibitSite] {
        &self.exhibits
    }

    pub fn region(&self, id: RegionId) -> &Region {
        &self.regions[id.index()]
    }

    pub fn boundary(&self, id: BoundaryId) -> &Boundary {
        &self.boundaries[id.index()]
    }

    pub fn exhibit(&self, id: ExhibitId) -> &ExhibitSite {
        &self.exhibits[id.index()]
    }

    pub fn spawn_cells(&self) -> &[Cell] {
        &self.spawn_cells
    }

    pub fn exit_cells(&self) -> &[Cell] {
        &self.exit_cells
    }

    pub fn walkable_count(&self) -> usize {
        self.cells.iter().filter(|c| c.walkable()).count()
    }

    #[inline]
    pub(crate) fn index(&self, cell: Cell) -> usize {
        cell.y as usize * self.width as usize + cell.x as usize
    }
}

impl Walkable for Floorplan {
    fn width(&self) -> u32 {
        self.width
    }
    fn height(&self) -> u32 {
        self.height
    }
    #[inline]
    fn walkable(&self, cell: Cell) -> bool {
        self.cells[self.index(cell)].walkable()
    }
}

/// Colour sets of an id layer restricted to walkable cells. Each must be one
/// non-empty 4-connected area.
fn walkable_id_sets(
    raster: &Raster,
    flags: &[CellFlags],
    width: u32,
    height: u32,
    layer: Layer,
) -> Result<Vec<Vec<Cell>>, FloorplanError> {
    let mut sets: Vec<Vec<Cell>> = extract_components(raster, ComponentMode::ByColor)
        .into_iter()
        .map(|cs| {
            cs.into_iter()
                .filter(|c| flags[c.y as usize * width as usize + c.x as usize].walkable())
                .collect::<Vec<_>>()
        })
        .collect();
    for (index, set) in sets.iter().enumerate() {
        if !is_connected(set, width, height) {
            return Err(FloorplanError::DisconnectedComponent { layer, index });
        }
    }
    sets.sort_by_key(|s| s[0].row_major());
    Ok(sets)
}

/// Region owning the most cells in or 4-adjacent to `cells`; ties go to the
/// lower region id.
fn adjacent_majority_region(
    cells: &[Cell],
    flags: &[CellFlags],
    width: u32,
    height: u32,
    region_count: usize,
) -> Option<RegionId> {
    let mut touched: Vec<Cell> = cells
        .iter()
        .flat_map(|&c| core::iter::once(c).chain(c.neighbors(width, height)))
        .collect();
    sort_row_major(&mut touched);
    touched.dedup();
    let mut votes = vec![0usize; region_count];
    for c in touched {
        if let Some(r) = flags[c.y as usize * width as usize + c.x as usize].region {
            votes[r.index()] += 1;
        }
    }
    argmax_lowest(&votes).map(|i| RegionId(i as u16))
}

fn argmax_lowest(votes: &[usize]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, &v) in votes.iter().enumerate() {
        if v > 0 && best.is_none_or(|(_, bv)| v > bv) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// The candidate nearest the centroid of `area`, compared exactly in
/// integer arithmetic. Candidates are row-major sorted, so the first
/// minimum is the lowest row, then lowest column.
fn nearest_to_centroid(candidates: &[Cell], area: &[Cell]) -> Cell {
    let n = area.len() as i128;
    let sx: i128 = area.iter().map(|c| c.x as i128).sum();
    let sy: i128 = area.iter().map(|c| c.y as i128).sum();
    let key = |c: &Cell| {
        let dx = n * c.x as i128 - sx;
        let dy = n * c.y as i128 - sy;
        dx * dx + dy * dy
    };
    let mut best = candidates[0];
    let mut best_key = key(&best);
    for c in &candidates[1..] {
        let k = key(c);
        if k < best_key {
            best = *c;
            best_key = k;
        }
    }
    best
}

/// Builds the six layers from an ASCII sketch. Legend: `#` structure,
/// `W` window, `E` exhibit, `0`-`9` region ids, `a`-`j` boundary ids,
/// anything else empty floor. Exhibits drawn with `E` are not part of any
/// region; surround them with region digits to place them in a gallery.
pub fn ascii_layers(rows: &[&str]) -> LayerRasters {
    let height = rows.len() as u32;
    let width = rows.first().map_or(0, |r| r.len()) as u32;
    let blank = Raster::filled(width, height, WHITE);
    let mut l = LayerRasters {
        window: blank.clone(),
        structure: blank.clone(),
        exhibit: blank.clone(),
        region: blank.clone(),
        boundary: blank.clone(),
        composite: blank,
    };
    for (y, row) in rows.iter().enumerate() {
        for (x, ch) in row.chars().enumerate() {
            let c = Cell::new(x as u32, y as u32);
            match ch {
                '#' => {
                    l.structure.set(c, BLACK);
                    l.composite.set(c, BLACK);
                }
                'W' => {
                    l.window.set(c, BLACK);
                    l.composite.set(c, crate::grid::RED);
                }
                'E' => {
                    l.exhibit.set(c, BLACK);
                    l.composite.set(c, crate::grid::GREEN);
                }
                '0'..='9' => l.region.set(c, id_color(ch as u8 - b'0')),
                'a'..='j' => l.boundary.set(c, id_color(ch as u8 - b'a')),
                _ => {}
            }
        }
    }
    l
}

/// A distinct non-white colour per small id.
pub fn id_color(id: u8) -> Rgb {
    [40 + id.wrapping_mul(53), 200 - (id % 4) * 40, 20 + (id % 7) * 30]
}

/// Diagnostic one-liner for validation reports.
pub fn summary(fp: &Floorplan) -> String {
    alloc::format!(
        "{}x{} regions={} boundaries={} exhibits={} walkable={} spawn={} exit={}",
        fp.width,
        fp.height,
        fp.regions.len(),
        fp.boundaries.len(),
        fp.exhibits.len(),
        fp.walkable_count(),
        fp.spawn_cells.len(),
        fp.exit_cells.len()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(c: Cell) -> EntryConfig {
        EntryConfig {
            spawn_cells: vec![c],
            exit_cells: vec![c],
        }
    }

    #[test]
    fn empty_plan_is_all_walkable() {
        let layers = ascii_layers(&["....", "....", "...."]);
        let fp = Floorplan::from_layers(&layers, &entry(Cell::new(0, 0))).unwrap();
        assert_eq!(fp.walkable_count(), 12);
        assert!(fp.regions().is_empty());
    }

    #[test]
    fn walkability_by_element() {
        let layers = ascii_layers(&["#WE."]);
        let fp = Floorplan::from_layers(&layers, &entry(Cell::new(3, 0))).unwrap();
        assert_eq!(fp.is_walkable(Cell::new(0, 0)), Ok(false));
        assert_eq!(fp.is_walkable(Cell::new(1, 0)), Ok(false));
        assert_eq!(fp.is_walkable(Cell::new(2, 0)), Ok(false));
        assert_eq!(fp.is_walkable(Cell::new(3, 0)), Ok(true));
        assert!(fp.flags(Cell::new(1, 0)).unwrap().window);
        assert!(matches!(
            fp.is_walkable(Cell::new(4, 0)),
            Err(FloorplanError::OutOfBounds { .. })
        ));
    }

    #[test]
    fn two_regions_with_boundaries() {
        let layers = ascii_layers(&[
            "000#111", //
            "000#111",
            "0E0#1E1",
            "a..#..b",
            ".......",
        ]);
        let fp = Floorplan::from_layers(&layers, &entry(Cell::new(3, 4))).unwrap();
        assert_eq!(fp.regions().len(), 2);
        assert_eq!(fp.boundaries().len(), 2);
        assert_eq!(fp.exhibits().len(), 2);
        assert_eq!(fp.regions()[0].cells.len(), 8);
        assert_eq!(fp.boundary(BoundaryId(0)).region_id, RegionId(0));
        assert_eq!(fp.boundary(BoundaryId(1)).region_id, RegionId(1));
        assert_eq!(fp.exhibit(ExhibitId(0)).region_id, Some(RegionId(0)));
        assert_eq!(fp.region(RegionId(1)).exhibit_ids, vec![ExhibitId(1)]);
        assert_eq!(fp.exhibit(ExhibitId(0)).viewing_cells.len(), 4);
    }

    #[test]
    fn region_without_boundary_is_rejected() {
        let layers = ascii_layers(&["00.", "...", "..1", "..a"]);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(0, 3))).unwrap_err();
        assert_eq!(err, FloorplanError::UnreachableRegion { region: RegionId(0) });
    }

    #[test]
    fn boundary_without_region_is_orphaned() {
        let layers = ascii_layers(&["0a.", "...", "..b"]);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(0, 2))).unwrap_err();
        assert_eq!(err, FloorplanError::OrphanBoundary { boundary: BoundaryId(1) });
    }

    #[test]
    fn enclosed_exhibit_is_blocked() {
        let layers = ascii_layers(&["###.", "#E#.", "###."]);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(3, 0))).unwrap_err();
        assert_eq!(err, FloorplanError::BlockedExhibit { exhibit: ExhibitId(0) });
    }

    #[test]
    fn spawn_on_wall_is_rejected() {
        let layers = ascii_layers(&["#.."]);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(0, 0))).unwrap_err();
        assert!(matches!(err, FloorplanError::BadSpawn { which: "spawn", .. }));
    }

    #[test]
    fn spawn_cut_off_from_exit_is_rejected() {
        let layers = ascii_layers(&[".#."]);
        let e = EntryConfig {
            spawn_cells: vec![Cell::new(0, 0)],
            exit_cells: vec![Cell::new(2, 0)],
        };
        let err = Floorplan::from_layers(&layers, &e).unwrap_err();
        assert!(matches!(err, FloorplanError::BadSpawn { reason: "cannot reach any exit cell", .. }));
    }

    #[test]
    fn dimension_mismatch_names_layer() {
        let mut layers = ascii_layers(&["...", "..."]);
        layers.boundary = Raster::filled(2, 2, WHITE);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(0, 0))).unwrap_err();
        assert!(matches!(err, FloorplanError::DimensionMismatch { layer: Layer::Boundary, .. }));
    }

    #[test]
    fn split_colour_is_disconnected() {
        let layers = ascii_layers(&["0#0", "a.."]);
        let err = Floorplan::from_layers(&layers, &entry(Cell::new(1, 1))).unwrap_err();
        assert!(matches!(err, FloorplanError::DisconnectedComponent { layer: Layer::Region, .. }));
    }

    #[test]
    fn anchor_is_nearest_to_region_centroid() {
        // region centroid is at column 2; the boundary row spans 0..=4
        let layers = ascii_layers(&["00000", "00000", "aaaaa"]);
        let fp = Floorplan::from_layers(&layers, &entry(Cell::new(0, 2))).unwrap();
        assert_eq!(fp.boundaries()[0].anchor, Cell::new(2, 2));
    }

    #[test]
    fn boundary_tie_goes_to_lower_region() {
        // boundary `a` touches one cell of region 0 and one of region 1
        let layers = ascii_layers(&["0a1", "0.1"]);
        let fp = Floorplan::from_layers(&layers, &entry(Cell::new(1, 1)));
        // region 1 has no boundary of its own
        assert_eq!(fp.unwrap_err(), FloorplanError::UnreachableRegion { region: RegionId(1) });
    }
}
