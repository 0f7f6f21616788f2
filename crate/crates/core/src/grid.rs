//! Cell coordinates, raw rasters and the walkability abstraction shared by
//! the planner and the engine.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A grid cell. `x` is the column, `y` the row; the origin is top-left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Cell { x, y }
    }

    /// Row-major ordering key: lowest row first, then lowest column.
    #[inline]
    pub fn row_major(self) -> (u32, u32) {
        (self.y, self.x)
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y) == 1
    }

    pub fn dist_sq(self, other: Cell) -> u64 {
        let dx = u64::from(self.x.abs_diff(other.x));
        let dy = u64::from(self.y.abs_diff(other.y));
        dx * dx + dy * dy
    }

    /// In-bounds 4-neighbours in a fixed order (up, left, right, down).
    pub fn neighbors(self, width: u32, height: u32) -> impl Iterator<Item = Cell> {
        let Cell { x, y } = self;
        let up = (y > 0).then(|| Cell::new(x, y - 1));
        let left = (x > 0).then(|| Cell::new(x - 1, y));
        let right = (x + 1 < width).then(|| Cell::new(x + 1, y));
        let down = (y + 1 < height).then(|| Cell::new(x, y + 1));
        [up, left, right, down].into_iter().flatten()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Sorts cells in the deterministic row-major order used everywhere.
pub fn sort_row_major(cells: &mut [Cell]) {
    cells.sort_unstable_by_key(|c| c.row_major());
}

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];
pub const RED: Rgb = [255, 0, 0];
pub const GREEN: Rgb = [0, 255, 0];
pub const BLUE: Rgb = [0, 0, 255];

/// Row-major RGB raster. Grayscale inputs are expanded to three equal channels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl Raster {
    pub fn filled(width: u32, height: u32, color: Rgb) -> Self {
        Raster {
            width,
            height,
            pixels: vec![color; (width as usize) * (height as usize)],
        }
    }

    /// Returns `None` when `pixels.len() != width * height`.
    pub fn from_pixels(width: u32, height: u32, pixels: Vec<Rgb>) -> Option<Self> {
        (pixels.len() == (width as usize) * (height as usize)).then_some(Raster {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn get(&self, cell: Cell) -> Rgb {
        self.pixels[self.index(cell)]
    }

    pub fn set(&mut self, cell: Cell, color: Rgb) {
        let i = self.index(cell);
        self.pixels[i] = color;
    }

    /// Paints the inclusive rectangle `[x0, x1] x [y0, y1]`, clipped to bounds.
    pub fn fill_rect(&mut self, x0: u32, y0: u32, x1: u32, y1: u32, color: Rgb) {
        for y in y0..=y1.min(self.height.saturating_sub(1)) {
            for x in x0..=x1.min(self.width.saturating_sub(1)) {
                self.set(Cell::new(x, y), color);
            }
        }
    }

    #[inline]
    fn index(&self, cell: Cell) -> usize {
        debug_assert!(cell.x < self.width && cell.y < self.height);
        cell.y as usize * self.width as usize + cell.x as usize
    }
}

/// ITU-R BT.601 luma of an RGB pixel, 0..=255.
pub fn luminance(rgb: Rgb) -> u8 {
    let [r, g, b] = rgb.map(u32::from);
    ((299 * r + 587 * g + 114 * b + 500) / 1000) as u8
}

/// Anything the planner can search over.
pub trait Walkable {
    fn width(&self) -> u32;
    fn height(&self) -> u32;
    /// Caller guarantees `cell` is in bounds.
    fn walkable(&self, cell: Cell) -> bool;

    fn in_bounds(&self, cell: Cell) -> bool {
        cell.x < self.width() && cell.y < self.height()
    }
}

/// A bare boolean walkability grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkMask {
    width: u32,
    height: u32,
    open: Vec<bool>,
}

impl WalkMask {
    pub fn open(width: u32, height: u32) -> Self {
        WalkMask {
            width,
            height,
            open: vec![true; (width as usize) * (height as usize)],
        }
    }

    pub fn set_blocked(&mut self, cell: Cell, blocked: bool) {
        let i = cell.y as usize * self.width as usize + cell.x as usize;
        self.open[i] = !blocked;
    }

    /// Parses rows of `.` (open) and `#` (blocked).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.len()) as u32;
        let mut mask = WalkMask::open(width, height);
        for (y, row) in rows.iter().enumerate() {
            assert_eq!(row.len() as u32, width, "ragged ascii grid");
            for (x, ch) in row.bytes().enumerate() {
                mask.set_blocked(Cell::new(x as u32, y as u32), ch == b'#');
            }
        }
        mask
    }
}

impl Walkable for WalkMask {
    fn width(&self) -> u32 {
        self.width
    }
    fn height(&self) -> u32 {
        self.height
    }
    fn walkable(&self, cell: Cell) -> bool {
        self.open[cell.y as usize * self.width as usize + cell.x as usize]
    }
}

/// Wraps a grid and additionally blocks a handful of cells.
pub struct Avoiding<'a, G: ?Sized> {
    pub inner: &'a G,
    pub blocked: &'a [Cell],
}

impl<G: Walkable + ?Sized> Walkable for Avoiding<'_, G> {
    fn width(&self) -> u32 {
        self.inner.width()
    }
    fn height(&self) -> u32 {
        self.inner.height()
    }
    fn walkable(&self, cell: Cell) -> bool {
        self.inner.walkable(cell) && !self.blocked.contains(&cell)
    }
}

/// Which agent, if any, stands on (or has reserved) each cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occupancy {
    width: u32,
    height: u32,
    slots: Vec<Option<u32>>,
    occupied: usize,
}

impl Occupancy {
    pub fn new(width: u32, height: u32) -> Self {
        Occupancy {
            width,
            height,
            slots: vec![None; (width as usize) * (height as usize)],
            occupied: 0,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, cell: Cell) -> Option<u32> {
        self.slots[self.index(cell)]
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        self.get(cell).is_none()
    }

    /// Returns the previous occupant, if any.
    pub fn place(&mut self, cell: Cell, agent: u32) -> Option<u32> {
        let i = self.index(cell);
        let prev = self.slots[i].replace(agent);
        if prev.is_none() {
            self.occupied += 1;
        }
        prev
    }

    pub fn clear(&mut self, cell: Cell) -> Option<u32> {
        let i = self.index(cell);
        let prev = self.slots[i].take();
        if prev.is_some() {
            self.occupied -= 1;
        }
        prev
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied
    }

    #[inline]
    fn index(&self, cell: Cell) -> usize {
        cell.y as usize * self.width as usize + cell.x as usize
    }
}
