//! Component labeling over layer rasters.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::grid::{luminance, sort_row_major, Cell, Raster, Rgb, WHITE};

/// Pixels darker than this are elements on a binary layer.
pub const ELEMENT_LUMINANCE: u8 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentMode {
    /// One set per distinct non-white colour, connected or not.
    ByColor,
    /// 4-connected components of dark (element) pixels.
    ByConnectivity,
}

pub fn is_element(rgb: Rgb) -> bool {
    luminance(rgb) < ELEMENT_LUMINANCE
}

/// Splits a layer into cell sets. Each set is sorted row-major and the sets
/// are ordered by their first (lowest row, then column) member.
pub fn extract_components(layer: &Raster, mode: ComponentMode) -> Vec<Vec<Cell>> {
    let mut sets = match mode {
        ComponentMode::ByColor => by_color(layer),
        ComponentMode::ByConnectivity => {
            let mask: Vec<bool> = layer.pixels().iter().map(|&p| is_element(p)).collect();
            connected_components(&mask, layer.width(), layer.height())
        }
    };
    for set in &mut sets {
        sort_row_major(set);
    }
    sets.sort_by_key(|s| s[0].row_major());
    sets
}

fn by_color(layer: &Raster) -> Vec<Vec<Cell>> {
    let mut groups: BTreeMap<Rgb, Vec<Cell>> = BTreeMap::new();
    let w = layer.width();
    for (i, &px) in layer.pixels().iter().enumerate() {
        if px != WHITE {
            let cell = Cell::new(i as u32 % w, i as u32 / w);
            groups.entry(px).or_default().push(cell);
        }
    }
    groups.into_values().collect()
}

/// 4-connected components of the `true` cells of a row-major mask.
pub fn connected_components(mask: &[bool], width: u32, height: u32) -> Vec<Vec<Cell>> {
    let mut seen = vec![false; mask.len()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut comp = Vec::new();
        while let Some(i) = stack.pop() {
            let cell = Cell::new(i as u32 % width, i as u32 / width);
            comp.push(cell);
            for n in cell.neighbors(width, height) {
                let j = n.y as usize * width as usize + n.x as usize;
                if mask[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        sort_row_major(&mut comp);
        out.push(comp);
    }
    out
}

/// True when `cells` (non-empty) forms exactly one 4-connected component.
pub fn is_connected(cells: &[Cell], width: u32, height: u32) -> bool {
    if cells.is_empty() {
        return false;
    }
    let mut mask = vec![false; (width as usize) * (height as usize)];
    for c in cells {
        mask[c.y as usize * width as usize + c.x as usize] = true;
    }
    connected_components(&mask, width, height).len() == 1
}
