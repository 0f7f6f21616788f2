use proptest::prelude::*;
use visitorsim_core::components::{extract_components, ComponentMode};
use visitorsim_core::floorplan::{ascii_layers, EntryConfig, Floorplan, RegionId};
use visitorsim_core::grid::{Cell, Raster, BLACK, WHITE};

/// Independent flood fill over the ASCII sketch: counts the cells reachable
/// from `start` that carry the same character.
fn flood_count(rows: &[&str], start: (usize, usize)) -> usize {
    let grid: Vec<Vec<char>> = rows.iter().map(|r| r.chars().collect()).collect();
    let target = grid[start.1][start.0];
    let mut seen = vec![vec![false; grid[0].len()]; grid.len()];
    let mut stack = vec![start];
    let mut n = 0;
    while let Some((x, y)) = stack.pop() {
        if seen[y][x] || grid[y][x] != target {
            continue;
        }
        seen[y][x] = true;
        n += 1;
        if x > 0 {
            stack.push((x - 1, y));
        }
        if y > 0 {
            stack.push((x, y - 1));
        }
        if x + 1 < grid[0].len() {
            stack.push((x + 1, y));
        }
        if y + 1 < grid.len() {
            stack.push((x, y + 1));
        }
    }
    n
}

const L_FIXTURE: [&str; 10] = [
    "..........",
    ".0........",
    ".0........",
    ".0........",
    ".0........",
    ".0........",
    ".0........",
    ".000000...",
    ".a........",
    "..........",
];

fn entry() -> EntryConfig {
    EntryConfig {
        spawn_cells: vec![Cell::new(9, 9)],
        exit_cells: vec![Cell::new(9, 9)],
    }
}

#[test]
fn l_shaped_region_cell_count() {
    let expected = flood_count(&L_FIXTURE, (1, 1));
    assert_eq!(expected, 12);
    let fp = Floorplan::from_layers(&ascii_layers(&L_FIXTURE), &entry()).unwrap();
    assert_eq!(fp.regions().len(), 1);
    assert_eq!(fp.region(RegionId(0)).cells.len(), expected);
}

#[test]
fn loading_is_pure() {
    let layers = ascii_layers(&L_FIXTURE);
    let a = Floorplan::from_layers(&layers, &entry()).unwrap();
    let b = Floorplan::from_layers(&layers, &entry()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn structural_invariants_on_gallery_sketch() {
    let rows = [
        "##########",
        "#000#1111#",
        "#0E0#1EE1#",
        "#000#1111#",
        "#a###b####",
        "#........#",
        "#...WW...#",
        "#........#",
        "##########",
    ];
    let e = EntryConfig {
        spawn_cells: EntryConfig::rect(1, 7, 2, 7),
        exit_cells: EntryConfig::rect(1, 7, 2, 7),
    };
    let fp = Floorplan::from_layers(&ascii_layers(&rows), &e).unwrap();
    let region_cells: usize = fp.regions().iter().map(|r| r.cells.len()).sum();
    assert!(region_cells <= fp.walkable_count());
    for ex in fp.exhibits() {
        for v in &ex.viewing_cells {
            assert_eq!(fp.is_walkable(*v), Ok(true));
            assert!(ex.cells.iter().any(|c| c.is_adjacent(*v)));
        }
    }
    for b in fp.boundaries() {
        assert!(b.cells.contains(&b.anchor));
        let region = fp.region(b.region_id);
        assert!(region.boundary_ids.contains(&b.id));
        assert!(b.cells.iter().any(|c| region.cells.iter().any(|r| r.is_adjacent(*c))));
    }
    assert_eq!(fp.exhibits().len(), 2);
    assert_eq!(fp.exhibits()[1].cells.len(), 2);
    assert_eq!(fp.exhibits()[1].region_id, Some(RegionId(1)));
}

fn arb_mask() -> impl Strategy<Value = (u32, u32, Vec<bool>)> {
    (1u32..12, 1u32..12).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<bool>(), (w * h) as usize).prop_map(move |v| (w, h, v))
    })
}

proptest! {
    #[test]
    fn connectivity_partitions_elements((w, h, mask) in arb_mask()) {
        let pixels = mask.iter().map(|&b| if b { BLACK } else { WHITE }).collect();
        let raster = Raster::from_pixels(w, h, pixels).unwrap();
        let comps = extract_components(&raster, ComponentMode::ByConnectivity);
        let mut covered = vec![0u8; mask.len()];
        for comp in &comps {
            for c in comp {
                covered[(c.y * w + c.x) as usize] += 1;
            }
        }
        for (i, &m) in mask.iter().enumerate() {
            prop_assert_eq!(covered[i], u8::from(m));
        }
        // ordering by lowest row-major member
        let firsts: Vec<(u32, u32)> = comps.iter().map(|c| c[0].row_major()).collect();
        let mut sorted = firsts.clone();
        sorted.sort();
        prop_assert_eq!(firsts, sorted);
    }
}
