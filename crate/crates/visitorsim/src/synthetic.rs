//! The bundled two-gallery floorplan, drawn procedurally at 320x320.
//!
//! Layout: an open floor with an elevator lobby in the bottom-left corner,
//! gallery 0 in the upper left and gallery 1 on the right, each with two
//! openings. Columns dot the open floor, a glazed light court sits in its
//! middle and part of the north facade is glass.

use visitorsim_core::density::render_static;
use visitorsim_core::floorplan::{id_color, EntryConfig, Floorplan, LayerRasters};
use visitorsim_core::grid::{Raster, BLACK, WHITE};

pub const SIZE: u32 = 320;

/// Lobby rectangle used for both spawn and exit: `(x0, y0, x1, y1)`.
pub const LOBBY: (u32, u32, u32, u32) = (6, 290, 30, 313);

struct Gallery {
    x0: u32,
    y0: u32,
    x1: u32,
    y1: u32,
}

const WALL: u32 = 3;

const GALLERIES: [Gallery; 2] = [
    Gallery {
        x0: 20,
        y0: 20,
        x1: 150,
        y1: 130,
    },
    Gallery {
        x0: 180,
        y0: 40,
        x1: 300,
        y1: 200,
    },
];

/// Door openings `(x0, y0, x1, y1)`, in boundary-id colour order.
const DOORS: [(u32, u32, u32, u32); 4] = [
    (70, 128, 81, 130),   // gallery 0, south wall
    (148, 60, 150, 71),   // gallery 0, east wall
    (180, 150, 182, 161), // gallery 1, west wall
    (230, 198, 241, 200), // gallery 1, south wall
];

const EXHIBITS: [(u32, u32, u32, u32); 9] = [
    (40, 40, 47, 45),
    (100, 40, 107, 45),
    (60, 90, 75, 95),
    (23, 100, 26, 110),
    (200, 60, 207, 67),
    (260, 60, 267, 67),
    (225, 110, 245, 115),
    (290, 170, 297, 180),
    // a sculpture on the open floor, outside any gallery
    (120, 250, 127, 257),
];

const LIGHT_COURT: (u32, u32, u32, u32) = (200, 240, 230, 270);
const FACADE_GLASS: (u32, u32, u32, u32) = (160, 0, 175, 2);

pub fn layers() -> LayerRasters {
    let blank = Raster::filled(SIZE, SIZE, WHITE);
    let mut structure = blank.clone();
    let mut window = blank.clone();
    let mut exhibit = blank.clone();
    let mut region = blank.clone();
    let mut boundary = blank.clone();

    // outer shell
    structure.fill_rect(0, 0, SIZE - 1, WALL - 1, BLACK);
    structure.fill_rect(0, SIZE - WALL, SIZE - 1, SIZE - 1, BLACK);
    structure.fill_rect(0, 0, WALL - 1, SIZE - 1, BLACK);
    structure.fill_rect(SIZE - WALL, 0, SIZE - 1, SIZE - 1, BLACK);

    for (i, g) in GALLERIES.iter().enumerate() {
        structure.fill_rect(g.x0, g.y0, g.x1, g.y0 + WALL - 1, BLACK);
        structure.fill_rect(g.x0, g.y1 - WALL + 1, g.x1, g.y1, BLACK);
        structure.fill_rect(g.x0, g.y0, g.x0 + WALL - 1, g.y1, BLACK);
        structure.fill_rect(g.x1 - WALL + 1, g.y0, g.x1, g.y1, BLACK);
        region.fill_rect(g.x0 + WALL, g.y0 + WALL, g.x1 - WALL, g.y1 - WALL, id_color(i as u8));
    }
    for (i, &(x0, y0, x1, y1)) in DOORS.iter().enumerate() {
        structure.fill_rect(x0, y0, x1, y1, WHITE);
        boundary.fill_rect(x0, y0, x1, y1, id_color(i as u8));
    }

    // columns on the open floor
    for cx in [60u32, 100, 140] {
        for cy in [170u32, 210, 250] {
            structure.fill_rect(cx, cy, cx + 3, cy + 3, BLACK);
        }
    }
    for cx in [260u32, 290] {
        structure.fill_rect(cx, 250, cx + 3, 253, BLACK);
    }

    let (x0, y0, x1, y1) = FACADE_GLASS;
    structure.fill_rect(x0, y0, x1, y1, WHITE);
    window.fill_rect(x0, y0, x1, y1, BLACK);
    let (x0, y0, x1, y1) = LIGHT_COURT;
    window.fill_rect(x0, y0, x1, y1, BLACK);

    for &(x0, y0, x1, y1) in &EXHIBITS {
        exhibit.fill_rect(x0, y0, x1, y1, BLACK);
    }

    let mut layers = LayerRasters {
        window,
        structure,
        exhibit,
        region,
        boundary,
        composite: blank,
    };
    layers.composite = composite(&layers);
    layers
}

fn composite(layers: &LayerRasters) -> Raster {
    let entry = entry();
    let fp = Floorplan::from_layers(layers, &entry).expect("synthetic plan is valid");
    render_static(&fp)
}

pub fn entry() -> EntryConfig {
    let (x0, y0, x1, y1) = LOBBY;
    let lobby = EntryConfig::rect(x0, y0, x1, y1);
    EntryConfig {
        spawn_cells: lobby.clone(),
        exit_cells: lobby,
    }
}

/// The config file shipped next to the bundled layer images.
pub fn config_text() -> String {
    let (x0, y0, x1, y1) = LOBBY;
    format!(
        "# Bundled two-gallery plan, 320x320 cells (one cell ~ 7x7 cm).\n\
         # Layer paths are relative to this file.\n\
         window = window.png\n\
         structure = structure.png\n\
         exhibit = exhibit.png\n\
         region = region.png\n\
         boundary = boundary.png\n\
         floorplan = floorplan.png\n\
         \n\
         # elevator lobby: agents enter and leave here\n\
         spawn = {x0},{y0},{x1},{y1}\n\
         exit = {x0},{y0},{x1},{y1}\n\
         \n\
         seed = 42\n\
         ticks = 20000\n\
         spawn_interval = 50\n\
         spawn_threshold = 30\n\
         spawn_batch_max = 10\n\
         weight = 10\n\
         noise_variance = 1000\n\
         noise = true\n\
         replan_after_waits = off\n\
         convergence_interval = 1000\n\
         convergence_epsilon = 0.001\n\
         stop_on_convergence = true\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_plan_loads() {
        let fp = Floorplan::from_layers(&layers(), &entry()).unwrap();
        assert_eq!((fp.width(), fp.height()), (320, 320));
        assert_eq!(fp.regions().len(), 2);
        assert_eq!(fp.boundaries().len(), 4);
        assert_eq!(fp.exhibits().len(), 9);
        assert_eq!(fp.boundaries()[0].region_id.0, 0);
        assert_eq!(fp.exhibits().iter().filter(|e| e.region_id.is_none()).count(), 1);
    }
}
