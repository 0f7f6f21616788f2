//! Regenerates the bundled floorplan under `assets/gallery/`.

use std::path::PathBuf;

use visitorsim::layers::write_layers;
use visitorsim::synthetic;

fn main() -> Result<(), visitorsim::Error> {
    let dir = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets/gallery"));
    std::fs::create_dir_all(&dir).map_err(|e| visitorsim::Error::io(&dir, e))?;
    write_layers(&synthetic::layers(), &dir)?;
    let cfg = dir.join("gallery.cfg");
    std::fs::write(&cfg, synthetic::config_text()).map_err(|e| visitorsim::Error::io(&cfg, e))?;
    println!("wrote {}", dir.display());
    Ok(())
}
