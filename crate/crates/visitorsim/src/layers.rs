//! PNG decoding and encoding of layer rasters.

use std::path::Path;

use image::{GrayImage, ImageReader, RgbImage};
use visitorsim_core::floorplan::{Floorplan, Layer, LayerRasters};
use visitorsim_core::grid::{Raster, Rgb};

use crate::config::Settings;
use crate::Error;

/// Decodes any PNG the `image` crate understands into RGB.
pub fn read_raster(path: &Path) -> Result<Raster, Error> {
    let img = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?
        .decode()
        .map_err(|e| Error::Image {
            path: path.display().to_string(),
            message: e.to_string(),
        })?
        .to_rgb8();
    let (w, h) = img.dimensions();
    let pixels: Vec<Rgb> = img.pixels().map(|p| p.0).collect();
    Ok(Raster::from_pixels(w, h, pixels).expect("decoded buffer matches its dimensions"))
}

pub fn write_raster(raster: &Raster, path: &Path) -> Result<(), Error> {
    let buf: Vec<u8> = raster.pixels().iter().flatten().copied().collect();
    let img = RgbImage::from_raw(raster.width(), raster.height(), buf).expect("raster buffer size");
    img.save(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn write_gray(width: u32, height: u32, pixels: Vec<u8>, path: &Path) -> Result<(), Error> {
    let img = GrayImage::from_raw(width, height, pixels).expect("gray buffer size");
    img.save(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_layers(paths: &[(Layer, impl AsRef<Path>)]) -> Result<LayerRasters, Error> {
    let find = |layer: Layer| -> Result<Raster, Error> {
        let (_, p) = paths
            .iter()
            .find(|(l, _)| *l == layer)
            .ok_or_else(|| Error::Config(format!("missing layer path `{}`", layer.name())))?;
        read_raster(p.as_ref())
    };
    Ok(LayerRasters {
        window: find(Layer::Window)?,
        structure: find(Layer::Structure)?,
        exhibit: find(Layer::Exhibit)?,
        region: find(Layer::Region)?,
        boundary: find(Layer::Boundary)?,
        composite: find(Layer::Composite)?,
    })
}

pub fn write_layers(layers: &LayerRasters, dir: &Path) -> Result<(), Error> {
    for layer in Layer::ALL {
        write_raster(layers.get(layer), &dir.join(format!("{}.png", layer.name())))?;
    }
    Ok(())
}

pub fn load_floorplan(settings: &Settings) -> Result<Floorplan, Error> {
    let layers = load_layers(&settings.layer_paths)?;
    Ok(Floorplan::from_layers(&layers, &settings.entry)?)
}
