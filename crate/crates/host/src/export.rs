//! PNG export of image frames.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use workbench_core::ImageBuffer;

#[derive(Debug, thiserror::Error)]
pub enum ExportError {
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("png encoding failed: {0}")]
    Encode(#[from] png::EncodingError),
    #[error("unsupported channel count {0}")]
    Channels(usize),
}

pub fn write_png<W: Write>(out: W, img: &ImageBuffer<u8>) -> Result<(), ExportError> {
    let color = match img.channels() {
        1 => png::ColorType::Grayscale,
        3 => png::ColorType::Rgb,
        n => return Err(ExportError::Channels(n)),
    };
    let mut enc = png::Encoder::new(out, img.width() as u32, img.height() as u32);
    enc.set_color(color);
    enc.set_depth(png::BitDepth::Eight);
    let mut w = enc.write_header()?;
    w.write_image_data(img.data())?;
    w.finish()?;
    Ok(())
}

pub fn save_png(path: &Path, img: &ImageBuffer<u8>) -> Result<(), ExportError> {
    let io_err = |source| ExportError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    write_png(&mut out, img)?;
    out.flush().map_err(io_err)
}
