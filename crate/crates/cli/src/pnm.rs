//! Netpbm writers for recorded frames.

use std::io::{self, Write};
use std::path::Path;

use maale_core::preprocess::GrayImage;
use maale_core::Screen;

pub fn write_pgm(path: &Path, img: &GrayImage) -> io::Result<()> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    write!(f, "P5\n{} {}\n255\n", img.width, img.height)?;
    f.write_all(&img.data)?;
    f.flush()
}

pub fn write_ppm(path: &Path, screen: &Screen) -> io::Result<()> {
    let mut f = io::BufWriter::new(std::fs::File::create(path)?);
    write!(f, "P6\n{} {}\n255\n", Screen::WIDTH, Screen::HEIGHT)?;
    f.write_all(screen.as_bytes())?;
    f.flush()
}
