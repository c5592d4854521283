use std::io::{self, Write};

use super::{LatticeState, SiteState};

pub type Rgb = [u8; 3];

pub const ACTIVE: Rgb = [255, 0, 0];
pub const REMOVED: Rgb = [0, 160, 0];
pub const VISITED: Rgb = [255, 255, 0];
pub const SUSCEPTIBLE: Rgb = [0, 0, 255];
pub const EMPTY: Rgb = [255, 255, 255];

/// Row-major 8-bit RGB raster; row `y`, column `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        let i = 3 * (x + self.width * y);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn count(&self, colour: Rgb) -> usize {
        self.pixels.chunks_exact(3).filter(|p| *p == colour).count()
    }

    /// Binary PPM (`P6`).
    pub fn write_ppm<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.pixels.len() + 20);
        self.write_ppm(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }
}

/// Colours each site by precedence: active walker, removed, visited,
/// susceptible, empty.
pub fn render_snapshot(lattice: &LatticeState) -> RgbImage {
    let l = lattice.extent();
    let mut img = RgbImage {
        width: l,
        height: l,
        pixels: vec![0; 3 * l * l],
    };
    let mut active = vec![false; l * l];
    for w in lattice.walkers() {
        active[w.position.0 + l * w.position.1] = true;
    }
    for y in 0..l {
        for x in 0..l {
            let c = if active[x + l * y] {
                ACTIVE
            } else if lattice.site((x, y)) == SiteState::Removed {
                REMOVED
            } else if lattice.is_visited((x, y)) {
                VISITED
            } else if lattice.site((x, y)) == SiteState::Susceptible {
                SUSCEPTIBLE
            } else {
                EMPTY
            };
            let i = 3 * (x + l * y);
            img.pixels[i..i + 3].copy_from_slice(&c);
        }
    }
    img
}
