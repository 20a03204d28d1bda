//! Bit-exact PGM/PPM frame emission.
//!
//! Binary P5 (grayscale) and P6 (RGB) with maxval 255 and the exact
//! header `P5\n<w> <h>\n255\n`. Output bytes are a pure function of the
//! frame contents, so frames can be diffed against golden files.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("pixel buffer holds {got} bytes, expected {want} for {width}x{height}")]
    BadLength {
        width: usize,
        height: usize,
        want: usize,
        got: usize,
    },
    #[error("frame I/O: {0}")]
    Io(#[from] io::Error),
}

/// Row-major pixel payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pixels {
    /// One byte per pixel, written as binary PGM (P5).
    Gray(Vec<u8>),
    /// Three bytes per pixel, written as binary PPM (P6).
    Rgb(Vec<u8>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    pixels: Pixels,
}

impl Frame {
    pub fn gray(width: usize, height: usize, bytes: Vec<u8>) -> Result<Self, FrameError> {
        let want = width * height;
        if bytes.len() != want {
            return Err(FrameError::BadLength {
                width,
                height,
                want,
                got: bytes.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels: Pixels::Gray(bytes),
        })
    }

    pub fn rgb(width: usize, height: usize, bytes: Vec<u8>) -> Result<Self, FrameError> {
        let want = width * height * 3;
        if bytes.len() != want {
            return Err(FrameError::BadLength {
                width,
                height,
                want,
                got: bytes.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels: Pixels::Rgb(bytes),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &Pixels {
        &self.pixels
    }

    /// File extension matching the format this frame serializes to.
    pub fn extension(&self) -> &'static str {
        match self.pixels {
            Pixels::Gray(_) => "pgm",
            Pixels::Rgb(_) => "ppm",
        }
    }

    /// Complete file image: header plus payload.
    pub fn to_bytes(&self) -> Vec<u8> {
        let (magic, payload) = match &self.pixels {
            Pixels::Gray(p) => ("P5", p),
            Pixels::Rgb(p) => ("P6", p),
        };
        let header = format!("{magic}\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + payload.len());
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(payload);
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), FrameError> {
        fs::write(path, self.to_bytes())?;
        Ok(())
    }
}

/// Four-color coding for game boards: the current strategy and the
/// strategy one generation earlier pick the pixel.
///
/// cooperator after cooperator -> blue, defector after defector -> red,
/// cooperator after defector -> green, defector after cooperator -> yellow.
pub fn game_color(now_cooperates: bool, was_cooperator: bool) -> [u8; 3] {
    match (now_cooperates, was_cooperator) {
        (true, true) => [0, 0, 255],
        (false, false) => [255, 0, 0],
        (true, false) => [0, 255, 0],
        (false, true) => [255, 255, 0],
    }
}

/// Grayscale coding for host-parasitoid lattices.
///
/// Empty patches are black; patches with hosts but few parasitoids ramp
/// through dark grays (64..=176) with host density; parasitoid-occupied
/// patches ramp through light grays (192..=255) with parasitoid density.
/// Ramps are log-scaled and clipped at three decades around the
/// reference densities.
#[derive(Clone, Copy, Debug)]
pub struct LatticeShading {
    pub empty_threshold: f64,
    pub parasitoid_threshold: f64,
    pub host_reference: f64,
    pub parasitoid_reference: f64,
}

impl LatticeShading {
    /// Thresholds anchored to the equilibrium densities `(h_star, p_star)`:
    /// empty below `1e-6 * h_star`, parasitoid-free below `1e-3 * p_star`.
    pub fn for_equilibrium(h_star: f64, p_star: f64) -> Self {
        Self {
            empty_threshold: 1e-6 * h_star,
            parasitoid_threshold: 1e-3 * p_star,
            host_reference: h_star,
            parasitoid_reference: p_star,
        }
    }

    pub fn shade(&self, host: f64, parasitoid: f64) -> u8 {
        if host < self.empty_threshold {
            0
        } else if parasitoid < self.parasitoid_threshold {
            ramp(64, 176, (host / self.host_reference).log10())
        } else {
            ramp(192, 255, (parasitoid / self.parasitoid_reference).log10())
        }
    }
}

/// Map `decades` clipped to [-3, 3] linearly onto `lo..=hi`.
fn ramp(lo: u8, hi: u8, decades: f64) -> u8 {
    let t = (decades.clamp(-3.0, 3.0) + 3.0) / 6.0;
    lo + ((hi - lo) as f64 * t).round() as u8
}
