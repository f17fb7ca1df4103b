//! Shared test support: deterministic fixtures, synthetic degraded scenes,
//! independent metric transcriptions, and a minimal PPM writer.
//!
//! Everything here is dev-only. The oracle functions in [`oracles`] are
//! deliberately naive, self-contained transcriptions that read raw samples
//! straight off the containers, so they stay independent of the library's
//! own computation paths.

pub mod oracles;
pub mod scenes;

use dehaze_core::{ImagePlane, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic RNG; one seed per fixture keeps tests reproducible.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random plane with samples in `[0, 1)`.
pub fn random_plane(width: usize, height: usize, seed: u64) -> ImagePlane {
    let mut rng = rng(seed);
    ImagePlane::from_fn(width, height, |_, _| rng.random::<f64>())
}

/// Uniform random RGB image with samples in `[0, 1)`.
pub fn random_rgb(width: usize, height: usize, seed: u64) -> RgbImage {
    let mut rng = rng(seed);
    let mut plane = |_: ()| {
        let mut samples = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            samples.push(rng.random::<f64>());
        }
        ImagePlane::new(width, height, samples).unwrap()
    };
    let r = plane(());
    let g = plane(());
    let b = plane(());
    RgbImage::new(r, g, b).unwrap()
}

/// Writes an 8-bit image as binary PPM (P6, maxval 255).
///
/// This writer is independent of the CLI codec, which makes it usable both
/// for generating fixtures and for cross-checking that codec.
pub fn write_ppm(path: &std::path::Path, img: &RgbImage) -> std::io::Result<()> {
    use std::io::Write;
    let (w, h) = (img.width(), img.height());
    let mut data = Vec::with_capacity(w * h * 3 + 32);
    write!(data, "P6\n{w} {h}\n255\n")?;
    for i in 0..w * h {
        for ch in img.channels() {
            let v = (ch.samples()[i].clamp(0.0, 1.0) * 255.0).round() as u8;
            data.push(v);
        }
    }
    std::fs::write(path, data)
}

/// Workspace-level corpus directory (`corpus/` at the repository root).
pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Reads a corpus PPM back into an image (P6, maxval 255 only).
pub fn read_ppm(path: &std::path::Path) -> RgbImage {
    let data = std::fs::read(path).expect("corpus file readable");
    parse_ppm(&data).expect("corpus file is valid P6")
}

/// Minimal P6 parser for test fixtures.
pub fn parse_ppm(data: &[u8]) -> Option<RgbImage> {
    let mut pos = 0usize;
    let mut token = |data: &[u8]| -> Option<String> {
        // skip whitespace and comments
        loop {
            while pos < data.len() && data[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < data.len() && data[pos] == b'#' {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < data.len() && !data[pos].is_ascii_whitespace() {
            pos += 1;
        }
        (pos > start).then(|| String::from_utf8_lossy(&data[start..pos]).into_owned())
    };
    if token(data)? != "P6" {
        return None;
    }
    let w: usize = token(data)?.parse().ok()?;
    let h: usize = token(data)?.parse().ok()?;
    let maxval: usize = token(data)?.parse().ok()?;
    if maxval != 255 {
        return None;
    }
    pos += 1; // single whitespace after maxval
    let pixels = data.get(pos..pos + w * h * 3)?;
    let mut r = Vec::with_capacity(w * h);
    let mut g = Vec::with_capacity(w * h);
    let mut b = Vec::with_capacity(w * h);
    for px in pixels.chunks_exact(3) {
        r.push(px[0] as f64 / 255.0);
        g.push(px[1] as f64 / 255.0);
        b.push(px[2] as f64 / 255.0);
    }
    RgbImage::new(
        ImagePlane::new(w, h, r).ok()?,
        ImagePlane::new(w, h, g).ok()?,
        ImagePlane::new(w, h, b).ok()?,
    )
    .ok()
}

/// Loads every `.ppm` in the bundled corpus, sorted by file name.
pub fn load_corpus() -> Vec<(String, RgbImage)> {
    let dir = corpus_dir();
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .expect("corpus directory readable")
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "ppm"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, read_ppm(&path))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(random_plane(8, 8, 1), random_plane(8, 8, 1));
        assert_ne!(random_plane(8, 8, 1), random_plane(8, 8, 2));
    }

    #[test]
    fn ppm_roundtrip() {
        let img = random_rgb(9, 5, 42);
        let dir = std::env::temp_dir().join("dehaze-testkit-roundtrip");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("x.ppm");
        write_ppm(&path, &img).unwrap();
        let back = read_ppm(&path);
        assert_eq!(back.width(), 9);
        assert_eq!(back.height(), 5);
        for (a, b) in img.channels().iter().zip(back.channels()) {
            for (&x, &y) in a.samples().iter().zip(b.samples()) {
                assert!((x - y).abs() <= 0.5 / 255.0 + 1e-12);
            }
        }
    }
}
