//! Image containers, quantization, histograms, and moment statistics.
//!
//! [`ImagePlane`] is the universal substrate: a single-channel 2-D field of
//! f64 samples in row-major order. Samples are nominally in `[0, 1]` but
//! intermediates of the enhancement pipeline may exceed that range; they are
//! never NaN or infinite.

use crate::error::{Error, Result};

/// Single-channel 2-D field of real samples, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl ImagePlane {
    /// Builds a plane from row-major samples, validating count and finiteness.
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Config(format!(
                "plane dimensions must be at least 1x1, got {width}x{height}"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::BadSampleCount {
                width,
                height,
                got: samples.len(),
            });
        }
        if let Some(idx) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample(idx));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Constant-valued plane.
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        debug_assert!(width >= 1 && height >= 1 && value.is_finite());
        Self {
            width,
            height,
            samples: vec![value; width * height],
        }
    }

    /// Builds a plane by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            samples,
        }
    }

    /// Internal constructor for planes produced by trusted arithmetic.
    pub(crate) fn from_raw(width: usize, height: usize, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), width * height);
        debug_assert!(samples.iter().all(|s| s.is_finite()));
        Self {
            width,
            height,
            samples,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of samples (`width × height`).
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // dimensions are at least 1x1 by construction
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    /// Sample lookup with replicate (clamp-to-edge) border semantics.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.samples[yc * self.width + xc]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    /// True when both planes have identical dimensions.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Per-sample map into a new plane.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(
            self.width,
            self.height,
            self.samples.iter().map(|&s| f(s)).collect(),
        )
    }

    /// `self + scale · other`, elementwise. Panics on shape mismatch.
    pub fn add_scaled(&self, other: &Self, scale: f64) -> Self {
        assert!(self.same_shape(other), "plane shapes differ");
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a + scale * b)
            .collect();
        Self::from_raw(self.width, self.height, samples)
    }

    /// Elementwise difference `self − other`. Panics on shape mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "plane shapes differ");
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&a, &b)| a - b)
            .collect();
        Self::from_raw(self.width, self.height, samples)
    }

    /// Arithmetic mean of all samples.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Three aligned planes sharing identical dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    pub r: ImagePlane,
    pub g: ImagePlane,
    pub b: ImagePlane,
}

impl RgbImage {
    pub fn new(r: ImagePlane, g: ImagePlane, b: ImagePlane) -> Result<Self> {
        if !r.same_shape(&g) || !r.same_shape(&b) {
            return Err(Error::DimensionMismatch {
                expected_width: r.width(),
                expected_height: r.height(),
                width: if r.same_shape(&g) { b.width() } else { g.width() },
                height: if r.same_shape(&g) {
                    b.height()
                } else {
                    g.height()
                },
            });
        }
        Ok(Self { r, g, b })
    }

    /// Builds an image by evaluating `f(x, y) -> [r, g, b]` at every pixel.
    pub fn from_fn_rgb(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> [f64; 3],
    ) -> Self {
        Self {
            r: ImagePlane::from_fn(width, height, |x, y| f(x, y)[0]),
            g: ImagePlane::from_fn(width, height, |x, y| f(x, y)[1]),
            b: ImagePlane::from_fn(width, height, |x, y| f(x, y)[2]),
        }
    }

    /// Constant-colored image.
    pub fn filled(width: usize, height: usize, rgb: [f64; 3]) -> Self {
        Self {
            r: ImagePlane::filled(width, height, rgb[0]),
            g: ImagePlane::filled(width, height, rgb[1]),
            b: ImagePlane::filled(width, height, rgb[2]),
        }
    }

    pub fn width(&self) -> usize {
        self.r.width()
    }

    pub fn height(&self) -> usize {
        self.r.height()
    }

    pub fn channels(&self) -> [&ImagePlane; 3] {
        [&self.r, &self.g, &self.b]
    }

    /// Per-channel map into a new image.
    pub fn map_channels(&self, f: impl Fn(&ImagePlane) -> ImagePlane) -> Self {
        Self {
            r: f(&self.r),
            g: f(&self.g),
            b: f(&self.b),
        }
    }
}

/// 256-bin histogram of an 8-bit quantized plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram256 {
    bins: [u64; 256],
    total: u64,
}

impl Histogram256 {
    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    /// Total count; equals the pixel count of the source plane.
    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Rec. 601 luma weights; these also weight the UISM channel mix.
const LUMA_R: f64 = 0.299;
const LUMA_G: f64 = 0.587;
const LUMA_B: f64 = 0.114;

/// Per-pixel weighted sum `0.299·R + 0.587·G + 0.114·B`.
pub fn luminance(img: &RgbImage) -> ImagePlane {
    let samples = img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
        .map(|((&r, &g), &b)| LUMA_R * r + LUMA_G * g + LUMA_B * b)
        .collect();
    ImagePlane::from_raw(img.width(), img.height(), samples)
}

/// Clamps to `[0, 1]`, scales by 255, and rounds half away from zero.
///
/// The result is an integer-valued plane on the `[0, 255]` scale, suitable
/// for [`histogram256`] and the 8-bit metrics.
pub fn quantize_u8(p: &ImagePlane) -> ImagePlane {
    p.map(|s| (s.clamp(0.0, 1.0) * 255.0).round())
}

/// Counts samples per 8-bit level.
///
/// The plane must already be integer-valued in `[0, 255]`; anything else is
/// a caller bug and reported as [`Error::NotQuantized`].
pub fn histogram256(p: &ImagePlane) -> Result<Histogram256> {
    let mut bins = [0u64; 256];
    for (index, &value) in p.samples().iter().enumerate() {
        if value.fract() != 0.0 || !(0.0..=255.0).contains(&value) {
            return Err(Error::NotQuantized { value, index });
        }
        bins[value as usize] += 1;
    }
    Ok(Histogram256 {
        bins,
        total: p.len() as u64,
    })
}

/// Arithmetic mean and population standard deviation (divide by N).
///
/// Uses Welford's update, so a constant plane yields exactly (c, 0).
pub fn moments(p: &ImagePlane) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &s) in p.samples().iter().enumerate() {
        let delta = s - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (s - mean);
    }
    (mean, (m2 / p.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_new_validates() {
        assert!(matches!(
            ImagePlane::new(2, 2, vec![0.0; 3]),
            Err(Error::BadSampleCount { got: 3, .. })
        ));
        assert!(matches!(
            ImagePlane::new(2, 1, vec![0.0, f64::NAN]),
            Err(Error::NonFiniteSample(1))
        ));
        assert!(matches!(
            ImagePlane::new(0, 3, vec![]),
            Err(Error::Config(_))
        ));
        assert!(ImagePlane::new(2, 2, vec![0.5; 4]).is_ok());
    }

    #[test]
    fn rgb_rejects_mismatched_planes() {
        let a = ImagePlane::filled(2, 2, 0.0);
        let b = ImagePlane::filled(2, 3, 0.0);
        assert!(matches!(
            RgbImage::new(a.clone(), b, a.clone()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn luminance_white_is_ones() {
        let img = RgbImage::filled(3, 2, [1.0, 1.0, 1.0]);
        let lum = luminance(&img);
        for &s in lum.samples() {
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn luminance_pure_red() {
        let img = RgbImage::filled(2, 2, [1.0, 0.0, 0.0]);
        let lum = luminance(&img);
        for &s in lum.samples() {
            assert_eq!(s, 0.299);
        }
    }

    #[test]
    fn luminance_matches_per_pixel_oracle() {
        // random 4x4 image against a direct double loop
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let r = ImagePlane::from_fn(4, 4, |_, _| next());
        let g = ImagePlane::from_fn(4, 4, |_, _| next());
        let b = ImagePlane::from_fn(4, 4, |_, _| next());
        let img = RgbImage::new(r, g, b).unwrap();
        let lum = luminance(&img);
        for y in 0..4 {
            for x in 0..4 {
                let want = 0.299 * img.r.get(x, y) + 0.587 * img.g.get(x, y) + 0.114 * img.b.get(x, y);
                assert!((lum.get(x, y) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quantize_clamps_and_rounds() {
        let p = ImagePlane::new(4, 1, vec![-0.2, 1.5, 0.5, 1.0]).unwrap();
        let q = quantize_u8(&p);
        assert_eq!(q.samples(), &[0.0, 255.0, 128.0, 255.0]);
    }

    #[test]
    fn quantize_idempotent_on_dequantized_output() {
        let p = ImagePlane::from_fn(16, 16, |x, y| ((x * 31 + y * 17) % 97) as f64 / 96.0);
        let q1 = quantize_u8(&p);
        let q2 = quantize_u8(&q1.map(|s| s / 255.0));
        assert_eq!(q1.samples(), q2.samples());
    }

    #[test]
    fn histogram_counts_constant_plane() {
        let q = ImagePlane::filled(3, 3, 128.0);
        let h = histogram256(&q).unwrap();
        assert_eq!(h.bins()[128], 9);
        assert_eq!(h.total(), 9);
        assert_eq!(h.bins().iter().sum::<u64>(), 9);
    }

    #[test]
    fn histogram_two_levels() {
        let q = ImagePlane::new(2, 1, vec![0.0, 255.0]).unwrap();
        let h = histogram256(&q).unwrap();
        assert_eq!(h.bins()[0], 1);
        assert_eq!(h.bins()[255], 1);
    }

    #[test]
    fn histogram_rejects_unquantized() {
        let p = ImagePlane::new(2, 1, vec![0.5, 1.0]).unwrap();
        assert!(matches!(
            histogram256(&p),
            Err(Error::NotQuantized { index: 0, .. })
        ));
        let p = ImagePlane::new(1, 1, vec![256.0]).unwrap();
        assert!(matches!(histogram256(&p), Err(Error::NotQuantized { .. })));
    }

    #[test]
    fn moments_constant_and_binary() {
        let (mean, std) = moments(&ImagePlane::filled(5, 5, 0.7));
        assert!((mean - 0.7).abs() < 1e-15);
        assert_eq!(std, 0.0);

        let p = ImagePlane::new(2, 1, vec![0.0, 1.0]).unwrap();
        let (mean, std) = moments(&p);
        assert_eq!(mean, 0.5);
        assert_eq!(std, 0.5);
    }

    #[test]
    fn moments_match_two_pass_oracle() {
        let p = ImagePlane::from_fn(8, 8, |x, y| ((x * 131 + y * 73) % 251) as f64 / 250.0);
        let (mean, std) = moments(&p);
        let n = p.len() as f64;
        let m: f64 = p.samples().iter().sum::<f64>() / n;
        let v: f64 = p.samples().iter().map(|&s| (s - m) * (s - m)).sum::<f64>() / n;
        assert!((mean - m).abs() < 1e-12);
        assert!((std - v.sqrt()).abs() < 1e-12);
    }
}
