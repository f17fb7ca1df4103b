//! Undecimated multiscale decomposition with exact reconstruction.
//!
//! A plane is split into one approximation plane plus `L` detail planes by
//! successive Gaussian blurring without downsampling: `s_0 = p`,
//! `s_l = blur(s_{l-1}, σ_l)` with `σ_l = σ_0 · 2^{l-1}`, `detail_l =
//! s_{l-1} − s_l`, `approx = s_L`. The telescoping sum makes
//! `approx + Σ details` reproduce the source up to rounding, so enhancement
//! can amplify the detail planes and attenuate the approximation (the haze
//! veil) independently.

use crate::error::{Error, Result};
use crate::fractional::{convolve, FractionalKernel};
use crate::image::ImagePlane;

/// One approximation plane plus ordered detail planes (level 1 = finest).
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleStack {
    approx: ImagePlane,
    details: Vec<ImagePlane>,
    sigmas: Vec<f64>,
}

impl ScaleStack {
    pub fn approx(&self) -> &ImagePlane {
        &self.approx
    }

    pub fn details(&self) -> &[ImagePlane] {
        &self.details
    }

    /// Blur scale (pixels) used to produce each level.
    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn levels(&self) -> usize {
        self.details.len()
    }
}

/// Normalized 1-D sampled Gaussian with radius `ceil(3σ)`.
fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as usize;
    let mut taps: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Separable Gaussian blur, replicate borders, output the input's size.
pub fn gaussian_blur(p: &ImagePlane, sigma: f64) -> ImagePlane {
    assert!(sigma > 0.0, "blur sigma must be positive");
    let taps = gaussian_taps(sigma);
    let radius = (taps.len() - 1) / 2;
    let (w, h) = (p.width(), p.height());

    // horizontal pass
    let src = p.samples();
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        let out = &mut tmp[y * w..(y + 1) * w];
        for x in 0..w {
            if x >= radius && x + radius < w {
                let mut acc = 0.0;
                for (i, &t) in taps.iter().enumerate() {
                    acc += t * row[x - radius + i];
                }
                out[x] = acc;
            } else {
                let mut acc = 0.0;
                for (i, &t) in taps.iter().enumerate() {
                    let xi = (x as isize + i as isize - radius as isize)
                        .clamp(0, w as isize - 1) as usize;
                    acc += t * row[xi];
                }
                out[x] = acc;
            }
        }
    }

    // vertical pass, accumulated row-wise to stay cache-friendly
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        let dst = &mut out[y * w..(y + 1) * w];
        for (i, &t) in taps.iter().enumerate() {
            let yi = (y as isize + i as isize - radius as isize).clamp(0, h as isize - 1) as usize;
            let row = &tmp[yi * w..(yi + 1) * w];
            for x in 0..w {
                dst[x] += t * row[x];
            }
        }
    }
    ImagePlane::from_raw(w, h, out)
}

/// Decomposes `p` into `levels` detail planes plus an approximation.
pub fn decompose(p: &ImagePlane, levels: usize, sigma0: f64) -> Result<ScaleStack> {
    if levels < 1 {
        return Err(Error::Config(format!(
            "decomposition needs at least 1 level, got {levels}"
        )));
    }
    if !(sigma0 > 0.0 && sigma0.is_finite()) {
        return Err(Error::Config(format!(
            "base blur scale must be positive, got {sigma0}"
        )));
    }

    let mut sigmas = Vec::with_capacity(levels);
    let mut details = Vec::with_capacity(levels);
    let mut current = p.clone();
    for level in 0..levels {
        let sigma = sigma0 * (1u64 << level) as f64;
        let blurred = gaussian_blur(&current, sigma);
        details.push(current.sub(&blurred));
        sigmas.push(sigma);
        current = blurred;
    }
    Ok(ScaleStack {
        approx: current,
        details,
        sigmas,
    })
}

/// Adds `lambda · convolve(detail, kernel)` to every detail plane.
///
/// The approximation plane is untouched. `lambda` is expected to be ≥ 0;
/// range enforcement happens at configuration time.
pub fn enhance_stack(stack: &ScaleStack, kernel: &FractionalKernel, lambda: f64) -> ScaleStack {
    let details = stack
        .details
        .iter()
        .map(|d| d.add_scaled(&convolve(d, kernel), lambda))
        .collect();
    ScaleStack {
        approx: stack.approx.clone(),
        details,
        sigmas: stack.sigmas.clone(),
    }
}

/// Recomposes `approx_gain · approx + Σ details`, without clamping.
pub fn reconstruct(stack: &ScaleStack, approx_gain: f64) -> ImagePlane {
    let mut out = stack.approx.map(|s| approx_gain * s);
    let samples = out.samples_mut();
    for detail in &stack.details {
        for (o, &d) in samples.iter_mut().zip(detail.samples()) {
            *o += d;
        }
    }
    out
}
