//! Grünwald–Letnikov fractional-derivative coefficients and the 2-D
//! directional masks built from them.
//!
//! A fractional differentiation order `v` generalizes the discrete
//! difference operator: the series weights are `c_0 = 1` and
//! `c_k = c_{k-1} · (k - 1 - v) / k`, equivalently `(-1)^k · binomial(v, k)`.
//! Placing the truncated series along all 8 compass directions and averaging
//! yields a square mask that degenerates to the identity at `v = 0` and to
//! the classic zero-sum 8-neighbor sharpening mask at `v = 1`, giving crisp
//! regression anchors at both integer orders.

use crate::error::{Error, Result};
use crate::image::ImagePlane;

/// Highest accepted truncation depth (mask radius).
pub const MAX_TRUNCATION: usize = 16;

/// Truncated Grünwald–Letnikov coefficient series for one order.
#[derive(Debug, Clone, PartialEq)]
pub struct GlCoefficients {
    order: f64,
    coeffs: Vec<f64>,
}

impl GlCoefficients {
    /// Fractional differentiation order `v`.
    pub fn order(&self) -> f64 {
        self.order
    }

    /// Coefficients `c_0 ..= c_K`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Truncation depth `K`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Computes `c_0 ..= c_K` for order `v` via the one-step recurrence.
pub fn gl_coefficients(v: f64, k: usize) -> Result<GlCoefficients> {
    if !(0.0..=2.0).contains(&v) || !v.is_finite() {
        return Err(Error::Config(format!(
            "fractional order must be in [0, 2], got {v}"
        )));
    }
    if !(1..=MAX_TRUNCATION).contains(&k) {
        return Err(Error::Config(format!(
            "truncation must be in [1, {MAX_TRUNCATION}], got {k}"
        )));
    }
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(1.0);
    for i in 1..=k {
        let prev = coeffs[i - 1];
        coeffs.push(prev * (i as f64 - 1.0 - v) / i as f64);
    }
    Ok(GlCoefficients { order: v, coeffs })
}

/// Filter configuration: pure high-pass, or high-boost (signal plus
/// high-pass, realized as a center-weight shift of `A − 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    HighPass,
    HighBoost,
}

impl std::fmt::Display for KernelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelMode::HighPass => write!(f, "hpfc"),
            KernelMode::HighBoost => write!(f, "hbfc"),
        }
    }
}

/// Square convolution mask synthesized from GL coefficients along the 8
/// compass directions.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalKernel {
    radius: usize,
    order: f64,
    mode: KernelMode,
    boost: f64,
    /// High-pass mask weights, (2K+1)² row-major. The high-boost center
    /// shift is applied separately so the mode relation
    /// `HBFC(p) = HPFC(p) + (A−1)·p` holds bit-exactly.
    base: Vec<f64>,
    /// Non-zero base entries as (dy, dx, weight), row-major order.
    taps: Vec<(isize, isize, f64)>,
}

impl FractionalKernel {
    /// Mask radius `K`; the mask is `(2K+1) × (2K+1)`.
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Mask side length `2K + 1`.
    pub fn size(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn mode(&self) -> KernelMode {
        self.mode
    }

    /// Boost factor `A`; 1.0 in high-pass mode.
    pub fn boost(&self) -> f64 {
        self.boost
    }

    /// Full mask weights, row-major, with the high-boost center shift
    /// applied when the mode is [`KernelMode::HighBoost`].
    pub fn weights(&self) -> Vec<f64> {
        let mut w = self.base.clone();
        if self.mode == KernelMode::HighBoost {
            let n = self.size();
            w[self.radius * n + self.radius] += self.boost - 1.0;
        }
        w
    }
}

const DIRECTIONS: [(isize, isize); 8] = [
    (0, 1),
    (0, -1),
    (1, 0),
    (-1, 0),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Builds the directional fractional mask for order `v`, truncation `K`.
///
/// Each of the 8 compass rays carries `c_k` at its k-th pixel step; the rays
/// are summed and divided by 8. High-boost adds `A − 1` to the center.
/// `boost` must be ≥ 1 in high-boost mode and is ignored in high-pass mode.
pub fn build_kernel(v: f64, k: usize, mode: KernelMode, boost: f64) -> Result<FractionalKernel> {
    let gl = gl_coefficients(v, k)?;
    if mode == KernelMode::HighBoost && !(boost >= 1.0 && boost.is_finite()) {
        return Err(Error::Config(format!(
            "high-boost factor must be at least 1, got {boost}"
        )));
    }

    let n = 2 * k + 1;
    let mut base = vec![0.0; n * n];
    for &(dy, dx) in &DIRECTIONS {
        for (step, &c) in gl.coeffs().iter().enumerate() {
            let y = (k as isize + dy * step as isize) as usize;
            let x = (k as isize + dx * step as isize) as usize;
            base[y * n + x] += c;
        }
    }
    for w in &mut base {
        *w /= 8.0;
    }

    let mut taps = Vec::new();
    for y in 0..n {
        for x in 0..n {
            let w = base[y * n + x];
            if w != 0.0 {
                taps.push((y as isize - k as isize, x as isize - k as isize, w));
            }
        }
    }

    Ok(FractionalKernel {
        radius: k,
        order: v,
        mode,
        boost: if mode == KernelMode::HighBoost {
            boost
        } else {
            1.0
        },
        base,
        taps,
    })
}

/// 2-D correlation of `p` with the mask, replicate borders, output the same
/// size as the input.
pub fn convolve(p: &ImagePlane, kernel: &FractionalKernel) -> ImagePlane {
    let (w, h) = (p.width(), p.height());
    let src = p.samples();
    let mut out = vec![0.0; w * h];
    let k = kernel.radius as isize;
    let boost_shift = match kernel.mode {
        KernelMode::HighBoost => Some(kernel.boost - 1.0),
        KernelMode::HighPass => None,
    };

    // Linear offsets are valid only where no tap leaves the plane.
    let offsets: Vec<(isize, f64)> = kernel
        .taps
        .iter()
        .map(|&(dy, dx, wt)| (dy * w as isize + dx, wt))
        .collect();

    for y in 0..h as isize {
        let interior_row = y >= k && y < h as isize - k;
        for x in 0..w as isize {
            let idx = (y * w as isize + x) as usize;
            let mut acc = 0.0;
            if interior_row && x >= k && x < w as isize - k {
                for &(off, wt) in &offsets {
                    acc += wt * src[(idx as isize + off) as usize];
                }
            } else {
                for &(dy, dx, wt) in &kernel.taps {
                    acc += wt * p.get_clamped(x + dx, y + dy);
                }
            }
            if let Some(shift) = boost_shift {
                acc += shift * src[idx];
            }
            out[idx] = acc;
        }
    }
    ImagePlane::from_raw(w, h, out)
}
