//! No-reference image quality metric suite: entropy, average gradient,
//! colourfulness, CEF, GCF, UIQM, and UCIQE.
//!
//! These are the scores used to rank enhancement results. All metric
//! constants are frozen from the metrics' original definitions so reports
//! stay comparable run to run. Block metrics discard partial edge blocks,
//! and degenerate block terms (zero minimum, flat block) contribute 0
//! instead of propagating infinities.

use crate::color::rgb_to_lab;
use crate::error::{Error, Result};
use crate::image::{histogram256, luminance, quantize_u8, Histogram256, ImagePlane, RgbImage};

/// Per-image metric values; `cef` needs a reference image and is attached by
/// the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// Shannon entropy of the quantized luminance, bits.
    pub entropy: f64,
    /// Mean local gradient magnitude of the quantized luminance.
    pub avg_gradient: f64,
    /// Hasler–Süsstrunk colourfulness on the 0–255 scale.
    pub colourfulness: f64,
    /// Colourfulness ratio versus a reference, when one was supplied.
    pub cef: Option<f64>,
    /// Global contrast factor over 9 resolutions.
    pub gcf: f64,
    /// Underwater image quality measure.
    pub uiqm: f64,
    /// Underwater color image quality evaluation.
    pub uciqe: f64,
}

impl MetricReport {
    /// Evaluates the whole suite on one image. Entropy and average gradient
    /// are computed on the quantized luminance; the rest use full RGB.
    pub fn compute(img: &RgbImage) -> Result<Self> {
        let quantized_luma = quantize_u8(&luminance(img));
        Ok(Self {
            entropy: entropy(&quantized_luma)?,
            avg_gradient: avg_gradient(&quantized_luma)?,
            colourfulness: colourfulness(img),
            cef: None,
            gcf: gcf(img)?,
            uiqm: uiqm(img)?,
            uciqe: uciqe(img),
        })
    }
}

/// Shannon entropy in bits of the 256-bin histogram of `p`.
///
/// `p` must be quantized to integer 0–255 levels.
pub fn entropy(p: &ImagePlane) -> Result<f64> {
    Ok(entropy_of_histogram(&histogram256(p)?))
}

/// Entropy of an already-built histogram; `0 · log 0 = 0`.
pub fn entropy_of_histogram(hist: &Histogram256) -> f64 {
    let total = hist.total() as f64;
    hist.bins()
        .iter()
        .filter(|&&count| count > 0)
        .map(|&count| {
            let q = count as f64 / total;
            -q * q.log2()
        })
        .sum()
}

/// Mean gradient magnitude `sqrt((Gx² + Gy²) / 2)` over forward differences.
pub fn avg_gradient(p: &ImagePlane) -> Result<f64> {
    let (w, h) = (p.width(), p.height());
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            min_width: 2,
            min_height: 2,
            width: w,
            height: h,
        });
    }
    let mut sum = 0.0;
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            let here = p.get(x, y);
            let gx = p.get(x + 1, y) - here;
            let gy = p.get(x, y + 1) - here;
            sum += ((gx * gx + gy * gy) / 2.0).sqrt();
        }
    }
    Ok(sum / ((w - 1) * (h - 1)) as f64)
}

fn population_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

/// Hasler–Süsstrunk colourfulness on the 0–255 scale:
/// `sqrt(σ_rg² + σ_yb²) + 0.3 · sqrt(μ_rg² + μ_yb²)` over the opponent
/// channels `rg = R − G` and `yb = (R + G)/2 − B` (population statistics).
pub fn colourfulness(img: &RgbImage) -> f64 {
    let mut rg = Vec::with_capacity(img.r.len());
    let mut yb = Vec::with_capacity(img.r.len());
    for ((&r, &g), &b) in img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
    {
        let (r, g, b) = (r * 255.0, g * 255.0, b * 255.0);
        rg.push(r - g);
        yb.push((r + g) / 2.0 - b);
    }
    let (mean_rg, var_rg) = population_stats(&rg);
    let (mean_yb, var_yb) = population_stats(&yb);
    (var_rg + var_yb).sqrt() + 0.3 * (mean_rg * mean_rg + mean_yb * mean_yb).sqrt()
}

/// Colour enhancement factor: colourfulness ratio of enhanced over original.
///
/// Undefined (and reported as an error) when the original is grayscale.
pub fn cef(enhanced: &RgbImage, original: &RgbImage) -> Result<f64> {
    let reference = colourfulness(original);
    if reference == 0.0 {
        return Err(Error::GrayscaleReference);
    }
    Ok(colourfulness(enhanced) / reference)
}

/// Weight polynomial for resolution `i` of 9 in the global contrast factor.
fn gcf_weight(i: usize) -> f64 {
    let r = i as f64 / 9.0;
    (-0.406385 * r + 0.334573) * r + 0.0877526
}

/// Mean 4-neighbor lightness contrast of a linear-luminance field.
fn mean_local_contrast(lin: &[f64], w: usize, h: usize) -> f64 {
    let lp: Vec<f64> = lin.iter().map(|&l| 100.0 * l.sqrt()).collect();
    let at = |x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        lp[yc * w + xc]
    };
    let mut sum = 0.0;
    for y in 0..h as isize {
        for x in 0..w as isize {
            let c = at(x, y);
            let local = (c - at(x - 1, y)).abs()
                + (c - at(x + 1, y)).abs()
                + (c - at(x, y - 1)).abs()
                + (c - at(x, y + 1)).abs();
            sum += local / 4.0;
        }
    }
    sum / (w * h) as f64
}

/// 2×2 block average; odd trailing rows/columns average over what exists.
fn halve(lin: &[f64], w: usize, h: usize) -> (Vec<f64>, usize, usize) {
    let nw = w.div_ceil(2);
    let nh = h.div_ceil(2);
    let mut out = Vec::with_capacity(nw * nh);
    for by in 0..nh {
        for bx in 0..nw {
            let x1 = (2 * bx + 2).min(w);
            let y1 = (2 * by + 2).min(h);
            let mut sum = 0.0;
            let mut count = 0usize;
            for y in 2 * by..y1 {
                for x in 2 * bx..x1 {
                    sum += lin[y * w + x];
                    count += 1;
                }
            }
            out.push(sum / count as f64);
        }
    }
    (out, nw, nh)
}

/// Global contrast factor: weighted mean local lightness contrast across 9
/// progressively 2×-averaged resolutions of the linear luminance
/// `l = (k/255)^2.2`, with perceptual lightness `100·sqrt(l)`.
///
/// Resolutions that collapse below 2×2 contribute 0.
pub fn gcf(img: &RgbImage) -> Result<f64> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::TooSmall {
            min_width: 2,
            min_height: 2,
            width: w,
            height: h,
        });
    }
    let quantized = quantize_u8(&luminance(img));
    let mut lin: Vec<f64> = quantized
        .samples()
        .iter()
        .map(|&k| (k / 255.0).powf(2.2))
        .collect();
    let (mut cw, mut ch) = (w, h);

    let mut total = 0.0;
    for i in 1..=9 {
        if cw >= 2 && ch >= 2 {
            total += gcf_weight(i) * mean_local_contrast(&lin, cw, ch);
        }
        if i < 9 {
            (lin, cw, ch) = halve(&lin, cw, ch);
        }
    }
    Ok(total)
}

const BLOCK: usize = 8;

/// Block minima at or below this count as zero in EME. Sobel cancellation
/// on flat regions leaves ~1e-11 dust on the 0–255 edge scale, and
/// `ln(max/min)` would explode on it; genuine minima sit far above this.
pub const EME_MIN: f64 = 1e-8;

/// `2/n · Σ ln(max/min)` over full 8×8 blocks; degenerate blocks add 0.
fn eme(values: &[f64], w: usize, h: usize) -> f64 {
    let (bx, by) = (w / BLOCK, h / BLOCK);
    let mut sum = 0.0;
    for block_y in 0..by {
        for block_x in 0..bx {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for y in block_y * BLOCK..(block_y + 1) * BLOCK {
                for x in block_x * BLOCK..(block_x + 1) * BLOCK {
                    let v = values[y * w + x];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if lo > EME_MIN && hi > lo {
                sum += (hi / lo).ln();
            }
        }
    }
    2.0 / (bx * by) as f64 * sum
}

/// Sobel gradient magnitude, replicate borders.
fn sobel_magnitude(values: &[f64], w: usize, h: usize) -> Vec<f64> {
    let at = |x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        values[yc * w + xc]
    };
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = -at(x - 1, y - 1) + at(x + 1, y - 1) - 2.0 * at(x - 1, y)
                + 2.0 * at(x + 1, y)
                - at(x - 1, y + 1)
                + at(x + 1, y + 1);
            let gy = -at(x - 1, y - 1) - 2.0 * at(x, y - 1) - at(x + 1, y - 1)
                + at(x - 1, y + 1)
                + 2.0 * at(x, y + 1)
                + at(x + 1, y + 1);
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Mean and variance after trimming `alpha` of the samples from each end of
/// the sorted order; both moments are taken over the retained middle.
fn alpha_trimmed_stats(values: &[f64], alpha: f64) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = (alpha * sorted.len() as f64).floor() as usize;
    let kept = &sorted[cut..sorted.len() - cut];
    population_stats(kept)
}

/// Underwater image quality measure: `0.0282·UICM + 0.2953·UISM +
/// 3.5753·UIConM`.
///
/// UICM uses α-trimmed (α = 0.1 per side) opponent-channel statistics, UISM
/// the luma-weighted EME of Sobel-edge-scaled channels, and UIConM the
/// absolute Michelson-contrast log-mean over 8×8 luminance blocks.
pub fn uiqm(img: &RgbImage) -> Result<f64> {
    let (w, h) = (img.width(), img.height());
    if w < BLOCK || h < BLOCK {
        return Err(Error::TooSmall {
            min_width: BLOCK,
            min_height: BLOCK,
            width: w,
            height: h,
        });
    }

    let r: Vec<f64> = img.r.samples().iter().map(|&s| s * 255.0).collect();
    let g: Vec<f64> = img.g.samples().iter().map(|&s| s * 255.0).collect();
    let b: Vec<f64> = img.b.samples().iter().map(|&s| s * 255.0).collect();

    // colourfulness term
    let rg: Vec<f64> = r.iter().zip(&g).map(|(&r, &g)| r - g).collect();
    let yb: Vec<f64> = r
        .iter()
        .zip(&g)
        .zip(&b)
        .map(|((&r, &g), &b)| (r + g) / 2.0 - b)
        .collect();
    let (mu_rg, var_rg) = alpha_trimmed_stats(&rg, 0.1);
    let (mu_yb, var_yb) = alpha_trimmed_stats(&yb, 0.1);
    let uicm = -0.0268 * (mu_rg * mu_rg + mu_yb * mu_yb).sqrt() + 0.1586 * (var_rg + var_yb).sqrt();

    // sharpness term
    let mut uism = 0.0;
    for (channel, weight) in [(&r, 0.299), (&g, 0.587), (&b, 0.114)] {
        let grad = sobel_magnitude(channel, w, h);
        let edge: Vec<f64> = grad.iter().zip(channel).map(|(&m, &c)| m * c).collect();
        uism += weight * eme(&edge, w, h);
    }

    // contrast term
    let luma: Vec<f64> = luminance(img).samples().iter().map(|&s| s * 255.0).collect();
    let (bx, by) = (w / BLOCK, h / BLOCK);
    let mut sum = 0.0;
    for block_y in 0..by {
        for block_x in 0..bx {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for y in block_y * BLOCK..(block_y + 1) * BLOCK {
                for x in block_x * BLOCK..(block_x + 1) * BLOCK {
                    let v = luma[y * w + x];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            if hi + lo > 0.0 && hi > lo {
                let m = (hi - lo) / (hi + lo);
                sum += m * m.ln();
            }
        }
    }
    let uiconm = (sum / (bx * by) as f64).abs();

    Ok(0.0282 * uicm + 0.2953 * uism + 3.5753 * uiconm)
}

/// Underwater color image quality evaluation in CIELab:
/// `0.4680·σ_chroma + 0.2745·con_l + 0.2576·μ_sat` with L, a, b scaled by
/// 1/100, the luminance contrast taken between the mean top and bottom 1%
/// of L, and saturation `chroma / max(L, ε)` clamped to `[0, 1]`.
pub fn uciqe(img: &RgbImage) -> f64 {
    const EPS: f64 = 1e-6;
    let (l, a, b) = rgb_to_lab(img);
    let n = l.len();

    let lp: Vec<f64> = l.samples().iter().map(|&v| v / 100.0).collect();
    let chroma: Vec<f64> = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&a, &b)| {
            let (a, b) = (a / 100.0, b / 100.0);
            (a * a + b * b).sqrt()
        })
        .collect();

    let (_, chroma_var) = population_stats(&chroma);
    let sigma_chroma = chroma_var.sqrt();

    let mut sorted = lp.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let tail = ((n as f64) * 0.01).ceil() as usize;
    let bottom: f64 = sorted[..tail].iter().sum::<f64>() / tail as f64;
    let top: f64 = sorted[n - tail..].iter().sum::<f64>() / tail as f64;
    let con_l = top - bottom;

    let mu_sat = lp
        .iter()
        .zip(&chroma)
        .map(|(&l, &c)| (c / l.max(EPS)).clamp(0.0, 1.0))
        .sum::<f64>()
        / n as f64;

    0.4680 * sigma_chroma + 0.2745 * con_l + 0.2576 * mu_sat
}
