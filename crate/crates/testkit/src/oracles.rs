//! Straight-from-formula transcriptions used as independent test oracles.
//!
//! Every function here recomputes its quantity from raw samples with plain
//! loops and no shared helpers from the library, so a defect in the library
//! cannot hide in its own oracle.

use dehaze_core::RgbImage;
use statrs::function::gamma::gamma;

/// Grünwald–Letnikov coefficients via the gamma-function closed form
/// `c_k = Γ(k − v) / (Γ(−v) · k!)`, with the exact binomial expansion at
/// integer orders where the gamma form degenerates.
pub fn gl_gamma_oracle(v: f64, k: usize) -> Vec<f64> {
    let is_integer = v.fract() == 0.0;
    (0..=k)
        .map(|i| {
            if i == 0 {
                return 1.0;
            }
            if is_integer {
                let n = v as usize;
                if i > n {
                    return 0.0;
                }
                // (-1)^i * C(n, i) with exact integer arithmetic
                let binom = (0..i).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64);
                return if i % 2 == 0 {
                    binom as f64
                } else {
                    -(binom as f64)
                };
            }
            let factorial: f64 = (1..=i).map(|j| j as f64).product();
            gamma(i as f64 - v) / (gamma(-v) * factorial)
        })
        .collect()
}

fn quantized_luma(img: &RgbImage) -> Vec<f64> {
    let r = img.r.samples();
    let g = img.g.samples();
    let b = img.b.samples();
    (0..r.len())
        .map(|i| {
            let l = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
            (l.clamp(0.0, 1.0) * 255.0).round()
        })
        .collect()
}

/// Shannon entropy in bits of integer-valued 0–255 samples.
pub fn entropy_oracle(values: &[f64]) -> f64 {
    let mut counts = [0u64; 256];
    for &v in values {
        counts[v as usize] += 1;
    }
    let total = values.len() as f64;
    let mut h = 0.0;
    for &c in &counts {
        if c > 0 {
            let q = c as f64 / total;
            h -= q * q.log2();
        }
    }
    h
}

/// Population mean and standard deviation.
pub fn mean_std_oracle(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mut sum = 0.0;
    for &v in values {
        sum += v;
    }
    let mean = sum / n;
    let mut ss = 0.0;
    for &v in values {
        ss += (v - mean) * (v - mean);
    }
    (mean, (ss / n).sqrt())
}

/// Mean forward-difference gradient magnitude of a 0–255 field.
pub fn avg_gradient_oracle(values: &[f64], w: usize, h: usize) -> f64 {
    let mut sum = 0.0;
    for y in 0..h - 1 {
        for x in 0..w - 1 {
            let gx = values[y * w + x + 1] - values[y * w + x];
            let gy = values[(y + 1) * w + x] - values[y * w + x];
            sum += ((gx * gx + gy * gy) / 2.0).sqrt();
        }
    }
    sum / ((w - 1) as f64 * (h - 1) as f64)
}

/// Hasler–Süsstrunk colourfulness on the 0–255 scale.
pub fn colourfulness_oracle(img: &RgbImage) -> f64 {
    let r = img.r.samples();
    let g = img.g.samples();
    let b = img.b.samples();
    let n = r.len() as f64;

    let mut sum_rg = 0.0;
    let mut sum_yb = 0.0;
    for i in 0..r.len() {
        sum_rg += 255.0 * (r[i] - g[i]);
        sum_yb += 255.0 * ((r[i] + g[i]) / 2.0 - b[i]);
    }
    let mu_rg = sum_rg / n;
    let mu_yb = sum_yb / n;

    let mut var_rg = 0.0;
    let mut var_yb = 0.0;
    for i in 0..r.len() {
        let rg = 255.0 * (r[i] - g[i]) - mu_rg;
        let yb = 255.0 * ((r[i] + g[i]) / 2.0 - b[i]) - mu_yb;
        var_rg += rg * rg;
        var_yb += yb * yb;
    }
    (var_rg / n + var_yb / n).sqrt() + 0.3 * (mu_rg * mu_rg + mu_yb * mu_yb).sqrt()
}

/// Global contrast factor over 9 block-averaged resolutions.
pub fn gcf_oracle(img: &RgbImage) -> f64 {
    let (w, h) = (img.width(), img.height());
    let luma = quantized_luma(img);
    let mut lin: Vec<f64> = luma.iter().map(|&k| (k / 255.0).powf(2.2)).collect();
    let mut cw = w;
    let mut ch = h;

    let mut total = 0.0;
    for i in 1..=9usize {
        if cw >= 2 && ch >= 2 {
            let lp: Vec<f64> = lin.iter().map(|&l| 100.0 * l.sqrt()).collect();
            let mut contrast_sum = 0.0;
            for y in 0..ch {
                for x in 0..cw {
                    let center = lp[y * cw + x];
                    let left = lp[y * cw + x.saturating_sub(1)];
                    let right = lp[y * cw + (x + 1).min(cw - 1)];
                    let up = lp[y.saturating_sub(1) * cw + x];
                    let down = lp[(y + 1).min(ch - 1) * cw + x];
                    contrast_sum += ((center - left).abs()
                        + (center - right).abs()
                        + (center - up).abs()
                        + (center - down).abs())
                        / 4.0;
                }
            }
            let mean_contrast = contrast_sum / (cw * ch) as f64;
            let rel = i as f64 / 9.0;
            let weight = (-0.406385 * rel + 0.334573) * rel + 0.0877526;
            total += weight * mean_contrast;
        }
        if i < 9 {
            let nw = cw.div_ceil(2);
            let nh = ch.div_ceil(2);
            let mut next = vec![0.0; nw * nh];
            for by in 0..nh {
                for bx in 0..nw {
                    let mut sum = 0.0;
                    let mut count = 0.0;
                    for dy in 0..2 {
                        for dx in 0..2 {
                            let x = 2 * bx + dx;
                            let y = 2 * by + dy;
                            if x < cw && y < ch {
                                sum += lin[y * cw + x];
                                count += 1.0;
                            }
                        }
                    }
                    next[by * nw + bx] = sum / count;
                }
            }
            lin = next;
            cw = nw;
            ch = nh;
        }
    }
    total
}

fn trimmed_mean_var(mut values: Vec<f64>, alpha: f64) -> (f64, f64) {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cut = (alpha * values.len() as f64).floor() as usize;
    let kept = &values[cut..values.len() - cut];
    let n = kept.len() as f64;
    let mean = kept.iter().sum::<f64>() / n;
    let var = kept.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

fn sobel_at(values: &[f64], w: usize, h: usize, x: usize, y: usize) -> f64 {
    let sample = |xi: isize, yi: isize| -> f64 {
        let xc = xi.clamp(0, w as isize - 1) as usize;
        let yc = yi.clamp(0, h as isize - 1) as usize;
        values[yc * w + xc]
    };
    let (x, y) = (x as isize, y as isize);
    let gx = sample(x + 1, y - 1) + 2.0 * sample(x + 1, y) + sample(x + 1, y + 1)
        - sample(x - 1, y - 1)
        - 2.0 * sample(x - 1, y)
        - sample(x - 1, y + 1);
    let gy = sample(x - 1, y + 1) + 2.0 * sample(x, y + 1) + sample(x + 1, y + 1)
        - sample(x - 1, y - 1)
        - 2.0 * sample(x, y - 1)
        - sample(x + 1, y - 1);
    (gx * gx + gy * gy).sqrt()
}

fn block_min_max(values: &[f64], w: usize, bx: usize, by: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for y in by * 8..(by + 1) * 8 {
        for x in bx * 8..(bx + 1) * 8 {
            let v = values[y * w + x];
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
    }
    (lo, hi)
}

/// Underwater image quality measure.
pub fn uiqm_oracle(img: &RgbImage) -> f64 {
    let (w, h) = (img.width(), img.height());
    let scale = |plane: &[f64]| -> Vec<f64> { plane.iter().map(|&s| s * 255.0).collect() };
    let r = scale(img.r.samples());
    let g = scale(img.g.samples());
    let b = scale(img.b.samples());

    // UICM
    let rg: Vec<f64> = (0..r.len()).map(|i| r[i] - g[i]).collect();
    let yb: Vec<f64> = (0..r.len()).map(|i| (r[i] + g[i]) / 2.0 - b[i]).collect();
    let (mu_rg, var_rg) = trimmed_mean_var(rg, 0.1);
    let (mu_yb, var_yb) = trimmed_mean_var(yb, 0.1);
    let uicm =
        -0.0268 * (mu_rg * mu_rg + mu_yb * mu_yb).sqrt() + 0.1586 * (var_rg + var_yb).sqrt();

    // UISM
    let (blocks_x, blocks_y) = (w / 8, h / 8);
    let n_blocks = (blocks_x * blocks_y) as f64;
    let mut uism = 0.0;
    for (channel, weight) in [(&r, 0.299), (&g, 0.587), (&b, 0.114)] {
        let mut edge = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                edge[y * w + x] = sobel_at(channel, w, h, x, y) * channel[y * w + x];
            }
        }
        let mut sum = 0.0;
        for by in 0..blocks_y {
            for bx in 0..blocks_x {
                let (lo, hi) = block_min_max(&edge, w, bx, by);
                // minima at or below 1e-8 count as zero (frozen definition)
                if lo > 1e-8 && hi > lo {
                    sum += (hi / lo).ln();
                }
            }
        }
        uism += weight * (2.0 / n_blocks) * sum;
    }

    // UIConM
    let luma: Vec<f64> = (0..r.len())
        .map(|i| 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i])
        .collect();
    let mut sum = 0.0;
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let (lo, hi) = block_min_max(&luma, w, bx, by);
            if hi + lo > 0.0 && hi > lo {
                let m = (hi - lo) / (hi + lo);
                sum += m * m.ln();
            }
        }
    }
    let uiconm = (sum / n_blocks).abs();

    0.0282 * uicm + 0.2953 * uism + 3.5753 * uiconm
}

/// Underwater color image quality evaluation, including its own sRGB→Lab.
pub fn uciqe_oracle(img: &RgbImage) -> f64 {
    let n = img.r.len();
    let mut lightness = Vec::with_capacity(n);
    let mut chroma = Vec::with_capacity(n);

    let linearize = |s: f64| -> f64 {
        if s <= 0.04045 {
            s / 12.92
        } else {
            ((s + 0.055) / 1.055).powf(2.4)
        }
    };
    let f = |t: f64| -> f64 {
        let d: f64 = 6.0 / 29.0;
        if t > d * d * d {
            t.cbrt()
        } else {
            t / (3.0 * d * d) + 4.0 / 29.0
        }
    };
    let m = [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ];

    for i in 0..n {
        let lr = linearize(img.r.samples()[i]);
        let lg = linearize(img.g.samples()[i]);
        let lb = linearize(img.b.samples()[i]);
        let x = m[0][0] * lr + m[0][1] * lg + m[0][2] * lb;
        let y = m[1][0] * lr + m[1][1] * lg + m[1][2] * lb;
        let z = m[2][0] * lr + m[2][1] * lg + m[2][2] * lb;
        let fx = f(x / (m[0][0] + m[0][1] + m[0][2]));
        let fy = f(y / (m[1][0] + m[1][1] + m[1][2]));
        let fz = f(z / (m[2][0] + m[2][1] + m[2][2]));
        let l = 116.0 * fy - 16.0;
        let a = 500.0 * (fx - fy);
        let b = 200.0 * (fy - fz);
        lightness.push(l / 100.0);
        chroma.push(((a / 100.0).powi(2) + (b / 100.0).powi(2)).sqrt());
    }

    let (_, sigma_chroma) = mean_std_oracle(&chroma);

    let mut sorted = lightness.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = ((n as f64) * 0.01).ceil() as usize;
    let bottom = sorted[..tail].iter().sum::<f64>() / tail as f64;
    let top = sorted[n - tail..].iter().sum::<f64>() / tail as f64;

    let mut sat_sum = 0.0;
    for i in 0..n {
        sat_sum += (chroma[i] / lightness[i].max(1e-6)).clamp(0.0, 1.0);
    }

    0.4680 * sigma_chroma + 0.2745 * (top - bottom) + 0.2576 * (sat_sum / n as f64)
}
