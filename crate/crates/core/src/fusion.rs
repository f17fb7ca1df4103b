//! Entropy-guided candidate scoring and blending.
//!
//! Each enhancement candidate is scored by the product of the Shannon
//! entropy and the population standard deviation of its quantized luminance,
//! and candidates are either blended by the normalized scores or the best
//! one is selected outright.

use crate::error::{Error, Result};
use crate::image::{histogram256, luminance, moments, quantize_u8, ImagePlane, RgbImage};
use crate::iqa;

/// One enhanced image with the fractional order that produced it.
#[derive(Debug, Clone)]
pub struct FusionCandidate {
    pub order: f64,
    pub image: RgbImage,
    pub score: f64,
}

/// Normalized blend weights, aligned with the candidate list.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionWeights {
    weights: Vec<f64>,
}

impl FusionWeights {
    pub fn values(&self) -> &[f64] {
        &self.weights
    }
}

/// How candidates combine into the final image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlendStrategy {
    /// Per-pixel convex combination using the normalized scores.
    #[default]
    Weighted,
    /// The highest-scoring candidate wins outright; ties go to the lowest
    /// fractional order (the mildest enhancement).
    ArgMax,
}

impl std::fmt::Display for BlendStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlendStrategy::Weighted => write!(f, "weighted"),
            BlendStrategy::ArgMax => write!(f, "argmax"),
        }
    }
}

/// Contrast score `H · σ` of the quantized luminance on the 0–255 scale.
///
/// `H` is Shannon entropy in bits over the 256-bin histogram and `σ` the
/// population standard deviation of the same plane, so a constant image
/// scores 0 and broad, well-spread histograms score high.
pub fn score_candidate(img: &RgbImage) -> f64 {
    let quantized = quantize_u8(&luminance(img));
    let hist = histogram256(&quantized).expect("quantize_u8 output is always 8-bit");
    let entropy = iqa::entropy_of_histogram(&hist);
    let (_, std) = moments(&quantized);
    entropy * std
}

/// Converts raw scores into convex weights `s_i / Σ s`.
///
/// All-zero scores fall back to uniform weights so a batch of flat
/// candidates still blends deterministically.
pub fn normalize_weights(scores: &[f64]) -> Result<FusionWeights> {
    if scores.is_empty() {
        return Err(Error::Config("no scores to normalize".into()));
    }
    if let Some(&bad) = scores.iter().find(|&&s| s < 0.0 || !s.is_finite()) {
        return Err(Error::NegativeScore(bad));
    }
    let total: f64 = scores.iter().sum();
    let weights = if total == 0.0 {
        vec![1.0 / scores.len() as f64; scores.len()]
    } else {
        scores.iter().map(|&s| s / total).collect()
    };
    Ok(FusionWeights { weights })
}

/// Blends candidates into one image.
///
/// `Weighted` forms the per-pixel, per-channel convex combination in
/// ascending candidate order; `ArgMax` returns the winning candidate
/// bit-identically.
pub fn blend(
    candidates: &[FusionCandidate],
    weights: &FusionWeights,
    strategy: BlendStrategy,
) -> Result<RgbImage> {
    let first = candidates
        .first()
        .ok_or_else(|| Error::Config("no candidates to blend".into()))?;
    let (w, h) = (first.image.width(), first.image.height());
    for c in candidates {
        if c.image.width() != w || c.image.height() != h {
            return Err(Error::DimensionMismatch {
                expected_width: w,
                expected_height: h,
                width: c.image.width(),
                height: c.image.height(),
            });
        }
    }
    if weights.values().len() != candidates.len() {
        return Err(Error::Config(format!(
            "{} weights for {} candidates",
            weights.values().len(),
            candidates.len()
        )));
    }

    match strategy {
        BlendStrategy::ArgMax => {
            let mut best = first;
            for c in &candidates[1..] {
                if c.score > best.score || (c.score == best.score && c.order < best.order) {
                    best = c;
                }
            }
            Ok(best.image.clone())
        }
        BlendStrategy::Weighted => {
            let mix = |channel: fn(&RgbImage) -> &ImagePlane| {
                let mut acc = vec![0.0; w * h];
                for (c, &weight) in candidates.iter().zip(weights.values()) {
                    for (a, &s) in acc.iter_mut().zip(channel(&c.image).samples()) {
                        *a += weight * s;
                    }
                }
                ImagePlane::from_raw(w, h, acc)
            };
            let r = mix(|img| &img.r);
            let g = mix(|img| &img.g);
            let b = mix(|img| &img.b);
            Ok(RgbImage { r, g, b })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(value: f64) -> RgbImage {
        RgbImage::filled(4, 4, [value, value, value])
    }

    #[test]
    fn constant_image_scores_zero() {
        assert_eq!(score_candidate(&flat(0.5)), 0.0);
    }

    #[test]
    fn balanced_binary_image_scores_half_range() {
        let r = ImagePlane::from_fn(4, 4, |x, _| if x < 2 { 0.0 } else { 1.0 });
        let img = RgbImage::new(r.clone(), r.clone(), r).unwrap();
        // 1 bit of entropy times std 127.5
        assert!((score_candidate(&img) - 127.5).abs() < 1e-9);
    }

    #[test]
    fn score_matches_component_oracles() {
        let r = ImagePlane::from_fn(8, 8, |x, y| ((x * 37 + y * 11) % 64) as f64 / 63.0);
        let g = ImagePlane::from_fn(8, 8, |x, y| ((x * 5 + y * 23) % 64) as f64 / 63.0);
        let b = ImagePlane::from_fn(8, 8, |x, y| ((x + y * 41) % 64) as f64 / 63.0);
        let img = RgbImage::new(r, g, b).unwrap();

        let q = quantize_u8(&luminance(&img));
        let mut counts = [0u64; 256];
        for &s in q.samples() {
            counts[s as usize] += 1;
        }
        let n = q.len() as f64;
        let entropy: f64 = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum();
        let mean = q.samples().iter().sum::<f64>() / n;
        let std =
            (q.samples().iter().map(|&s| (s - mean) * (s - mean)).sum::<f64>() / n).sqrt();

        assert!((score_candidate(&img) - entropy * std).abs() < 1e-9);
    }

    #[test]
    fn weights_normalize_simple_ratios() {
        let w = normalize_weights(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(w.values(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn zero_scores_fall_back_to_uniform() {
        let w = normalize_weights(&[0.0, 0.0]).unwrap();
        assert_eq!(w.values(), &[0.5, 0.5]);
    }

    #[test]
    fn single_score_gets_unit_weight() {
        let w = normalize_weights(&[7.3]).unwrap();
        assert_eq!(w.values(), &[1.0]);
    }

    #[test]
    fn negative_score_is_rejected() {
        assert!(matches!(
            normalize_weights(&[1.0, -0.5]),
            Err(Error::NegativeScore(_))
        ));
    }

    #[test]
    fn weights_sum_to_one_under_scaling() {
        let scores = [0.3, 1.9, 0.0, 4.2];
        let base = normalize_weights(&scores).unwrap();
        for &lambda in &[1e-6, 0.5, 3.0, 1e9] {
            let scaled: Vec<f64> = scores.iter().map(|s| s * lambda).collect();
            let w = normalize_weights(&scaled).unwrap();
            assert!((w.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (a, b) in w.values().iter().zip(base.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_candidate_blends_to_itself() {
        let c = FusionCandidate {
            order: 0.5,
            image: flat(0.3),
            score: 1.0,
        };
        let w = normalize_weights(&[1.0]).unwrap();
        for strategy in [BlendStrategy::Weighted, BlendStrategy::ArgMax] {
            let out = blend(std::slice::from_ref(&c), &w, strategy).unwrap();
            assert_eq!(out, c.image);
        }
    }

    #[test]
    fn identical_candidates_blend_to_shared_image() {
        let img = flat(0.7);
        let candidates = vec![
            FusionCandidate {
                order: 0.25,
                image: img.clone(),
                score: 0.3,
            },
            FusionCandidate {
                order: 0.5,
                image: img.clone(),
                score: 0.7,
            },
        ];
        let w = normalize_weights(&[0.3, 0.7]).unwrap();
        let out = blend(&candidates, &w, BlendStrategy::Weighted).unwrap();
        for (ch_out, ch_in) in out.channels().iter().zip(img.channels()) {
            for (&a, &b) in ch_out.samples().iter().zip(ch_in.samples()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn even_blend_matches_pixel_average_oracle() {
        let a = RgbImage::filled(3, 3, [0.2, 0.4, 0.8]);
        let b = RgbImage::filled(3, 3, [0.6, 0.0, 0.4]);
        let candidates = vec![
            FusionCandidate {
                order: 0.25,
                image: a.clone(),
                score: 1.0,
            },
            FusionCandidate {
                order: 0.75,
                image: b.clone(),
                score: 1.0,
            },
        ];
        let w = normalize_weights(&[1.0, 1.0]).unwrap();
        let out = blend(&candidates, &w, BlendStrategy::Weighted).unwrap();
        for y in 0..3 {
            for x in 0..3 {
                for ch in 0..3 {
                    let want =
                        0.5 * a.channels()[ch].get(x, y) + 0.5 * b.channels()[ch].get(x, y);
                    assert!((out.channels()[ch].get(x, y) - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn argmax_picks_highest_score_and_lowest_order_on_ties() {
        let a = flat(0.1);
        let b = flat(0.9);
        let candidates = vec![
            FusionCandidate {
                order: 0.75,
                image: a.clone(),
                score: 2.0,
            },
            FusionCandidate {
                order: 0.25,
                image: b.clone(),
                score: 2.0,
            },
        ];
        let w = normalize_weights(&[2.0, 2.0]).unwrap();
        let out = blend(&candidates, &w, BlendStrategy::ArgMax).unwrap();
        assert_eq!(out, b, "tie should go to the lower order");

        let candidates = vec![
            FusionCandidate {
                order: 0.25,
                image: a.clone(),
                score: 1.0,
            },
            FusionCandidate {
                order: 0.75,
                image: b.clone(),
                score: 3.0,
            },
        ];
        let out = blend(&candidates, &w, BlendStrategy::ArgMax).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn blend_rejects_mismatched_dimensions() {
        let candidates = vec![
            FusionCandidate {
                order: 0.25,
                image: flat(0.5),
                score: 1.0,
            },
            FusionCandidate {
                order: 0.5,
                image: RgbImage::filled(5, 4, [0.5; 3]),
                score: 1.0,
            },
        ];
        let w = normalize_weights(&[1.0, 1.0]).unwrap();
        assert!(matches!(
            blend(&candidates, &w, BlendStrategy::Weighted),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weighted_blend_stays_inside_candidate_envelope() {
        let a = RgbImage::filled(4, 4, [0.1, 0.5, 0.9]);
        let b = RgbImage::filled(4, 4, [0.7, 0.2, 0.3]);
        let candidates = vec![
            FusionCandidate {
                order: 0.25,
                image: a,
                score: 1.3,
            },
            FusionCandidate {
                order: 0.5,
                image: b,
                score: 0.4,
            },
        ];
        let w = normalize_weights(&[1.3, 0.4]).unwrap();
        let out = blend(&candidates, &w, BlendStrategy::Weighted).unwrap();
        for ch in 0..3 {
            for (i, &s) in out.channels()[ch].samples().iter().enumerate() {
                let lo = candidates
                    .iter()
                    .map(|c| c.image.channels()[ch].samples()[i])
                    .fold(f64::INFINITY, f64::min);
                let hi = candidates
                    .iter()
                    .map(|c| c.image.channels()[ch].samples()[i])
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(s >= lo - 1e-12 && s <= hi + 1e-12);
            }
        }
    }
}
