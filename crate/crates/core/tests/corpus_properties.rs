//! Directional pipeline properties over the bundled degraded-image corpus.

use dehaze_core::image::{luminance, quantize_u8};
use dehaze_core::iqa::avg_gradient;
use dehaze_core::pipeline::{enhance_image, enhance_image_unclamped, PipelineConfig};
use dehaze_core::{KernelMode, RgbImage};
use dehaze_testkit::load_corpus;

fn rgb_mean(img: &RgbImage) -> f64 {
    img.channels().iter().map(|p| p.mean()).sum::<f64>() / 3.0
}

#[test]
fn high_boost_is_at_least_as_bright_as_high_pass_on_every_image() {
    let corpus = load_corpus();
    assert_eq!(corpus.len(), 10);
    let hb_cfg = PipelineConfig::default();
    let hp_cfg = PipelineConfig {
        mode: KernelMode::HighPass,
        ..Default::default()
    };
    for (name, img) in &corpus {
        let hb = enhance_image_unclamped(img, &hb_cfg).unwrap();
        let hp = enhance_image_unclamped(img, &hp_cfg).unwrap();
        assert!(
            rgb_mean(&hb) >= rgb_mean(&hp) - 1e-9,
            "{name}: high-boost mean {} below high-pass mean {}",
            rgb_mean(&hb),
            rgb_mean(&hp)
        );
    }
}

#[test]
fn enhancement_raises_average_gradient_on_most_of_the_corpus() {
    let corpus = load_corpus();
    let cfg = PipelineConfig::default();
    let mut improved = 0usize;
    for (name, img) in &corpus {
        let out = enhance_image(img, &cfg).unwrap();
        let ag_in = avg_gradient(&quantize_u8(&luminance(img))).unwrap();
        let ag_out = avg_gradient(&quantize_u8(&luminance(&out))).unwrap();
        if ag_out >= ag_in {
            improved += 1;
        } else {
            eprintln!("{name}: AG {ag_in:.4} -> {ag_out:.4}");
        }
    }
    assert!(
        improved * 10 >= corpus.len() * 9,
        "AG improved on only {improved}/{} images",
        corpus.len()
    );
}

#[test]
fn outputs_are_clean_on_the_whole_corpus() {
    let corpus = load_corpus();
    let cfg = PipelineConfig::default();
    for (name, img) in &corpus {
        let out = enhance_image(img, &cfg).unwrap();
        for ch in out.channels() {
            for &s in ch.samples() {
                assert!(s.is_finite() && (0.0..=1.0).contains(&s), "{name}: bad sample {s}");
            }
        }
    }
}
