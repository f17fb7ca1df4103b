//! Synthetic degraded scenes for the bundled corpus and for pipeline tests.
//!
//! A clear scene (sky, ground, a handful of blocks and discs, fine texture)
//! is rendered together with a depth field, then degraded through the usual
//! scattering model `I = J·t + A·(1 − t)` with `t = exp(−β·d)` — uniform β
//! for atmospheric haze, strongly red-attenuating per-channel β for water.

use dehaze_core::{ImagePlane, RgbImage};
use rand::Rng;

/// Renders a clear scene plus its depth field (0 = camera, 1 = far).
pub fn clear_scene(width: usize, height: usize, seed: u64) -> (RgbImage, ImagePlane) {
    let mut rng = crate::rng(seed);
    let n = width * height;
    let mut r = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut depth = vec![1.0; n];

    let horizon = height as f64 * (0.30 + 0.15 * rng.random::<f64>());
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            if (y as f64) < horizon {
                let t = y as f64 / horizon;
                r[i] = 0.55 + 0.08 * t;
                g[i] = 0.64 + 0.06 * t;
                b[i] = 0.80 + 0.04 * t;
                depth[i] = 1.0;
            } else {
                let t = (y as f64 - horizon) / (height as f64 - horizon);
                r[i] = 0.38 + 0.10 * t;
                g[i] = 0.33 + 0.09 * t;
                b[i] = 0.24 + 0.06 * t;
                depth[i] = 1.0 - 0.85 * t;
            }
        }
    }

    // blocks and discs at assorted depths
    let objects = 7 + (seed % 4) as usize;
    for _ in 0..objects {
        let cx = rng.random_range(0.0..width as f64);
        let cy = rng.random_range(horizon * 0.6..height as f64);
        let size = rng.random_range(0.06..0.22) * width as f64;
        let color = [
            rng.random_range(0.08..0.92),
            rng.random_range(0.08..0.92),
            rng.random_range(0.08..0.92),
        ];
        let obj_depth = rng.random_range(0.15..0.9);
        let disc = rng.random::<f64>() < 0.5;
        let aspect = rng.random_range(0.5..1.8);

        let x0 = (cx - size).max(0.0) as usize;
        let x1 = ((cx + size) as usize).min(width);
        let y0 = (cy - size * aspect).max(0.0) as usize;
        let y1 = ((cy + size * aspect) as usize).min(height);
        for y in y0..y1 {
            for x in x0..x1 {
                if disc {
                    let dx = (x as f64 - cx) / size;
                    let dy = (y as f64 - cy) / (size * aspect);
                    if dx * dx + dy * dy > 1.0 {
                        continue;
                    }
                }
                let i = y * width + x;
                // simple shading so objects carry internal gradients
                let shade = 0.85 + 0.15 * ((x + y) as f64 / (width + height) as f64);
                r[i] = (color[0] * shade).clamp(0.0, 1.0);
                g[i] = (color[1] * shade).clamp(0.0, 1.0);
                b[i] = (color[2] * shade).clamp(0.0, 1.0);
                depth[i] = obj_depth;
            }
        }
    }

    // fine texture keeps the gradient field non-trivial everywhere
    for i in 0..n {
        let noise = rng.random_range(-0.035..0.035);
        r[i] = (r[i] + noise).clamp(0.0, 1.0);
        g[i] = (g[i] + noise * 0.9).clamp(0.0, 1.0);
        b[i] = (b[i] + noise * 0.8).clamp(0.0, 1.0);
    }

    let image = RgbImage::new(
        ImagePlane::new(width, height, r).unwrap(),
        ImagePlane::new(width, height, g).unwrap(),
        ImagePlane::new(width, height, b).unwrap(),
    )
    .unwrap();
    (image, ImagePlane::new(width, height, depth).unwrap())
}

/// Applies an atmospheric veil: uniform scattering `β`, bright airlight.
pub fn hazify(scene: &RgbImage, depth: &ImagePlane, beta: f64) -> RgbImage {
    let airlight = [0.86, 0.87, 0.89];
    degrade(scene, depth, [beta, beta, beta], airlight)
}

/// Applies underwater attenuation: red dies fastest, veil is blue-green.
pub fn underwater(scene: &RgbImage, depth: &ImagePlane, strength: f64) -> RgbImage {
    let beta = [2.6 * strength, 1.0 * strength, 0.75 * strength];
    let backlight = [0.10, 0.42, 0.50];
    degrade(scene, depth, beta, backlight)
}

fn degrade(scene: &RgbImage, depth: &ImagePlane, beta: [f64; 3], light: [f64; 3]) -> RgbImage {
    let (w, h) = (scene.width(), scene.height());
    let channel = |plane: &ImagePlane, beta: f64, light: f64| {
        let samples = plane
            .samples()
            .iter()
            .zip(depth.samples())
            .map(|(&j, &d)| {
                let t = (-beta * d).exp();
                (j * t + light * (1.0 - t)).clamp(0.0, 1.0)
            })
            .collect();
        ImagePlane::new(w, h, samples).unwrap()
    };
    RgbImage::new(
        channel(&scene.r, beta[0], light[0]),
        channel(&scene.g, beta[1], light[1]),
        channel(&scene.b, beta[2], light[2]),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haze_lifts_brightness_and_flattens_contrast() {
        let (scene, depth) = clear_scene(64, 48, 3);
        let hazy = hazify(&scene, &depth, 1.8);
        let spread = |img: &RgbImage| {
            let (_, std) = dehaze_core::image::moments(&dehaze_core::image::luminance(img));
            std
        };
        assert!(spread(&hazy) < spread(&scene));
    }

    #[test]
    fn water_kills_red_first() {
        let (scene, depth) = clear_scene(64, 48, 5);
        let wet = underwater(&scene, &depth, 1.2);
        assert!(wet.r.mean() < wet.g.mean());
        assert!(wet.r.mean() < wet.b.mean());
    }
}
