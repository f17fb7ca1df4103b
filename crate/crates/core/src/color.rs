//! sRGB → CIELab conversion (D65), needed by the UCIQE metric.

use crate::image::{ImagePlane, RgbImage};

// sRGB → XYZ matrix (IEC 61966-2-1, D65).
const M: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// sRGB EOTF: gamma-encoded `[0,1]` to linear light.
#[inline]
fn srgb_to_linear(s: f64) -> f64 {
    if s <= 0.04045 {
        s / 12.92
    } else {
        ((s + 0.055) / 1.055).powf(2.4)
    }
}

#[inline]
fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// Converts an sRGB image (samples in `[0,1]`) to CIELab planes `(L, a, b)`.
///
/// L is in `[0, 100]`; a and b are centered at 0. The white point is the row
/// sum of the conversion matrix, so any gray pixel (r = g = b) maps to
/// a = b = 0 up to rounding.
pub fn rgb_to_lab(img: &RgbImage) -> (ImagePlane, ImagePlane, ImagePlane) {
    let wn: [f64; 3] = [
        M[0][0] + M[0][1] + M[0][2],
        M[1][0] + M[1][1] + M[1][2],
        M[2][0] + M[2][1] + M[2][2],
    ];

    let (w, h) = (img.width(), img.height());
    let mut l_out = Vec::with_capacity(w * h);
    let mut a_out = Vec::with_capacity(w * h);
    let mut b_out = Vec::with_capacity(w * h);

    for ((&r, &g), &b) in img
        .r
        .samples()
        .iter()
        .zip(img.g.samples())
        .zip(img.b.samples())
    {
        let (lr, lg, lb) = (srgb_to_linear(r), srgb_to_linear(g), srgb_to_linear(b));
        let x = M[0][0] * lr + M[0][1] * lg + M[0][2] * lb;
        let y = M[1][0] * lr + M[1][1] * lg + M[1][2] * lb;
        let z = M[2][0] * lr + M[2][1] * lg + M[2][2] * lb;

        let fx = lab_f(x / wn[0]);
        let fy = lab_f(y / wn[1]);
        let fz = lab_f(z / wn[2]);

        l_out.push(116.0 * fy - 16.0);
        a_out.push(500.0 * (fx - fy));
        b_out.push(200.0 * (fy - fz));
    }

    (
        ImagePlane::from_raw(w, h, l_out),
        ImagePlane::from_raw(w, h, a_out),
        ImagePlane::from_raw(w, h, b_out),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_maps_to_reference_white() {
        let img = RgbImage::filled(2, 2, [1.0, 1.0, 1.0]);
        let (l, a, b) = rgb_to_lab(&img);
        for i in 0..4 {
            assert!((l.samples()[i] - 100.0).abs() < 1e-9);
            assert!(a.samples()[i].abs() < 1e-6);
            assert!(b.samples()[i].abs() < 1e-6);
        }
    }

    #[test]
    fn black_maps_to_origin() {
        let img = RgbImage::filled(1, 1, [0.0, 0.0, 0.0]);
        let (l, a, b) = rgb_to_lab(&img);
        assert!(l.samples()[0].abs() < 1e-12);
        assert!(a.samples()[0].abs() < 1e-12);
        assert!(b.samples()[0].abs() < 1e-12);
    }

    #[test]
    fn mid_gray_matches_closed_form() {
        let img = RgbImage::filled(1, 1, [0.5, 0.5, 0.5]);
        let (l, a, b) = rgb_to_lab(&img);

        // independent single-pixel transcription
        let lin = ((0.5f64 + 0.055) / 1.055).powf(2.4);
        let t = lin; // gray: X/Xn = Y/Yn = Z/Zn = linear value
        let delta = 6.0f64 / 29.0;
        let f = if t > delta.powi(3) {
            t.cbrt()
        } else {
            t / (3.0 * delta * delta) + 4.0 / 29.0
        };
        let expected_l = 116.0 * f - 16.0;

        assert!((l.samples()[0] - expected_l).abs() < 1e-6);
        assert!(a.samples()[0].abs() < 1e-6);
        assert!(b.samples()[0].abs() < 1e-6);
    }

    #[test]
    fn any_gray_is_chromatically_neutral() {
        for i in 0..=20 {
            let v = i as f64 / 20.0;
            let img = RgbImage::filled(1, 1, [v, v, v]);
            let (_, a, b) = rgb_to_lab(&img);
            assert!(a.samples()[0].abs() < 1e-6, "a drift at gray {v}");
            assert!(b.samples()[0].abs() < 1e-6, "b drift at gray {v}");
        }
    }
}
