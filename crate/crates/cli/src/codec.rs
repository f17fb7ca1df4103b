//! Image file decode/encode.
//!
//! Binary PPM (P6, maxval 255) is the bit-exact interchange format and is
//! implemented here byte for byte; PNG (8-bit RGB) and JPEG decoding are
//! delegated to the image crate. Output format follows the file extension:
//! `.ppm` or `.png`.

use dehaze_core::image::quantize_u8;
use dehaze_core::{ImagePlane, RgbImage};
use std::path::Path;

use crate::CliError;

/// Decodes PPM/PNG/JPEG by content sniffing.
pub fn read_image(path: &Path) -> Result<RgbImage, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if bytes.starts_with(b"P6") {
        return decode_ppm(&bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())));
    }
    let decoded = image::load_from_memory(&bytes)
        .map_err(|e| CliError::Io(format!("cannot decode {}: {e}", path.display())))?;
    let rgb = decoded.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    Ok(planes_from_bytes(w, h, rgb.as_raw()))
}

/// Encodes to PPM or PNG according to the output extension.
pub fn write_image(path: &Path, img: &RgbImage) -> Result<(), CliError> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    match ext.as_str() {
        "ppm" => std::fs::write(path, encode_ppm(img))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        "png" => {
            let buffer = bytes_from_planes(img);
            let out = image::RgbImage::from_raw(img.width() as u32, img.height() as u32, buffer)
                .expect("buffer sized from image dimensions");
            out.save(path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        other => Err(CliError::Usage(format!(
            "unsupported output format '.{other}' (use .ppm or .png)"
        ))),
    }
}

fn planes_from_bytes(w: usize, h: usize, data: &[u8]) -> RgbImage {
    let mut r = Vec::with_capacity(w * h);
    let mut g = Vec::with_capacity(w * h);
    let mut b = Vec::with_capacity(w * h);
    for px in data.chunks_exact(3) {
        r.push(px[0] as f64 / 255.0);
        g.push(px[1] as f64 / 255.0);
        b.push(px[2] as f64 / 255.0);
    }
    RgbImage::new(
        ImagePlane::new(w, h, r).expect("decoder produced consistent buffer"),
        ImagePlane::new(w, h, g).expect("decoder produced consistent buffer"),
        ImagePlane::new(w, h, b).expect("decoder produced consistent buffer"),
    )
    .expect("planes share dimensions")
}

fn bytes_from_planes(img: &RgbImage) -> Vec<u8> {
    let q = img.map_channels(quantize_u8);
    let mut out = Vec::with_capacity(img.width() * img.height() * 3);
    for i in 0..img.width() * img.height() {
        out.push(q.r.samples()[i] as u8);
        out.push(q.g.samples()[i] as u8);
        out.push(q.b.samples()[i] as u8);
    }
    out
}

/// Serializes as `P6\n<w> <h>\n255\n<raw RGB>`; byte-stable by construction.
pub fn encode_ppm(img: &RgbImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", img.width(), img.height());
    let mut out = header.into_bytes();
    out.extend_from_slice(&bytes_from_planes(img));
    out
}

/// Parses binary PPM. Only maxval 255 is supported; header tokens may be
/// separated by arbitrary whitespace and `#` comments.
pub fn decode_ppm(bytes: &[u8]) -> Result<RgbImage, String> {
    let mut pos = 0usize;

    fn next_token(bytes: &[u8], pos: &mut usize) -> Result<String, String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
            } else {
                break;
            }
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos == start {
            return Err("truncated PPM header".into());
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    }

    if next_token(bytes, &mut pos)? != "P6" {
        return Err("not a binary PPM (expected P6 magic)".into());
    }
    let width: usize = next_token(bytes, &mut pos)?
        .parse()
        .map_err(|_| "invalid PPM width".to_string())?;
    let height: usize = next_token(bytes, &mut pos)?
        .parse()
        .map_err(|_| "invalid PPM height".to_string())?;
    let maxval: usize = next_token(bytes, &mut pos)?
        .parse()
        .map_err(|_| "invalid PPM maxval".to_string())?;
    if maxval != 255 {
        return Err(format!("unsupported PPM maxval {maxval} (only 255)"));
    }
    if width == 0 || height == 0 {
        return Err("PPM dimensions must be positive".into());
    }

    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let need = width * height * 3;
    let raster = bytes
        .get(pos..pos + need)
        .ok_or_else(|| format!("PPM raster truncated: need {need} bytes"))?;
    Ok(planes_from_bytes(width, height, raster))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(w: usize, h: usize) -> RgbImage {
        RgbImage::from_fn_rgb(w, h, |x, y| {
            if (x + y) % 2 == 0 {
                [1.0, 0.5, 0.0]
            } else {
                [0.0, 0.25, 1.0]
            }
        })
    }

    #[test]
    fn ppm_roundtrip_is_byte_exact() {
        let img = checker(7, 5);
        let bytes = encode_ppm(&img);
        let decoded = decode_ppm(&bytes).unwrap();
        assert_eq!(encode_ppm(&decoded), bytes);
    }

    #[test]
    fn ppm_header_tolerates_comments_and_whitespace() {
        let mut data = b"P6 # magic\n# a comment line\n 3\t2 # dims\n255\n".to_vec();
        data.extend_from_slice(&[0u8; 18]);
        let img = decode_ppm(&data).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
    }

    #[test]
    fn ppm_rejects_bad_inputs() {
        assert!(decode_ppm(b"P5\n2 2\n255\n....").is_err());
        assert!(decode_ppm(b"P6\n2 2\n65535\n").is_err());
        let mut short = b"P6\n4 4\n255\n".to_vec();
        short.extend_from_slice(&[0u8; 10]);
        assert!(decode_ppm(&short).is_err());
        assert!(decode_ppm(b"P6\n2").is_err());
    }

    #[test]
    fn header_layout_is_pinned() {
        let img = RgbImage::filled(2, 1, [0.0, 0.0, 0.0]);
        assert_eq!(encode_ppm(&img), b"P6\n2 1\n255\n\0\0\0\0\0\0");
    }
}
