//! Frame files: 8-bit RGB and indexed-palette label PNGs, little-endian
//! portable float maps for depth and normals, and a TOML metadata sidecar.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{NUM_CLASSES, PALETTE};

fn image_err(path: &Path, msg: impl ToString) -> Error {
    Error::Image {
        path: path.display().to_string(),
        msg: msg.to_string(),
    }
}

pub fn write_rgb_png(path: &Path, width: usize, height: usize, pixels: &[[u8; 3]]) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(file, width as u32, height as u32);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header().map_err(|e| image_err(path, e))?;
    let data: Vec<u8> = pixels.iter().flatten().copied().collect();
    writer.write_image_data(&data).map_err(|e| image_err(path, e))?;
    writer.finish().map_err(|e| image_err(path, e))
}

/// Label map as an 8-bit indexed PNG whose palette is the class palette.
pub fn write_label_png(path: &Path, width: usize, height: usize, ids: &[u8]) -> Result<()> {
    if let Some(bad) = ids.iter().find(|&&i| i as usize >= NUM_CLASSES) {
        return Err(image_err(path, format!("label id {bad} outside the palette")));
    }
    let file = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(file, width as u32, height as u32);
    enc.set_color(png::ColorType::Indexed);
    enc.set_depth(png::BitDepth::Eight);
    enc.set_palette(PALETTE.iter().flatten().copied().collect::<Vec<u8>>());
    let mut writer = enc.write_header().map_err(|e| image_err(path, e))?;
    writer.write_image_data(ids).map_err(|e| image_err(path, e))?;
    writer.finish().map_err(|e| image_err(path, e))
}

fn decode(path: &Path, transform: png::Transformations) -> Result<(png::OutputInfo, Vec<u8>, Option<Vec<u8>>)> {
    let mut dec = png::Decoder::new(BufReader::new(File::open(path)?));
    dec.set_transformations(transform);
    let mut reader = dec.read_info().map_err(|e| image_err(path, e))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| image_err(path, "image too large"))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(|e| image_err(path, e))?;
    buf.truncate(info.buffer_size());
    let palette = reader.info().palette.as_ref().map(|p| p.to_vec());
    Ok((info, buf, palette))
}

/// Reads any 8-bit PNG as RGB (alpha dropped, gray expanded).
pub fn read_rgb_png(path: &Path) -> Result<(usize, usize, Vec<[u8; 3]>)> {
    let (info, buf, _) = decode(path, png::Transformations::EXPAND | png::Transformations::STRIP_16)?;
    let (w, h) = (info.width as usize, info.height as usize);
    let px = match info.color_type {
        png::ColorType::Rgb => buf.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        png::ColorType::Rgba => buf.chunks_exact(4).map(|c| [c[0], c[1], c[2]]).collect(),
        png::ColorType::Grayscale => buf.iter().map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).map(|c| [c[0], c[0], c[0]]).collect(),
        other => return Err(image_err(path, format!("unsupported color type {other:?}"))),
    };
    Ok((w, h, px))
}

/// Reads an 8-bit indexed label PNG; pixel values are class ids.
pub fn read_label_png(path: &Path) -> Result<(usize, usize, Vec<u8>)> {
    let (info, buf, _) = decode(path, png::Transformations::IDENTITY)?;
    if info.color_type != png::ColorType::Indexed || info.bit_depth != png::BitDepth::Eight {
        return Err(image_err(path, "label maps must be 8-bit indexed PNGs"));
    }
    if let Some(bad) = buf.iter().find(|&&i| i as usize >= NUM_CLASSES) {
        return Err(image_err(path, format!("label id {bad} outside the palette")));
    }
    Ok((info.width as usize, info.height as usize, buf))
}

/// Decoded portable float map, rows top to bottom.
#[derive(Clone, Debug, PartialEq)]
pub struct Pfm {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f32>,
}

/// Writes a little-endian PFM (`Pf` for one channel, `PF` for three). Rows are
/// given top to bottom and stored bottom to top as the format requires.
pub fn write_pfm(path: &Path, width: usize, height: usize, channels: usize, data: &[f32]) -> Result<()> {
    if !(channels == 1 || channels == 3) || data.len() != width * height * channels {
        return Err(image_err(path, "PFM needs 1 or 3 channels and a full raster"));
    }
    let mut out = BufWriter::new(File::create(path)?);
    let tag = if channels == 1 { "Pf" } else { "PF" };
    write!(out, "{tag}\n{width} {height}\n-1.0\n")?;
    let row = width * channels;
    for y in (0..height).rev() {
        for v in &data[y * row..(y + 1) * row] {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_pfm(path: &Path) -> Result<Pfm> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(image_err(path, "truncated PFM header"));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    pos += 1;
    let channels = match fields[0].as_str() {
        "Pf" => 1,
        "PF" => 3,
        other => return Err(image_err(path, format!("bad PFM tag `{other}`"))),
    };
    let parse = |s: &str| s.parse::<usize>().map_err(|_| image_err(path, "bad PFM size"));
    let (width, height) = (parse(&fields[1])?, parse(&fields[2])?);
    let scale: f32 = fields[3].parse().map_err(|_| image_err(path, "bad PFM scale"))?;
    let n = width * height * channels;
    if bytes.len() < pos + n * 4 {
        return Err(image_err(path, "truncated PFM raster"));
    }
    let raw: Vec<f32> = bytes[pos..pos + n * 4]
        .chunks_exact(4)
        .map(|c| {
            let b = [c[0], c[1], c[2], c[3]];
            if scale < 0.0 {
                f32::from_le_bytes(b)
            } else {
                f32::from_be_bytes(b)
            }
        })
        .collect();
    let row = width * channels;
    let mut data = Vec::with_capacity(n);
    for y in (0..height).rev() {
        data.extend_from_slice(&raw[y * row..(y + 1) * row]);
    }
    Ok(Pfm {
        width,
        height,
        channels,
        data,
    })
}

/// Per-frame sidecar describing how the frame was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameMetadata {
    pub scene_seed: u64,
    pub render_seed: u64,
    pub mode: String,
    pub spp: u32,
    pub max_bounces: u32,
    pub camera_position: [f64; 3],
    pub camera_look_at: [f64; 3],
    pub vertical_fov: f64,
    pub width: usize,
    pub height: usize,
    pub sun_direction: [f64; 3],
    pub sun_spectrum: [f64; 3],
    pub sun_angular_radius: f64,
    pub sky: [f64; 3],
    pub medium_enabled: bool,
    pub medium_scattering: f64,
    pub medium_absorption: f64,
    pub medium_anisotropy: f64,
    pub medium_ceiling: f64,
}

impl FrameMetadata {
    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }
}
