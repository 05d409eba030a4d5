//! On-disk datasets: per-frame PNG/PFM/metadata files plus a TOML manifest
//! holding the generation config and a SHA-256 digest of every file.
//!
//! Layout under the output directory:
//!
//! ```text
//! manifest.toml
//! scene-0000/lambertian/{rgb.png, labels.png, depth.pfm, normals.pfm, meta.toml}
//! scene-0000/mcpt-40/...
//! ```

use std::path::{Path, PathBuf};

use log::{error, info};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::LabelMap;
use crate::probe::{LabeledImage, RgbImage};
use crate::render::{write_label_png, write_pfm, write_rgb_png, FrameMetadata, Framebuffer, GroundtruthBundle};

use super::config::{Fidelity, GenerationConfig};
use super::setup::{seed_range, FrameSetup};

pub const MANIFEST_FORMAT: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Relative paths, or hex digests, of the five files of a frame.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFiles {
    pub rgb: String,
    pub labels: String,
    pub depth: String,
    pub normals: String,
    pub metadata: String,
}

impl FrameFiles {
    fn entries(&self) -> [(&'static str, &String); 5] {
        [
            ("rgb", &self.rgb),
            ("labels", &self.labels),
            ("depth", &self.depth),
            ("normals", &self.normals),
            ("metadata", &self.metadata),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub scene_index: u32,
    pub scene_seed: u64,
    pub fidelity: String,
    pub mode: String,
    pub spp: u32,
    pub max_bounces: u32,
    pub render_seed: u64,
    /// False when any file of the frame could not be written.
    pub complete: bool,
    pub files: FrameFiles,
    pub digests: FrameFiles,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: u32,
    pub dataset_id: String,
    pub config: GenerationConfig,
    pub frames: Vec<FrameEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn file_digest(path: &Path) -> Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

impl DatasetManifest {
    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text)?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::Config(format!("unsupported manifest format {}", m.format)));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, self.to_toml()?)?;
        Ok(path)
    }

    pub fn is_complete(&self) -> bool {
        self.frames.iter().all(|f| f.complete)
    }

    /// Frames of one fidelity in scene order.
    pub fn frames_of<'a>(&'a self, fidelity: &'a str) -> impl Iterator<Item = &'a FrameEntry> + 'a {
        self.frames.iter().filter(move |f| f.fidelity == fidelity)
    }

    /// Checks that every file of every complete frame exists and matches its
    /// recorded digest, and that no frame is incomplete.
    pub fn verify(&self, root: &Path) -> Result<()> {
        for f in &self.frames {
            if !f.complete {
                return Err(Error::Digest(format!(
                    "scene {} at {} is incomplete",
                    f.scene_index, f.fidelity
                )));
            }
            for ((kind, rel), (_, want)) in f.files.entries().into_iter().zip(f.digests.entries()) {
                let got = file_digest(&root.join(rel)).map_err(|e| {
                    Error::Digest(format!("{kind} of scene {} at {}: {e}", f.scene_index, f.fidelity))
                })?;
                if &got != want {
                    return Err(Error::Digest(format!(
                        "{kind} of scene {} at {} has digest {got}, manifest records {want}",
                        f.scene_index, f.fidelity
                    )));
                }
            }
        }
        Ok(())
    }

    /// Loads the display images and labels of one fidelity.
    pub fn load_images(&self, root: &Path, fidelity: &str) -> Result<Vec<LabeledImage>> {
        let frames: Vec<&FrameEntry> = self.frames_of(fidelity).collect();
        if frames.is_empty() {
            return Err(Error::Config(format!("manifest has no frames at fidelity `{fidelity}`")));
        }
        frames
            .iter()
            .map(|f| {
                LabeledImage::new(
                    RgbImage::read_png(&root.join(&f.files.rgb))?,
                    LabelMap::read_png(&root.join(&f.files.labels))?,
                )
            })
            .collect()
    }
}

/// Short identifier derived from the config, so equal configs share ids.
pub fn dataset_id(cfg: &GenerationConfig) -> Result<String> {
    Ok(sha256_hex(cfg.to_toml()?.as_bytes())[..16].to_string())
}

fn write_frame(
    dir: &Path,
    root: &Path,
    fb: &Framebuffer<f64>,
    gt: &GroundtruthBundle<f64>,
    meta: &FrameMetadata,
) -> Result<(FrameFiles, FrameFiles)> {
    std::fs::create_dir_all(dir)?;
    let (w, h) = (fb.width, fb.height);
    let path = |name: &str| dir.join(name);
    write_rgb_png(&path("rgb.png"), w, h, &fb.display)?;
    write_label_png(&path("labels.png"), w, h, &gt.label_ids())?;
    let depth: Vec<f32> = gt.depth.iter().map(|&d| d as f32).collect();
    write_pfm(&path("depth.pfm"), w, h, 1, &depth)?;
    let normals: Vec<f32> = gt.normals.iter().flat_map(|n| [n.x as f32, n.y as f32, n.z as f32]).collect();
    write_pfm(&path("normals.pfm"), w, h, 3, &normals)?;
    std::fs::write(path("meta.toml"), meta.to_toml()?)?;

    let rel = |name: &str| -> String {
        path(name)
            .strip_prefix(root)
            .unwrap_or(&path(name))
            .to_string_lossy()
            .replace('\\', "/")
    };
    let files = FrameFiles {
        rgb: rel("rgb.png"),
        labels: rel("labels.png"),
        depth: rel("depth.pfm"),
        normals: rel("normals.pfm"),
        metadata: rel("meta.toml"),
    };
    let digests = FrameFiles {
        rgb: file_digest(&path("rgb.png"))?,
        labels: file_digest(&path("labels.png"))?,
        depth: file_digest(&path("depth.pfm"))?,
        normals: file_digest(&path("normals.pfm"))?,
        metadata: file_digest(&path("meta.toml"))?,
    };
    Ok((files, digests))
}

fn metadata(setup: &FrameSetup<f64>, fidelity: Fidelity) -> FrameMetadata {
    let rc = fidelity.render_config(setup.scene.seed, setup.max_bounces);
    let v = |p: crate::math::Vec3<f64>| [p.x, p.y, p.z];
    let c = |p: crate::math::Rgb<f64>| [p.r, p.g, p.b];
    let (cam, light, med) = (&setup.camera, &setup.lighting, &setup.medium);
    FrameMetadata {
        scene_seed: setup.scene.seed,
        render_seed: rc.seed,
        mode: rc.mode.to_string(),
        spp: rc.spp,
        max_bounces: rc.max_bounces,
        camera_position: v(cam.position),
        camera_look_at: v(cam.look_at),
        vertical_fov: cam.vertical_fov,
        width: cam.width,
        height: cam.height,
        sun_direction: v(light.sun.direction),
        sun_spectrum: c(light.sun.spectrum),
        sun_angular_radius: light.sun.angular_radius,
        sky: c(light.sky),
        medium_enabled: med.enabled,
        medium_scattering: med.scattering,
        medium_absorption: med.absorption,
        medium_anisotropy: med.anisotropy,
        medium_ceiling: med.ceiling,
    }
}

/// Renders every scene of `cfg` at every configured fidelity into `out`
/// and writes the manifest there.
///
/// A frame whose files cannot be written is logged and recorded as
/// incomplete; generation continues with the next frame. Configuration and
/// rendering errors abort.
pub fn generate_dataset(cfg: &GenerationConfig, out: &Path) -> Result<DatasetManifest> {
    cfg.validate()?;
    let fidelities = cfg.fidelities()?;
    std::fs::create_dir_all(out)?;
    let seeds = seed_range(cfg.dataset.base_seed, cfg.dataset.n_scenes);
    let mut frames = Vec::new();
    for (i, &seed) in seeds.iter().enumerate() {
        let setup = FrameSetup::<f64>::new(cfg, seed)?;
        for &fid in &fidelities {
            let (fb, gt) = setup.render(fid)?;
            let rc = fid.render_config(seed, setup.max_bounces);
            let dir = out.join(format!("scene-{i:04}")).join(fid.to_string());
            let written = write_frame(&dir, out, &fb, &gt, &metadata(&setup, fid));
            let (complete, files, digests) = match written {
                Ok((files, digests)) => (true, files, digests),
                Err(e) => {
                    error!("scene {i} at {fid}: {e}");
                    (false, FrameFiles::default(), FrameFiles::default())
                }
            };
            info!("scene {i} (seed {seed}) at {fid}: {}", if complete { "ok" } else { "FAILED" });
            frames.push(FrameEntry {
                scene_index: i as u32,
                scene_seed: seed,
                fidelity: fid.to_string(),
                mode: rc.mode.to_string(),
                spp: rc.spp,
                max_bounces: rc.max_bounces,
                render_seed: rc.seed,
                complete,
                files,
                digests,
            });
        }
    }
    let manifest = DatasetManifest {
        format: MANIFEST_FORMAT,
        dataset_id: dataset_id(cfg)?,
        config: cfg.clone(),
        frames,
    };
    manifest.save(out)?;
    Ok(manifest)
}

/// Regenerates a dataset from the config snapshot stored in `manifest`.
pub fn regenerate_dataset(manifest: &DatasetManifest, out: &Path) -> Result<DatasetManifest> {
    generate_dataset(&manifest.config, out)
}
