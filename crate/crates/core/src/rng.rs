//! Portable seeded random streams.
//!
//! Every consumer draws from a ChaCha8 generator keyed by a domain-separated
//! seed and a 64-bit stream id. Streams never overlap, so adding a consumer
//! leaves the draws of all existing consumers untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Sampling stages of scene generation, one stream each. Append new stages at
/// the end; the discriminants are part of the reproducibility contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stage {
    StaticCount = 1,
    StaticLocations = 2,
    StaticMarks = 3,
    StaticRepulsion = 4,
    DynamicCount = 5,
    DynamicLocations = 6,
    DynamicMarks = 7,
    DynamicRepulsion = 8,
    Destinations = 9,
    CameraPlacement = 10,
    Domain = 11,
}

const SCENE_DOMAIN: u64 = 0x5343_454e_455f_7631;
const RENDER_DOMAIN: u64 = 0x5245_4e44_4552_7631;
const ASSET_DOMAIN: u64 = 0x4153_5345_545f_7631;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn keyed(domain: u64, key: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix64(domain ^ mix64(key)));
    rng.set_stream(stream);
    rng
}

/// Stream for one stage of scene sampling.
pub fn scene_stream(seed: u64, stage: Stage) -> StreamRng {
    keyed(SCENE_DOMAIN, seed, stage as u64)
}

/// Stream for all samples of one pixel. Samples are drawn in sample-index
/// order, so the sequence depends only on `(seed, pixel)`.
pub fn pixel_stream(seed: u64, pixel: u64) -> StreamRng {
    keyed(RENDER_DOMAIN, seed, pixel)
}

/// Stream for procedural asset parameters of `(category, asset_index)`.
pub fn asset_stream(category: u8, asset_index: u32) -> StreamRng {
    keyed(ASSET_DOMAIN, (category as u64) << 32 | asset_index as u64, 0)
}
