//! Procedural meshes and materials per object category.

mod catalog;
mod material;
mod mesh;

pub use catalog::{build_asset, instantiate_scene_geometry, AssetCatalog, AssetStyle, GeometrySet, ROAD_HEIGHT};
pub use material::{value_noise, BinaryMask, Material, Texture};
pub use mesh::{capsule, cone, cuboid, cylinder, lathe, parse_obj, sphere, Mesh, MIN_TRIANGLE_AREA};
