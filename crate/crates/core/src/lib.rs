// `!(x > 0)` style checks deliberately reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod assets;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod labels;
pub mod math;
pub mod probe;
pub mod real;
pub mod render;
pub mod rng;
pub mod scene;

pub use error::{Error, Result};
pub use real::Real;

pub type Vec2 = math::Vec2<f64>;
pub type Vec3 = math::Vec3<f64>;
pub type Rgb = math::Rgb<f64>;
pub type Region = scene::Region<f64>;
pub type SceneConfig = scene::SceneConfig<f64>;
pub type SceneState = scene::SceneState<f64>;
pub type Mesh = assets::Mesh<f64>;
pub type Material = assets::Material<f64>;
pub type AssetStyle = assets::AssetStyle<f64>;
pub type AssetCatalog = assets::AssetCatalog<f64>;
pub type GeometrySet = assets::GeometrySet<f64>;
pub type World = render::World<f64>;
pub type Camera = render::Camera<f64>;
pub type SunLight = render::SunLight<f64>;
pub type Lighting = render::Lighting<f64>;
pub type Medium = render::Medium<f64>;
pub type Framebuffer = render::Framebuffer<f64>;
pub type GroundtruthBundle = render::GroundtruthBundle<f64>;

pub type Vec3f32 = math::Vec3<f32>;
pub type SceneStatef32 = scene::SceneState<f32>;
pub type Worldf32 = render::World<f32>;
