//! Plain-text scene record, one object per line.
//!
//! ```text
//! urbansim-scene 1
//! seed 42
//! region <min_x> <min_z> <max_x> <max_z>
//! roads <origin_x> <origin_z> <cell_size> <cols> <rows>
//! road 0011100...            # one line per grid row, '1' = road cell
//! dropped <static> <dynamic>
//! static <category> <x> <z> <asset_index> <scale> <yaw>
//! dynamic <category> <x> <z> <asset_index> <scale> <yaw> <dest_x> <dest_z> <n> <x1> <z1> ...
//! ```
//!
//! Reals are written in shortest round-trip form, so parsing a record gives
//! back the identical state. Lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::math::Vec2;
use crate::real::Real;

use super::{Category, DropCounts, Mark, Region, RoadNetwork, SceneObject, SceneState};

pub const SCENE_RECORD_VERSION: u32 = 1;
const MAGIC: &str = "urbansim-scene";

pub fn write_scene_record<T: Real>(scene: &SceneState<T>) -> String {
    let mut s = String::new();
    let r = &scene.region;
    let roads = &scene.roads;
    writeln!(s, "{MAGIC} {SCENE_RECORD_VERSION}").unwrap();
    writeln!(s, "seed {}", scene.seed).unwrap();
    writeln!(s, "region {} {} {} {}", r.min().x, r.min().y, r.max().x, r.max().y).unwrap();
    writeln!(
        s,
        "roads {} {} {} {} {}",
        roads.origin().x,
        roads.origin().y,
        roads.cell_size(),
        roads.cols(),
        roads.rows()
    )
    .unwrap();
    for row in roads.occupancy().chunks(roads.cols()) {
        let bits: String = row.iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(s, "road {bits}").unwrap();
    }
    writeln!(s, "dropped {} {}", scene.dropped.static_objects, scene.dropped.dynamic_objects).unwrap();
    for o in &scene.static_objects {
        write_object(&mut s, "static", o);
        s.push('\n');
    }
    for o in &scene.dynamic_objects {
        write_object(&mut s, "dynamic", o);
        let d = o.destination.unwrap_or(o.position);
        write!(s, " {} {} {}", d.x, d.y, o.path.len()).unwrap();
        for w in &o.path {
            write!(s, " {} {}", w.x, w.y).unwrap();
        }
        s.push('\n');
    }
    s
}

fn write_object<T: Real>(s: &mut String, kind: &str, o: &SceneObject<T>) {
    let m = &o.mark;
    write!(
        s,
        "{kind} {} {} {} {} {} {}",
        m.category, o.position.x, o.position.y, m.asset_index, m.scale, m.orientation
    )
    .unwrap();
}

struct Fields<'a> {
    line: usize,
    it: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn next_str(&mut self) -> Result<&'a str> {
        self.it
            .next()
            .ok_or_else(|| Error::parse("scene record", self.line, "missing field"))
    }

    fn next<V: FromStr>(&mut self) -> Result<V> {
        let raw = self.next_str()?;
        raw.parse()
            .map_err(|_| Error::parse("scene record", self.line, format!("bad value `{raw}`")))
    }

    fn finish(mut self) -> Result<()> {
        match self.it.next() {
            None => Ok(()),
            Some(extra) => Err(Error::parse("scene record", self.line, format!("unexpected `{extra}`"))),
        }
    }
}

pub fn parse_scene_record<T: Real>(text: &str) -> Result<SceneState<T>> {
    let mut seed = None;
    let mut region = None;
    let mut grid: Option<(Vec2<T>, T, usize, usize)> = None;
    let mut cells = Vec::new();
    let mut dropped = DropCounts::default();
    let mut static_objects = Vec::new();
    let mut dynamic_objects = Vec::new();
    let mut saw_header = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut f = Fields {
            line,
            it: content.split_whitespace(),
        };
        let key = f.next_str()?;
        if !saw_header {
            let version: u32 = f.next()?;
            if key != MAGIC || version != SCENE_RECORD_VERSION {
                return Err(Error::parse("scene record", line, format!("unsupported header `{content}`")));
            }
            saw_header = true;
            f.finish()?;
            continue;
        }
        match key {
            "seed" => seed = Some(f.next()?),
            "region" => {
                let (a, b, c, d) = (f.next()?, f.next()?, f.next()?, f.next()?);
                region = Some(Region::new(Vec2::new(a, b), Vec2::new(c, d))?);
            }
            "roads" => grid = Some((Vec2::new(f.next()?, f.next()?), f.next()?, f.next()?, f.next()?)),
            "road" => {
                for ch in f.next_str()?.chars() {
                    match ch {
                        '0' => cells.push(false),
                        '1' => cells.push(true),
                        _ => return Err(Error::parse("scene record", line, "road rows use 0/1")),
                    }
                }
            }
            "dropped" => {
                dropped = DropCounts {
                    static_objects: f.next()?,
                    dynamic_objects: f.next()?,
                }
            }
            "static" => static_objects.push(read_object(&mut f)?),
            "dynamic" => {
                let mut o = read_object(&mut f)?;
                o.destination = Some(Vec2::new(f.next()?, f.next()?));
                let n: usize = f.next()?;
                for _ in 0..n {
                    o.path.push(Vec2::new(f.next()?, f.next()?));
                }
                dynamic_objects.push(o);
            }
            other => return Err(Error::parse("scene record", line, format!("unknown key `{other}`"))),
        }
        f.finish()?;
    }

    let missing = |what: &str| Error::parse("scene record", 0, format!("missing `{what}` line"));
    let (origin, cell, cols, rows) = grid.ok_or_else(|| missing("roads"))?;
    Ok(SceneState {
        static_objects,
        dynamic_objects,
        region: region.ok_or_else(|| missing("region"))?,
        roads: RoadNetwork::from_grid(origin, cell, cols, rows, cells)?,
        seed: seed.ok_or_else(|| missing("seed"))?,
        dropped,
    })
}

fn read_object<T: Real>(f: &mut Fields<'_>) -> Result<SceneObject<T>> {
    let category: Category = f.next_str()?.parse()?;
    let position = Vec2::new(f.next()?, f.next()?);
    let mark = Mark {
        category,
        asset_index: f.next()?,
        scale: f.next()?,
        orientation: f.next()?,
    };
    Ok(SceneObject::fixed(position, mark))
}
