//! The seven-class semantic palette shared by assets, groundtruth and
//! evaluation.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub const NUM_CLASSES: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum SemanticClass {
    Building = 0,
    Pedestrian = 1,
    Tree = 2,
    Vehicle = 3,
    Ground = 4,
    Sky = 5,
    Void = 6,
}

impl SemanticClass {
    pub const ALL: [SemanticClass; NUM_CLASSES] = [
        SemanticClass::Building,
        SemanticClass::Pedestrian,
        SemanticClass::Tree,
        SemanticClass::Vehicle,
        SemanticClass::Ground,
        SemanticClass::Sky,
        SemanticClass::Void,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(id as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            SemanticClass::Building => "building",
            SemanticClass::Pedestrian => "pedestrian",
            SemanticClass::Tree => "tree",
            SemanticClass::Vehicle => "vehicle",
            SemanticClass::Ground => "ground",
            SemanticClass::Sky => "sky",
            SemanticClass::Void => "void",
        }
    }

    /// Display color of the indexed label images.
    pub fn color(self) -> [u8; 3] {
        PALETTE[self as usize]
    }
}

/// Label image palette, indexed by class id.
pub const PALETTE: [[u8; 3]; NUM_CLASSES] = [
    [70, 70, 70],    // building
    [220, 20, 60],   // pedestrian
    [107, 142, 35],  // tree
    [0, 0, 142],     // vehicle
    [128, 64, 128],  // ground
    [70, 130, 180],  // sky
    [0, 0, 0],       // void
];

impl fmt::Display for SemanticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCategory(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for c in SemanticClass::ALL {
            assert_eq!(SemanticClass::from_id(c.id()), Some(c));
            assert_eq!(c.name().parse::<SemanticClass>().unwrap(), c);
        }
        assert_eq!(SemanticClass::from_id(7), None);
    }
}
