//! JSON spec files.
//!
//! Two shapes are accepted. A *G-set spec* `{"group", "gset"}` describes
//! `(G, S, T)` directly; a *space spec* `{"betti", "group", "orbits", ...}`
//! describes `X` and its special orbits, from which `(G, S, T)` is derived.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GSetSpec, GroupTable};
use crate::series::{OrbitData, SpaceInput};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupJson {
    Trivial,
    Cyclic { order: usize },
    Table { mul: Vec<Vec<usize>> },
}

impl GroupJson {
    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupJson::Trivial => Ok(GroupTable::trivial()),
            GroupJson::Cyclic { order } => GroupTable::cyclic(*order),
            GroupJson::Table { mul } => GroupTable::from_table(mul.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetJson {
    pub size: usize,
    /// `action[g][s]`; omitted means every element acts trivially.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<usize>>>,
    #[serde(rename = "T", default)]
    pub t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetSpecJson {
    pub group: GroupJson,
    pub gset: GSetJson,
}

impl GSetSpecJson {
    pub fn build(&self) -> Result<GSetSpec> {
        let group = self.group.build()?;
        match &self.gset.action {
            Some(action) => {
                if action.first().is_some_and(|row| row.len() != self.gset.size) {
                    return Err(Error::InvalidGSet("action rows must have `size` entries".into()));
                }
                GSetSpec::new(group, action.clone(), &self.gset.t)
            }
            None => GSetSpec::trivial(group, self.gset.size, &self.gset.t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizerJson {
    pub elements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitJson {
    pub stabilizer: StabilizerJson,
    #[serde(rename = "inT")]
    pub in_t: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub betti: Vec<u64>,
    pub group: GroupJson,
    #[serde(default)]
    pub orbits: Vec<OrbitJson>,
    #[serde(rename = "iAcyclic")]
    pub i_acyclic: bool,
}

impl SpaceJson {
    pub fn build(&self, fallback_name: &str) -> Result<SpaceInput> {
        let group = self.group.build()?;
        let orbits = self
            .orbits
            .iter()
            .map(|o| Ok(OrbitData { stabilizer: group.subgroup(&o.stabilizer.elements)?, in_t: o.in_t }))
            .collect::<Result<Vec<_>>>()?;
        let name = self.name.clone().unwrap_or_else(|| fallback_name.to_string());
        SpaceInput::new(name, self.betti.clone(), group, orbits, self.i_acyclic)
    }

    /// The `(G, S, T)` of the special orbits.
    pub fn gset(&self) -> Result<GSetSpec> {
        let space = self.build("")?;
        let orbits: Vec<_> = space.orbits.iter().map(|o| (o.stabilizer.clone(), o.in_t)).collect();
        GSetSpec::from_orbits(space.group, &orbits)
    }
}

/// Either accepted spec shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecFile {
    GSet(GSetSpecJson),
    Space(SpaceJson),
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let is_space = value.get("betti").is_some();
        if is_space {
            Ok(SpecFile::Space(serde_json::from_value(value)?))
        } else {
            Ok(SpecFile::GSet(serde_json::from_value(value)?))
        }
    }

    pub fn gset(&self) -> Result<GSetSpec> {
        match self {
            SpecFile::GSet(g) => g.build(),
            SpecFile::Space(s) => s.gset(),
        }
    }

    pub fn space(&self, fallback_name: &str) -> Result<SpaceInput> {
        match self {
            SpecFile::Space(s) => s.build(fallback_name),
            SpecFile::GSet(_) => Err(Error::Parse(
                "a space spec (with `betti`) is required here, not a G-set spec".into(),
            )),
        }
    }
}

pub fn read_spec(path: &Path) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    SpecFile::parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Bundled example specs, by file stem.
pub const BUNDLED: &[(&str, &str)] = &[
    ("line", include_str!("../specs/line.json")),
    ("plane", include_str!("../specs/plane.json")),
    ("r3", include_str!("../specs/r3.json")),
    ("complex_line", include_str!("../specs/complex_line.json")),
    ("typeB", include_str!("../specs/typeB.json")),
    ("typeC", include_str!("../specs/typeC.json")),
    ("typeD", include_str!("../specs/typeD.json")),
    ("typeC_gset", include_str!("../specs/typeC_gset.json")),
    ("dowling_b", include_str!("../specs/dowling_b.json")),
    ("dowling_mu3", include_str!("../specs/dowling_mu3.json")),
    ("rp2free", include_str!("../specs/rp2free.json")),
    ("punctured_plane", include_str!("../specs/punctured_plane.json")),
    ("sphere", include_str!("../specs/sphere.json")),
];

pub fn bundled(name: &str) -> Result<SpecFile> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("no bundled spec named {name:?}")))?;
    SpecFile::parse(text)
}
