//! Text formats for spaces, relations and grids.
//!
//! A space file names its points and gives the topology either as a
//! minimal-open table or as a family of open sets (normalized to the table
//! on parsing), plus order generators and an optional quasi-pseudo-metric:
//!
//! ```json
//! { "points": ["a", "b"],
//!   "minopen": { "a": ["a", "b"], "b": ["b"] },
//!   "order": [["a", "b"]],
//!   "qpm": [["0", "1/2"], ["0", "0"]] }
//! ```
//!
//! A relation file lists pairs over the same point names:
//! `{ "points": ["a", "b"], "pairs": [["b", "a"]] }`.
//!
//! A grid file gives extents, slope, removed sites and periodicity:
//! `{ "T": 16, "X": 16, "slope": "1/1", "removed": [[8, 8]], "time_periodic": false }`,
//! optionally with per-site slopes `"site_slopes": [[t, x, "p/q"], …]`.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::bitset::PointSet;
use crate::error::{Error, Result};
use crate::grid::{ConeGrid, Slope};
use crate::qpmetric::QuasiPseudoMetric;
use crate::relation::{Preorder, Relation};
use crate::space::PreorderedSpace;
use crate::topology::FiniteTopology;

/// Serialized form of a space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minopen: Option<IndexMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub order: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qpm: Option<Vec<Vec<String>>>,
}

/// A parsed space with its point names and optional metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub names: Vec<String>,
    pub space: PreorderedSpace,
    pub qpm: Option<QuasiPseudoMetric>,
}

/// Default point names: `a`, `b`, … for up to 26 points, `p0`, `p1`, …
/// beyond.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("p{i}")).collect()
    }
}

fn name_index(names: &[String]) -> Result<HashMap<&str, usize>> {
    let mut map = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if map.insert(name.as_str(), i).is_some() {
            return Err(Error::Parse(format!("duplicate point name `{name}`")));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<&str, usize>, name: &str) -> Result<usize> {
    map.get(name)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown point `{name}`")))
}

fn set_of(map: &HashMap<&str, usize>, n: usize, names: &[String]) -> Result<PointSet> {
    let mut s = PointSet::empty(n);
    for name in names {
        s.insert(lookup(map, name)?);
    }
    Ok(s)
}

impl Instance {
    pub fn new(space: PreorderedSpace) -> Self {
        Instance {
            names: default_names(space.n()),
            space,
            qpm: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &SpaceFile) -> Result<Self> {
        let n = file.points.len();
        let map = name_index(&file.points)?;
        let top = match (&file.minopen, &file.opens) {
            (Some(m), None) => {
                if m.len() != n {
                    return Err(Error::SizeMismatch {
                        expected: n,
                        found: m.len(),
                    });
                }
                let mut table = vec![None; n];
                for (name, members) in m {
                    let i = lookup(&map, name)?;
                    table[i] = Some(set_of(&map, n, members)?);
                }
                FiniteTopology::new(
                    table
                        .into_iter()
                        .map(|s| s.expect("all points listed"))
                        .collect(),
                )?
            }
            (None, Some(opens)) => {
                let sets = opens
                    .iter()
                    .map(|o| set_of(&map, n, o))
                    .collect::<Result<Vec<_>>>()?;
                FiniteTopology::from_open_sets(n, &sets)?
            }
            (None, None) => {
                return Err(Error::Parse(
                    "one of `minopen` or `opens` is required".into(),
                ))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Parse(
                    "give only one of `minopen` and `opens`".into(),
                ))
            }
        };
        let pairs = file
            .order
            .iter()
            .map(|[a, b]| Ok((lookup(&map, a)?, lookup(&map, b)?)))
            .collect::<Result<Vec<_>>>()?;
        let space = PreorderedSpace::new(top, Preorder::from_pairs(n, pairs)?)?;
        let qpm = file
            .qpm
            .as_ref()
            .map(|rows| QuasiPseudoMetric::from_fractions(rows))
            .transpose()?;
        if let Some(p) = &qpm {
            if p.n() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: p.n(),
                });
            }
        }
        Ok(Instance {
            names: file.points.clone(),
            space,
            qpm,
        })
    }

    /// Canonical file form: minimal-open table in point order and all
    /// strict order pairs.
    pub fn to_file(&self) -> SpaceFile {
        let names = &self.names;
        let set_names = |s: &PointSet| s.iter().map(|i| names[i].clone()).collect::<Vec<_>>();
        let minopen = (0..self.space.n())
            .map(|i| {
                (
                    names[i].clone(),
                    set_names(self.space.topology().minopen(i)),
                )
            })
            .collect();
        let order = self
            .space
            .order()
            .strict_pairs()
            .map(|(a, b)| [names[a].clone(), names[b].clone()])
            .collect();
        SpaceFile {
            points: names.clone(),
            minopen: Some(minopen),
            opens: None,
            order,
            qpm: self.qpm.as_ref().map(|p| p.to_fractions()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("space files serialize")
    }
}

/// Serialized form of a relation over named points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub points: Vec<String>,
    pub pairs: Vec<[String; 2]>,
}

/// Parses a relation file against the point names of a space.
pub fn parse_relation(text: &str, names: &[String]) -> Result<Relation> {
    let file: RelationFile = serde_json::from_str(text)?;
    if file.points.len() != names.len() {
        return Err(Error::SizeMismatch {
            expected: names.len(),
            found: file.points.len(),
        });
    }
    let own = name_index(&file.points)?;
    let map = name_index(names)?;
    let pairs = file
        .pairs
        .iter()
        .map(|[a, b]| {
            lookup(&own, a)?;
            lookup(&own, b)?;
            Ok((lookup(&map, a)?, lookup(&map, b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Relation::from_pairs(names.len(), pairs)
}

pub fn relation_to_file(rel: &Relation, names: &[String]) -> RelationFile {
    RelationFile {
        points: names.to_vec(),
        pairs: rel
            .pairs()
            .map(|(a, b)| [names[a].clone(), names[b].clone()])
            .collect(),
    }
}

/// Serialized form of a cone grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(default = "one_slope")]
    pub slope: Slope,
    #[serde(default)]
    pub removed: Vec<[usize; 2]>,
    #[serde(default)]
    pub time_periodic: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub site_slopes: Vec<(usize, usize, Slope)>,
}

fn one_slope() -> Slope {
    Slope::ONE
}

impl GridFile {
    pub fn to_grid(&self) -> Result<ConeGrid> {
        let mut g = ConeGrid::new(self.t, self.x)?
            .with_slope(self.slope)
            .time_periodic(self.time_periodic);
        for &[t, x] in &self.removed {
            g = g.without((t, x))?;
        }
        for &(t, x, s) in &self.site_slopes {
            g = g.with_site_slope((t, x), s)?;
        }
        Ok(g)
    }

    pub fn from_grid(g: &ConeGrid) -> Self {
        GridFile {
            t: g.extent_t(),
            x: g.extent_x(),
            slope: g.slope(),
            removed: g.removed().iter().map(|&(t, x)| [t, x]).collect(),
            time_periodic: g.is_time_periodic(),
            site_slopes: g
                .site_slopes()
                .iter()
                .map(|(&(t, x), &s)| (t, x, s))
                .collect(),
        }
    }
}

pub fn parse_grid(text: &str) -> Result<ConeGrid> {
    serde_json::from_str::<GridFile>(text)?.to_grid()
}

pub fn grid_to_json(g: &ConeGrid) -> String {
    serde_json::to_string_pretty(&GridFile::from_grid(g)).expect("grid files serialize")
}
