//! Initial rotor configurations.
//!
//! A provider maps each vertex to the slot of its initial rotor, read
//! lazily on the walker's first visit. Under the retrospective convention
//! the initial rotor is the "last exit before time zero", so the first
//! actual exit from a vertex is the cyclic successor of the slot returned
//! here. All providers are pure functions of their parameters.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::graph::{Dir, GraphError, GraphModel, LatticeKind, VertexId};
use crate::rng::{self, TAG_AUX_SEED, TAG_UNIFORM};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("explicit configuration has no entry for vertex {0:?}")]
    MissingVertex(VertexId),
    #[error("configuration {config} does not support this graph")]
    UnsupportedGraph { config: &'static str },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An initial rotor configuration.
#[derive(Clone, Debug)]
pub enum ConfigProvider {
    /// Independent uniform slots, keyed by a seed.
    Uniform { seed: u64 },
    /// The minimal-range configuration on the square lattice whose
    /// excursion sets are exactly the diamonds `B(o, n)`.
    DiamondZ2,
    /// Rotors on the ray `x > origin.x, y = origin.y` point west (toward
    /// the origin); all other vertices are uniform from an auxiliary seed.
    PathToOrigin { origin: (i64, i64), seed: u64 },
    /// An explicit vertex-to-slot map; querying a missing vertex fails.
    Explicit { slots: FxHashMap<VertexId, u32> },
    /// An explicit map with a uniform fallback for unmapped vertices.
    ExplicitWithUniform {
        slots: FxHashMap<VertexId, u32>,
        seed: u64,
    },
    /// Rotors induced by a mirror field on an oriented lattice: overrides
    /// hold the rotors a mirror walk revealed, and unvisited vertices use
    /// the local per-vertex bijection of the percolation bit.
    CoupledMirror {
        perc_seed: u64,
        kind: LatticeKind,
        overrides: FxHashMap<VertexId, u32>,
    },
}

impl ConfigProvider {
    pub fn uniform(seed: u64) -> Self {
        ConfigProvider::Uniform { seed }
    }

    /// See [`diamond_config_z2`].
    pub fn diamond_z2() -> Self {
        ConfigProvider::DiamondZ2
    }

    pub fn explicit(slots: FxHashMap<VertexId, u32>) -> Self {
        ConfigProvider::Explicit { slots }
    }

    /// Parses explicit configurations from text lines `x y slot`.
    pub fn parse_explicit(text: &str) -> Result<Self, ConfigError> {
        let mut slots = FxHashMap::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut field = |name: &str| -> Result<i64, ConfigError> {
                it.next()
                    .ok_or(ConfigError::Parse {
                        line: i + 1,
                        message: format!("missing {name}"),
                    })?
                    .parse()
                    .map_err(|e| ConfigError::Parse {
                        line: i + 1,
                        message: format!("bad {name}: {e}"),
                    })
            };
            let x = field("x")?;
            let y = field("y")?;
            let slot = field("slot")?;
            slots.insert(VertexId::xy(x, y), slot as u32);
        }
        Ok(ConfigProvider::Explicit { slots })
    }

    /// The initial rotor slot at `v`.
    pub fn initial_slot(&self, g: &GraphModel, v: VertexId) -> Result<u32, ConfigError> {
        match self {
            ConfigProvider::Uniform { seed } => {
                let d = g.out_degree(v)?;
                Ok(uniform_slot(*seed, v, d))
            }
            ConfigProvider::DiamondZ2 => {
                if g.lattice_kind() != Some(LatticeKind::Z2) {
                    return Err(ConfigError::UnsupportedGraph { config: "diamond" });
                }
                let (x, y) = v.as_xy().ok_or(GraphError::VertexKindMismatch(v))?;
                Ok(diamond_slot(x, y))
            }
            ConfigProvider::PathToOrigin { origin, seed } => {
                let kind = g
                    .lattice_kind()
                    .ok_or(ConfigError::UnsupportedGraph { config: "path-to-origin" })?;
                let west = match kind {
                    LatticeKind::Z2 | LatticeKind::Comb | LatticeKind::Line => Dir::West,
                    // The oriented lattices have no westward ray of edges.
                    _ => return Err(ConfigError::UnsupportedGraph { config: "path-to-origin" }),
                };
                let (x, y) = v.as_xy().ok_or(GraphError::VertexKindMismatch(v))?;
                if y == origin.1 && x > origin.0 {
                    Ok(g.slot_of_dir(v, west)?)
                } else {
                    let d = g.out_degree(v)?;
                    Ok(uniform_slot(rng::mix64(*seed ^ TAG_AUX_SEED), v, d))
                }
            }
            ConfigProvider::Explicit { slots } => slots
                .get(&v)
                .copied()
                .ok_or(ConfigError::MissingVertex(v)),
            ConfigProvider::ExplicitWithUniform { slots, seed } => match slots.get(&v) {
                Some(&s) => Ok(s),
                None => {
                    let d = g.out_degree(v)?;
                    Ok(uniform_slot(*seed, v, d))
                }
            },
            ConfigProvider::CoupledMirror {
                perc_seed,
                kind,
                overrides,
            } => match overrides.get(&v) {
                Some(&s) => Ok(s),
                None => {
                    let field = crate::mirror::PercolationField::new(*perc_seed);
                    crate::mirror::local_coupled_slot(&field, *kind, v)
                        .map_err(|_| ConfigError::UnsupportedGraph { config: "coupled-mirror" })
                }
            },
        }
    }
}

fn uniform_slot(seed: u64, v: VertexId, outdeg: u32) -> u32 {
    let (x, y) = match v {
        VertexId::Xy(x, y) => (x, y),
        VertexId::Index(i) => (i as i64, -1),
    };
    rng::uniform_below(seed ^ TAG_UNIFORM, x, y, outdeg)
}

/// The diamond configuration, with the clockwise N, E, S, W mechanism.
///
/// Rotors are constant on each open quadrant and on each half-axis. With
/// these values, the vertices first reached in excursion `n` (the diamond
/// layer `|x| + |y| = n`) spend their visits exiting only inward, so each
/// excursion set is exactly `B(o, n)`. Slots: N=0, E=1, S=2, W=3.
pub fn diamond_config_z2() -> ConfigProvider {
    ConfigProvider::DiamondZ2
}

fn diamond_slot(x: i64, y: i64) -> u32 {
    match (x.signum(), y.signum()) {
        (0, 0) => 3,                     // origin: free choice, first exit N
        (1, 0) => 2,                     // +x axis: first exit W
        (-1, 0) => 0,                    // -x axis: first exit E
        (0, 1) => 1,                     // +y axis: first exit S
        (0, -1) => 3,                    // -y axis: first exit N
        (1, 1) => 1,                     // quadrant x,y > 0: exits S then W
        (-1, 1) => 0,                    // x < 0 < y: exits E then S
        (-1, -1) => 3,                   // x,y < 0: exits N then E
        (1, -1) => 2,                    // y < 0 < x: exits W then N
        _ => unreachable!(),
    }
}

/// Rotors along the positive x-ray from `origin` point toward it; the rest
/// of the lattice is uniform from an auxiliary seed derived from `seed`.
pub fn path_to_origin_config(g: &GraphModel, origin: VertexId, seed: u64) -> Result<ConfigProvider, ConfigError> {
    match g.lattice_kind() {
        Some(LatticeKind::Z2 | LatticeKind::Comb | LatticeKind::Line) => {
            let o = origin.as_xy().ok_or(GraphError::VertexKindMismatch(origin))?;
            Ok(ConfigProvider::PathToOrigin { origin: o, seed })
        }
        _ => Err(ConfigError::UnsupportedGraph { config: "path-to-origin" }),
    }
}
