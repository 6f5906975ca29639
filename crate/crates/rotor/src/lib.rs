//! Rotor walks on Eulerian graphs and lattices.
//!
//! A rotor walk is the deterministic cousin of the random walk: each vertex
//! cycles through its out-edges in a fixed order, and the rotor remembers
//! the last exit taken. This crate simulates rotor walks on finite Eulerian
//! digraphs and on five built-in lattices, decomposes them into excursions
//! from the origin, and verifies the structural facts that govern how fast
//! the walk spreads:
//!
//! * excursion growth and the directed-ball lower bounds on the range
//!   ([`graph`], [`engine`]);
//! * the minimal-range diamond configuration on the square lattice and
//!   planted transient configurations ([`config`]);
//! * zigzag marks and the diamond-shaped range on the comb ([`comb`]);
//! * the coupling between walks on the Manhattan/F lattices, light rays in
//!   random mirrors, and critical bond percolation ([`mirror`]);
//! * vertex/edge cover times on finite graphs, random-walk hitting times,
//!   and the hitting-time functional that bounds them ([`cover`]).

pub mod comb;
pub mod config;
pub mod cover;
pub mod engine;
pub mod graph;
pub mod invariants;
pub mod mirror;
pub mod rng;

pub use config::{diamond_config_z2, path_to_origin_config, ConfigError, ConfigProvider};
pub use engine::{Checkpoint, Excursion, ExcursionLog, RotorWalk, TrajectorySummary, WalkError};
pub use graph::{
    build_thick_cycle, validate_eulerian, BallProfile, Dir, DirectedEdge, FiniteGraph, GraphError,
    GraphModel, LatticeKind, VertexId, DEFAULT_WORLD_LIMIT,
};
