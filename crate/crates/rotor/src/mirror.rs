//! Critical bond percolation on the half-dual lattice, mirror fields on the
//! Manhattan and F lattices, and the first-glance mirror walk.
//!
//! The half-dual lattice is the diagonal square grid whose vertices are the
//! points `(x + 1/2, y + 1/2)` and whose edges each pass through exactly one
//! vertex of the square grid; `e_v` denotes the edge through `v`. Each edge
//! is open or closed with probability 1/2, independently, revealed lazily
//! from a seed. Mirrors are placed by the edge status:
//!
//! * Manhattan: `v` carries a mirror parallel to `e_v` iff `e_v` is closed,
//!   and no mirror otherwise;
//! * F-lattice: `v` always carries a mirror, parallel to `e_v` if closed
//!   and perpendicular if open.
//!
//! A walker that reflects off these mirrors on first visits and follows
//! rotor rules afterwards always moves along directed edges of the
//! corresponding lattice, and its law is that of the uniform rotor walk.
//! The half-dual edge through `v` runs northwest (`\`) when `x + y` is
//! even and northeast (`/`) when odd; this is the orientation compatible
//! with the row/column rules above, and the pathwise coupling test is the
//! check that pins it.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::config::{ConfigError, ConfigProvider};
use crate::engine::RotorWalk;
use crate::graph::{Dir, GraphError, GraphModel, LatticeKind, VertexId};
use crate::rng::{self, TAG_ORIGIN_EXIT, TAG_PERCOLATION};

#[derive(Debug, Error)]
pub enum MirrorError {
    #[error("mirror fields exist only on the Manhattan and F lattices")]
    NotMirrorLattice,
    #[error("light ray at {at:?} heading {heading:?} would leave the directed lattice")]
    RuleViolation { at: VertexId, heading: Dir },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Lazily revealed fair bits on the edges of the half-dual lattice, keyed
/// by the square-grid vertex each edge passes through.
#[derive(Clone, Debug)]
pub enum PercolationField {
    /// I.i.d. fair bits from a seed.
    Seeded { seed: u64 },
    /// A fixed closed set, everything else open. Used to plant specific
    /// cycles.
    Planted {
        closed: std::sync::Arc<rustc_hash::FxHashSet<(i64, i64)>>,
    },
}

impl PercolationField {
    pub fn new(seed: u64) -> Self {
        PercolationField::Seeded { seed }
    }

    pub fn planted(closed: rustc_hash::FxHashSet<(i64, i64)>) -> Self {
        PercolationField::Planted {
            closed: std::sync::Arc::new(closed),
        }
    }

    /// Seed for derived draws (the walker's first exit); planted fields
    /// use a fixed zero seed.
    pub fn seed(&self) -> u64 {
        match self {
            PercolationField::Seeded { seed } => *seed,
            PercolationField::Planted { .. } => 0,
        }
    }

    /// Status of the half-dual edge through `(x, y)`.
    pub fn is_open(&self, x: i64, y: i64) -> bool {
        match self {
            PercolationField::Seeded { seed } => rng::fair_bit(seed ^ TAG_PERCOLATION, x, y),
            PercolationField::Planted { closed } => !closed.contains(&(x, y)),
        }
    }

    pub fn is_closed(&self, x: i64, y: i64) -> bool {
        !self.is_open(x, y)
    }
}

/// Orientation of a diagonal segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slope {
    /// `/`, pointing northeast.
    Ne,
    /// `\`, pointing northwest.
    Nw,
}

impl Slope {
    pub fn other(self) -> Slope {
        match self {
            Slope::Ne => Slope::Nw,
            Slope::Nw => Slope::Ne,
        }
    }
}

/// Mirror placement at a vertex, relative to the half-dual edge through it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mirror {
    None,
    Parallel,
    Perpendicular,
}

/// Slope of the half-dual edge through `(x, y)`.
pub fn half_dual_slope(x: i64, y: i64) -> Slope {
    if (x + y).rem_euclid(2) == 0 {
        Slope::Nw
    } else {
        Slope::Ne
    }
}

/// Anchors of the two half-dual endpoints of the edge through `(x, y)`.
/// An anchor `(ax, ay)` names the half-dual vertex `(ax + 1/2, ay + 1/2)`.
pub fn half_dual_endpoints(x: i64, y: i64) -> ((i64, i64), (i64, i64)) {
    match half_dual_slope(x, y) {
        Slope::Nw => ((x - 1, y), (x, y - 1)),
        Slope::Ne => ((x - 1, y - 1), (x, y)),
    }
}

/// The mirror at `v` on the given lattice.
pub fn mirror_at(field: &PercolationField, kind: LatticeKind, v: VertexId) -> Result<Mirror, MirrorError> {
    let (x, y) = v.as_xy().ok_or(MirrorError::NotMirrorLattice)?;
    let closed = field.is_closed(x, y);
    match kind {
        LatticeKind::Manhattan => Ok(if closed { Mirror::Parallel } else { Mirror::None }),
        LatticeKind::FLattice => Ok(if closed { Mirror::Parallel } else { Mirror::Perpendicular }),
        _ => Err(MirrorError::NotMirrorLattice),
    }
}

/// Reflection of a heading off a mirror of the given slope.
pub fn reflect(slope: Slope, heading: Dir) -> Dir {
    match (slope, heading) {
        (Slope::Ne, Dir::East) => Dir::North,
        (Slope::Ne, Dir::North) => Dir::East,
        (Slope::Ne, Dir::West) => Dir::South,
        (Slope::Ne, Dir::South) => Dir::West,
        (Slope::Nw, Dir::East) => Dir::South,
        (Slope::Nw, Dir::South) => Dir::East,
        (Slope::Nw, Dir::West) => Dir::North,
        (Slope::Nw, Dir::North) => Dir::West,
    }
}

/// Exit heading of a light ray arriving at `(x, y)` with `heading`.
fn light_ray_exit(field: &PercolationField, kind: LatticeKind, x: i64, y: i64, heading: Dir) -> Result<Dir, MirrorError> {
    let mirror = mirror_at(field, kind, VertexId::xy(x, y))?;
    Ok(match mirror {
        Mirror::None => heading,
        Mirror::Parallel => reflect(half_dual_slope(x, y), heading),
        Mirror::Perpendicular => reflect(half_dual_slope(x, y).other(), heading),
    })
}

/// The initial rotor the mirror field induces at an unvisited vertex,
/// assuming the walker arrives along the lattice's first in-heading (in
/// E < N < S < W order). Flipping the edge bit always flips the slot.
pub fn local_coupled_slot(field: &PercolationField, kind: LatticeKind, v: VertexId) -> Result<u32, MirrorError> {
    let (x, y) = v.as_xy().ok_or(MirrorError::NotMirrorLattice)?;
    let g = GraphModel::lattice(kind);
    let entry = *GraphModel::lattice_in_headings(kind, x, y)
        .first()
        .expect("lattices have in-degree 2");
    let exit = light_ray_exit(field, kind, x, y, entry)?;
    let slot = g
        .slot_of_dir(v, exit)
        .map_err(|_| MirrorError::RuleViolation { at: v, heading: entry })?;
    Ok(slot ^ 1)
}

/// A first-glance mirror walk: reflects on first visits, rotor rules after.
pub struct MirrorWalk {
    graph: GraphModel,
    field: PercolationField,
    kind: LatticeKind,
    origin: VertexId,
    position: VertexId,
    heading: Option<Dir>,
    time: u64,
    rotors: FxHashMap<VertexId, u32>,
    /// Initial-rotor equivalents assigned at first visits.
    induced: FxHashMap<VertexId, u32>,
    origin_returns: u64,
    trajectory: Vec<VertexId>,
}

impl MirrorWalk {
    pub fn new(field: &PercolationField, kind: LatticeKind, origin: VertexId) -> Result<Self, MirrorError> {
        if !matches!(kind, LatticeKind::Manhattan | LatticeKind::FLattice) {
            return Err(MirrorError::NotMirrorLattice);
        }
        Ok(Self {
            graph: GraphModel::lattice(kind),
            field: field.clone(),
            kind,
            origin,
            position: origin,
            heading: None,
            time: 0,
            rotors: FxHashMap::default(),
            induced: FxHashMap::default(),
            origin_returns: 0,
            trajectory: vec![origin],
        })
    }

    pub fn position(&self) -> VertexId {
        self.position
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn origin_returns(&self) -> u64 {
        self.origin_returns
    }

    pub fn trajectory(&self) -> &[VertexId] {
        &self.trajectory
    }

    /// The initial rotors assigned so far.
    pub fn induced_rotors(&self) -> &FxHashMap<VertexId, u32> {
        &self.induced
    }

    pub fn step(&mut self) -> Result<(), MirrorError> {
        let v = self.position;
        let exit_slot = match self.rotors.get(&v) {
            Some(&s) => (s + 1) % 2,
            None => {
                let slot = match self.heading {
                    // The very first exit from the origin spends one fair bit.
                    None => {
                        let (x, y) = v.as_xy().ok_or(MirrorError::NotMirrorLattice)?;
                        rng::fair_bit(self.field.seed() ^ TAG_ORIGIN_EXIT, x, y) as u32
                    }
                    Some(h) => {
                        let (x, y) = v.as_xy().ok_or(MirrorError::NotMirrorLattice)?;
                        let exit = light_ray_exit(&self.field, self.kind, x, y, h)?;
                        self.graph
                            .slot_of_dir(v, exit)
                            .map_err(|_| MirrorError::RuleViolation { at: v, heading: h })?
                    }
                };
                self.induced.insert(v, slot ^ 1);
                slot
            }
        };
        let exit_dir = self.graph.dir_of_slot(v, exit_slot)?;
        let w = self.graph.out_neighbor(v, exit_slot)?;
        self.rotors.insert(v, exit_slot);
        self.heading = Some(exit_dir);
        self.position = w;
        self.time += 1;
        self.trajectory.push(w);
        if w == self.origin {
            self.origin_returns += 1;
        }
        Ok(())
    }

    pub fn run(&mut self, steps: u64) -> Result<(), MirrorError> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }
}

/// Runs the mirror walk for `steps` steps and packages the rotors it
/// revealed as a rotor configuration. Vertices beyond the walk's horizon
/// fall back to the local per-vertex rule, so the configuration stays a
/// pure function of the field. Driving a rotor walk with this
/// configuration reproduces the mirror walk trajectory step for step.
pub fn coupled_rotor_config(
    field: &PercolationField,
    kind: LatticeKind,
    origin: VertexId,
    steps: u64,
) -> Result<(ConfigProvider, Vec<VertexId>), MirrorError> {
    let mut walk = MirrorWalk::new(field, kind, origin)?;
    walk.run(steps)?;
    let cfg = ConfigProvider::CoupledMirror {
        perc_seed: field.seed(),
        kind,
        overrides: walk.induced.clone(),
    };
    Ok((cfg, walk.trajectory))
}

// ---------------------------------------------------------------------------
// Surrounding cycles of closed edges
// ---------------------------------------------------------------------------

struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            self.parent[v as usize] = self.parent[self.parent[v as usize] as usize];
            v = self.parent[v as usize];
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// The closed half-dual edges of the annulus `S_{3l} - S_l`, as
/// `(midpoint, anchor, anchor)` triples. An edge belongs to the annulus
/// iff its midpoint `v` satisfies `l < ||v||_inf <= 3l`.
fn annulus_closed_edges(field: &PercolationField, ell: u32) -> Vec<((i64, i64), (i64, i64), (i64, i64))> {
    let l = ell as i64;
    let mut edges = Vec::new();
    for x in -3 * l..=3 * l {
        for y in -3 * l..=3 * l {
            let norm = x.abs().max(y.abs());
            if norm <= l || norm > 3 * l {
                continue;
            }
            if field.is_closed(x, y) {
                let (a, b) = half_dual_endpoints(x, y);
                edges.push(((x, y), a, b));
            }
        }
    }
    edges
}

/// Whether the annulus `S_{3l} - S_l` contains a cycle of closed half-dual
/// edges winding around the origin.
///
/// Cut the annulus along the positive x-axis and track, per connected
/// traversal, the parity of cut crossings: the annulus is doubled into two
/// sheets, edges crossing the cut switch sheets, and a surrounding cycle
/// exists exactly when some vertex connects to its own twin.
pub fn find_surrounding_cycle(field: &PercolationField, ell: u32) -> bool {
    assert!(ell >= 1);
    let edges = annulus_closed_edges(field, ell);
    let mut ids: FxHashMap<(i64, i64), u32> = FxHashMap::default();
    let id_of = |anchor: (i64, i64), ids: &mut FxHashMap<(i64, i64), u32>| -> u32 {
        let next = ids.len() as u32;
        *ids.entry(anchor).or_insert(next)
    };
    let mut pairs = Vec::with_capacity(edges.len());
    for &(mid, a, b) in &edges {
        let ia = id_of(a, &mut ids);
        let ib = id_of(b, &mut ids);
        let crosses_cut = mid.1 == 0 && mid.0 > 0;
        pairs.push((ia, ib, crosses_cut));
    }
    let n = ids.len();
    let mut dsu = DisjointSet::new(2 * n);
    for (ia, ib, crossing) in pairs {
        if crossing {
            dsu.union(ia, ib + n as u32);
            dsu.union(ia + n as u32, ib);
        } else {
            dsu.union(ia, ib);
            dsu.union(ia + n as u32, ib + n as u32);
        }
    }
    (0..n as u32).any(|v| dsu.find(v) == dsu.find(v + n as u32))
}

/// Reference detector: rotate the half-dual lattice onto the standard grid
/// and flood-fill the faces of the complement of the closed annulus edges.
/// The origin is surrounded exactly when its face component is bounded.
pub fn surrounding_cycle_by_separation(field: &PercolationField, ell: u32) -> bool {
    use std::collections::VecDeque;
    let rotate = |(ax, ay): (i64, i64)| ((ax + ay + 1) / 2, (ay - ax - 1) / 2);
    // Blocked face crossings, keyed by normalized face pairs. A half-dual
    // edge maps to a unit grid edge; vertical grid edge (u,v)-(u,v-1)
    // separates faces (u-1,v-1)|(u,v-1); horizontal (u,v)-(u+1,v)
    // separates (u,v-1)|(u,v).
    let mut blocked: rustc_hash::FxHashSet<((i64, i64), (i64, i64))> = Default::default();
    for (_, a, b) in annulus_closed_edges(field, ell) {
        let (ua, va) = rotate(a);
        let (ub, vb) = rotate(b);
        let (f1, f2) = if ua == ub {
            let v = va.max(vb);
            ((ua - 1, v - 1), (ua, v - 1))
        } else {
            debug_assert_eq!(va, vb);
            let u = ua.min(ub);
            ((u, va - 1), (u, va))
        };
        blocked.insert((f1.min(f2), f1.max(f2)));
    }
    // The origin sits on the image of its own half-dual edge, between the
    // faces (-1,-1) and (0,-1); that edge is never in the annulus.
    let bound = 4 * ell as i64 + 4;
    let start = (0i64, -1i64);
    let mut seen: rustc_hash::FxHashSet<(i64, i64)> = Default::default();
    let mut queue = VecDeque::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some((a, b)) = queue.pop_front() {
        if a.abs() >= bound || b.abs() >= bound {
            return false;
        }
        for next in [(a + 1, b), (a - 1, b), (a, b + 1), (a, b - 1)] {
            let key = ((a, b).min(next), (a, b).max(next));
            if blocked.contains(&key) || !seen.insert(next) {
                continue;
            }
            queue.push_back(next);
        }
    }
    true
}

/// Outcome of running the mirror walk until it either returns to the
/// origin twice or leaves `S_{3l}`.
#[derive(Clone, Copy, Debug)]
pub struct ConfinementCheck {
    pub returns_before_exit: u64,
    pub exited: bool,
}

/// Runs the first-glance mirror walk from the origin and reports how many
/// returns happen before the walk first leaves `S_{3l}`.
pub fn returns_before_leaving(
    field: &PercolationField,
    kind: LatticeKind,
    ell: u32,
    budget: u64,
) -> Result<ConfinementCheck, MirrorError> {
    let origin = VertexId::xy(0, 0);
    let mut walk = MirrorWalk::new(field, kind, origin)?;
    let bound = 3 * ell as i64;
    for _ in 0..budget {
        if walk.origin_returns() >= 2 {
            return Ok(ConfinementCheck {
                returns_before_exit: walk.origin_returns(),
                exited: false,
            });
        }
        walk.step()?;
        let (x, y) = walk.position().as_xy().unwrap();
        if x.abs().max(y.abs()) > bound {
            return Ok(ConfinementCheck {
                returns_before_exit: walk.origin_returns(),
                exited: true,
            });
        }
    }
    Ok(ConfinementCheck {
        returns_before_exit: walk.origin_returns(),
        exited: false,
    })
}

/// Per-seed uniform rotor walk return counts, the quantity whose growth
/// witnesses recurrence on the oriented lattices.
#[derive(Clone, Debug)]
pub struct ReturnCountRow {
    pub seed: u64,
    /// `(t, u_t(o))` at each checkpoint.
    pub origin_visits: Vec<(u64, u64)>,
    pub range_size: u64,
    pub aborted: bool,
}

pub fn return_count_experiment(
    kind: LatticeKind,
    seeds: &[u64],
    t: u64,
    checkpoints: &[u64],
) -> Result<Vec<ReturnCountRow>, crate::engine::WalkError> {
    let g = GraphModel::lattice(kind);
    let origin = VertexId::xy(0, 0);
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let cfg = ConfigProvider::uniform(seed);
        let mut walk = RotorWalk::new(&g, &cfg, origin)?;
        let mut cps: Vec<u64> = checkpoints.to_vec();
        if cps.last() != Some(&t) {
            cps.push(t);
        }
        let summary = walk.run_steps(t, &cps)?;
        rows.push(ReturnCountRow {
            seed,
            origin_visits: summary
                .checkpoints
                .iter()
                .map(|c| (c.time, c.origin_visits))
                .collect(),
            range_size: walk.range_size(),
            aborted: summary.aborted_at.is_some(),
        });
    }
    Ok(rows)
}
