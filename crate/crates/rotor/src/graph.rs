//! Graph models: finite Eulerian digraphs and the built-in infinite lattices.
//!
//! Every vertex carries a fixed, ordered list of out-edges; the cyclic order
//! of that list is the rotor mechanism used by the walk engine. The module
//! also provides directed balls `B(o, r)`, the incident-edge counts `v(r)`,
//! their partial sums `W(r)` with generalized inverse, diameters, and the
//! graph builders used by the experiment batteries.

use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::rng::SplitMix;

/// Default bound on lattice coordinates. Walks that would move a coordinate
/// beyond this magnitude abort instead of wrapping.
pub const DEFAULT_WORLD_LIMIT: i64 = (1 << 31) - 2;

/// A vertex: an index into a finite graph, or a lattice coordinate pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    Index(u32),
    Xy(i64, i64),
}

impl VertexId {
    pub fn xy(x: i64, y: i64) -> Self {
        VertexId::Xy(x, y)
    }

    pub fn index(i: u32) -> Self {
        VertexId::Index(i)
    }

    pub fn as_xy(self) -> Option<(i64, i64)> {
        match self {
            VertexId::Xy(x, y) => Some((x, y)),
            VertexId::Index(_) => None,
        }
    }

    pub fn as_index(self) -> Option<u32> {
        match self {
            VertexId::Index(i) => Some(i),
            VertexId::Xy(..) => None,
        }
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Index(i) => write!(f, "#{i}"),
            VertexId::Xy(x, y) => write!(f, "({x},{y})"),
        }
    }
}

/// A directed edge, identified by its tail and the slot in the tail's
/// ordered out-edge list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DirectedEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub slot: u32,
}

/// Compass directions, in the clockwise N, E, S, W mechanism order used on
/// the square lattice and comb axis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub const CLOCKWISE: [Dir; 4] = [Dir::North, Dir::East, Dir::South, Dir::West];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::North => (0, 1),
            Dir::East => (1, 0),
            Dir::South => (0, -1),
            Dir::West => (-1, 0),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::North => Dir::South,
            Dir::East => Dir::West,
            Dir::South => Dir::North,
            Dir::West => Dir::East,
        }
    }

    /// Lexicographic order E < N < S < W, used for the 2-out lattices.
    fn lex_rank(self) -> u8 {
        match self {
            Dir::East => 0,
            Dir::North => 1,
            Dir::South => 2,
            Dir::West => 3,
        }
    }
}

/// The built-in infinite lattice families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LatticeKind {
    /// The square grid, out-edges ordered clockwise N, E, S, W.
    Z2,
    /// The integer line, out-edges ordered E then W.
    Line,
    /// Z^2 with horizontal edges only on the x-axis; axis vertices order
    /// N, E, S, W, tooth vertices order up then down.
    Comb,
    /// One-way streets: even rows E, odd rows W, even columns S, odd
    /// columns N. Out-degree 2, edges ordered E < N < S < W.
    Manhattan,
    /// Alternating orientation: even sites (x+y even) exit N and S, odd
    /// sites exit E and W. Out-degree 2, edges ordered E < N < S < W.
    FLattice,
}

impl LatticeKind {
    pub const ALL: [LatticeKind; 5] = [
        LatticeKind::Z2,
        LatticeKind::Line,
        LatticeKind::Comb,
        LatticeKind::Manhattan,
        LatticeKind::FLattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Z2 => "z2",
            LatticeKind::Line => "line",
            LatticeKind::Comb => "comb",
            LatticeKind::Manhattan => "manhattan",
            LatticeKind::FLattice => "f-lattice",
        }
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {0:?} is not a vertex of this graph")]
    VertexNotInGraph(VertexId),
    #[error("vertex {0:?} has the wrong kind for this graph")]
    VertexKindMismatch(VertexId),
    #[error("coordinate {coord} exceeds the world limit {limit}")]
    WorldLimit { coord: i64, limit: i64 },
    #[error("slot {slot} out of range for out-degree {outdeg}")]
    SlotOutOfRange { slot: u32, outdeg: u32 },
    #[error("radius {0} exceeds the world limit")]
    RadiusTooLarge(u64),
    #[error("graph is not Eulerian: {0}")]
    NotEulerian(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("operation requires a finite graph")]
    NotFinite,
    #[error("operation requires a lattice")]
    NotLattice,
    #[error("thick cycle requires length >= 3, got {0}")]
    ThickCycleTooShort(u64),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite digraph with ordered out-edge lists.
#[derive(Clone, Debug)]
pub struct FiniteGraph {
    out: Vec<Vec<u32>>,
    indeg: Vec<u32>,
    edge_count: u64,
}

impl FiniteGraph {
    /// Builds from an ordered edge list; out-edge order at each vertex is
    /// the order edges appear in `edges`.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut out = vec![Vec::new(); n];
        let mut indeg = vec![0u32; n];
        for &(t, h) in edges {
            if t as usize >= n {
                return Err(GraphError::VertexNotInGraph(VertexId::Index(t)));
            }
            if h as usize >= n {
                return Err(GraphError::VertexNotInGraph(VertexId::Index(h)));
            }
            out[t as usize].push(h);
            indeg[h as usize] += 1;
        }
        Ok(Self {
            out,
            indeg,
            edge_count: edges.len() as u64,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Number of directed edges.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn out_degree(&self, v: u32) -> u32 {
        self.out[v as usize].len() as u32
    }

    pub fn in_degree(&self, v: u32) -> u32 {
        self.indeg[v as usize]
    }

    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    /// Parses the text format: first line `n m`, then `m` lines `tail head`.
    /// Out-edge order is file order.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing header line".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse_num = |s: Option<&str>, line: usize| -> Result<u64, GraphError> {
            s.ok_or(GraphError::Parse {
                line,
                message: "expected two integers".into(),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line,
                message: format!("bad integer: {e}"),
            })
        };
        let n = parse_num(it.next(), ln + 1)?;
        let m = parse_num(it.next(), ln + 1)?;
        let mut edges = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or(GraphError::Parse {
                line: 0,
                message: format!("expected {m} edge lines"),
            })?;
            let mut it = line.split_whitespace();
            let t = parse_num(it.next(), ln + 1)?;
            let h = parse_num(it.next(), ln + 1)?;
            edges.push((t as u32, h as u32));
        }
        Self::from_edges(n as usize, &edges)
    }
}

/// Outcome of the Eulerian/connectivity validation of a finite graph.
#[derive(Clone, Debug)]
pub struct EulerianReport {
    /// Vertices where in-degree differs from out-degree.
    pub degree_violations: Vec<(u32, u32, u32)>,
    /// Whether the underlying undirected graph is connected.
    pub connected: bool,
}

impl EulerianReport {
    pub fn ok(&self) -> bool {
        self.degree_violations.is_empty() && self.connected
    }
}

impl fmt::Display for EulerianReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "eulerian and connected");
        }
        for (v, indeg, outdeg) in &self.degree_violations {
            writeln!(f, "vertex {v}: indeg {indeg} != outdeg {outdeg}")?;
        }
        if !self.connected {
            writeln!(f, "underlying graph is disconnected")?;
        }
        Ok(())
    }
}

/// Checks indeg = outdeg at every vertex and connectivity of the underlying
/// undirected graph.
pub fn validate_eulerian(g: &FiniteGraph) -> EulerianReport {
    let n = g.vertex_count();
    let mut degree_violations = Vec::new();
    for v in 0..n as u32 {
        let (i, o) = (g.in_degree(v), g.out_degree(v));
        if i != o {
            degree_violations.push((v, i, o));
        }
    }
    // Undirected connectivity: traverse edges in both directions.
    let mut connected = true;
    if n > 0 {
        let mut undirected = vec![Vec::new(); n];
        for v in 0..n as u32 {
            for &w in g.out_neighbors(v) {
                undirected[v as usize].push(w);
                undirected[w as usize].push(v);
            }
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &w in &undirected[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        connected = count == n;
    }
    EulerianReport {
        degree_violations,
        connected,
    }
}

/// A finite Eulerian digraph or one of the built-in lattices.
#[derive(Clone, Debug)]
pub enum GraphModel {
    Finite(FiniteGraph),
    Lattice {
        kind: LatticeKind,
        world_limit: i64,
    },
}

impl GraphModel {
    pub fn lattice(kind: LatticeKind) -> Self {
        GraphModel::Lattice {
            kind,
            world_limit: DEFAULT_WORLD_LIMIT,
        }
    }

    pub fn lattice_with_limit(kind: LatticeKind, world_limit: i64) -> Self {
        GraphModel::Lattice { kind, world_limit }
    }

    /// Wraps a finite graph after checking it is Eulerian and connected.
    pub fn finite(g: FiniteGraph) -> Result<Self, GraphError> {
        let report = validate_eulerian(&g);
        if !report.degree_violations.is_empty() {
            return Err(GraphError::NotEulerian(report.to_string()));
        }
        if !report.connected {
            return Err(GraphError::Disconnected);
        }
        Ok(GraphModel::Finite(g))
    }

    pub fn as_finite(&self) -> Result<&FiniteGraph, GraphError> {
        match self {
            GraphModel::Finite(g) => Ok(g),
            GraphModel::Lattice { .. } => Err(GraphError::NotFinite),
        }
    }

    pub fn lattice_kind(&self) -> Option<LatticeKind> {
        match self {
            GraphModel::Lattice { kind, .. } => Some(*kind),
            GraphModel::Finite(_) => None,
        }
    }

    pub fn world_limit(&self) -> i64 {
        match self {
            GraphModel::Lattice { world_limit, .. } => *world_limit,
            GraphModel::Finite(_) => i64::MAX,
        }
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        match (self, v) {
            (GraphModel::Finite(g), VertexId::Index(i)) => {
                if (i as usize) < g.vertex_count() {
                    Ok(())
                } else {
                    Err(GraphError::VertexNotInGraph(v))
                }
            }
            (GraphModel::Lattice { kind, world_limit }, VertexId::Xy(x, y)) => {
                if x.abs() > *world_limit || y.abs() > *world_limit {
                    return Err(GraphError::WorldLimit {
                        coord: if x.abs() > *world_limit { x } else { y },
                        limit: *world_limit,
                    });
                }
                if *kind == LatticeKind::Line && y != 0 {
                    return Err(GraphError::VertexNotInGraph(v));
                }
                Ok(())
            }
            _ => Err(GraphError::VertexKindMismatch(v)),
        }
    }

    /// The out-directions of a lattice vertex, in mechanism order.
    fn lattice_dirs(kind: LatticeKind, x: i64, y: i64) -> Vec<Dir> {
        match kind {
            LatticeKind::Z2 => Dir::CLOCKWISE.to_vec(),
            LatticeKind::Line => vec![Dir::East, Dir::West],
            LatticeKind::Comb => {
                if y == 0 {
                    Dir::CLOCKWISE.to_vec()
                } else {
                    vec![Dir::North, Dir::South]
                }
            }
            LatticeKind::Manhattan => {
                let horizontal = if y.rem_euclid(2) == 0 { Dir::East } else { Dir::West };
                let vertical = if x.rem_euclid(2) == 0 { Dir::South } else { Dir::North };
                let mut dirs = [horizontal, vertical];
                dirs.sort_by_key(|d| d.lex_rank());
                dirs.to_vec()
            }
            LatticeKind::FLattice => {
                if (x + y).rem_euclid(2) == 0 {
                    vec![Dir::North, Dir::South]
                } else {
                    vec![Dir::East, Dir::West]
                }
            }
        }
    }

    /// The in-directions of a lattice vertex: the headings along which a
    /// walker can arrive.
    pub fn lattice_in_headings(kind: LatticeKind, x: i64, y: i64) -> Vec<Dir> {
        match kind {
            LatticeKind::Z2 | LatticeKind::Line | LatticeKind::Comb => {
                // Bidirected: arrivals reverse the out-directions.
                Self::lattice_dirs(kind, x, y)
                    .into_iter()
                    .map(Dir::opposite)
                    .collect()
            }
            LatticeKind::Manhattan => {
                // Horizontal arrival follows the row's one-way direction;
                // vertical arrival follows the column's.
                let horizontal = if y.rem_euclid(2) == 0 { Dir::East } else { Dir::West };
                let vertical = if x.rem_euclid(2) == 0 { Dir::South } else { Dir::North };
                vec![horizontal, vertical]
            }
            LatticeKind::FLattice => {
                if (x + y).rem_euclid(2) == 0 {
                    // Even sites are entered horizontally from both sides.
                    vec![Dir::East, Dir::West]
                } else {
                    vec![Dir::North, Dir::South]
                }
            }
        }
    }

    pub fn out_degree(&self, v: VertexId) -> Result<u32, GraphError> {
        self.check_vertex(v)?;
        match (self, v) {
            (GraphModel::Finite(g), VertexId::Index(i)) => Ok(g.out_degree(i)),
            (GraphModel::Lattice { kind, .. }, VertexId::Xy(x, y)) => {
                Ok(Self::lattice_dirs(*kind, x, y).len() as u32)
            }
            _ => unreachable!(),
        }
    }

    /// Eulerian degree (indeg = outdeg).
    pub fn degree(&self, v: VertexId) -> Result<u32, GraphError> {
        self.out_degree(v)
    }

    /// Head of the `slot`-th out-edge. Fails if the head would leave the
    /// world limit.
    pub fn out_neighbor(&self, v: VertexId, slot: u32) -> Result<VertexId, GraphError> {
        self.check_vertex(v)?;
        match (self, v) {
            (GraphModel::Finite(g), VertexId::Index(i)) => {
                let ns = g.out_neighbors(i);
                ns.get(slot as usize)
                    .map(|&w| VertexId::Index(w))
                    .ok_or(GraphError::SlotOutOfRange {
                        slot,
                        outdeg: ns.len() as u32,
                    })
            }
            (GraphModel::Lattice { kind, world_limit }, VertexId::Xy(x, y)) => {
                let dirs = Self::lattice_dirs(*kind, x, y);
                let dir = dirs.get(slot as usize).ok_or(GraphError::SlotOutOfRange {
                    slot,
                    outdeg: dirs.len() as u32,
                })?;
                let (dx, dy) = dir.delta();
                let (nx, ny) = (x + dx, y + dy);
                if nx.abs() > *world_limit || ny.abs() > *world_limit {
                    return Err(GraphError::WorldLimit {
                        coord: if nx.abs() > *world_limit { nx } else { ny },
                        limit: *world_limit,
                    });
                }
                Ok(VertexId::Xy(nx, ny))
            }
            _ => unreachable!(),
        }
    }

    /// Ordered out-edges of `v`.
    pub fn out_edges(&self, v: VertexId) -> Result<Vec<DirectedEdge>, GraphError> {
        let d = self.out_degree(v)?;
        (0..d)
            .map(|slot| {
                Ok(DirectedEdge {
                    tail: v,
                    head: self.out_neighbor(v, slot)?,
                    slot,
                })
            })
            .collect()
    }

    /// On a lattice, the slot of the out-edge pointing in direction `dir`.
    pub fn slot_of_dir(&self, v: VertexId, dir: Dir) -> Result<u32, GraphError> {
        match (self, v) {
            (GraphModel::Lattice { kind, .. }, VertexId::Xy(x, y)) => {
                self.check_vertex(v)?;
                Self::lattice_dirs(*kind, x, y)
                    .iter()
                    .position(|&d| d == dir)
                    .map(|p| p as u32)
                    .ok_or(GraphError::SlotOutOfRange { slot: u32::MAX, outdeg: 0 })
            }
            _ => Err(GraphError::NotLattice),
        }
    }

    /// On a lattice, the direction of the `slot`-th out-edge.
    pub fn dir_of_slot(&self, v: VertexId, slot: u32) -> Result<Dir, GraphError> {
        match (self, v) {
            (GraphModel::Lattice { kind, .. }, VertexId::Xy(x, y)) => {
                self.check_vertex(v)?;
                let dirs = Self::lattice_dirs(*kind, x, y);
                dirs.get(slot as usize).copied().ok_or(GraphError::SlotOutOfRange {
                    slot,
                    outdeg: dirs.len() as u32,
                })
            }
            _ => Err(GraphError::NotLattice),
        }
    }

    /// In-neighbors of `v` (tails of edges whose head is `v`).
    fn in_neighbors(&self, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        self.check_vertex(v)?;
        match (self, v) {
            (GraphModel::Finite(g), VertexId::Index(i)) => {
                let mut tails = Vec::new();
                for t in 0..g.vertex_count() as u32 {
                    for &h in g.out_neighbors(t) {
                        if h == i {
                            tails.push(VertexId::Index(t));
                        }
                    }
                }
                Ok(tails)
            }
            (GraphModel::Lattice { kind, .. }, VertexId::Xy(x, y)) => {
                Ok(Self::lattice_in_headings(*kind, x, y)
                    .into_iter()
                    .map(|h| {
                        let (dx, dy) = h.delta();
                        VertexId::Xy(x - dx, y - dy)
                    })
                    .collect())
            }
            _ => unreachable!(),
        }
    }

    /// Directed ball of radius `r` around `o` together with the incident
    /// directed-edge counts `v(n)` and their partial sums `W(n)`.
    pub fn ball(&self, o: VertexId, r: u32) -> Result<BallProfile, GraphError> {
        if let GraphModel::Lattice { world_limit, .. } = self {
            if r as i64 > *world_limit {
                return Err(GraphError::RadiusTooLarge(r as u64));
            }
        }
        self.check_vertex(o)?;
        let mut dist: FxHashMap<VertexId, u32> = FxHashMap::default();
        dist.insert(o, 0);
        let mut frontier = vec![o];
        let mut sizes = vec![1usize];
        let mut incident = Vec::with_capacity(r as usize + 1);
        let mut w = vec![0u64];
        for n in 0..=r {
            // v(n): edges with tail or head in B(o, n), each counted once.
            // Tail-in contributes one per out-edge of the ball; head-in
            // edges from outside are counted via in-neighbors.
            let mut v_n = 0u64;
            for (&u, &du) in dist.iter() {
                if du > n {
                    continue;
                }
                v_n += self.out_degree(u)? as u64;
                for t in self.in_neighbors(u)? {
                    let inside = dist.get(&t).is_some_and(|&dt| dt <= n);
                    if !inside {
                        v_n += 1;
                    }
                }
            }
            incident.push(v_n);
            w.push(w.last().unwrap() + v_n);
            if n == r {
                break;
            }
            // Expand to radius n + 1.
            let mut next = Vec::new();
            for &u in &frontier {
                let d = self.out_degree(u)?;
                for slot in 0..d {
                    match self.out_neighbor(u, slot) {
                        Ok(wv) => {
                            dist.entry(wv).or_insert_with(|| {
                                next.push(wv);
                                n + 1
                            });
                        }
                        Err(GraphError::WorldLimit { .. }) => {
                            return Err(GraphError::RadiusTooLarge(r as u64))
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            frontier = next;
            sizes.push(dist.len());
        }
        Ok(BallProfile {
            origin: o,
            radius: r,
            dist,
            sizes,
            incident,
            w,
        })
    }

    /// `W^-1(t)`: the smallest radius `r` with `W(r) > t`.
    pub fn w_inverse(&self, o: VertexId, t: u64) -> Result<u32, GraphError> {
        // W grows at least linearly in r, so expand geometrically then
        // scan. Exact per definition, not asymptotics.
        let mut r = 4u32;
        loop {
            let profile = self.ball(o, r)?;
            if profile.w_at(r) > t {
                for s in 1..=r {
                    if profile.w_at(s) > t {
                        return Ok(s);
                    }
                }
                unreachable!("W is monotone");
            }
            r = r.saturating_mul(2);
        }
    }

    /// Max over ordered vertex pairs of the directed-path distance.
    pub fn diameter(&self) -> Result<u32, GraphError> {
        let g = self.as_finite()?;
        let n = g.vertex_count();
        let mut best = 0u32;
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n as u32 {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            dist[s as usize] = 0;
            queue.clear();
            queue.push_back(s);
            let mut reached = 1usize;
            while let Some(u) = queue.pop_front() {
                for &w in g.out_neighbors(u) {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dist[u as usize] + 1;
                        best = best.max(dist[w as usize]);
                        reached += 1;
                        queue.push_back(w);
                    }
                }
            }
            if reached < n {
                return Err(GraphError::Disconnected);
            }
        }
        Ok(best)
    }

    /// Largest degree among vertices of `B(o, t)`, the quantity written
    /// `Delta_t` in the range bounds. Constant per lattice kind.
    pub fn max_degree_in_ball(&self, o: VertexId, t: u64) -> Result<u32, GraphError> {
        match self {
            GraphModel::Lattice { kind, .. } => {
                let (_, oy) = o.as_xy().ok_or(GraphError::VertexKindMismatch(o))?;
                Ok(match kind {
                    LatticeKind::Z2 => 4,
                    LatticeKind::Line => 2,
                    // Degree 4 appears once the ball reaches the axis.
                    LatticeKind::Comb => {
                        if oy.unsigned_abs() <= t {
                            4
                        } else {
                            2
                        }
                    }
                    LatticeKind::Manhattan | LatticeKind::FLattice => 2,
                })
            }
            GraphModel::Finite(g) => {
                let n = g.vertex_count() as u64;
                let radius = t.min(n) as u32;
                let ball = self.ball(o, radius)?;
                let mut best = 0;
                for &v in ball.vertices() {
                    best = best.max(self.out_degree(v)?);
                }
                Ok(best)
            }
        }
    }
}

/// A directed ball `B(o, r)` with its incident-edge profile.
#[derive(Clone, Debug)]
pub struct BallProfile {
    origin: VertexId,
    radius: u32,
    dist: FxHashMap<VertexId, u32>,
    sizes: Vec<usize>,
    /// `incident[n]` = v(n), the directed edges with tail or head in B(o, n).
    incident: Vec<u64>,
    /// `w[n]` = W(n) = sum of v(0..n); `w[0]` = 0.
    w: Vec<u64>,
}

impl BallProfile {
    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.dist.contains_key(&v)
    }

    /// Membership of `v` in `B(o, n)` for `n <= radius`.
    pub fn contains_within(&self, v: VertexId, n: u32) -> bool {
        self.dist.get(&v).is_some_and(|&d| d <= n)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.dist.keys()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// |B(o, n)| for n <= radius.
    pub fn size_at(&self, n: u32) -> usize {
        self.sizes[n as usize]
    }

    /// v(n) for n <= radius.
    pub fn incident_edges_at(&self, n: u32) -> u64 {
        self.incident[n as usize]
    }

    /// W(n) for n <= radius + 1.
    pub fn w_at(&self, n: u32) -> u64 {
        self.w[n as usize]
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Adds an undirected edge as a pair of directed edges.
fn push_undirected(edges: &mut Vec<(u32, u32)>, a: u32, b: u32) {
    edges.push((a, b));
    edges.push((b, a));
}

/// Bidirected cycle on `n >= 3` vertices.
pub fn bidirected_cycle(n: u32) -> FiniteGraph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for v in 0..n {
        push_undirected(&mut edges, v, (v + 1) % n);
    }
    // Deduplicate the doubled edge of the 2-cycle.
    if n == 2 {
        edges.truncate(2);
    }
    FiniteGraph::from_edges(n as usize, &edges).unwrap()
}

/// Bidirected path on `n >= 2` vertices.
pub fn bidirected_path(n: u32) -> FiniteGraph {
    assert!(n >= 2);
    let mut edges = Vec::new();
    for v in 0..n - 1 {
        push_undirected(&mut edges, v, v + 1);
    }
    FiniteGraph::from_edges(n as usize, &edges).unwrap()
}

/// Bidirected complete graph on `n >= 2` vertices.
pub fn bidirected_complete(n: u32) -> FiniteGraph {
    let mut edges = Vec::new();
    for v in 0..n {
        for w in 0..n {
            if v != w {
                edges.push((v, w));
            }
        }
    }
    FiniteGraph::from_edges(n as usize, &edges).unwrap()
}

/// Bidirected star: vertex 0 is the center, `leaves >= 1` leaves.
pub fn bidirected_star(leaves: u32) -> FiniteGraph {
    let mut edges = Vec::new();
    for leaf in 1..=leaves {
        push_undirected(&mut edges, 0, leaf);
    }
    FiniteGraph::from_edges(leaves as usize + 1, &edges).unwrap()
}

/// The thick cycle: vertices `{0..len} x {0..width}`, with short-range
/// edges to both neighboring columns (any row) and long-range edges to all
/// non-adjacent columns within the same row. Every vertex has undirected
/// degree `2*width + len - 3`.
pub fn build_thick_cycle(len: u64, width: u64) -> Result<FiniteGraph, GraphError> {
    if len < 3 {
        return Err(GraphError::ThickCycleTooShort(len));
    }
    assert!(width >= 1);
    let n = (len * width) as usize;
    let id = |x: u64, y: u64| (x * width + y) as u32;
    let mut edges = Vec::new();
    for x in 0..len {
        for y in 0..width {
            let v = id(x, y);
            // Short range: next column, every row (the previous column's
            // edges were added when that column was processed).
            let xr = (x + 1) % len;
            for y2 in 0..width {
                push_undirected(&mut edges, v, id(xr, y2));
            }
            // Long range: same row, columns at cyclic distance >= 2, added
            // once per unordered pair.
            for x2 in x + 2..len {
                let wraps_to_neighbor = x == 0 && x2 == len - 1;
                if !wraps_to_neighbor {
                    push_undirected(&mut edges, v, id(x2, y));
                }
            }
        }
    }
    FiniteGraph::from_edges(n, &edges)
}

/// Random connected Eulerian digraph: a random bidirected spanning tree,
/// plus random bidirected chords, plus (optionally) a directed cycle
/// through a random vertex subset. The overlay keeps in-degree equal to
/// out-degree, so the result is Eulerian but not necessarily symmetric.
pub fn random_eulerian(n: u32, extra_undirected: u32, directed_overlay: bool, seed: u64) -> FiniteGraph {
    assert!(n >= 2);
    let mut rng = SplitMix::new(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let parent = rng.below(v as u64) as u32;
        push_undirected(&mut edges, v, parent);
    }
    for _ in 0..extra_undirected {
        let a = rng.below(n as u64) as u32;
        let b = rng.below(n as u64) as u32;
        if a != b {
            push_undirected(&mut edges, a, b);
        }
    }
    if directed_overlay && n >= 3 {
        // A directed cycle visiting a random subset of size >= 3 adds one
        // in-edge and one out-edge to each visited vertex.
        let k = 3 + rng.below((n - 2) as u64) as u32;
        let mut verts: Vec<u32> = (0..n).collect();
        for i in (1..verts.len()).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            verts.swap(i, j);
        }
        verts.truncate(k as usize);
        for i in 0..verts.len() {
            edges.push((verts[i], verts[(i + 1) % verts.len()]));
        }
    }
    FiniteGraph::from_edges(n as usize, &edges).unwrap()
}
