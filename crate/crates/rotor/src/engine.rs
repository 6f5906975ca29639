//! The rotor walk engine.
//!
//! The walk follows the retrospective convention: each rotor records the
//! most recent exit from its vertex, so one step first advances the rotor
//! at the current vertex one slot in cyclic order and then moves the walker
//! along the new rotor. Initial rotors come lazily from a
//! [`ConfigProvider`]; only visited vertices ever materialize state.
//!
//! Bookkeeping maintained per step, writing `X_0, X_1, ...` for the
//! trajectory:
//!
//! * odometer `u_t(x)`, the number of times `s < t` with `X_s = x`;
//! * the range `R_t = {X_1, ..., X_t}` (the start counts only if revisited);
//! * returns to the origin. The walk completes its n-th excursion at
//!   `T(n)`, the time of the `n * deg(o)`-th return, at which point
//!   `u_{T(n)}(o) = n * deg(o)` exactly.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::config::{ConfigError, ConfigProvider};
use crate::graph::{GraphError, GraphModel, VertexId};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("walk aborted at time {time} at {position:?}: {source}")]
    WorldLimit {
        time: u64,
        position: VertexId,
        source: GraphError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Visit counts for one excursion, `e_n = u_{T(n)} - u_{T(n-1)}`.
#[derive(Clone, Debug)]
pub struct Excursion {
    /// Completion time `T(n)`.
    pub completed_at: u64,
    /// Per-vertex visit counts during the excursion.
    pub visits: FxHashMap<VertexId, u64>,
    /// Rotor slots over the excursion set at time `T(n)`.
    pub rotors: FxHashMap<VertexId, u32>,
}

impl Excursion {
    /// The excursion set `A_n`, sorted for deterministic iteration.
    pub fn set(&self) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.visits.keys().copied().collect();
        vs.sort_unstable();
        vs
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.visits.contains_key(&v)
    }
}

/// Log of a run decomposed into excursions from the origin.
#[derive(Clone, Debug, Default)]
pub struct ExcursionLog {
    pub excursions: Vec<Excursion>,
    /// Visit counts of the unfinished excursion when the budget ran out.
    pub partial: Option<FxHashMap<VertexId, u64>>,
    /// Set when the step budget was exhausted mid-excursion.
    pub incomplete: bool,
    pub total_steps: u64,
}

/// Summary statistics at one checkpoint of a timed run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub time: u64,
    /// `u_t(o)`.
    pub origin_visits: u64,
    /// `#R_t`.
    pub range_size: u64,
}

/// Result of [`RotorWalk::run_steps`].
#[derive(Clone, Debug, Default)]
pub struct TrajectorySummary {
    pub checkpoints: Vec<Checkpoint>,
    /// Set when the walk aborted at the world limit; holds the abort time.
    pub aborted_at: Option<u64>,
}

/// A rotor walk in progress.
pub struct RotorWalk<'a> {
    graph: &'a GraphModel,
    config: &'a ConfigProvider,
    origin: VertexId,
    origin_degree: u64,
    position: VertexId,
    time: u64,
    rotors: FxHashMap<VertexId, u32>,
    odometer: FxHashMap<VertexId, u64>,
    /// Time of first arrival (at times >= 1) per vertex; its key set is the
    /// range R_t.
    first_visit: FxHashMap<VertexId, u64>,
    origin_returns: u64,
}

impl<'a> RotorWalk<'a> {
    pub fn new(
        graph: &'a GraphModel,
        config: &'a ConfigProvider,
        origin: VertexId,
    ) -> Result<Self, WalkError> {
        let origin_degree = graph.out_degree(origin)? as u64;
        Ok(Self {
            graph,
            config,
            origin,
            origin_degree,
            position: origin,
            time: 0,
            rotors: FxHashMap::default(),
            odometer: FxHashMap::default(),
            first_visit: FxHashMap::default(),
            origin_returns: 0,
        })
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn position(&self) -> VertexId {
        self.position
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// `u_t(x)` for the current time.
    pub fn odometer(&self, v: VertexId) -> u64 {
        self.odometer.get(&v).copied().unwrap_or(0)
    }

    pub fn odometer_map(&self) -> &FxHashMap<VertexId, u64> {
        &self.odometer
    }

    /// Number of returns to the origin so far (arrivals at times >= 1).
    pub fn origin_returns(&self) -> u64 {
        self.origin_returns
    }

    /// `#R_t`.
    pub fn range_size(&self) -> u64 {
        self.first_visit.len() as u64
    }

    pub fn range_contains(&self, v: VertexId) -> bool {
        self.first_visit.contains_key(&v)
    }

    /// The range, sorted for deterministic iteration.
    pub fn range_sorted(&self) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.first_visit.keys().copied().collect();
        vs.sort_unstable();
        vs
    }

    /// Time of the first arrival at `v`, if `v` is in the range.
    pub fn first_visit(&self, v: VertexId) -> Option<u64> {
        self.first_visit.get(&v).copied()
    }

    /// Current rotor slot at `v`, if the vertex has been exited.
    pub fn rotor(&self, v: VertexId) -> Option<u32> {
        self.rotors.get(&v).copied()
    }

    /// Advances the walk by one step.
    pub fn step(&mut self) -> Result<(), WalkError> {
        let v = self.position;
        let d = self.graph.out_degree(v).map_err(|source| WalkError::WorldLimit {
            time: self.time,
            position: v,
            source,
        })?;
        let slot = match self.rotors.get(&v) {
            Some(&s) => (s + 1) % d,
            None => (self.config.initial_slot(self.graph, v)? + 1) % d,
        };
        let w = self
            .graph
            .out_neighbor(v, slot)
            .map_err(|source| WalkError::WorldLimit {
                time: self.time,
                position: v,
                source,
            })?;
        self.rotors.insert(v, slot);
        *self.odometer.entry(v).or_insert(0) += 1;
        self.time += 1;
        self.position = w;
        self.first_visit.entry(w).or_insert(self.time);
        if w == self.origin {
            self.origin_returns += 1;
        }
        Ok(())
    }

    /// Runs for `t` steps, reporting `(u_t(o), #R_t)` at each checkpoint.
    /// Checkpoints must be sorted; a world-limit abort ends the run early
    /// with the flag set.
    pub fn run_steps(&mut self, t: u64, checkpoints: &[u64]) -> Result<TrajectorySummary, WalkError> {
        debug_assert!(checkpoints.windows(2).all(|w| w[0] <= w[1]));
        let mut summary = TrajectorySummary::default();
        let mut next_cp = checkpoints.iter().copied().peekable();
        loop {
            while next_cp.peek() == Some(&self.time) {
                next_cp.next();
                summary.checkpoints.push(self.checkpoint());
            }
            if self.time >= t {
                break;
            }
            match self.step() {
                Ok(()) => {}
                Err(WalkError::WorldLimit { time, .. }) => {
                    summary.aborted_at = Some(time);
                    return Ok(summary);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(summary)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            time: self.time,
            origin_visits: self.odometer(self.origin),
            range_size: self.range_size(),
        }
    }

    /// Runs until `n_max` excursions complete or `step_budget` steps have
    /// been taken. Budget exhaustion is a normal outcome and sets the
    /// `incomplete` flag (the excursion may genuinely never finish).
    pub fn run_excursions(&mut self, n_max: u64, step_budget: u64) -> Result<ExcursionLog, WalkError> {
        let mut log = ExcursionLog::default();
        let mut current: FxHashMap<VertexId, u64> = FxHashMap::default();
        let deadline = self.time + step_budget;
        while (log.excursions.len() as u64) < n_max {
            if self.time >= deadline {
                log.incomplete = true;
                break;
            }
            let before = self.position;
            match self.step() {
                Ok(()) => {}
                Err(e @ WalkError::WorldLimit { .. }) => {
                    log.total_steps = self.time;
                    log.partial = Some(current);
                    log.incomplete = true;
                    return Err(e);
                }
                Err(e) => return Err(e),
            }
            *current.entry(before).or_insert(0) += 1;
            let n_done = log.excursions.len() as u64 + 1;
            if self.position == self.origin && self.origin_returns == n_done * self.origin_degree {
                let rotors = current
                    .keys()
                    .map(|&v| (v, self.rotors[&v]))
                    .collect();
                log.excursions.push(Excursion {
                    completed_at: self.time,
                    visits: std::mem::take(&mut current),
                    rotors,
                });
            }
        }
        if !current.is_empty() {
            log.partial = Some(current);
        }
        log.total_steps = self.time;
        Ok(log)
    }
}
