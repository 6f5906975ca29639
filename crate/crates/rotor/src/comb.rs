//! Comb-specific analysis: zigzag marks, the predicted odometer, and
//! diamond shape verdicts for the range.
//!
//! Watched only at its x-axis visits, a rotor walk on the comb is a rotor
//! walk on the integers. The axis vertices whose rotors will send the
//! walker west before east (for `x > 0`; mirrored on the negative side)
//! are the turning points of that projected walk, and consecutive marks
//! sit two apart on average. The same structure holds on each tooth. The
//! resulting prediction for the odometer after `m` excursions is
//! `f_m(x, y) = (m - |x|/2 - |y|/2)^+`, whose level sets are diamonds.

use thiserror::Error;

use crate::config::{ConfigError, ConfigProvider};
use crate::graph::{Dir, GraphError, GraphModel, LatticeKind, VertexId};

#[derive(Debug, Error)]
pub enum CombError {
    #[error("operation requires the comb lattice")]
    NotComb,
    #[error("step count {t} does not match floor(16/3 n^3) = {expected} for n = {n}")]
    MismatchedTime { t: u64, n: u32, expected: u64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Positions of the direction-reversing rotors on the axis, scanned
/// outward from the origin.
#[derive(Clone, Debug, Default)]
pub struct ZigzagMarks {
    /// `x_1 < x_2 < ...` on the positive axis.
    pub right: Vec<i64>,
    /// `x_{-1} > x_{-2} > ...`, actual (negative) coordinates, decreasing.
    pub left: Vec<i64>,
    /// Cleared when the scan window ran out before finding the requested
    /// number of marks.
    pub complete: bool,
}

/// Shape parameters: diamond index `n` and slack `a = sqrt(c n ln n)`.
#[derive(Clone, Copy, Debug)]
pub struct DiamondSpec {
    pub n: u32,
    pub c: f64,
}

impl DiamondSpec {
    pub fn new(n: u32, c: f64) -> Self {
        assert!(n >= 2 && c > 0.0);
        Self { n, c }
    }

    /// The slack `a`.
    pub fn slack(&self) -> f64 {
        (self.c * self.n as f64 * (self.n as f64).ln()).sqrt()
    }

    /// The matching step count `floor(16/3 n^3)`.
    pub fn steps(&self) -> u64 {
        16 * (self.n as u64).pow(3) / 3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShapeVerdict {
    /// Every vertex of the inner diamond is in the range.
    pub inside_ok: bool,
    /// The range is contained in the outer diamond.
    pub outside_ok: bool,
}

/// Whether the future exit order of the rotor at `v` reaches `first`
/// before `second`, iterating the cyclic mechanism from the initial slot.
fn exits_before(
    cfg: &ConfigProvider,
    g: &GraphModel,
    v: VertexId,
    first: Dir,
    second: Dir,
) -> Result<bool, CombError> {
    let d = g.out_degree(v)?;
    let start = cfg.initial_slot(g, v)?;
    let fa = g.slot_of_dir(v, first)?;
    let fb = g.slot_of_dir(v, second)?;
    // Steps until each slot comes up, in 1..=d.
    let steps = |target: u32| (target + d - start - 1) % d + 1;
    Ok(steps(fa) < steps(fb))
}

/// Axis mark predicate: for `x > 0`, the rotor at `(x, 0)` sends the
/// walker west before east; mirrored for `x < 0`.
pub fn is_axis_mark(cfg: &ConfigProvider, g: &GraphModel, x: i64) -> Result<bool, CombError> {
    if g.lattice_kind() != Some(LatticeKind::Comb) {
        return Err(CombError::NotComb);
    }
    let v = VertexId::xy(x, 0);
    if x > 0 {
        exits_before(cfg, g, v, Dir::West, Dir::East)
    } else {
        exits_before(cfg, g, v, Dir::East, Dir::West)
    }
}

/// Tooth mark predicate: for `y > 0` on the tooth through `(k, 0)`, the
/// rotor at `(k, y)` sends the walker down before up; mirrored below.
pub fn is_tooth_mark(cfg: &ConfigProvider, g: &GraphModel, k: i64, y: i64) -> Result<bool, CombError> {
    if g.lattice_kind() != Some(LatticeKind::Comb) {
        return Err(CombError::NotComb);
    }
    let v = VertexId::xy(k, y);
    if y > 0 {
        exits_before(cfg, g, v, Dir::South, Dir::North)
    } else {
        exits_before(cfg, g, v, Dir::North, Dir::South)
    }
}

/// Scans the axis out to `window` on both sides, collecting up to `count`
/// marks per side.
pub fn extract_marks(
    cfg: &ConfigProvider,
    g: &GraphModel,
    window: i64,
    count: usize,
) -> Result<ZigzagMarks, CombError> {
    let mut marks = ZigzagMarks {
        complete: true,
        ..Default::default()
    };
    for x in 1..=window {
        if marks.right.len() == count {
            break;
        }
        if is_axis_mark(cfg, g, x)? {
            marks.right.push(x);
        }
    }
    for x in 1..=window {
        if marks.left.len() == count {
            break;
        }
        if is_axis_mark(cfg, g, -x)? {
            marks.left.push(-x);
        }
    }
    if marks.right.len() < count || marks.left.len() < count {
        marks.complete = false;
    }
    Ok(marks)
}

/// `f_m(x, y) = (m - |x|/2 - |y|/2)^+`, the predicted number of full rotor
/// turns after `m` excursions. Exact: the value is a half-integer.
pub fn predicted_odometer(m: u32, x: i64, y: i64) -> f64 {
    predicted_odometer_real(m as f64, x, y)
}

/// Same with a real-valued excursion index, for slack-shifted bounds.
pub fn predicted_odometer_real(m: f64, x: i64, y: i64) -> f64 {
    (m - x.abs() as f64 / 2.0 - y.abs() as f64 / 2.0).max(0.0)
}

/// The weighted mass `sum_z deg(z) f_m(z)` with the comb degrees: 4 on the
/// axis, 2 on the teeth. Exact integer arithmetic by direct summation over
/// diamond layers.
pub fn f_norm(m: u32) -> u64 {
    let m = m as u64;
    if m == 0 {
        return 0;
    }
    // Layer l = |x| + |y| contributes (sum of degrees) * (2m - l) / 2.
    // Degrees on layer 0: just the origin, degree 4. On layer l >= 1: two
    // axis vertices (degree 4) and 4l - 2 tooth vertices (degree 2).
    let mut total = 4 * m;
    for l in 1..2 * m {
        let deg_sum = 8 + (4 * l - 2) * 2;
        total += deg_sum * (2 * m - l) / 2;
    }
    total
}

/// Checks the range of a comb run of exactly `spec.steps()` steps against
/// the diamonds `D_{n -/+ multiplier * a}`, `D_r = {|x| + |y| < r}`.
///
/// `range` answers membership; `range_list` enumerates the range.
pub fn shape_check(
    range: &dyn Fn(VertexId) -> bool,
    range_list: &[VertexId],
    spec: DiamondSpec,
    multiplier: u32,
    t: u64,
) -> Result<ShapeVerdict, CombError> {
    if t != spec.steps() {
        return Err(CombError::MismatchedTime {
            t,
            n: spec.n,
            expected: spec.steps(),
        });
    }
    let a = spec.slack();
    let inner = spec.n as f64 - multiplier as f64 * a;
    let outer = spec.n as f64 + multiplier as f64 * a;
    let mut inside_ok = true;
    if inner > 0.0 {
        let bound = inner.ceil() as i64;
        'scan: for x in -bound..=bound {
            for y in -(bound - x.abs())..=(bound - x.abs()) {
                if (x.abs() + y.abs()) as f64 >= inner {
                    continue;
                }
                if !range(VertexId::xy(x, y)) {
                    inside_ok = false;
                    break 'scan;
                }
            }
        }
    }
    let mut outside_ok = true;
    for v in range_list {
        let (x, y) = v.as_xy().ok_or(CombError::NotComb)?;
        if (x.abs() + y.abs()) as f64 >= outer {
            outside_ok = false;
            break;
        }
    }
    Ok(ShapeVerdict {
        inside_ok,
        outside_ok,
    })
}
