//! Checkers for the structural facts every rotor walk must satisfy.
//!
//! These power both the test batteries and the CLI's runtime monitors:
//! excursion visit bounds, saturation on previously visited sets, growth of
//! the excursion sets, ball containment, rotor stabilization, and the
//! odometer/range bounds that hold pointwise at any time.

use crate::engine::{ExcursionLog, RotorWalk};
use crate::graph::{GraphError, GraphModel, VertexId};
use rustc_hash::FxHashSet;

/// One violated invariant, with enough context to locate it.
#[derive(Clone, Debug)]
pub struct Violation {
    pub rule: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// Checks the excursion structure of a completed log:
///
/// * per-excursion visits never exceed the degree;
/// * every vertex of `A_n` is visited exactly `deg` times in excursion
///   `n + 1`;
/// * `A_{n+1}` contains `A_n` and its out-neighborhood;
/// * `B(o, n)` is contained in `A_n`;
/// * rotors over `A_n` never change after `T(n)`.
pub fn check_excursion_invariants(
    g: &GraphModel,
    origin: VertexId,
    log: &ExcursionLog,
) -> Result<Vec<Violation>, GraphError> {
    let mut violations = Vec::new();
    let completed = log.excursions.len() as u32;
    for (i, exc) in log.excursions.iter().enumerate() {
        let n = i + 1;
        for (&v, &count) in &exc.visits {
            let deg = g.degree(v)? as u64;
            if count > deg {
                violations.push(Violation {
                    rule: "visits-exceed-degree",
                    detail: format!("excursion {n}: {v:?} visited {count} > deg {deg}"),
                });
            }
        }
    }
    if let Some(partial) = &log.partial {
        for (&v, &count) in partial {
            let deg = g.degree(v)? as u64;
            if count > deg {
                violations.push(Violation {
                    rule: "visits-exceed-degree",
                    detail: format!("unfinished excursion: {v:?} visited {count} > deg {deg}"),
                });
            }
        }
    }
    for i in 1..log.excursions.len() {
        let prev = &log.excursions[i - 1];
        let next = &log.excursions[i];
        // Saturation on A_n during excursion n + 1.
        for &v in prev.visits.keys() {
            let deg = g.degree(v)? as u64;
            let count = next.visits.get(&v).copied().unwrap_or(0);
            if count != deg {
                violations.push(Violation {
                    rule: "saturation-on-visited-set",
                    detail: format!(
                        "excursion {}: {v:?} visited {count} != deg {deg}",
                        i + 1
                    ),
                });
            }
        }
        // Growth: A_{n+1} contains A_n and its out-neighborhood.
        for &v in prev.visits.keys() {
            for e in g.out_edges(v)? {
                if !next.visits.contains_key(&e.head) {
                    violations.push(Violation {
                        rule: "excursion-set-growth",
                        detail: format!(
                            "excursion {}: boundary vertex {:?} not visited",
                            i + 1,
                            e.head
                        ),
                    });
                }
            }
        }
        // Stabilization: rotors over A_n agree at T(n) and T(n + 1); by
        // induction along consecutive pairs they never change again.
        for (&v, &slot) in &prev.rotors {
            if next.rotors.get(&v) != Some(&slot) {
                violations.push(Violation {
                    rule: "rotor-stabilization",
                    detail: format!("rotor at {v:?} moved after excursion {}", i),
                });
            }
        }
    }
    // Ball containment: B(o, n) inside A_n.
    if completed > 0 {
        let ball = g.ball(origin, completed)?;
        for (i, exc) in log.excursions.iter().enumerate() {
            let n = (i + 1) as u32;
            let missing = ball
                .vertices()
                .filter(|&&v| ball.contains_within(v, n) && !exc.contains(v))
                .count();
            if missing > 0 {
                violations.push(Violation {
                    rule: "ball-containment",
                    detail: format!("excursion {n}: {missing} vertices of B(o,{n}) unvisited"),
                });
            }
        }
    }
    Ok(violations)
}

/// Checks the pointwise odometer and range bounds at the walk's current
/// time `t >= 1`:
///
/// * `u_t(o) < deg(o) * Winv(t)`;
/// * `u_t(x) <= u_t(o) + deg(x)` for every visited `x` (the origin is
///   assumed to have maximal degree, which every battery arranges);
/// * `#R_t >= t / (deg(o) * Winv(t) + Delta_t - 1)` with `Delta_t` the
///   largest degree in `B(o, t)`.
pub fn check_range_bounds(g: &GraphModel, walk: &RotorWalk) -> Result<Vec<Violation>, GraphError> {
    let mut violations = Vec::new();
    let t = walk.time();
    if t == 0 {
        return Ok(violations);
    }
    let origin = walk.origin();
    let deg_o = g.degree(origin)? as u64;
    let w_inv = g.w_inverse(origin, t)? as u64;
    let u_o = walk.odometer(origin);
    if u_o >= deg_o * w_inv {
        violations.push(Violation {
            rule: "origin-visit-bound",
            detail: format!("t={t}: u_t(o)={u_o} >= deg(o)*Winv(t)={}", deg_o * w_inv),
        });
    }
    for (&v, &u_v) in walk.odometer_map() {
        let deg = g.degree(v)? as u64;
        if u_v > u_o + deg {
            violations.push(Violation {
                rule: "visit-spread-bound",
                detail: format!("t={t}: u_t({v:?})={u_v} > u_t(o)+deg={}", u_o + deg),
            });
        }
    }
    let delta = g.max_degree_in_ball(origin, t)? as u64;
    let denom = deg_o * w_inv + delta - 1;
    // #R_t >= t / denom, compared without rounding.
    if walk.range_size() * denom < t {
        violations.push(Violation {
            rule: "range-lower-bound",
            detail: format!(
                "t={t}: #R_t={} < t/(deg(o)*Winv(t)+Delta-1)={:.3}",
                walk.range_size(),
                t as f64 / denom as f64
            ),
        });
    }
    Ok(violations)
}

/// Checks the transient-configuration bounds for a walk whose initial
/// rotors contain an infinite path toward the origin: `u_t(o) < deg(o)`
/// always, and `#R_t >= t / Delta_t` whenever `t` is a multiple of
/// `Delta_t` (between multiples the literal ratio can dip by a fraction).
pub fn check_transient_bounds(g: &GraphModel, walk: &RotorWalk) -> Result<Vec<Violation>, GraphError> {
    let mut violations = Vec::new();
    let t = walk.time();
    if t == 0 {
        return Ok(violations);
    }
    let origin = walk.origin();
    let deg_o = g.degree(origin)? as u64;
    let u_o = walk.odometer(origin);
    if u_o >= deg_o {
        violations.push(Violation {
            rule: "transient-origin-bound",
            detail: format!("t={t}: u_t(o)={u_o} >= deg(o)={deg_o}"),
        });
    }
    let delta = g.max_degree_in_ball(origin, t)? as u64;
    if t % delta == 0 && walk.range_size() * delta < t {
        violations.push(Violation {
            rule: "transient-range-bound",
            detail: format!("t={t}: #R_t={} < t/Delta={}", walk.range_size(), t / delta),
        });
    }
    Ok(violations)
}

/// Exact time conservation: the odometer sums to `t`.
pub fn check_time_conservation(walk: &RotorWalk) -> Vec<Violation> {
    let total: u64 = walk.odometer_map().values().sum();
    if total != walk.time() {
        vec![Violation {
            rule: "time-conservation",
            detail: format!("odometer mass {total} != t {}", walk.time()),
        }]
    } else {
        Vec::new()
    }
}

/// The excursion sets of a diamond-configuration walk on the square
/// lattice must be exactly the balls `B(o, n)`; returns the first failing
/// excursion index, if any.
pub fn check_excursions_are_balls(
    g: &GraphModel,
    origin: VertexId,
    log: &ExcursionLog,
) -> Result<Option<u32>, GraphError> {
    let n_max = log.excursions.len() as u32;
    if n_max == 0 {
        return Ok(None);
    }
    let ball = g.ball(origin, n_max)?;
    for (i, exc) in log.excursions.iter().enumerate() {
        let n = (i + 1) as u32;
        if exc.visits.len() != ball.size_at(n) {
            return Ok(Some(n));
        }
        let all_inside: FxHashSet<_> = exc.visits.keys().copied().collect();
        for v in all_inside {
            if !ball.contains_within(v, n) {
                return Ok(Some(n));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigProvider;
    use crate::graph::{bidirected_cycle, LatticeKind};

    #[test]
    fn clean_run_has_no_violations() {
        let g = GraphModel::Finite(bidirected_cycle(6));
        let cfg = ConfigProvider::uniform(9);
        let o = VertexId::index(0);
        let mut walk = RotorWalk::new(&g, &cfg, o).unwrap();
        let log = walk.run_excursions(5, 10_000).unwrap();
        assert!(!log.incomplete);
        let violations = check_excursion_invariants(&g, o, &log).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
        assert!(check_range_bounds(&g, &walk).unwrap().is_empty());
        assert!(check_time_conservation(&walk).is_empty());
    }

    #[test]
    fn diamond_excursions_are_balls() {
        let g = GraphModel::lattice(LatticeKind::Z2);
        let cfg = crate::config::diamond_config_z2();
        let o = VertexId::xy(0, 0);
        let mut walk = RotorWalk::new(&g, &cfg, o).unwrap();
        let log = walk.run_excursions(10, 100_000).unwrap();
        assert!(!log.incomplete);
        assert_eq!(check_excursions_are_balls(&g, o, &log).unwrap(), None);
    }

    #[test]
    fn doctored_log_is_flagged() {
        let g = GraphModel::Finite(bidirected_cycle(5));
        let cfg = ConfigProvider::uniform(2);
        let o = VertexId::index(0);
        let mut walk = RotorWalk::new(&g, &cfg, o).unwrap();
        let mut log = walk.run_excursions(3, 10_000).unwrap();
        // Inflate one visit count beyond the degree.
        let v = VertexId::index(1);
        *log.excursions[0].visits.get_mut(&v).unwrap() = 99;
        let violations = check_excursion_invariants(&g, o, &log).unwrap();
        assert!(violations.iter().any(|v| v.rule == "visits-exceed-degree"));
    }
}
