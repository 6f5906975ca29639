//! Experiment execution: dispatches a validated spec, fans seeds out in
//! parallel, and writes deterministic CSV/JSON/PPM outputs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rotor::cover::{self, CoverError};
use rotor::comb::{self, CombError, DiamondSpec};
use rotor::invariants;
use rotor::mirror;
use rotor::{
    diamond_config_z2, path_to_origin_config, ConfigError, ConfigProvider, GraphModel,
    LatticeKind, RotorWalk, VertexId, WalkError,
};
use thiserror::Error;

use crate::render::{render_range, RenderError};
use crate::report::{fmt_f64, sha256_hex, write_atomic, JsonReport, Table};
use crate::spec::{ConfigName, Experiment, ExperimentSpec, SeedRange, SpecError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] rotor::GraphError),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Mirror(#[from] mirror::MirrorError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Command-line overrides applied on top of the spec.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seeds: Option<SeedRange>,
    pub budget: Option<u64>,
    pub world_limit: Option<i64>,
}

/// What a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Invariant monitors that tripped during the run; non-empty means
    /// exit code 2.
    pub violations: Vec<String>,
}

fn lattice_model(kind: LatticeKind, world_limit: Option<i64>) -> GraphModel {
    match world_limit {
        Some(limit) => GraphModel::lattice_with_limit(kind, limit),
        None => GraphModel::lattice(kind),
    }
}

fn make_config(
    name: &ConfigName,
    g: &GraphModel,
    origin: VertexId,
    seed: u64,
) -> Result<ConfigProvider, RunError> {
    Ok(match name {
        ConfigName::Uniform => ConfigProvider::uniform(seed),
        ConfigName::DiamondZ2 => diamond_config_z2(),
        ConfigName::PathToOrigin => path_to_origin_config(g, origin, seed)?,
        ConfigName::ExplicitFile { path } => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.into(),
                source,
            })?;
            ConfigProvider::parse_explicit(&text)?
        }
    })
}

/// Runs the experiment and writes the requested outputs under `out_dir`.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    overrides: Overrides,
) -> Result<RunOutcome, RunError> {
    spec.validate()?;
    let world_limit = overrides.world_limit.or(spec.world_limit);
    let mut violations: Vec<String> = Vec::new();
    let mut ppm_bytes: Option<Vec<u8>> = None;

    let table = match &spec.experiment {
        Experiment::LatticeRun {
            lattice,
            config,
            origin,
            steps,
            checkpoints,
            seeds,
        } => {
            let seeds = overrides.seeds.unwrap_or(*seeds);
            let steps = overrides.budget.unwrap_or(*steps);
            let g = lattice_model(lattice.kind(), world_limit);
            let o = VertexId::xy(origin.0, origin.1);
            let transient = matches!(config, ConfigName::PathToOrigin);
            let results: Vec<Result<(Vec<Vec<String>>, Vec<String>), RunError>> = seeds
                .seeds()
                .par_iter()
                .map(|&seed| {
                    let cfg = make_config(config, &g, o, seed)?;
                    let mut walk = RotorWalk::new(&g, &cfg, o)?;
                    let mut rows = Vec::new();
                    let mut local_violations = Vec::new();
                    let mut stops: Vec<u64> = checkpoints.clone();
                    if stops.last() != Some(&steps) {
                        stops.push(steps);
                    }
                    for &cp in &stops {
                        walk.run_steps(cp, &[])?;
                        rows.push(vec![
                            seed.to_string(),
                            walk.time().to_string(),
                            walk.odometer(o).to_string(),
                            walk.range_size().to_string(),
                        ]);
                        for v in invariants::check_range_bounds(&g, &walk)? {
                            local_violations.push(format!("seed {seed}: {v}"));
                        }
                        if transient {
                            for v in invariants::check_transient_bounds(&g, &walk)? {
                                local_violations.push(format!("seed {seed}: {v}"));
                            }
                        }
                    }
                    Ok((rows, local_violations))
                })
                .collect();
            let mut table = Table::new(vec!["seed", "t", "u_t_o", "range_size"]);
            for r in results {
                let (rows, vs) = r?;
                table.rows.extend(rows);
                violations.extend(vs);
            }
            table
        }

        Experiment::ExcursionRun {
            lattice,
            config,
            origin,
            max_excursions,
            budget,
            seeds,
        } => {
            let seeds = overrides.seeds.unwrap_or(*seeds);
            let budget = overrides.budget.unwrap_or(*budget);
            let g = lattice_model(lattice.kind(), world_limit);
            let o = VertexId::xy(origin.0, origin.1);
            let results: Vec<Result<(Vec<Vec<String>>, Vec<String>), RunError>> = seeds
                .seeds()
                .par_iter()
                .map(|&seed| {
                    let cfg = make_config(config, &g, o, seed)?;
                    let mut walk = RotorWalk::new(&g, &cfg, o)?;
                    let log = walk.run_excursions(*max_excursions, budget)?;
                    let mut rows = Vec::new();
                    for (i, exc) in log.excursions.iter().enumerate() {
                        rows.push(vec![
                            seed.to_string(),
                            (i + 1).to_string(),
                            exc.completed_at.to_string(),
                            exc.visits.len().to_string(),
                            "true".to_string(),
                        ]);
                    }
                    if log.incomplete {
                        rows.push(vec![
                            seed.to_string(),
                            (log.excursions.len() + 1).to_string(),
                            log.total_steps.to_string(),
                            log.partial.as_ref().map_or(0, |p| p.len()).to_string(),
                            "false".to_string(),
                        ]);
                    }
                    let mut local_violations = Vec::new();
                    for v in invariants::check_excursion_invariants(&g, o, &log)? {
                        local_violations.push(format!("seed {seed}: {v}"));
                    }
                    for v in invariants::check_time_conservation(&walk) {
                        local_violations.push(format!("seed {seed}: {v}"));
                    }
                    Ok((rows, local_violations))
                })
                .collect();
            let mut table = Table::new(vec!["seed", "n", "t_n", "set_size", "complete"]);
            for r in results {
                let (rows, vs) = r?;
                table.rows.extend(rows);
                violations.extend(vs);
            }
            table
        }

        Experiment::DiamondRange {
            steps,
            excursions,
            checkpoints,
        } => {
            let g = lattice_model(LatticeKind::Z2, world_limit);
            let o = VertexId::xy(0, 0);
            let cfg = diamond_config_z2();
            let mut table = Table::new(vec!["t", "u_t_o", "range_size", "range_ratio"]);
            let mut walk = RotorWalk::new(&g, &cfg, o)?;
            let mut stops: Vec<u64> = checkpoints.clone();
            if stops.last() != Some(steps) {
                stops.push(*steps);
            }
            for &cp in &stops {
                walk.run_steps(cp, &[])?;
                let ratio = walk.range_size() as f64 / (walk.time() as f64).powf(2.0 / 3.0);
                table.push(vec![
                    walk.time().to_string(),
                    walk.odometer(o).to_string(),
                    walk.range_size().to_string(),
                    fmt_f64(ratio),
                ]);
                for v in invariants::check_range_bounds(&g, &walk)? {
                    violations.push(v.to_string());
                }
            }
            // The excursion sets must be exactly the directed balls.
            let mut walk = RotorWalk::new(&g, &cfg, o)?;
            let budget = 16 * excursions.pow(3) + 1000;
            let log = walk.run_excursions(*excursions, budget)?;
            if log.incomplete {
                violations.push(format!(
                    "diamond-excursions: only {} of {excursions} completed in {budget} steps",
                    log.excursions.len()
                ));
            }
            if let Some(n) = invariants::check_excursions_are_balls(&g, o, &log)? {
                violations.push(format!("diamond-excursions: set {n} differs from B(o,{n})"));
            }
            table
        }

        Experiment::CombShape { n, c, multiplier, seeds } => {
            let seeds = overrides.seeds.unwrap_or(*seeds);
            let g = lattice_model(LatticeKind::Comb, world_limit);
            let o = VertexId::xy(0, 0);
            let dspec = DiamondSpec::new(*n, *c);
            let t = dspec.steps();
            let results: Vec<Result<Vec<String>, RunError>> = seeds
                .seeds()
                .par_iter()
                .map(|&seed| {
                    let cfg = ConfigProvider::uniform(seed);
                    let mut walk = RotorWalk::new(&g, &cfg, o)?;
                    walk.run_steps(t, &[])?;
                    let list = walk.range_sorted();
                    let verdict = comb::shape_check(
                        &|v| walk.range_contains(v),
                        &list,
                        dspec,
                        *multiplier,
                        t,
                    )?;
                    Ok(vec![
                        seed.to_string(),
                        n.to_string(),
                        fmt_f64(*c),
                        t.to_string(),
                        verdict.inside_ok.to_string(),
                        verdict.outside_ok.to_string(),
                        walk.range_size().to_string(),
                    ])
                })
                .collect();
            let mut table = Table::new(vec![
                "seed",
                "n",
                "c",
                "t",
                "inside_ok",
                "outside_ok",
                "range_size",
            ]);
            for r in results {
                table.push(r?);
            }
            table
        }

        Experiment::MirrorReturns {
            lattice,
            t,
            checkpoints,
            seeds,
        } => {
            let seeds = overrides.seeds.unwrap_or(*seeds);
            let t = overrides.budget.unwrap_or(*t);
            let rows = mirror::return_count_experiment(
                lattice.kind(),
                &seeds.seeds(),
                t,
                checkpoints,
            )?;
            let mut table = Table::new(vec![
                "seed",
                "lattice",
                "t",
                "u_t_o",
                "range_size",
                "aborted",
            ]);
            for row in rows {
                for &(cp_t, u) in &row.origin_visits {
                    table.push(vec![
                        row.seed.to_string(),
                        lattice.kind().name().to_string(),
                        cp_t.to_string(),
                        u.to_string(),
                        row.range_size.to_string(),
                        row.aborted.to_string(),
                    ]);
                }
            }
            table
        }

        Experiment::CoverBattery { instances, seeds } => {
            let seeds = overrides.seeds.unwrap_or(*seeds);
            let results: Vec<Result<(Vec<Vec<String>>, Vec<String>), RunError>> = (0..*instances)
                .into_par_iter()
                .map(|i| {
                    let seed = seeds.start + i as u64;
                    let (id, fg) = battery_instance(i, seed);
                    cover_battery_rows(&id, fg, seed)
                })
                .collect();
            let mut table = Table::new(vec![
                "graph_id",
                "n",
                "m_directed",
                "diameter",
                "config",
                "t_vertex",
                "t_edge",
                "k",
                "bound_vertex",
                "bound_edge",
                "k_corollary",
                "fs_vertex",
                "fs_edge",
            ]);
            for r in results {
                let (rows, vs) = r?;
                table.rows.extend(rows);
                violations.extend(vs);
            }
            table
        }

        Experiment::Render {
            lattice,
            config,
            origin,
            excursions,
            budget,
            seed,
            window,
        } => {
            let g = lattice_model(lattice.kind(), world_limit);
            let o = VertexId::xy(origin.0, origin.1);
            let cfg = make_config(config, &g, o, *seed)?;
            let mut walk = RotorWalk::new(&g, &cfg, o)?;
            let budget = overrides.budget.unwrap_or(*budget);
            let log = walk.run_excursions(*excursions, budget)?;
            // Label each vertex with the excursion that first reached it.
            let boundaries: Vec<u64> = log.excursions.iter().map(|e| e.completed_at).collect();
            let label = |x: i64, y: i64| -> Option<u32> {
                let first = walk.first_visit(VertexId::xy(x, y))?;
                let idx = boundaries.partition_point(|&b| b < first);
                Some(idx as u32)
            };
            ppm_bytes = Some(render_range(*window, label)?);
            let mut table = Table::new(vec!["seed", "excursions_completed", "t", "range_size"]);
            table.push(vec![
                seed.to_string(),
                log.excursions.len().to_string(),
                walk.time().to_string(),
                walk.range_size().to_string(),
            ]);
            table
        }
    };

    // Write outputs.
    let spec_hash = sha256_hex(serde_json::to_string(spec).unwrap().as_bytes());
    let mut files = Vec::new();
    if let Some(name) = &spec.outputs.csv {
        let path = out_dir.join(name);
        write_atomic(&path, table.to_csv().as_bytes()).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        files.push(path);
    }
    if let Some(name) = &spec.outputs.json {
        let report = JsonReport {
            name: spec.name.clone(),
            version: env!("CARGO_PKG_VERSION"),
            spec_sha256: spec_hash,
            columns: table.columns.clone(),
            rows: table.to_json_rows(),
            violations: violations.clone(),
        };
        let path = out_dir.join(name);
        let body = serde_json::to_string_pretty(&report).unwrap();
        write_atomic(&path, body.as_bytes()).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        files.push(path);
    }
    if let Some(name) = &spec.outputs.ppm {
        if let Some(bytes) = &ppm_bytes {
            let path = out_dir.join(name);
            write_atomic(&path, bytes).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            files.push(path);
        }
    }
    Ok(RunOutcome { files, violations })
}

/// The battery mixes bidirected random graphs, cycles, thick cycles, and
/// complete graphs, all of at most 60 vertices.
pub fn battery_instance(i: u32, seed: u64) -> (String, rotor::FiniteGraph) {
    use rotor::graph::{bidirected_complete, bidirected_cycle, random_eulerian};
    let h = rotor::rng::mix3(seed, i as u64, 0);
    match i % 4 {
        0 => {
            let n = 4 + (h % 40) as u32;
            let extra = (h >> 32) as u32 % n;
            (format!("random-{i}"), random_eulerian(n, extra, false, seed))
        }
        1 => {
            let n = 3 + (h % 58) as u32;
            (format!("cycle-{i}"), bidirected_cycle(n))
        }
        2 => {
            let len = 3 + h % 6;
            let width = 1 + (h >> 32) % 5;
            (
                format!("thick-{i}"),
                rotor::build_thick_cycle(len, width).unwrap(),
            )
        }
        _ => {
            let n = 3 + (h % 58) as u32;
            (format!("complete-{i}"), bidirected_complete(n))
        }
    }
}

fn cover_battery_rows(
    id: &str,
    fg: rotor::FiniteGraph,
    seed: u64,
) -> Result<(Vec<Vec<String>>, Vec<String>), RunError> {
    let n = fg.vertex_count() as u32;
    let m = fg.edge_count();
    let k = cover::compute_k(&fg)?;
    let g = GraphModel::finite(fg)?;
    let diameter = g.diameter()?;
    let d = diameter as u64;
    let origin = VertexId::index((seed % n as u64) as u32);
    let tree_root = VertexId::index(((seed >> 8) % n as u64) as u32);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for (config_name, cfg) in [
        ("uniform", ConfigProvider::uniform(seed)),
        ("tree", cover::tree_to_origin_config(&g, tree_root)?),
    ] {
        let report = cover::cover_times(&g, &cfg, origin, (d + 1) * m + 10)?;
        let (Some(tv), Some(te)) = (report.t_vertex, report.t_edge) else {
            violations.push(format!("{id}/{config_name}: cover incomplete within (D+1)#E"));
            continue;
        };
        let bound_vertex = tv <= d * m;
        let bound_edge = te <= (d + 1) * m;
        let k_corollary = k >= 0.25 * (d * m) as f64 - 1.0;
        let fs_vertex = (tv as f64) <= k + 1.0 + 1e-6;
        let fs_edge = (te as f64) <= 3.0 * k + 1e-6;
        for (ok, rule) in [
            (bound_vertex, "vertex-cover-bound"),
            (bound_edge, "edge-cover-bound"),
            (k_corollary, "k-lower-bound"),
            (fs_vertex, "fs-vertex-bound"),
            (fs_edge, "fs-edge-bound"),
        ] {
            if !ok {
                violations.push(format!("{id}/{config_name}: {rule} violated"));
            }
        }
        rows.push(vec![
            id.to_string(),
            n.to_string(),
            m.to_string(),
            diameter.to_string(),
            config_name.to_string(),
            tv.to_string(),
            te.to_string(),
            fmt_f64(k),
            bound_vertex.to_string(),
            bound_edge.to_string(),
            k_corollary.to_string(),
            fs_vertex.to_string(),
            fs_edge.to_string(),
        ]);
    }
    Ok((rows, violations))
}
