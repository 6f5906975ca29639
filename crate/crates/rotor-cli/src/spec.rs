//! Declarative experiment specifications.
//!
//! Experiments are described by a JSON document with explicit seeds;
//! nothing is drawn from ambient entropy, so rerunning a spec reproduces
//! every output byte for byte.

use std::path::Path;

use rotor::LatticeKind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("field `{field}`: {message}")]
    Invalid { field: &'static str, message: String },
    #[error("spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read spec: {0}")]
    Io(#[from] std::io::Error),
}

fn invalid(field: &'static str, message: impl Into<String>) -> SpecError {
    SpecError::Invalid {
        field,
        message: message.into(),
    }
}

/// Seed selection: an inclusive-start, exclusive-end range.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeedRange {
    pub start: u64,
    pub end: u64,
}

impl SeedRange {
    pub fn seeds(&self) -> Vec<u64> {
        (self.start..self.end).collect()
    }

    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parses the command-line form `a..b`.
    pub fn parse_cli(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected `start..end`, got `{s}`"))?;
        let start = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
        let end = b.trim().parse().map_err(|e| format!("bad end: {e}"))?;
        if end < start {
            return Err(format!("empty seed range {start}..{end}"));
        }
        Ok(SeedRange { start, end })
    }
}

/// Which lattice an experiment runs on.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeName {
    Z2,
    Line,
    Comb,
    Manhattan,
    FLattice,
}

impl LatticeName {
    pub fn kind(self) -> LatticeKind {
        match self {
            LatticeName::Z2 => LatticeKind::Z2,
            LatticeName::Line => LatticeKind::Line,
            LatticeName::Comb => LatticeKind::Comb,
            LatticeName::Manhattan => LatticeKind::Manhattan,
            LatticeName::FLattice => LatticeKind::FLattice,
        }
    }
}

/// Initial rotor configuration selector. Seeded kinds take their seed from
/// the per-run seed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ConfigName {
    Uniform,
    DiamondZ2,
    PathToOrigin,
    /// Explicit slots loaded from a text file of `x y slot` lines.
    ExplicitFile { path: String },
}

/// One experiment kind with its parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Experiment {
    /// Timed rotor walk on a lattice; one CSV row per checkpoint per seed.
    LatticeRun {
        lattice: LatticeName,
        config: ConfigName,
        #[serde(default)]
        origin: (i64, i64),
        steps: u64,
        #[serde(default)]
        checkpoints: Vec<u64>,
        seeds: SeedRange,
    },
    /// Excursion decomposition; one CSV row per completed excursion.
    ExcursionRun {
        lattice: LatticeName,
        config: ConfigName,
        #[serde(default)]
        origin: (i64, i64),
        max_excursions: u64,
        budget: u64,
        seeds: SeedRange,
    },
    /// The minimal-range configuration on the square lattice: range ratio
    /// at `steps` plus the exact excursion-set check up to `excursions`.
    DiamondRange {
        steps: u64,
        excursions: u64,
        #[serde(default)]
        checkpoints: Vec<u64>,
    },
    /// Diamond shape verdicts for uniform comb runs.
    CombShape {
        n: u32,
        c: f64,
        multiplier: u32,
        seeds: SeedRange,
    },
    /// Return counts of uniform rotor walks on an oriented lattice.
    MirrorReturns {
        lattice: LatticeName,
        t: u64,
        #[serde(default)]
        checkpoints: Vec<u64>,
        seeds: SeedRange,
    },
    /// Cover times, hitting-time functional, and bound checks over a
    /// battery of finite Eulerian graphs.
    CoverBattery { instances: u32, seeds: SeedRange },
    /// Excursion-colored raster of a lattice run.
    Render {
        lattice: LatticeName,
        config: ConfigName,
        #[serde(default)]
        origin: (i64, i64),
        excursions: u64,
        budget: u64,
        seed: u64,
        /// Inclusive window `[x0, y0, x1, y1]`.
        window: (i64, i64, i64, i64),
    },
}

/// Output file names, relative to the `--out` directory.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub json: Option<String>,
    #[serde(default)]
    pub ppm: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default)]
    pub world_limit: Option<i64>,
    pub experiment: Experiment,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: ExperimentSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.name.is_empty() {
            return Err(invalid("name", "must be non-empty"));
        }
        if let Some(limit) = self.world_limit {
            if limit < 100 {
                return Err(invalid("world_limit", format!("{limit} is too small (min 100)")));
            }
        }
        let check_seeds = |seeds: &SeedRange| -> Result<(), SpecError> {
            if seeds.is_empty() {
                Err(invalid("seeds", "range is empty"))
            } else {
                Ok(())
            }
        };
        let check_checkpoints = |cps: &[u64], steps: u64| -> Result<(), SpecError> {
            if !cps.windows(2).all(|w| w[0] < w[1]) {
                return Err(invalid("checkpoints", "must be strictly increasing"));
            }
            if cps.last().is_some_and(|&c| c > steps) {
                return Err(invalid("checkpoints", "exceed the step count"));
            }
            Ok(())
        };
        match &self.experiment {
            Experiment::LatticeRun {
                steps,
                checkpoints,
                seeds,
                config,
                lattice,
                ..
            } => {
                if *steps == 0 {
                    return Err(invalid("steps", "must be positive"));
                }
                check_checkpoints(checkpoints, *steps)?;
                check_seeds(seeds)?;
                validate_config(config, *lattice)?;
            }
            Experiment::ExcursionRun {
                max_excursions,
                budget,
                seeds,
                config,
                lattice,
                ..
            } => {
                if *max_excursions == 0 {
                    return Err(invalid("max_excursions", "must be positive"));
                }
                if *budget == 0 {
                    return Err(invalid("budget", "must be positive"));
                }
                check_seeds(seeds)?;
                validate_config(config, *lattice)?;
            }
            Experiment::DiamondRange {
                steps,
                excursions,
                checkpoints,
            } => {
                if *steps == 0 {
                    return Err(invalid("steps", "must be positive"));
                }
                if *excursions == 0 {
                    return Err(invalid("excursions", "must be positive"));
                }
                check_checkpoints(checkpoints, *steps)?;
            }
            Experiment::CombShape { n, c, multiplier, seeds } => {
                if *n < 2 {
                    return Err(invalid("n", "must be at least 2"));
                }
                if *c <= 0.0 {
                    return Err(invalid("c", "must be positive"));
                }
                if *multiplier == 0 {
                    return Err(invalid("multiplier", "must be positive"));
                }
                check_seeds(seeds)?;
            }
            Experiment::MirrorReturns {
                lattice,
                t,
                checkpoints,
                seeds,
            } => {
                if !matches!(lattice, LatticeName::Manhattan | LatticeName::FLattice) {
                    return Err(invalid("lattice", "must be manhattan or f-lattice"));
                }
                if *t == 0 {
                    return Err(invalid("t", "must be positive"));
                }
                check_checkpoints(checkpoints, *t)?;
                check_seeds(seeds)?;
            }
            Experiment::CoverBattery { instances, seeds } => {
                if *instances == 0 {
                    return Err(invalid("instances", "must be positive"));
                }
                check_seeds(seeds)?;
            }
            Experiment::Render {
                excursions,
                budget,
                window,
                config,
                lattice,
                ..
            } => {
                if *excursions == 0 {
                    return Err(invalid("excursions", "must be positive"));
                }
                if *budget == 0 {
                    return Err(invalid("budget", "must be positive"));
                }
                let (x0, y0, x1, y1) = *window;
                if x1 < x0 || y1 < y0 {
                    return Err(invalid("window", "corners out of order"));
                }
                validate_config(config, *lattice)?;
            }
        }
        Ok(())
    }
}

fn validate_config(config: &ConfigName, lattice: LatticeName) -> Result<(), SpecError> {
    match config {
        ConfigName::DiamondZ2 if lattice != LatticeName::Z2 => {
            Err(invalid("config", "diamond-z2 requires the z2 lattice"))
        }
        ConfigName::PathToOrigin
            if matches!(lattice, LatticeName::Manhattan | LatticeName::FLattice) =>
        {
            Err(invalid("config", "path-to-origin requires a bidirected lattice"))
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_range_cli_parse() {
        assert_eq!(SeedRange::parse_cli("3..10").unwrap(), SeedRange { start: 3, end: 10 });
        assert!(SeedRange::parse_cli("10..3").is_err());
        assert!(SeedRange::parse_cli("abc").is_err());
    }

    #[test]
    fn round_trip_and_validation() {
        let text = r#"{
            "name": "comb",
            "experiment": {
                "type": "comb-shape",
                "n": 100, "c": 4.0, "multiplier": 6,
                "seeds": { "start": 0, "end": 20 }
            },
            "outputs": { "csv": "comb.csv" }
        }"#;
        let spec = ExperimentSpec::from_json(text).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(ExperimentSpec::from_json(&json).unwrap(), spec);
    }

    #[test]
    fn invalid_fields_are_named() {
        let text = r#"{
            "name": "bad",
            "experiment": {
                "type": "comb-shape",
                "n": 1, "c": 4.0, "multiplier": 6,
                "seeds": { "start": 0, "end": 20 }
            }
        }"#;
        let err = ExperimentSpec::from_json(text).unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        let text = r#"{
            "name": "bad",
            "experiment": {
                "type": "diamond-range",
                "steps": 100, "excursions": 5,
                "checkpoints": [5, 200]
            }
        }"#;
        let err = ExperimentSpec::from_json(text).unwrap_err();
        assert!(err.to_string().contains("`checkpoints`"), "{err}");
        let text = r#"{
            "name": "bad",
            "experiment": {
                "type": "lattice-run",
                "lattice": "comb",
                "config": { "type": "diamond-z2" },
                "steps": 100,
                "seeds": { "start": 0, "end": 1 }
            }
        }"#;
        let err = ExperimentSpec::from_json(text).unwrap_err();
        assert!(err.to_string().contains("`config`"), "{err}");
    }
}
