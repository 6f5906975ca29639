//! Reproducible rotor walk experiments: a declarative JSON spec format, a
//! parallel runner with invariant monitors, growth-exponent fits, and
//! deterministic CSV/JSON/PPM reports.

pub mod fit;
pub mod render;
pub mod report;
pub mod runner;
pub mod spec;

pub use fit::{fit_exponent, Fit, FitError};
pub use render::{render_range, RenderError, PALETTE};
pub use runner::{run_experiment, Overrides, RunError, RunOutcome};
pub use spec::{ConfigName, Experiment, ExperimentSpec, LatticeName, Outputs, SeedRange, SpecError};
