//! Random instances, conjecture trials, the verification suite, file formats
//! and figures.

mod conjecture;
mod figure;
pub mod formats;
mod sampling;
mod suite;

pub use conjecture::{run_conjecture, ConjectureReport, TrialConfig, Violation};
pub use figure::{emit_figure, render_figure, FigureError, FigureKind};
pub use formats::{Input, ParseError};
pub use sampling::{
    sample_digraph, sample_integer_digraph, sample_mixed, sample_standardized, sample_with_mode, trial_rng, SampleMode,
};
pub use suite::run_verify_suite;
