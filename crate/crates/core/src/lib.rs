//! Learning declarative domain-specific heuristics for answer set solvers.
//!
//! The pipeline turns an ASP encoding plus solved small instances into an
//! inductive learning task ([`taskgen`]), learns definite rules
//! ([`learner`]), rewrites them as `#heuristic` directives ([`heuremit`])
//! and measures their effect on solution quality ([`bench`]).

pub mod analysis;
pub mod asp_core;
pub mod bench;
pub mod cli;
pub mod diag;
pub mod heuremit;
pub mod learner;
pub mod taskgen;
