//! One-sided relaxed Bell-CHSH bounds.
//!
//! A hidden-variable model for the two-party, two-setting CHSH scenario may
//! relax measurement independence, outcome determinism and no-signaling on
//! one party. This crate measures those relaxations for explicit models,
//! evaluates the largest CHSH value they permit, builds models that reach it,
//! and checks the closed form against an exhaustive search.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod hvmodel;
pub mod metrics;
pub mod oracle;
pub mod saturate;

pub use bounds::{
    attainable_bound, chsh_bound, effective_shift, feasible, ld_bound, mi_bound, min_indeterminism_for_violation,
    min_md_for_violation, min_signaling_for_violation, regime, tradeoff_grid, BoundResult, Figure, Regime,
    TradeoffTable, SINGLET_VIOLATION,
};
pub use error::{Error, Result};
pub use hvmodel::{sample_experiment, Context, HiddenVariableModel, LocalDecomposition, SampleReport};
pub use metrics::{profile, RelaxationProfile};
pub use oracle::{check_tightness, max_chsh_search, random_constrained_model, SearchReport, TightnessReport};
pub use saturate::{combined_saturating_model, mi_saturating_model, table1_model};
