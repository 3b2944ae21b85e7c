//! Broadcast independence in oriented circulant graphs `C(n; 1, a)`.
//!
//! A broadcast `f` is independent when no broadcasting vertex lies within
//! reach of another one: `d(u, v) > f(u)` for all distinct `u, v` with
//! `f(u), f(v) > 0`, and `f(v) <= e(v)`. β_b is the largest possible cost.

pub mod bounds;
pub mod broadcast;
pub mod circulant;
pub mod constructions;
pub mod distance;
pub mod error;
pub mod regime;
pub mod regions;
pub mod sample;
pub mod solver;
pub mod transforms;

pub use bounds::{global_upper_bound, predicted_beta, report, Bound, BoundReport, CapRegime};
pub use broadcast::{check_independent, is_independent, stats, Broadcast, BroadcastStats, Violation};
pub use circulant::{Circulant, CirculantSpec};
pub use constructions::{ConstructionFamily, ConstructionRecord};
pub use distance::{DistanceTable, UNREACHABLE};
pub use error::{Error, Result};
pub use regime::{classify_regime, lemma_cap, CapProvenance, RegimeFamily, RegimeTag};
pub use solver::{beta_b, beta_b_two_step, branch_and_bound_beta, brute_force_beta, SolveOptions, SolveResult};
pub use transforms::{TransformError, RewriteTrace};
