//! Exact computation of β_b: an exhaustive oracle and a branch-and-bound
//! search.

mod bnb;
mod brute;

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use serde::Serialize;

pub use bnb::branch_and_bound_beta;
pub use brute::brute_force_beta;

use crate::bounds::{self, BoundReport, CapRegime};
use crate::broadcast::Broadcast;
use crate::circulant::{Circulant, CirculantSpec};
use crate::distance::DistanceTable;
use crate::error::{Error, Result};
use crate::regime::{classify_regime, lemma_cap, CapProvenance};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(30);

/// Counting propositions usable for pruning: the solver applies them only
/// when its value cap does not exceed `regime.ell(n, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountingPrune {
    pub n: usize,
    pub a: usize,
    pub regime: CapRegime,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// `None` means the diameter.
    pub value_cap: Option<u32>,
    pub cap_provenance: CapProvenance,
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    pub symmetry_breaking: bool,
    /// 1 runs the search on the calling thread.
    pub threads: usize,
    pub counting: Option<CountingPrune>,
    pub stop: Option<Arc<AtomicBool>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            value_cap: None,
            cap_provenance: CapProvenance::Diameter,
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit: Some(DEFAULT_TIME_LIMIT),
            symmetry_breaking: true,
            threads: 1,
            counting: None,
            stop: None,
        }
    }
}

impl SolveOptions {
    pub fn with_cap(cap: u32, provenance: CapProvenance) -> Self {
        SolveOptions {
            value_cap: Some(cap),
            cap_provenance: provenance,
            ..SolveOptions::default()
        }
    }

    pub(crate) fn effective_cap(&self, dist: &DistanceTable) -> Result<u32> {
        let diam = dist.diameter();
        match self.value_cap {
            Some(0) => Err(Error::InvalidCirculant("value cap must be >= 1".into())),
            Some(c) => Ok(c.min(diam)),
            None => Ok(diam),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub beta: u32,
    pub witness: Broadcast,
    /// True when the search space was exhausted.
    pub optimal: bool,
    pub nodes: u64,
    pub elapsed_ms: f64,
    pub cap: u32,
    pub cap_provenance: CapProvenance,
}

/// Solves `spec`, choosing the smallest lemma-licensed cap for `C(n; 1, a)`
/// and the diameter otherwise.
pub fn beta_b(spec: &CirculantSpec, base: &SolveOptions) -> Result<(SolveResult, Option<BoundReport>)> {
    let g = Circulant::build(spec)?;
    let dist = g.all_pairs();
    let mut opts = base.clone();
    let mut report = None;
    if let Some(a) = g.step_a() {
        let n = g.n();
        classify_regime(n, a)?;
        report = Some(bounds::report(n, a)?);
        if base.value_cap.is_none() {
            if let Some(l) = lemma_cap(n, a) {
                opts.value_cap = Some(l.cap);
                opts.cap_provenance = l.provenance;
            } else {
                opts.cap_provenance = CapProvenance::Diameter;
            }
        }
        if opts.counting.is_none() {
            opts.counting = bounds::counting_regime(n, a).map(|regime| CountingPrune { n, a, regime });
        }
    }
    let res = branch_and_bound_beta(&dist, &opts)?;
    Ok((res, report))
}

/// `(n, a)` convenience wrapper for [`beta_b`].
pub fn beta_b_two_step(n: usize, a: usize, base: &SolveOptions) -> Result<(SolveResult, Option<BoundReport>)> {
    crate::regime::validate_two_step(n, a)?;
    beta_b(&CirculantSpec::two_step(n, a as i64), base)
}

/// β_b over a symmetric (undirected) distance table.
pub fn undirected_beta(dist: &DistanceTable, cap: Option<u32>) -> Result<SolveResult> {
    if let Some((i, j)) = dist.first_asymmetry() {
        return Err(Error::Asymmetric(i, j));
    }
    let opts = SolveOptions {
        value_cap: cap,
        cap_provenance: if cap.is_some() {
            CapProvenance::User
        } else {
            CapProvenance::Diameter
        },
        ..SolveOptions::default()
    };
    if dist.n() <= 12 {
        brute_force_beta(dist, &opts)
    } else {
        branch_and_bound_beta(dist, &opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(n: usize, a: i64) -> DistanceTable {
        Circulant::two_step(n, a).unwrap().all_pairs()
    }

    #[test]
    fn beta_b_picks_lemma_caps() {
        let (r, rep) = beta_b_two_step(12, 4, &SolveOptions::default()).unwrap();
        assert_eq!((r.beta, r.cap, r.cap_provenance), (8, 3, CapProvenance::LemmaAMinus1));
        assert!(r.optimal);
        assert_eq!(rep.unwrap().exact.unwrap().value, 8);

        let (r, _) = beta_b_two_step(21, 7, &SolveOptions::default()).unwrap();
        assert_eq!((r.beta, r.cap, r.cap_provenance), (14, 3, CapProvenance::LemmaQ));

        let (r, _) = beta_b_two_step(11, 4, &SolveOptions::default()).unwrap();
        assert_eq!(r.beta, 5);

        assert!(beta_b_two_step(12, 11, &SolveOptions::default()).is_err());
    }

    #[test]
    fn general_step_sets_use_the_diameter() {
        let spec = CirculantSpec::new(9, vec![1, 2, 4]);
        let (r, rep) = beta_b(&spec, &SolveOptions::default()).unwrap();
        assert!(rep.is_none());
        assert_eq!(r.cap_provenance, CapProvenance::Diameter);
        let brute = brute_force_beta(&Circulant::build(&spec).unwrap().all_pairs(), &SolveOptions::default()).unwrap();
        assert_eq!(r.beta, brute.beta);
    }

    #[test]
    fn undirected_examples() {
        let g = Circulant::two_step(8, 4).unwrap();
        let u = undirected_beta(&g.undirected_distances(), None).unwrap();
        let d = brute_force_beta(&g.all_pairs(), &SolveOptions::default()).unwrap();
        assert_eq!(d.beta, 4);
        assert!(u.beta <= d.beta);

        let g = Circulant::two_step(12, 2).unwrap();
        let u = undirected_beta(&g.undirected_distances(), None).unwrap();
        assert!(u.beta <= 6);

        let one = DistanceTable::from_matrix(vec![vec![0]]).unwrap();
        assert_eq!(undirected_beta(&one, None).unwrap().beta, 0);

        assert!(matches!(undirected_beta(&dist(12, 4), None), Err(Error::Asymmetric(..))));
    }

    #[test]
    fn zero_cap_is_rejected() {
        let opts = SolveOptions::with_cap(0, CapProvenance::User);
        assert!(branch_and_bound_beta(&dist(8, 4), &opts).is_err());
        assert!(brute_force_beta(&dist(8, 4), &opts).is_err());
    }
}
