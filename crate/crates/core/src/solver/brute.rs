use std::time::Instant;

use super::{SolveOptions, SolveResult};
use crate::broadcast::Broadcast;
use crate::distance::DistanceTable;
use crate::error::Result;

/// Largest order the oracle accepts.
pub const BRUTE_MAX_N: usize = 26;

/// Exhaustive oracle.
///
/// For a fixed support `S` the independence constraints decouple per vertex:
/// `f(u) < d(u, v)` for every other `v ∈ S`, and `f(u) <= min(cap, e(u))`.
/// Taking every vertex at its own maximum gives the best broadcast with
/// support `S`, so enumerating all supports covers every assignment. Among
/// maximizers the lexicographically greatest value vector is returned.
pub fn brute_force_beta(dist: &DistanceTable, opts: &SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    let cap = opts.effective_cap(dist)?;
    let n = dist.n();
    let mut best = Broadcast::zeros(n);
    let mut best_cost = 0u32;
    let mut nodes = 0u64;
    let mut optimal = n <= BRUTE_MAX_N;
    let total: u64 = if optimal { 1u64 << n } else { 0 };
    let ecc: Vec<u32> = (0..n).map(|v| dist.eccentricity(v).min(cap)).collect();
    let mut values = vec![0u32; n];
    let mut members = Vec::with_capacity(n);

    for mask in 1..total {
        nodes += 1;
        if nodes > opts.node_limit || (nodes & 0xffff == 1 && over_time(opts, start)) {
            optimal = false;
            break;
        }
        members.clear();
        members.extend((0..n).filter(|&i| mask >> i & 1 == 1));
        let mut cost = 0u32;
        let mut ok = true;
        for &u in &members {
            let mut m = ecc[u];
            for &v in &members {
                if v != u {
                    m = m.min(dist.get(u, v).saturating_sub(1));
                }
            }
            if m == 0 {
                ok = false;
                break;
            }
            values[u] = m;
            cost += m;
        }
        if !ok || cost < best_cost {
            continue;
        }
        let mut cand = vec![0u32; n];
        for &u in &members {
            cand[u] = values[u];
        }
        if cost > best_cost || cand.as_slice() > best.values() {
            best_cost = cost;
            best = Broadcast::from_values(cand);
        }
    }

    Ok(SolveResult {
        beta: best_cost,
        witness: best,
        optimal,
        nodes,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        cap,
        cap_provenance: opts.cap_provenance,
    })
}

fn over_time(opts: &SolveOptions, start: Instant) -> bool {
    opts.time_limit.is_some_and(|t| start.elapsed() >= t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::is_independent;
    use crate::circulant::Circulant;
    use crate::regime::CapProvenance;

    fn run(n: usize, a: i64, cap: u32) -> SolveResult {
        let d = Circulant::two_step(n, a).unwrap().all_pairs();
        brute_force_beta(&d, &SolveOptions::with_cap(cap, CapProvenance::User)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(run(8, 4, 4).beta, 4);
        assert_eq!(run(9, 5, 4).beta, 4);
        let r = run(12, 4, 5);
        assert_eq!(r.beta, 8);
        assert!(r.optimal);
        let d = Circulant::two_step(12, 4).unwrap().all_pairs();
        assert!(is_independent(&d, &r.witness));
        assert_eq!(r.witness.cost(), 8);
    }

    #[test]
    fn single_vertex_table() {
        let d = DistanceTable::from_matrix(vec![vec![0]]).unwrap();
        let r = brute_force_beta(&d, &SolveOptions::default()).unwrap();
        assert_eq!(r.beta, 0);
        assert_eq!(r.witness, Broadcast::zeros(1));
    }

    #[test]
    fn node_limit_marks_non_optimal() {
        let d = Circulant::two_step(12, 4).unwrap().all_pairs();
        let opts = SolveOptions {
            node_limit: 10,
            ..SolveOptions::default()
        };
        assert!(!brute_force_beta(&d, &opts).unwrap().optimal);
    }
}
