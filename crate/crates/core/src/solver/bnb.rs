use std::sync::atomic::{AtomicBool, AtomicI64, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{SolveOptions, SolveResult};
use crate::bounds::{sigma_bound, CapRegime};
use crate::broadcast::Broadcast;
use crate::distance::DistanceTable;
use crate::error::{Error, Result};

/// Depth of the prefix split used to hand out parallel work.
const SPLIT_DEPTH: usize = 2;
const PARALLEL_BATCH: u64 = 64;

struct Counting {
    n: usize,
    a: usize,
    regime: CapRegime,
    ell: u32,
}

struct Shared<'a> {
    dist: &'a DistanceTable,
    n: usize,
    /// `min(cap, e(v))` per vertex.
    init: Vec<u32>,
    symmetry: bool,
    /// Step 1 present: the intervals `[u, u + f(u)]` are disjoint, so σ <= n − |V⁺|.
    gap: bool,
    counting: Option<Counting>,
    node_limit: u64,
    deadline: Option<Instant>,
    stop: Option<&'a AtomicBool>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    incumbent: AtomicI64,
}

impl Shared<'_> {
    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
            || self.stop.is_some_and(|s| s.load(Ordering::Relaxed))
    }
}

struct Worker<'s, 'a> {
    sh: &'s Shared<'a>,
    f: Vec<u32>,
    avail: Vec<Vec<u32>>,
    best_cost: i64,
    best: Option<Vec<u32>>,
    pending: u64,
    batch: u64,
    since_clock: u32,
}

impl<'s, 'a> Worker<'s, 'a> {
    fn new(sh: &'s Shared<'a>, batch: u64) -> Self {
        let n = sh.n;
        let mut avail = vec![vec![0u32; n]; n + 1];
        avail[0].copy_from_slice(&sh.init);
        Worker {
            sh,
            f: vec![0; n],
            avail,
            best_cost: 0,
            best: None,
            pending: 0,
            batch,
            since_clock: 0,
        }
    }

    /// Counts one node; false once any budget is exhausted.
    fn tick(&mut self) -> bool {
        if self.sh.aborted.load(Ordering::Relaxed) {
            return false;
        }
        self.pending += 1;
        if self.pending >= self.batch {
            let total = self.sh.nodes.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > self.sh.node_limit {
                self.sh.aborted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        self.since_clock += 1;
        if self.since_clock >= 1024 {
            self.since_clock = 0;
            if self.sh.out_of_time() {
                self.sh.aborted.store(true, Ordering::Relaxed);
                return false;
            }
        }
        true
    }

    fn flush(&mut self) {
        self.sh.nodes.fetch_add(self.pending, Ordering::Relaxed);
        self.pending = 0;
    }

    /// Writes `avail[depth + 1]` for assigning `x` to vertex `depth`.
    fn descend(&mut self, depth: usize, x: u32) {
        let (lo, hi) = self.avail.split_at_mut(depth + 1);
        let (cur, next) = (&lo[depth], &mut hi[0]);
        if x == 0 {
            next[depth + 1..].copy_from_slice(&cur[depth + 1..]);
            return;
        }
        let d = self.sh.dist;
        for w in depth + 1..self.sh.n {
            let m = cur[w];
            next[w] = if m == 0 || d.get(depth, w) <= x {
                0
            } else {
                m.min(d.get(w, depth).saturating_sub(1))
            };
        }
    }

    fn bound(&self, depth: usize, cost: u32, support: usize, v1: usize) -> i64 {
        let rest: u32 = self.avail[depth][depth..].iter().sum();
        let mut b = (cost + rest) as i64;
        if self.sh.gap {
            b = b.min((self.sh.n - support) as i64);
        }
        if let Some(c) = &self.sh.counting {
            b = b.min(sigma_bound(c.n, c.a, c.regime, support, v1));
        }
        b
    }

    fn ell(&self) -> u32 {
        self.sh.counting.as_ref().map_or(u32::MAX, |c| c.ell)
    }

    fn dfs(&mut self, depth: usize, cost: u32, support: usize, v1: usize) {
        if !self.tick() {
            return;
        }
        if depth == self.sh.n {
            if cost as i64 > self.best_cost {
                self.best_cost = cost as i64;
                self.best = Some(self.f.clone());
                self.sh.incumbent.fetch_max(cost as i64, Ordering::Relaxed);
            }
            return;
        }
        let b = self.bound(depth, cost, support, v1);
        if b <= self.best_cost || b < self.sh.incumbent.load(Ordering::Relaxed) {
            return;
        }
        let top = self.avail[depth][depth];
        let ell = self.ell();
        for x in (0..=top).rev() {
            if depth == 0 && x == 0 && self.sh.symmetry {
                continue;
            }
            self.descend(depth, x);
            self.f[depth] = x;
            self.dfs(
                depth + 1,
                cost + x,
                support + usize::from(x > 0),
                v1 + usize::from(x == ell),
            );
            if self.sh.aborted.load(Ordering::Relaxed) {
                break;
            }
        }
        self.f[depth] = 0;
    }

    /// Applies a fixed prefix, then searches below it.
    fn run_prefix(&mut self, prefix: &[u32]) {
        let (mut cost, mut support, mut v1) = (0, 0, 0);
        let ell = self.ell();
        for (depth, &x) in prefix.iter().enumerate() {
            self.descend(depth, x);
            self.f[depth] = x;
            cost += x;
            support += usize::from(x > 0);
            v1 += usize::from(x == ell);
        }
        self.dfs(prefix.len(), cost, support, v1);
        self.flush();
    }
}

/// Every feasible assignment of the first `len` vertices, in
/// lexicographically descending order.
fn prefixes(sh: &Shared<'_>, len: usize) -> Vec<Vec<u32>> {
    fn rec(sh: &Shared<'_>, w: &mut Worker<'_, '_>, depth: usize, len: usize, out: &mut Vec<Vec<u32>>) {
        if depth == len {
            out.push(w.f[..len].to_vec());
            return;
        }
        for x in (0..=w.avail[depth][depth]).rev() {
            if depth == 0 && x == 0 && sh.symmetry {
                continue;
            }
            w.descend(depth, x);
            w.f[depth] = x;
            rec(sh, w, depth + 1, len, out);
        }
        w.f[depth] = 0;
    }
    let mut w = Worker::new(sh, 1);
    let mut out = Vec::new();
    rec(sh, &mut w, 0, len, &mut out);
    out
}

/// Branch-and-bound over vertices in index order, values in descending
/// order.
///
/// Pruning uses the per-vertex completion bound (the sum of the largest value
/// each unassigned vertex can still take), the interval bound
/// σ <= n − |V⁺| when step 1 is present, and the counting propositions when
/// `opts.counting` is set and the cap does not exceed their `ℓ`. With
/// symmetry breaking on (and a rotation-invariant table) only broadcasts with
/// `f(v_0) >= 1` are searched; the zero broadcast is the initial incumbent.
///
/// The witness is the lexicographically greatest maximizer, independent of
/// the thread count.
pub fn branch_and_bound_beta(dist: &DistanceTable, opts: &SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    let cap = opts.effective_cap(dist)?;
    let n = dist.n();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let counting = opts.counting.and_then(|c| {
        let ell = c.regime.ell(c.n, c.a);
        (c.n == n && cap <= ell).then_some(Counting {
            n: c.n,
            a: c.a,
            regime: c.regime,
            ell,
        })
    });
    let sh = Shared {
        dist,
        n,
        init: (0..n).map(|v| dist.eccentricity(v).min(cap)).collect(),
        symmetry: opts.symmetry_breaking && dist.is_rotational(),
        gap: n > 1 && (0..n).all(|i| dist.get(i, (i + 1) % n) <= 1),
        counting,
        node_limit: opts.node_limit,
        deadline: opts.time_limit.map(|t| start + t),
        stop: opts.stop.as_deref(),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        incumbent: AtomicI64::new(0),
    };

    let finish = |cost: i64, best: Option<Vec<u32>>, sh: &Shared<'_>| SolveResult {
        beta: cost as u32,
        witness: best.map(Broadcast::from_values).unwrap_or_else(|| Broadcast::zeros(n)),
        optimal: !sh.aborted.load(Ordering::Relaxed),
        nodes: sh.nodes.load(Ordering::Relaxed),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        cap,
        cap_provenance: opts.cap_provenance,
    };

    if opts.time_limit == Some(Duration::ZERO) || sh.out_of_time() {
        sh.aborted.store(true, Ordering::Relaxed);
        return Ok(finish(0, None, &sh));
    }

    let threads = opts.threads.max(1);
    if threads == 1 || n <= SPLIT_DEPTH {
        let mut w = Worker::new(&sh, 1);
        w.run_prefix(&[]);
        let (cost, best) = (w.best_cost, w.best.take());
        return Ok(finish(cost, best, &sh));
    }

    let tasks = prefixes(&sh, SPLIT_DEPTH);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidCirculant(format!("thread pool: {e}")))?;
    let results: Vec<(i64, Option<Vec<u32>>)> = pool.install(|| {
        tasks
            .par_iter()
            .map(|p| {
                let mut w = Worker::new(&sh, PARALLEL_BATCH);
                w.run_prefix(p);
                (w.best_cost, w.best.take())
            })
            .collect()
    });
    // Tasks are in descending prefix order, so the first task reaching the
    // maximum holds the lexicographically greatest maximizer.
    let mut best_cost = 0i64;
    let mut best = None;
    for (c, b) in results {
        if c > best_cost {
            best_cost = c;
            best = b;
        }
    }
    Ok(finish(best_cost, best, &sh))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::is_independent;
    use crate::circulant::Circulant;
    use crate::regime::CapProvenance;
    use crate::solver::brute_force_beta;

    fn dist(n: usize, a: i64) -> DistanceTable {
        Circulant::two_step(n, a).unwrap().all_pairs()
    }

    fn solve(n: usize, a: i64, cap: u32) -> SolveResult {
        branch_and_bound_beta(&dist(n, a), &SolveOptions::with_cap(cap, CapProvenance::User)).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(solve(12, 4, 3).beta, 8);
        assert_eq!(solve(14, 2, 7).beta, 7);
        assert_eq!(solve(9, 4, 3).beta, 6);
    }

    #[test]
    fn matches_brute_force_with_identical_witness() {
        for n in 5..=11 {
            for a in 2..n - 1 {
                let d = dist(n, a as i64);
                let o = SolveOptions::default();
                let b = brute_force_beta(&d, &o).unwrap();
                let s = branch_and_bound_beta(&d, &o).unwrap();
                assert_eq!(b.beta, s.beta, "n={n} a={a}");
                assert_eq!(b.witness, s.witness, "n={n} a={a}");
                assert!(is_independent(&d, &s.witness));
            }
        }
    }

    #[test]
    fn parallel_witness_matches_sequential() {
        for (n, a) in [(12, 4), (13, 5), (15, 4), (14, 3)] {
            let d = dist(n, a);
            let seq = branch_and_bound_beta(&d, &SolveOptions::default()).unwrap();
            let par = branch_and_bound_beta(
                &d,
                &SolveOptions {
                    threads: 4,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert_eq!(seq.beta, par.beta);
            assert_eq!(seq.witness, par.witness);
            assert!(par.optimal);
        }
    }

    #[test]
    fn symmetry_breaking_does_not_change_the_answer() {
        for (n, a) in [(10, 3), (11, 4), (12, 5)] {
            let d = dist(n, a);
            let on = branch_and_bound_beta(&d, &SolveOptions::default()).unwrap();
            let off = branch_and_bound_beta(
                &d,
                &SolveOptions {
                    symmetry_breaking: false,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert_eq!(on.beta, off.beta);
            assert_eq!(on.witness, off.witness);
            assert!(on.nodes <= off.nodes);
        }
    }

    #[test]
    fn zero_time_budget_is_not_optimal() {
        let r = branch_and_bound_beta(
            &dist(12, 4),
            &SolveOptions {
                time_limit: Some(Duration::ZERO),
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert!(!r.optimal);
        assert_eq!(r.beta, r.witness.cost());
    }

    #[test]
    fn node_limit_is_monotone() {
        let d = dist(20, 7);
        let mut last = 0;
        for limit in [1, 5, 20, 100, 1000, 100_000] {
            let r = branch_and_bound_beta(
                &d,
                &SolveOptions {
                    node_limit: limit,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert!(r.beta >= last);
            assert!(is_independent(&d, &r.witness));
            last = r.beta;
        }
    }

    #[test]
    fn stop_flag_aborts() {
        let flag = std::sync::Arc::new(AtomicBool::new(true));
        let r = branch_and_bound_beta(
            &dist(12, 4),
            &SolveOptions {
                stop: Some(flag),
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert!(!r.optimal);
    }
}
