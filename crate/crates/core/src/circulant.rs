//! Oriented circulant graphs `C(n; a_1, ..., a_k)`.
//!
//! Vertices are `v_0 .. v_{n-1}` and every step `s` contributes the arcs
//! `v_i -> v_{i+s}` (indices modulo `n`). Steps may be given signed at the
//! boundary; internally they are least non-negative residues.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distance::{DistanceTable, UNREACHABLE};
use crate::error::{Error, Result};

/// Parameters of an oriented circulant graph, as supplied by the caller.
///
/// Steps are kept exactly as given (possibly negative or larger than `n`)
/// until [`CirculantSpec::normalize`] is applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CirculantSpec {
    n: usize,
    steps: Vec<i64>,
}

impl CirculantSpec {
    pub fn new(n: usize, steps: impl Into<Vec<i64>>) -> Self {
        CirculantSpec {
            n,
            steps: steps.into(),
        }
    }

    /// `C(n; 1, a)`.
    pub fn two_step(n: usize, a: i64) -> Self {
        CirculantSpec::new(n, vec![1, a])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[i64] {
        &self.steps
    }

    fn residue(&self, s: i64) -> usize {
        s.rem_euclid(self.n as i64) as usize
    }

    /// Steps reduced modulo `n`, in input order.
    pub fn residues(&self) -> Vec<usize> {
        self.steps.iter().map(|&s| self.residue(s)).collect()
    }

    /// Canonical form: least non-negative residues, sorted ascending.
    ///
    /// `C(n; 1, a)` and `C(n; 1, -(n-a))` have the same arc set and therefore
    /// normalize identically.
    pub fn normalize(&self) -> CirculantSpec {
        let mut steps = self.residues();
        steps.sort_unstable();
        CirculantSpec {
            n: self.n,
            steps: steps.into_iter().map(|s| s as i64).collect(),
        }
    }

    /// Checks the circulant invariants: `n >= 3`, every step nonzero, steps
    /// pairwise distinct, and no two distinct steps opposite (`s + t ≡ 0`).
    ///
    /// A single step equal to `n/2` is accepted: `C(2a; 1, a)` is part of the
    /// studied family even though its `a`-arcs pair up into digons.
    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidCirculant(format!("n = {} < 3", self.n)));
        }
        if self.steps.is_empty() {
            return Err(Error::InvalidCirculant("no steps".into()));
        }
        let res = self.residues();
        for (x, &s) in res.iter().enumerate() {
            if s == 0 {
                return Err(Error::InvalidCirculant(format!(
                    "step {} is 0 mod {}",
                    self.steps[x], self.n
                )));
            }
            for (y, &t) in res.iter().enumerate().skip(x + 1) {
                if s == t {
                    return Err(Error::InvalidCirculant(format!(
                        "steps {} and {} coincide mod {}",
                        self.steps[x], self.steps[y], self.n
                    )));
                }
                if (s + t) % self.n == 0 {
                    return Err(Error::InvalidCirculant(format!(
                        "steps {} and {} are opposite mod {} (opposite arcs)",
                        self.steps[x], self.steps[y], self.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// `Some(a)` when the normalized step set is exactly `{1, a}` with `a >= 2`.
    pub fn step_a(&self) -> Option<usize> {
        let norm = self.normalize();
        match norm.steps.as_slice() {
            [1, a] if *a >= 2 => Some(*a as usize),
            _ => None,
        }
    }
}

impl fmt::Display for CirculantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C({};", self.n)?;
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {s}")?;
        }
        write!(f, ")")
    }
}

pub fn normalize_spec(spec: &CirculantSpec) -> CirculantSpec {
    spec.normalize()
}

/// A validated oriented circulant graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulant {
    n: usize,
    steps: Vec<usize>,
}

impl Circulant {
    pub fn build(spec: &CirculantSpec) -> Result<Self> {
        spec.validate()?;
        let norm = spec.normalize();
        Ok(Circulant {
            n: norm.n,
            steps: norm.steps.iter().map(|&s| s as usize).collect(),
        })
    }

    pub fn new(n: usize, steps: &[i64]) -> Result<Self> {
        Circulant::build(&CirculantSpec::new(n, steps.to_vec()))
    }

    /// `C(n; 1, a)`, rejecting `a ∈ {1, n-1}` (and residues equal to them).
    pub fn two_step(n: usize, a: i64) -> Result<Self> {
        Circulant::build(&CirculantSpec::two_step(n, a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Normalized steps, sorted ascending.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn spec(&self) -> CirculantSpec {
        CirculantSpec::new(self.n, self.steps.iter().map(|&s| s as i64).collect::<Vec<_>>())
    }

    pub fn step_a(&self) -> Option<usize> {
        match self.steps.as_slice() {
            [1, a] => Some(*a),
            _ => None,
        }
    }

    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(move |&s| (v + s) % self.n)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).any(|w| w == v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).map(move |v| (u, v)))
    }

    pub fn arc_count(&self) -> usize {
        self.n * self.steps.len()
    }

    /// Breadth-first hop counts from `source` along out-arcs.
    /// Unreachable vertices are [`UNREACHABLE`].
    pub fn distance_row(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.n];
        let mut queue = VecDeque::with_capacity(self.n);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for w in self.out_neighbors(u) {
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs distances, computed from row 0 and rotation.
    pub fn all_pairs(&self) -> DistanceTable {
        DistanceTable::from_row(self.distance_row(0))
    }

    pub fn diameter(&self) -> u32 {
        self.all_pairs().diameter()
    }

    /// Distances of the underlying undirected circulant (arcs usable both ways).
    pub fn undirected_distances(&self) -> DistanceTable {
        let mut both: Vec<usize> = self
            .steps
            .iter()
            .flat_map(|&s| [s, self.n - s])
            .collect();
        both.sort_unstable();
        both.dedup();
        let und = Circulant {
            n: self.n,
            steps: both,
        };
        DistanceTable::from_row(und.distance_row(0))
    }
}

/// Searches for the least multiplier `m`, coprime to `n`, with
/// `{ m·s mod n : s ∈ steps1 } = steps2`. The vertex map `v_i -> v_{m·i}` is
/// then checked arc by arc before `m` is returned.
///
/// `Ok(None)` only means no multiplier map exists; the two graphs may still
/// be isomorphic through some other bijection.
pub fn multiplier_isomorphism(a: &CirculantSpec, b: &CirculantSpec) -> Result<Option<usize>> {
    a.validate()?;
    b.validate()?;
    if a.n() != b.n() {
        return Err(Error::InvalidCirculant(format!(
            "different orders {} and {}",
            a.n(),
            b.n()
        )));
    }
    let n = a.n();
    let ga = Circulant::build(a)?;
    let gb = Circulant::build(b)?;
    let target: BTreeSet<usize> = gb.steps().iter().copied().collect();
    for m in 1..n {
        if gcd(m, n) != 1 {
            continue;
        }
        let image: BTreeSet<usize> = ga.steps().iter().map(|&s| (m * s) % n).collect();
        if image == target && relabeling_preserves_arcs(&ga, &gb, m) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// True when `v_i -> v_{m·i}` maps the arc set of `g` exactly onto that of `h`.
pub fn relabeling_preserves_arcs(g: &Circulant, h: &Circulant, m: usize) -> bool {
    let n = g.n();
    if h.n() != n || g.arc_count() != h.arc_count() {
        return false;
    }
    let image: BTreeSet<(usize, usize)> = g.arcs().map(|(u, v)| ((m * u) % n, (m * v) % n)).collect();
    let arcs: BTreeSet<(usize, usize)> = h.arcs().collect();
    image == arcs
}

pub(crate) fn gcd(mut x: usize, mut y: usize) -> usize {
    while y != 0 {
        let t = x % y;
        x = y;
        y = t;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_has_out_degree_two() {
        let g = Circulant::new(12, &[1, 4]).unwrap();
        for v in 0..12 {
            assert_eq!(g.out_neighbors(v).count(), 2);
        }
        assert_eq!(g.arc_count(), 24);
        assert!(g.has_arc(11, 0));
        assert!(g.has_arc(10, 2));
    }

    #[test]
    fn rejects_opposite_steps() {
        let err = Circulant::new(12, &[1, 4, 8]).unwrap_err();
        assert!(matches!(err, Error::InvalidCirculant(_)));
        assert!(Circulant::two_step(12, 11).is_err());
        assert!(Circulant::two_step(12, -1).is_err());
    }

    #[test]
    fn rejects_zero_and_duplicate_steps() {
        assert!(Circulant::new(9, &[1, 9]).is_err());
        assert!(Circulant::new(9, &[1, 10]).is_err());
        assert!(Circulant::new(9, &[2, 2]).is_err());
        assert!(Circulant::new(2, &[1]).is_err());
    }

    #[test]
    fn half_step_is_accepted() {
        // C(2a; 1, a) is in the studied family.
        let g = Circulant::two_step(8, 4).unwrap();
        assert_eq!(g.steps(), &[1, 4]);
    }

    #[test]
    fn signed_steps_normalize() {
        let g = Circulant::new(9, &[1, -4]).unwrap();
        let h = Circulant::new(9, &[1, 5]).unwrap();
        assert_eq!(g, h);
        let spec = CirculantSpec::new(12, vec![1, -8]);
        assert_eq!(spec.normalize(), CirculantSpec::new(12, vec![1, 4]));
        assert_eq!(
            CirculantSpec::new(9, vec![5, 1]).normalize(),
            CirculantSpec::new(9, vec![1, 5])
        );
    }

    #[test]
    fn multiplier_examples() {
        let a = CirculantSpec::new(9, vec![1, 2]);
        let b = CirculantSpec::new(9, vec![1, 5]);
        assert_eq!(multiplier_isomorphism(&a, &b).unwrap(), Some(5));
        assert_eq!(multiplier_isomorphism(&a, &a).unwrap(), Some(1));
        let c = CirculantSpec::new(8, vec![1, 4]);
        let d = CirculantSpec::new(8, vec![1, 3]);
        assert_eq!(multiplier_isomorphism(&c, &d).unwrap(), None);
    }

    #[test]
    fn multiplier_requires_same_order() {
        let a = CirculantSpec::new(9, vec![1, 2]);
        let b = CirculantSpec::new(10, vec![1, 2]);
        assert!(multiplier_isomorphism(&a, &b).is_err());
    }

    #[test]
    fn display_spec() {
        assert_eq!(CirculantSpec::two_step(12, 4).to_string(), "C(12; 1, 4)");
    }
}
