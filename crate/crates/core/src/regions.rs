//! Vertex sets charged to each broadcast vertex by the counting arguments.
//! Pure index arithmetic modulo `n`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::broadcast::Broadcast;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionVariant {
    /// Cap `a − 1`: `A = {v_{i+k} : 0 <= k <= 2a−2}`.
    AMinus1,
    /// Cap `q`, `n = qa`.
    Qa,
    /// Cap `q`, `n = qa + a − 1`.
    QaPlus,
}

impl RegionVariant {
    /// The value at which a vertex is charged an `A` set instead of a `B` set.
    pub fn cap(self, n: usize, a: usize) -> u32 {
        match self {
            RegionVariant::AMinus1 => (a - 1) as u32,
            RegionVariant::Qa | RegionVariant::QaPlus => (n / a) as u32,
        }
    }

    pub fn a_size(self, n: usize, a: usize) -> usize {
        match self {
            RegionVariant::AMinus1 => 2 * a - 1,
            RegionVariant::Qa => 2 * (n / a),
            RegionVariant::QaPlus => 2 * (n / a) + 1,
        }
    }

    fn check(self, n: usize, a: usize) -> Result<()> {
        let bad = |why: &str| Err(Error::OutOfRegime(format!("{self:?} region with n = {n}, a = {a}: {why}")));
        if a < 4 || a >= n {
            return bad("needs 4 <= a < n");
        }
        let (q, r) = (n / a, n % a);
        match self {
            RegionVariant::AMinus1 if 2 * a - 1 > n => bad("needs 2a - 1 <= n"),
            RegionVariant::Qa if r != 0 || q < 3 => bad("needs n = qa with q >= 3"),
            RegionVariant::QaPlus if r != a - 1 || q < 3 => bad("needs n = qa + a - 1 with q >= 3"),
            _ => Ok(()),
        }
    }
}

fn span(n: usize, from: usize, to_inclusive: usize) -> impl Iterator<Item = usize> {
    // Descending ranges are empty.
    (from..to_inclusive + 1).map(move |x| x % n)
}

/// `L(v_i)` on `C(3a − 1; 1, a)`: `[i, i+fv] ∪ [i+a+1, i+a+fv−1] ∪ [i+2a, i+2a+fv−2]`.
pub fn region_l(n: usize, a: usize, i: usize, fv: u32) -> Result<BTreeSet<usize>> {
    if a < 4 || n + 1 != 3 * a {
        return Err(Error::OutOfRegime(format!("L region needs n = 3a - 1, got n = {n}, a = {a}")));
    }
    let fv = fv as usize;
    if fv == 0 || fv > a {
        return Err(Error::OutOfRegime(format!("L region needs 1 <= f(v) <= a, got {fv}")));
    }
    let mut set: BTreeSet<usize> = span(n, i, i + fv).collect();
    set.extend(span(n, i + a + 1, i + a + fv - 1));
    if fv >= 2 {
        set.extend(span(n, i + 2 * a, i + 2 * a + fv - 2));
    }
    Ok(set)
}

/// `A_f^i` for a vertex at the cap value.
pub fn region_a(n: usize, a: usize, i: usize, variant: RegionVariant) -> Result<BTreeSet<usize>> {
    variant.check(n, a)?;
    let q = n / a;
    let set = match variant {
        RegionVariant::AMinus1 => span(n, i, i + 2 * a - 2).collect(),
        RegionVariant::Qa | RegionVariant::QaPlus => {
            let last_p = if variant == RegionVariant::Qa { q - 1 } else { q };
            let mut s: BTreeSet<usize> = span(n, i, i + q).collect();
            s.extend((1..=last_p).map(|p| (i + p * a + q - p) % n));
            s
        }
    };
    Ok(set)
}

/// `B_f^j = {v_{j+k} : 0 <= k <= f(v_j)}`.
pub fn region_b(n: usize, j: usize, fv: u32) -> Result<BTreeSet<usize>> {
    if fv as usize + 1 > n {
        return Err(Error::OutOfRegime(format!("B region of size {} exceeds n = {n}", fv + 1)));
    }
    Ok(span(n, j, j + fv as usize).collect())
}

/// One region per broadcast vertex: `A` at the cap value, `B` below it.
pub fn charged_regions(
    n: usize,
    a: usize,
    f: &Broadcast,
    variant: RegionVariant,
) -> Result<Vec<(usize, BTreeSet<usize>)>> {
    let cap = variant.cap(n, a);
    let mut out = Vec::new();
    for v in f.support() {
        let x = f.get(v);
        if x > cap {
            return Err(Error::ExceedsCap { vertex: v, value: x, cap });
        }
        let set = if x == cap {
            region_a(n, a, v, variant)?
        } else {
            region_b(n, v, x)?
        };
        out.push((v, set));
    }
    Ok(out)
}

/// `L(v)` for every broadcast vertex on `C(3a − 1; 1, a)`.
pub fn charged_l_regions(n: usize, a: usize, f: &Broadcast) -> Result<Vec<(usize, BTreeSet<usize>)>> {
    f.support()
        .into_iter()
        .map(|v| region_l(n, a, v, f.get(v)).map(|s| (v, s)))
        .collect()
}

/// True when the sets are pairwise disjoint and their sizes sum to at most `n`.
pub fn pairwise_disjoint(n: usize, sets: &[(usize, BTreeSet<usize>)]) -> bool {
    let total: usize = sets.iter().map(|(_, s)| s.len()).sum();
    let union: BTreeSet<usize> = sets.iter().flat_map(|(_, s)| s.iter().copied()).collect();
    total == union.len() && total <= n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_sizes() {
        for a in 4..10 {
            let n = 3 * a - 1;
            for fv in 1..=a as u32 {
                let l = region_l(n, a, 5, fv).unwrap();
                assert_eq!(l.len(), 3 * fv as usize - 1, "a={a} fv={fv}");
            }
        }
        let l = region_l(20, 7, 0, 1).unwrap();
        assert_eq!(l.into_iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn l_region_blocks() {
        let l = region_l(20, 7, 0, 4).unwrap();
        assert_eq!(
            l.into_iter().collect::<Vec<_>>(),
            vec![0, 1, 2, 3, 4, 8, 9, 10, 14, 15, 16]
        );
    }

    #[test]
    fn a_and_b_sizes() {
        assert_eq!(region_a(20, 7, 0, RegionVariant::AMinus1).unwrap().len(), 13);
        assert_eq!(region_b(20, 3, 4).unwrap().len(), 5);
        assert_eq!(region_a(21, 7, 0, RegionVariant::Qa).unwrap().len(), 6);
        assert_eq!(region_a(27, 7, 4, RegionVariant::QaPlus).unwrap().len(), 7);
    }

    #[test]
    fn regime_guards() {
        assert!(region_l(20, 6, 0, 1).is_err());
        assert!(region_l(20, 7, 0, 0).is_err());
        assert!(region_a(22, 7, 0, RegionVariant::Qa).is_err());
        assert!(region_a(14, 7, 0, RegionVariant::Qa).is_err());
        assert!(region_a(8, 5, 0, RegionVariant::AMinus1).is_err());
        assert!(region_b(4, 0, 4).is_err());
    }

    #[test]
    fn wraps_modulo_n() {
        let b = region_b(10, 8, 3).unwrap();
        assert_eq!(b.into_iter().collect::<Vec<_>>(), vec![0, 1, 8, 9]);
    }

    #[test]
    fn spread_broadcast_regions_are_disjoint() {
        let f = Broadcast::from_support(12, &[(0, 2), (3, 2), (6, 2), (9, 2)]).unwrap();
        let sets = charged_regions(12, 4, &f, RegionVariant::AMinus1).unwrap();
        assert!(pairwise_disjoint(12, &sets));
    }
}
