//! One-directional hop distances on circulant graphs, with an oracle table
//! and the closed form for `C(n; 1, a)`.

use serde::Serialize;

use crate::circulant::Circulant;
use crate::error::{Error, Result};

/// Marker for "no directed path". Never produced when step 1 is present.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    /// Row 0 only; `d(i, j) = row[(j - i) mod n]`.
    Rotational(Vec<u32>),
    /// Row-major `n × n`.
    Full(Vec<u32>),
}

/// `n × n` hop distances with constant-time lookup.
///
/// Tables built from a circulant store a single row; tables supplied as an
/// explicit matrix (e.g. undirected test inputs) are stored in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    storage: Storage,
    ecc: Vec<u32>,
}

impl DistanceTable {
    pub fn from_row(row: Vec<u32>) -> Self {
        let n = row.len();
        let e = max_finite(&row);
        DistanceTable {
            n,
            storage: Storage::Rotational(row),
            ecc: vec![e; n],
        }
    }

    /// Builds a table from an explicit matrix. Requires a square matrix with a
    /// zero diagonal.
    pub fn from_matrix(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            if r[i] != 0 {
                return Err(Error::InvalidCirculant(format!("d({i},{i}) = {} != 0", r[i])));
            }
            flat.extend_from_slice(r);
        }
        let ecc = (0..n).map(|i| max_finite(&flat[i * n..(i + 1) * n])).collect();
        Ok(DistanceTable {
            n,
            storage: Storage::Full(flat),
            ecc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        match &self.storage {
            Storage::Rotational(row) => {
                let delta = if j >= i { j - i } else { j + self.n - i };
                row[delta]
            }
            Storage::Full(m) => m[i * self.n + j],
        }
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        (0..self.n).map(|j| self.get(i, j)).collect()
    }

    pub fn to_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    /// Largest finite distance out of `v`.
    pub fn eccentricity(&self, v: usize) -> u32 {
        self.ecc[v]
    }

    pub fn eccentricities(&self) -> &[u32] {
        &self.ecc
    }

    pub fn diameter(&self) -> u32 {
        self.ecc.iter().copied().max().unwrap_or(0)
    }

    /// True when the table is stored as one rotated row, or when an explicit
    /// matrix happens to satisfy `d(i, j) = d(0, j - i)`.
    pub fn is_rotational(&self) -> bool {
        match &self.storage {
            Storage::Rotational(_) => true,
            Storage::Full(m) => {
                let n = self.n;
                (0..n).all(|i| (0..n).all(|j| m[i * n + j] == m[(j + n - i) % n]))
            }
        }
    }

    /// First pair `(i, j)` with `d(i, j) != d(j, i)`, if any.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// Checks `d(i, k) <= d(i, j) + d(j, k)` for every triple; returns the
    /// first violating triple.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let dij = self.get(i, j);
                if dij == UNREACHABLE {
                    continue;
                }
                for k in 0..n {
                    let djk = self.get(j, k);
                    if djk != UNREACHABLE && self.get(i, k) > dij + djk {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

fn max_finite(xs: &[u32]) -> u32 {
    xs.iter().copied().filter(|&d| d != UNREACHABLE).max().unwrap_or(0)
}

/// `(q, r)` with `n = qa + r` when the closed-form distance is proven:
/// `n = qa` with `a >= 4, q >= 3`, or `q >= 2, 1 <= r <= a-1, 4 <= a <= r+q+1`.
pub fn closed_form_regime(n: usize, a: usize) -> Option<(usize, usize)> {
    if a < 4 {
        return None;
    }
    let (q, r) = (n / a, n % a);
    let ok = if r == 0 {
        q >= 3
    } else {
        q >= 2 && a <= r + q + 1
    };
    ok.then_some((q, r))
}

fn regime_error(n: usize, a: usize) -> Error {
    Error::OutOfRegime(format!(
        "closed-form distance is not proven for n = {n}, a = {a} \
         (needs n = qa with a >= 4, q >= 3, or n = qa + r with q >= 2, 1 <= r <= a-1, 4 <= a <= r+q+1)"
    ))
}

/// `⌊Δ/a⌋(1 − a) + Δ` with `Δ = (j − i) mod n`.
pub fn closed_form_distance(n: usize, a: usize, i: usize, j: usize) -> Result<u32> {
    if closed_form_regime(n, a).is_none() {
        return Err(regime_error(n, a));
    }
    let delta = (j % n + n - i % n) % n;
    Ok((delta / a + delta % a) as u32)
}

/// `q + a − 2` in the closed-form regime, `⌊n/2⌋` for `a = 2`.
pub fn closed_form_diameter(n: usize, a: usize) -> Result<u32> {
    if a == 2 && n >= 4 {
        return Ok((n / 2) as u32);
    }
    match closed_form_regime(n, a) {
        Some((q, _)) => Ok((q + a - 2) as u32),
        None => Err(regime_error(n, a)),
    }
}

/// Which computation produced a distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSource {
    ClosedForm,
    Bfs,
}

/// Closed form when proven, otherwise a BFS row; reports which path was used.
pub fn distance_with_fallback(graph: &Circulant, i: usize, j: usize) -> (u32, DistanceSource) {
    if let Some(a) = graph.step_a() {
        if let Ok(d) = closed_form_distance(graph.n(), a, i, j) {
            return (d, DistanceSource::ClosedForm);
        }
    }
    let n = graph.n();
    (graph.distance_row(0)[(j + n - i) % n], DistanceSource::Bfs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize, a: i64) -> DistanceTable {
        Circulant::two_step(n, a).unwrap().all_pairs()
    }

    #[test]
    fn a2_row_is_half_ceiling() {
        let g = Circulant::two_step(12, 2).unwrap();
        let row = g.distance_row(0);
        for (i, &d) in row.iter().enumerate() {
            assert_eq!(d as usize, i.div_ceil(2));
        }
    }

    #[test]
    fn distance_on_3a_minus_1() {
        let t = table(20, 7);
        for i in 0..20 {
            assert_eq!(t.get((i + 6) % 20, i), 2);
            assert_eq!(t.get(i, i), 0);
        }
    }

    #[test]
    fn all_pairs_matches_per_source_bfs() {
        for (n, a) in [(12, 4), (9, 5), (17, 6), (10, 3)] {
            let g = Circulant::two_step(n, a).unwrap();
            let t = g.all_pairs();
            for s in 0..n {
                assert_eq!(t.row(s), g.distance_row(s));
            }
        }
    }

    #[test]
    fn table_maxima() {
        assert_eq!(table(8, 4).diameter(), 4);
        assert_eq!(table(12, 4).diameter(), 5);
        assert_eq!(table(14, 2).diameter(), 7);
        assert_eq!(table(15, 4).diameter(), 5);
        assert_eq!(table(10, 5).diameter(), 5);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_distance(12, 4, 0, 11).unwrap(), 5);
        assert_eq!(closed_form_distance(12, 4, 7, 7).unwrap(), 0);
        assert_eq!(closed_form_distance(20, 7, 0, 19).unwrap(), 7);
        assert_eq!(closed_form_diameter(20, 7).unwrap(), 7);
        assert_eq!(closed_form_diameter(15, 4).unwrap(), 5);
        assert_eq!(closed_form_diameter(14, 2).unwrap(), 7);
    }

    #[test]
    fn closed_form_rejects_out_of_regime() {
        assert!(matches!(
            closed_form_distance(8, 4, 0, 3),
            Err(Error::OutOfRegime(_))
        ));
        assert!(closed_form_distance(17, 3, 0, 1).is_err());
        // q = 2, r = 1: a = 6 > r + q + 1 = 4.
        assert!(closed_form_distance(13, 6, 0, 1).is_err());
        assert!(closed_form_diameter(13, 6).is_err());
    }

    #[test]
    fn fallback_reports_path() {
        let g = Circulant::two_step(12, 4).unwrap();
        assert_eq!(distance_with_fallback(&g, 0, 11), (5, DistanceSource::ClosedForm));
        let h = Circulant::two_step(8, 4).unwrap();
        assert_eq!(distance_with_fallback(&h, 0, 7).1, DistanceSource::Bfs);
    }

    #[test]
    fn every_row_has_the_same_maximum() {
        let t = table(23, 5);
        let e0 = t.eccentricity(0);
        assert!(t.eccentricities().iter().all(|&e| e == e0));
        assert!(t.is_rotational());
        assert!(t.triangle_violation().is_none());
    }

    #[test]
    fn unreachable_marker_for_disconnected_steps() {
        let g = Circulant::new(12, &[2, 4]).unwrap();
        let row = g.distance_row(0);
        assert_eq!(row[1], UNREACHABLE);
        assert_eq!(row[2], 1);
        assert_eq!(g.all_pairs().eccentricity(0), 3);
    }

    #[test]
    fn from_matrix_checks_shape() {
        assert!(DistanceTable::from_matrix(vec![vec![0, 1], vec![1]]).is_err());
        assert!(DistanceTable::from_matrix(vec![vec![1]]).is_err());
        let t = DistanceTable::from_matrix(vec![vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(t.first_asymmetry(), Some((0, 1)));
        let u = DistanceTable::from_matrix(vec![vec![0]]).unwrap();
        assert!(u.is_symmetric());
        assert_eq!(u.diameter(), 0);
    }

    #[test]
    fn undirected_is_symmetric_and_shorter() {
        let g = Circulant::two_step(12, 4).unwrap();
        let und = g.undirected_distances();
        let dir = g.all_pairs();
        assert!(und.is_symmetric());
        for i in 0..12 {
            for j in 0..12 {
                assert!(und.get(i, j) <= dir.get(i, j));
            }
        }
    }
}
