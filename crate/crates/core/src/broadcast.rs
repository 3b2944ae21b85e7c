//! Broadcast functions and the independence check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::DistanceTable;
use crate::error::{Error, Result};

/// `f : V → {0, 1, ...}`, one value per vertex. Serializes as a JSON array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Broadcast(Vec<u32>);

impl Broadcast {
    pub fn zeros(n: usize) -> Self {
        Broadcast(vec![0; n])
    }

    pub fn from_values(values: Vec<u32>) -> Self {
        Broadcast(values)
    }

    /// Builds a broadcast from `(vertex, value)` pairs; vertices are taken
    /// modulo `n`, and a vertex listed twice is an error.
    pub fn from_support(n: usize, items: &[(usize, u32)]) -> Result<Self> {
        let mut f = vec![0; n];
        let mut seen = vec![false; n];
        for &(v, x) in items {
            let v = v % n;
            if seen[v] {
                return Err(Error::Collision { vertex: v });
            }
            seen[v] = true;
            f[v] = x;
        }
        Ok(Broadcast(f))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }

    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn set(&mut self, v: usize, x: u32) {
        self.0[v] = x;
    }

    /// σ(f).
    pub fn cost(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_value(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// V_f⁺ in ascending order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn is_bounded_by(&self, cap: u32) -> bool {
        self.0.iter().all(|&x| x <= cap)
    }

    /// `g(v) = f(v + shift)`.
    pub fn rotate(&self, shift: usize) -> Broadcast {
        let n = self.n();
        Broadcast((0..n).map(|i| self.0[(i + shift) % n]).collect())
    }

    /// Support-only text form `i:v,i:v,...`; empty for the zero broadcast.
    pub fn to_compact(&self) -> String {
        self.support()
            .iter()
            .map(|&i| format!("{}:{}", i, self.0[i]))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_compact(n: usize, text: &str) -> Result<Self> {
        let mut items = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (i, v) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected i:v, got {part:?}")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex in {part:?}")))?;
            let v: u32 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad value in {part:?}")))?;
            if i >= n {
                return Err(Error::VertexOutOfRange { vertex: i, n });
            }
            items.push((i, v));
        }
        Broadcast::from_support(n, &items).map_err(|e| match e {
            Error::Collision { vertex } => Error::Parse(format!("vertex {vertex} listed twice")),
            other => other,
        })
    }
}

impl fmt::Display for Broadcast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_compact())
    }
}

impl FromStr for Broadcast {
    type Err = Error;

    /// Parses a JSON array such as `[2,0,0,2]`.
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    ValueExceedsEccentricity {
        vertex: usize,
        value: u32,
        eccentricity: u32,
    },
    /// `d(from, to) <= f(from)` for two distinct broadcast vertices.
    Domination {
        from: usize,
        to: usize,
        distance: u32,
        value: u32,
    },
}

fn check_len(dist: &DistanceTable, f: &Broadcast) -> Result<()> {
    if dist.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: dist.n(),
            got: f.n(),
        });
    }
    Ok(())
}

/// Every violation of the independent-broadcast conditions; empty means valid.
pub fn check_independent(dist: &DistanceTable, f: &Broadcast) -> Result<Vec<Violation>> {
    check_len(dist, f)?;
    let support = f.support();
    let mut out = Vec::new();
    for &u in &support {
        let e = dist.eccentricity(u);
        if f.get(u) > e {
            out.push(Violation::ValueExceedsEccentricity {
                vertex: u,
                value: f.get(u),
                eccentricity: e,
            });
        }
    }
    for &u in &support {
        for &v in &support {
            if u != v && dist.get(u, v) <= f.get(u) {
                out.push(Violation::Domination {
                    from: u,
                    to: v,
                    distance: dist.get(u, v),
                    value: f.get(u),
                });
            }
        }
    }
    Ok(out)
}

/// Short-circuiting form of [`check_independent`].
pub fn is_independent(dist: &DistanceTable, f: &Broadcast) -> bool {
    if dist.n() != f.n() {
        return false;
    }
    let support = f.support();
    support.iter().all(|&u| {
        f.get(u) <= dist.eccentricity(u)
            && support
                .iter()
                .all(|&v| u == v || dist.get(u, v) > f.get(u))
    })
}

/// `{ u : d(v, u) <= radius }`, ascending.
pub fn dominated_ball(dist: &DistanceTable, v: usize, radius: u32) -> Vec<usize> {
    (0..dist.n()).filter(|&u| dist.get(v, u) <= radius).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroadcastStats {
    pub cost: u32,
    pub support: Vec<usize>,
    /// Broadcast vertices with value exactly `cap`.
    pub v1: Vec<usize>,
    /// Broadcast vertices with `0 < f(v) < cap`.
    pub v2: Vec<usize>,
}

/// Partitions the support by `cap`. A value above `cap` leaves the partition
/// undefined and is rejected.
pub fn stats(f: &Broadcast, cap: u32) -> Result<BroadcastStats> {
    if cap == 0 {
        return Err(Error::InconsistentCounts("cap must be >= 1".into()));
    }
    let mut st = BroadcastStats {
        cost: f.cost(),
        support: Vec::new(),
        v1: Vec::new(),
        v2: Vec::new(),
    };
    for (v, &x) in f.values().iter().enumerate() {
        if x == 0 {
            continue;
        }
        if x > cap {
            return Err(Error::ExceedsCap {
                vertex: v,
                value: x,
                cap,
            });
        }
        st.support.push(v);
        if x == cap {
            st.v1.push(v);
        } else {
            st.v2.push(v);
        }
    }
    Ok(st)
}
