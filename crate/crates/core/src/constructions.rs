//! Explicit independent broadcasts certifying lower bounds on β_b.
//!
//! Every function checks its family's hypotheses and returns the broadcast
//! with its predicted cost. None of them consult the solver; certification is
//! [`ConstructionRecord::certify`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::broadcast::{check_independent, Broadcast, Violation};
use crate::circulant::Circulant;
use crate::error::{Error, Result};
use crate::regime::validate_two_step;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstructionFamily {
    #[serde(rename = "single_vertex_diam")]
    SingleVertexDiam,
    #[serde(rename = "3a_minus_1")]
    ThreeAMinus1,
    #[serde(rename = "a3")]
    A3,
    #[serde(rename = "k_a_minus_1")]
    KAMinus1,
    #[serde(rename = "qa")]
    Qa,
    #[serde(rename = "qa_plus_a_minus_1")]
    QaPlus,
}

impl ConstructionFamily {
    pub const ALL: [ConstructionFamily; 6] = [
        ConstructionFamily::SingleVertexDiam,
        ConstructionFamily::ThreeAMinus1,
        ConstructionFamily::A3,
        ConstructionFamily::KAMinus1,
        ConstructionFamily::Qa,
        ConstructionFamily::QaPlus,
    ];

    /// Name used on the command line.
    pub fn label(self) -> &'static str {
        match self {
            ConstructionFamily::SingleVertexDiam => "single",
            ConstructionFamily::ThreeAMinus1 => "3a-1",
            ConstructionFamily::A3 => "a3",
            ConstructionFamily::KAMinus1 => "k(a-1)",
            ConstructionFamily::Qa => "qa",
            ConstructionFamily::QaPlus => "qa+a-1",
        }
    }
}

impl fmt::Display for ConstructionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ConstructionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let fam = match t.as_str() {
            "single" | "single-vertex-diam" | "diam" => ConstructionFamily::SingleVertexDiam,
            "3a-1" => ConstructionFamily::ThreeAMinus1,
            "a3" => ConstructionFamily::A3,
            "k(a-1)" | "k-a-minus-1" | "ka1" => ConstructionFamily::KAMinus1,
            "qa" => ConstructionFamily::Qa,
            "qa+a-1" | "qa-plus" => ConstructionFamily::QaPlus,
            _ => return Err(Error::Parse(format!("unknown construction family {s:?}"))),
        };
        Ok(fam)
    }
}

fn compact<S: Serializer>(f: &Broadcast, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_compact())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionRecord {
    pub family: ConstructionFamily,
    pub n: usize,
    pub a: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(serialize_with = "compact")]
    pub broadcast: Broadcast,
    pub predicted_cost: u32,
    pub source: String,
}

impl ConstructionRecord {
    pub fn graph(&self) -> Result<Circulant> {
        Circulant::two_step(self.n, self.a as i64)
    }

    /// Independence violations of the broadcast on its own graph.
    pub fn certify(&self) -> Result<Vec<Violation>> {
        let d = self.graph()?.all_pairs();
        check_independent(&d, &self.broadcast)
    }

    /// Valid on its graph and exactly as expensive as predicted.
    pub fn is_certified(&self) -> bool {
        self.broadcast.cost() == self.predicted_cost
            && self.certify().map(|v| v.is_empty()).unwrap_or(false)
    }
}

fn hypothesis(msg: String) -> Error {
    Error::OutOfRegime(msg)
}

/// `f(v_0) = diam`, zero elsewhere.
pub fn single_vertex_diam(n: usize, a: usize) -> Result<ConstructionRecord> {
    validate_two_step(n, a)?;
    let diam = Circulant::two_step(n, a as i64)?.diameter();
    Ok(ConstructionRecord {
        family: ConstructionFamily::SingleVertexDiam,
        n,
        a,
        q: None,
        k: None,
        s: None,
        broadcast: Broadcast::from_support(n, &[(0, diam)])?,
        predicted_cost: diam,
        source: "single vertex at the diameter".into(),
    })
}

/// `C(3a − 1; 1, a)`, cost `floor(n/2)`.
pub fn construct_3a_minus_1(a: usize) -> Result<ConstructionRecord> {
    if a < 4 {
        return Err(hypothesis(format!("n = 3a - 1 construction needs a >= 4, got {a}")));
    }
    let n = 3 * a - 1;
    let items: Vec<(usize, u32)> = if a % 2 == 1 {
        (0..n).step_by(2).map(|i| (i, 1)).collect()
    } else {
        let mut v = vec![(0, 2)];
        v.extend((3..a).step_by(2).map(|i| (i, 1)));
        v.extend((a + 2..=2 * a - 2).step_by(2).map(|i| (i, 1)));
        v.extend((2 * a + 1..=3 * a - 3).step_by(2).map(|i| (i, 1)));
        v
    };
    Ok(ConstructionRecord {
        family: ConstructionFamily::ThreeAMinus1,
        n,
        a,
        q: None,
        k: None,
        s: None,
        broadcast: Broadcast::from_support(n, &items)?,
        predicted_cost: (n / 2) as u32,
        source: "theorem n = 3a - 1 construction".into(),
    })
}

/// `C(n; 1, 3)`, cost `floor(n/2)`. `n = 5` uses the single-vertex broadcast.
pub fn construct_a3(n: usize) -> Result<ConstructionRecord> {
    validate_two_step(n, 3)
        .map_err(|_| hypothesis(format!("a = 3 construction needs n >= 5, got {n}")))?;
    if n == 5 {
        let mut rec = single_vertex_diam(5, 3)?;
        rec.family = ConstructionFamily::A3;
        rec.source = "theorem a = 3 construction (n = 5: single vertex)".into();
        return Ok(rec);
    }
    let items: Vec<(usize, u32)> = if n % 2 == 0 {
        (0..n).step_by(2).map(|i| (i, 1)).collect()
    } else {
        let mut v: Vec<(usize, u32)> = (0..=n - 7).step_by(2).map(|i| (i, 1)).collect();
        v.push((n - 5, 2));
        v
    };
    Ok(ConstructionRecord {
        family: ConstructionFamily::A3,
        n,
        a: 3,
        q: None,
        k: None,
        s: None,
        broadcast: Broadcast::from_support(n, &items)?,
        predicted_cost: (n / 2) as u32,
        source: "theorem a = 3 construction".into(),
    })
}

/// `n = k(a − 1) + s` with `a >= 4` and `0 <= s <= min(a, k) − 2`.
pub fn construct_k_a_minus_1(a: usize, k: usize, s: usize) -> Result<ConstructionRecord> {
    if a < 4 || s + 2 > a.min(k) {
        return Err(hypothesis(format!(
            "n = k(a-1) + s construction needs a >= 4 and 0 <= s <= min(a, k) - 2, got a = {a}, k = {k}, s = {s}"
        )));
    }
    let n = k * (a - 1) + s;
    let (am1, am2) = (a - 1, (a - 2) as u32);
    let items: Vec<(usize, u32)> = match s {
        0 => (0..k).map(|p| (p * am1, am2)).collect(),
        1 => {
            let mut v: Vec<_> = (0..k - 2).map(|p| (p * am1, am2)).collect();
            v.push(((k - 2) * am1, am1 as u32));
            v
        }
        _ => {
            let mut v: Vec<_> = (0..k - s).map(|p| (p * am1, am2)).collect();
            v.extend((k - s..=k).map(|p| (p * am1, (s - 1) as u32)));
            v
        }
    };
    let predicted = match s {
        0 => k * (a - 2),
        1 => (k - 1) * (a - 2) + 1,
        _ => (k - s) * (a - 2) + (s - 1) * (s + 1),
    };
    Ok(ConstructionRecord {
        family: ConstructionFamily::KAMinus1,
        n,
        a,
        q: None,
        k: Some(k),
        s: Some(s),
        broadcast: Broadcast::from_support(n, &items)?,
        predicted_cost: predicted as u32,
        source: format!("lower bound n = k(a-1) + s, s = {s}"),
    })
}

fn qa_like(a: usize, q: usize, k: usize, s: usize, plus: bool) -> Result<ConstructionRecord> {
    let name = if plus { "n = qa + a - 1" } else { "n = qa" };
    if q < 3 || q + 1 >= a || k < 1 || s >= q || a != k * q + 1 + s {
        return Err(hypothesis(format!(
            "{name} construction needs 3 <= q < a - 1, a = kq + 1 + s, k >= 1, 0 <= s <= q - 1; \
             got a = {a}, q = {q}, k = {k}, s = {s}"
        )));
    }
    let n = if plus { q * a + a - 1 } else { q * a };
    let qm1 = (q - 1) as u32;
    let alpha_max = if plus { q + 1 } else { q };
    let diagonal = || {
        (1..=alpha_max).flat_map(move |al| {
            (0..k).map(move |be| ((al * (a - 1) + n - (be * q) % n) % n, qm1))
        })
    };
    let items: Vec<(usize, u32)> = match s {
        0 => (0..n).step_by(q).map(|i| (i, qm1)).collect(),
        1 => std::iter::once((0, q as u32)).chain(diagonal()).collect(),
        _ => {
            let p_min = if plus { 0 } else { 1 };
            let tail = (p_min..=s).map(|p| (((q - p) * a + p) % n, (s - 1) as u32));
            std::iter::once((0, qm1)).chain(diagonal()).chain(tail).collect()
        }
    };
    let predicted = match (s, plus) {
        (0, false) => a * (q - 1),
        (1, false) => (a - 1) * (q - 1) + 1,
        (_, false) => (a - s) * (q - 1) + s * (s - 1),
        (0, true) => (a + k) * (q - 1),
        (1, true) => (a + k - 1) * (q - 1) + 1,
        (_, true) => (a + k - s) * (q - 1) + (s - 1) * (s + 1),
    };
    Ok(ConstructionRecord {
        family: if plus {
            ConstructionFamily::QaPlus
        } else {
            ConstructionFamily::Qa
        },
        n,
        a,
        q: Some(q),
        k: Some(k),
        s: Some(s),
        broadcast: Broadcast::from_support(n, &items)?,
        predicted_cost: predicted as u32,
        source: format!("lower bound {name}, s = {s}"),
    })
}

/// `n = qa`, `a = kq + 1 + s`.
pub fn construct_qa(a: usize, q: usize, k: usize, s: usize) -> Result<ConstructionRecord> {
    qa_like(a, q, k, s, false)
}

/// `n = qa + a − 1`, `a = kq + 1 + s`.
pub fn construct_qa_plus(a: usize, q: usize, k: usize, s: usize) -> Result<ConstructionRecord> {
    qa_like(a, q, k, s, true)
}

/// Every construction whose hypotheses hold for `(n, a)`, excluding the
/// single-vertex one (the diameter is reported separately as a bound).
pub fn applicable(n: usize, a: usize) -> Vec<ConstructionRecord> {
    let mut out = Vec::new();
    if validate_two_step(n, a).is_err() {
        return out;
    }
    if a == 3 {
        out.extend(construct_a3(n));
    }
    if a >= 4 && n + 1 == 3 * a {
        out.extend(construct_3a_minus_1(a));
    }
    if a >= 4 {
        out.extend(construct_k_a_minus_1(a, n / (a - 1), n % (a - 1)));
        let q = n / a;
        if q >= 1 {
            let (k, s) = ((a - 1) / q, (a - 1) % q);
            if n % a == 0 {
                out.extend(construct_qa(a, q, k, s));
            }
            if n % a == a - 1 {
                out.extend(construct_qa_plus(a, q, k, s));
            }
        }
    }
    out
}
