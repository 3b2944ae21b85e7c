//! Parameter families of `C(n; 1, a)` and the value caps their bounding
//! lemmas license.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeFamily {
    A2,
    A3,
    #[serde(rename = "N_EQ_2A")]
    NEq2A,
    #[serde(rename = "N_EQ_2A_MINUS_1")]
    NEq2AMinus1,
    #[serde(rename = "N_EQ_3A_MINUS_1")]
    NEq3AMinus1,
    QaSpecial,
    #[serde(rename = "QA_PLUS_A_MINUS_1_SPECIAL")]
    QaPlusAMinus1Special,
    #[serde(rename = "K_TIMES_A_MINUS_1")]
    KTimesAMinus1,
    General,
}

impl RegimeFamily {
    pub const ALL: [RegimeFamily; 9] = [
        RegimeFamily::A2,
        RegimeFamily::A3,
        RegimeFamily::NEq2A,
        RegimeFamily::NEq2AMinus1,
        RegimeFamily::NEq3AMinus1,
        RegimeFamily::QaSpecial,
        RegimeFamily::QaPlusAMinus1Special,
        RegimeFamily::KTimesAMinus1,
        RegimeFamily::General,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RegimeFamily::A2 => "A2",
            RegimeFamily::A3 => "A3",
            RegimeFamily::NEq2A => "N_EQ_2A",
            RegimeFamily::NEq2AMinus1 => "N_EQ_2A_MINUS_1",
            RegimeFamily::NEq3AMinus1 => "N_EQ_3A_MINUS_1",
            RegimeFamily::QaSpecial => "QA_SPECIAL",
            RegimeFamily::QaPlusAMinus1Special => "QA_PLUS_A_MINUS_1_SPECIAL",
            RegimeFamily::KTimesAMinus1 => "K_TIMES_A_MINUS_1",
            RegimeFamily::General => "GENERAL",
        }
    }
}

impl fmt::Display for RegimeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which divisibility condition selects the exact value in the `n = qa` and
/// `n = qa + a − 1` families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QaCase {
    /// `q = k(a − 1)`, `k >= 1`.
    #[serde(rename = "q_multiple_of_a_minus_1")]
    QMultipleOfAMinus1,
    /// `a = kq + 1`, `k >= 2`.
    AEqKqPlus1,
}

/// A family label plus the decomposition values that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegimeTag {
    pub family: RegimeFamily,
    pub n: usize,
    pub a: usize,
    /// `n = qa + r` (always filled for `a >= 2`).
    pub q: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<QaCase>,
}

impl RegimeTag {
    /// Re-checks the defining identity of the family against `(n, a)`.
    pub fn is_consistent(&self) -> bool {
        let (n, a, q, r) = (self.n, self.a, self.q, self.r);
        if n != q * a + r || r >= a {
            return false;
        }
        match self.family {
            RegimeFamily::A2 => a == 2,
            RegimeFamily::A3 => a == 3,
            RegimeFamily::NEq2A => n == 2 * a,
            RegimeFamily::NEq2AMinus1 => n + 1 == 2 * a,
            RegimeFamily::NEq3AMinus1 => a >= 4 && n + 1 == 3 * a,
            RegimeFamily::QaSpecial | RegimeFamily::QaPlusAMinus1Special => {
                let r_ok = if self.family == RegimeFamily::QaSpecial {
                    r == 0
                } else {
                    r == a - 1
                };
                let k = match self.k {
                    Some(k) => k,
                    None => return false,
                };
                r_ok && q >= 3
                    && a >= 4
                    && match self.case {
                        Some(QaCase::QMultipleOfAMinus1) => k >= 1 && q == k * (a - 1),
                        Some(QaCase::AEqKqPlus1) => k >= 2 && a == k * q + 1,
                        None => false,
                    }
            }
            RegimeFamily::KTimesAMinus1 => {
                matches!(self.k, Some(k) if k >= 3 && a >= 4 && n == k * (a - 1))
            }
            RegimeFamily::General => true,
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (q={}, r={}", self.family, self.q, self.r)?;
        if let Some(k) = self.k {
            write!(f, ", k={k}")?;
        }
        if let Some(s) = self.s {
            write!(f, ", s={s}")?;
        }
        write!(f, ")")
    }
}

/// Checks `n > a >= 2` and `a != n − 1`.
pub fn validate_two_step(n: usize, a: usize) -> Result<()> {
    if a < 2 || a >= n {
        return Err(Error::InvalidCirculant(format!(
            "need n > a >= 2, got n = {n}, a = {a}"
        )));
    }
    if a == n - 1 {
        return Err(Error::InvalidCirculant(format!(
            "a = n - 1 = {a} gives opposite arcs"
        )));
    }
    Ok(())
}

/// Most specific family for `(n, a)`, in the fixed precedence
/// A2, A3, N_EQ_2A, N_EQ_2A_MINUS_1, N_EQ_3A_MINUS_1, QA_SPECIAL,
/// QA_PLUS_A_MINUS_1_SPECIAL, K_TIMES_A_MINUS_1, GENERAL.
pub fn classify_regime(n: usize, a: usize) -> Result<RegimeTag> {
    validate_two_step(n, a)?;
    let (q, r) = (n / a, n % a);
    let tag = |family, k, s, case| RegimeTag {
        family,
        n,
        a,
        q,
        r,
        k,
        s,
        case,
    };
    if a == 2 {
        return Ok(tag(RegimeFamily::A2, None, None, None));
    }
    if a == 3 {
        return Ok(tag(RegimeFamily::A3, None, None, None));
    }
    if n == 2 * a {
        return Ok(tag(RegimeFamily::NEq2A, None, None, None));
    }
    if n + 1 == 2 * a {
        return Ok(tag(RegimeFamily::NEq2AMinus1, None, None, None));
    }
    if n + 1 == 3 * a {
        return Ok(tag(RegimeFamily::NEq3AMinus1, None, None, None));
    }
    for (family, r_req) in [
        (RegimeFamily::QaSpecial, 0),
        (RegimeFamily::QaPlusAMinus1Special, a - 1),
    ] {
        if r == r_req && q >= 3 {
            if q % (a - 1) == 0 {
                let k = q / (a - 1);
                return Ok(tag(family, Some(k), None, Some(QaCase::QMultipleOfAMinus1)));
            }
            if (a - 1) % q == 0 && (a - 1) / q >= 2 {
                let k = (a - 1) / q;
                return Ok(tag(family, Some(k), Some(0), Some(QaCase::AEqKqPlus1)));
            }
        }
    }
    if n % (a - 1) == 0 && n / (a - 1) >= 3 {
        return Ok(tag(RegimeFamily::KTimesAMinus1, Some(n / (a - 1)), Some(0), None));
    }
    Ok(tag(RegimeFamily::General, None, None, None))
}

/// Why a solver value cap is safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CapProvenance {
    Diameter,
    #[serde(rename = "LEMMA_A_MINUS_1")]
    LemmaAMinus1,
    LemmaQ,
    User,
}

impl fmt::Display for CapProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapProvenance::Diameter => "DIAMETER",
            CapProvenance::LemmaAMinus1 => "LEMMA_A_MINUS_1",
            CapProvenance::LemmaQ => "LEMMA_Q",
            CapProvenance::User => "USER",
        })
    }
}

/// One bounding lemma whose hypotheses hold for `(n, a)`: some optimal
/// independent broadcast has every value `<= cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CapLemma {
    pub cap: u32,
    pub provenance: CapProvenance,
    pub lemma: &'static str,
}

fn split_cap(a: usize, q: usize) -> (u32, CapProvenance) {
    if a - 1 <= q {
        ((a - 1) as u32, CapProvenance::LemmaAMinus1)
    } else {
        (q as u32, CapProvenance::LemmaQ)
    }
}

/// Every bounding lemma that applies to `(n, a)`.
pub fn cap_lemmas(n: usize, a: usize) -> Vec<CapLemma> {
    let mut out = Vec::new();
    if a < 4 || a >= n {
        return out;
    }
    let (q, r) = (n / a, n % a);
    if q >= 2 && ((r + 2 <= a && a <= q + r + 1) || (r == a - 1 && a <= q + 1)) {
        out.push(CapLemma {
            cap: (a - 1) as u32,
            provenance: CapProvenance::LemmaAMinus1,
            lemma: "n = qa + r",
        });
    }
    if r == 0 && q >= 3 {
        let (cap, provenance) = split_cap(a, q);
        out.push(CapLemma {
            cap,
            provenance,
            lemma: "n = qa",
        });
    }
    if r == a - 1 && q >= 3 {
        let (cap, provenance) = split_cap(a, q);
        out.push(CapLemma {
            cap,
            provenance,
            lemma: "n = qa + a - 1",
        });
    }
    if r == a - 1 && q == 2 {
        out.push(CapLemma {
            cap: 2,
            provenance: CapProvenance::LemmaQ,
            lemma: "n = 3a - 1",
        });
    }
    // k >= 3 is needed by the case analysis that reduces this family to the
    // lemmas above.
    let (k, s) = (n / (a - 1), n % (a - 1));
    if k >= 3 && s + 2 <= a.min(k) {
        out.push(CapLemma {
            cap: (a - 1) as u32,
            provenance: CapProvenance::LemmaAMinus1,
            lemma: "n = k(a-1) + s",
        });
    }
    out
}

/// The smallest licensed cap, if any lemma applies. Ties keep the first
/// lemma in [`cap_lemmas`] order.
pub fn lemma_cap(n: usize, a: usize) -> Option<CapLemma> {
    cap_lemmas(n, a)
        .into_iter()
        .reduce(|best, c| if c.cap < best.cap { c } else { best })
}
