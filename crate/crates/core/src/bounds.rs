//! Predicted exact values and upper/lower bounds for β_b(C(n; 1, a)), each
//! tagged with the statement it comes from.

use serde::{Deserialize, Serialize};

use crate::circulant::Circulant;
use crate::constructions;
use crate::error::{Error, Result};
use crate::regime::{classify_regime, validate_two_step, RegimeFamily, RegimeTag};
use crate::regions::RegionVariant;

/// A value together with the statement that justifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: u32,
    pub source: String,
}

impl Bound {
    fn new(value: u32, source: impl Into<String>) -> Self {
        Bound {
            value,
            source: source.into(),
        }
    }
}

/// Which family of counting propositions applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CapRegime {
    /// `(a − 1)`-bounded broadcasts, `V¹` = vertices at value `a − 1`.
    AMinus1,
    /// `q`-bounded broadcasts on `C(qa; 1, a)`.
    QaR0,
    /// `q`-bounded broadcasts on `C(qa + a − 1; 1, a)`.
    QaRa1,
}

impl CapRegime {
    /// The value `ℓ` that defines `V¹`.
    pub fn ell(self, n: usize, a: usize) -> u32 {
        match self {
            CapRegime::AMinus1 => (a - 1) as u32,
            CapRegime::QaR0 | CapRegime::QaRa1 => (n / a) as u32,
        }
    }

    pub fn region_variant(self) -> RegionVariant {
        match self {
            CapRegime::AMinus1 => RegionVariant::AMinus1,
            CapRegime::QaR0 => RegionVariant::Qa,
            CapRegime::QaRa1 => RegionVariant::QaPlus,
        }
    }

    fn applies(self, n: usize, a: usize) -> bool {
        if a < 4 || a >= n {
            return false;
        }
        let (q, r) = (n / a, n % a);
        match self {
            CapRegime::AMinus1 => {
                q >= 2 && ((r + 2 <= a && a <= q + r + 1) || (r == a - 1 && a <= q + 1))
            }
            CapRegime::QaR0 => r == 0 && q >= 3 && q + 1 < a,
            CapRegime::QaRa1 => r == a - 1 && q >= 3 && q + 1 < a,
        }
    }
}

/// The counting family whose hypotheses hold for `(n, a)`; at most one does.
pub fn counting_regime(n: usize, a: usize) -> Option<CapRegime> {
    [CapRegime::AMinus1, CapRegime::QaR0, CapRegime::QaRa1]
        .into_iter()
        .find(|c| c.applies(n, a))
}

/// Both counting formulas of `regime`, unchecked. Each is non-increasing in
/// `support` and `v1`, which is what lets the solver prune with them.
pub fn sigma_formulas(n: usize, a: usize, regime: CapRegime, support: usize, v1: usize) -> [i64; 2] {
    let (n, a, s, v1) = (n as i64, a as i64, support as i64, v1 as i64);
    match regime {
        CapRegime::AMinus1 => [
            n - s - (a - 1) * v1,
            ((a - 2) * (n - v1)).div_euclid(a - 1) - (a - 3) * v1,
        ],
        CapRegime::QaR0 => {
            let q = n / a;
            [
                n - (s - v1) - q * v1,
                ((q - 1) * n).div_euclid(q) - (q - 2) * v1,
            ]
        }
        CapRegime::QaRa1 => {
            let q = n / a;
            [
                n - s - q * v1,
                ((q - 1) * (n - v1)).div_euclid(q) - (q - 2) * v1,
            ]
        }
    }
}

pub(crate) fn sigma_bound(n: usize, a: usize, regime: CapRegime, support: usize, v1: usize) -> i64 {
    let [x, y] = sigma_formulas(n, a, regime, support, v1);
    x.min(y)
}

/// Minimum of the two counting propositions of `regime` for the given counts.
pub fn upper_bound_sigma(
    n: usize,
    a: usize,
    regime: CapRegime,
    support_size: usize,
    v1_size: usize,
) -> Result<i64> {
    if v1_size > support_size || support_size > n {
        return Err(Error::InconsistentCounts(format!(
            "support = {support_size}, v1 = {v1_size}, n = {n}"
        )));
    }
    if !regime.applies(n, a) {
        return Err(Error::OutOfRegime(format!(
            "{regime:?} counting bound does not apply to n = {n}, a = {a}"
        )));
    }
    Ok(sigma_bound(n, a, regime, support_size, v1_size))
}

fn half(n: usize) -> u32 {
    (n / 2) as u32
}

/// Every exact-value theorem whose hypotheses hold for `(n, a)`, regardless
/// of classification precedence.
pub fn all_predictions(n: usize, a: usize) -> Result<Vec<Bound>> {
    validate_two_step(n, a)?;
    let mut out = Vec::new();
    if a == 2 {
        out.push(Bound::new(half(n), "theorem a = 2: floor(n/2)"));
    }
    if a == 3 {
        out.push(Bound::new(half(n), "theorem a = 3: floor(n/2)"));
    }
    if n == 2 * a {
        out.push(Bound::new(a as u32, "theorem n = 2a: a"));
    }
    if n + 1 == 2 * a {
        out.push(Bound::new(half(n), "corollary n = 2a - 1: floor((2a-1)/2)"));
    }
    if a >= 4 && n + 1 == 3 * a {
        out.push(Bound::new(half(n), "theorem n = 3a - 1: floor(n/2)"));
    }
    if a >= 4 {
        let (q, r) = (n / a, n % a);
        let am1 = a - 1;
        if q >= 3 && (r == 0 || r == am1) {
            let plus = r == am1;
            let name = if plus { "theorem n = qa + a - 1" } else { "theorem n = qa" };
            if q % am1 == 0 {
                let k = q / am1;
                let v = if plus { (q + k + 1) * (a - 2) } else { (q + k) * (a - 2) };
                let formula = if plus { "(q+k+1)(a-2)" } else { "(q+k)(a-2)" };
                out.push(Bound::new(v as u32, format!("{name}, q = k(a-1): {formula}")));
            }
            if am1 % q == 0 && am1 / q >= 2 {
                let k = am1 / q;
                let v = if plus { (a + k) * (q - 1) } else { a * (q - 1) };
                let formula = if plus { "(a+k)(q-1)" } else { "a(q-1)" };
                out.push(Bound::new(v as u32, format!("{name}, a = kq+1: {formula}")));
            }
        }
        if n % am1 == 0 && n / am1 >= 3 {
            let k = n / am1;
            out.push(Bound::new(((a - 2) * k) as u32, "theorem n = k(a-1): (a-2)k"));
        }
    }
    Ok(out)
}

/// The exact value selected by [`classify_regime`]; `None` for GENERAL.
pub fn predicted_beta(n: usize, a: usize) -> Result<Option<Bound>> {
    let tag = classify_regime(n, a)?;
    let preds = all_predictions(n, a)?;
    let key = match tag.family {
        RegimeFamily::A2 => "theorem a = 2",
        RegimeFamily::A3 => "theorem a = 3",
        RegimeFamily::NEq2A => "theorem n = 2a:",
        RegimeFamily::NEq2AMinus1 => "corollary n = 2a - 1",
        RegimeFamily::NEq3AMinus1 => "theorem n = 3a - 1",
        RegimeFamily::QaSpecial => "theorem n = qa,",
        RegimeFamily::QaPlusAMinus1Special => "theorem n = qa + a - 1",
        RegimeFamily::KTimesAMinus1 => "theorem n = k(a-1)",
        RegimeFamily::General => return Ok(None),
    };
    Ok(preds.into_iter().find(|b| b.source.starts_with(key)))
}

/// Smallest certified upper bound on β_b for `(n, a)`.
///
/// Counting families are maximized over all `(|V⁺|, |V¹|)` pairs allowed by
/// the region capacity, `|V⁺| <= floor(n/2)`, and the value cap itself.
pub fn global_upper_bound(n: usize, a: usize) -> Result<Bound> {
    validate_two_step(n, a)?;
    let mut best = Bound::new((n - 1) as u32, "trivial: sigma <= n - |V+|");
    let mut offer = |b: Bound| {
        if b.value < best.value {
            best = b;
        }
    };
    if a == 2 || n + 1 == 2 * a {
        offer(Bound::new(half(n), "theorem a = 2 counting (n = 2a - 1 by isomorphism)"));
    }
    if n == 2 * a {
        offer(Bound::new(a as u32, "theorem n = 2a counting"));
    }
    if a == 3 || (a >= 4 && n + 1 == 3 * a) {
        // L-regions have 3f(v) − 1 vertices, so 3σ − |V⁺| <= n.
        let v = ((n + n / 2) / 3) as u32;
        let src = if a == 3 { "theorem a = 3 counting" } else { "theorem n = 3a - 1 counting" };
        offer(Bound::new(v, src));
    }
    if let Some(regime) = counting_regime(n, a) {
        let ell = regime.ell(n, a) as i64;
        let a_size = regime.region_variant().a_size(n, a);
        let mut max = 0i64;
        for s in 0..=n / 2 {
            for v1 in 0..=s {
                if v1 * a_size + (s - v1) * 2 > n {
                    break;
                }
                let trivial = ell * v1 as i64 + (ell - 1) * (s - v1) as i64;
                let v = sigma_bound(n, a, regime, s, v1).min(trivial);
                max = max.max(v);
            }
        }
        let src = match regime {
            CapRegime::AMinus1 => "counting propositions, (a-1)-bounded",
            CapRegime::QaR0 => "counting propositions, q-bounded, n = qa",
            CapRegime::QaRa1 => "counting propositions, q-bounded, n = qa + a - 1",
        };
        offer(Bound::new(max.max(0) as u32, src));
    }
    Ok(best)
}

/// Diameter plus the cost of every construction whose hypotheses hold.
pub fn lower_bounds(n: usize, a: usize) -> Result<Vec<Bound>> {
    validate_two_step(n, a)?;
    let g = Circulant::two_step(n, a as i64)?;
    let mut out = vec![Bound::new(g.diameter(), "diameter")];
    for rec in constructions::applicable(n, a) {
        out.push(Bound::new(rec.predicted_cost, rec.source.clone()));
    }
    Ok(out)
}

/// Aggregated bounds for `(n, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub a: usize,
    pub regime: RegimeTag,
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<Bound>,
    /// Every exact theorem that applies, for cross-checking overlaps.
    pub predictions: Vec<Bound>,
}

impl BoundReport {
    pub fn max_lower(&self) -> u32 {
        self.lower.iter().map(|b| b.value).max().unwrap_or(0)
    }

    pub fn min_upper(&self) -> u32 {
        self.upper.iter().map(|b| b.value).min().unwrap_or(u32::MAX)
    }

    /// Every lower bound is at most every upper bound and the exact value,
    /// when present, lies between them.
    pub fn is_consistent(&self) -> bool {
        let (lo, hi) = (self.max_lower(), self.min_upper());
        lo <= hi && self.exact.as_ref().is_none_or(|e| lo <= e.value && e.value <= hi)
    }
}

pub fn report(n: usize, a: usize) -> Result<BoundReport> {
    Ok(BoundReport {
        n,
        a,
        regime: classify_regime(n, a)?,
        lower: lower_bounds(n, a)?,
        upper: vec![global_upper_bound(n, a)?],
        exact: predicted_beta(n, a)?,
        predictions: all_predictions(n, a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(n: usize, a: usize) -> u32 {
        predicted_beta(n, a).unwrap().unwrap().value
    }

    #[test]
    fn predicted_examples() {
        assert_eq!(pred(12, 4), 8);
        assert!(predicted_beta(12, 4).unwrap().unwrap().source.contains("q = k(a-1)"));
        assert_eq!(pred(21, 7), 14);
        assert_eq!(pred(15, 4), 10);
        assert_eq!(pred(8, 4), 4);
        assert_eq!(pred(9, 5), 4);
        assert_eq!(pred(11, 4), 5);
        assert_eq!(pred(14, 2), 7);
        assert!(predicted_beta(17, 5).unwrap().is_none());
        assert!(predicted_beta(12, 11).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(upper_bound_sigma(9, 4, CapRegime::AMinus1, 3, 0).unwrap(), 6);
        assert_eq!(upper_bound_sigma(21, 7, CapRegime::QaR0, 7, 0).unwrap(), 14);
        assert_eq!(upper_bound_sigma(9, 4, CapRegime::AMinus1, 0, 0).unwrap(), 6);
        assert!(matches!(
            upper_bound_sigma(9, 4, CapRegime::AMinus1, 1, 2),
            Err(Error::InconsistentCounts(_))
        ));
        assert!(upper_bound_sigma(9, 4, CapRegime::QaR0, 1, 0).is_err());
    }

    #[test]
    fn first_formula_with_empty_support_is_n() {
        assert_eq!(sigma_formulas(9, 4, CapRegime::AMinus1, 0, 0)[0], 9);
        assert_eq!(sigma_formulas(21, 7, CapRegime::QaR0, 0, 0)[0], 21);
    }

    #[test]
    fn formulas_are_non_increasing() {
        for (n, a, c) in [(12, 4, CapRegime::AMinus1), (21, 7, CapRegime::QaR0), (27, 7, CapRegime::QaRa1)] {
            for s in 0..n {
                for v1 in 0..=s {
                    let here = sigma_bound(n, a, c, s, v1);
                    assert!(sigma_bound(n, a, c, s + 1, v1) <= here);
                    assert!(sigma_bound(n, a, c, s + 1, v1 + 1) <= here);
                }
            }
        }
    }

    #[test]
    fn global_examples() {
        assert_eq!(global_upper_bound(9, 4).unwrap().value, 6);
        assert_eq!(global_upper_bound(21, 7).unwrap().value, 14);
        assert_eq!(global_upper_bound(12, 4).unwrap().value, 8);
        assert_eq!(global_upper_bound(17, 5).unwrap().value, 12);
    }

    #[test]
    fn lower_examples() {
        let lb = lower_bounds(12, 2).unwrap();
        assert_eq!(lb.iter().map(|b| b.value).max(), Some(6));
        let lb = lower_bounds(9, 4).unwrap();
        assert!(lb.iter().any(|b| b.value == 6));
        let lb = lower_bounds(17, 6).unwrap();
        assert_eq!(lb.iter().map(|b| b.value).max(), Some(8));
    }

    #[test]
    fn overlapping_predictions_agree() {
        for n in 4..200 {
            for a in 2..n - 1 {
                let p = all_predictions(n, a).unwrap();
                if let Some(first) = p.first() {
                    assert!(p.iter().all(|b| b.value == first.value), "n={n} a={a}: {p:?}");
                }
            }
        }
    }

    #[test]
    fn reports_are_consistent() {
        for n in 4..80 {
            for a in 2..n - 1 {
                let r = report(n, a).unwrap();
                assert!(r.is_consistent(), "{r:?}");
                if let Some(e) = &r.exact {
                    assert_eq!(r.max_lower(), e.value, "n={n} a={a}");
                    assert_eq!(r.min_upper(), e.value, "n={n} a={a}");
                }
            }
        }
    }
}
