//! Rewriting procedures from the bounding lemmas: turn an independent
//! broadcast with large values into a bounded one of no smaller cost.
//!
//! Rewrites run in ascending vertex order. A placement onto a vertex that
//! already carries a value, or an output that is not independent, is returned
//! as an error and never patched: both mean a lemma hypothesis or a lemma
//! argument failed on that input.

use serde::Serialize;
use thiserror::Error;

use crate::broadcast::{check_independent, is_independent, Broadcast, Violation};
use crate::circulant::Circulant;
use crate::distance::DistanceTable;
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: String,
    pub vertex: usize,
    pub old_value: u32,
    /// Values written by the rule, zeros included.
    pub placed: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
    pub input_cost: u32,
    pub output_cost: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("lemma hypotheses do not hold: {0}")]
    Regime(String),
    #[error("input is not an independent broadcast ({} violations)", .0.len())]
    InvalidInput(Vec<Violation>),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("rewrite of v{source_vertex} collides at v{vertex}")]
    Collision { source_vertex: usize, vertex: usize },
    /// The rewritten broadcast is not independent even though the hypotheses hold.
    #[error("lemma gap: rewritten broadcast is not independent ({} violations)", violations.len())]
    LemmaGap { violations: Vec<Violation> },
    #[error("case not covered by the lemma: {0}")]
    UncoveredCase(String),
    #[error("rewrite lowered the cost from {input} to {output}")]
    CostDecreased { input: u32, output: u32 },
}

pub type TransformResult<T> = std::result::Result<T, TransformError>;

fn two_step(graph: &Circulant) -> TransformResult<(usize, usize)> {
    graph
        .step_a()
        .map(|a| (graph.n(), a))
        .ok_or_else(|| TransformError::Regime(format!("{} is not of the form C(n; 1, a)", graph.spec())))
}

fn check_input(dist: &DistanceTable, f: &Broadcast) -> TransformResult<()> {
    let v = check_independent(dist, f)?;
    if v.is_empty() {
        Ok(())
    } else {
        Err(TransformError::InvalidInput(v))
    }
}

fn check_output(dist: &DistanceTable, f: &Broadcast, g: &Broadcast) -> TransformResult<()> {
    let v = check_independent(dist, g)?;
    if !v.is_empty() {
        return Err(TransformError::LemmaGap { violations: v });
    }
    if g.cost() < f.cost() {
        return Err(TransformError::CostDecreased {
            input: f.cost(),
            output: g.cost(),
        });
    }
    Ok(())
}

/// Applies one vertex's rewrite to `g`. `touched` marks vertices already
/// written by earlier rewrites.
fn apply(
    g: &mut Broadcast,
    touched: &mut [bool],
    source: usize,
    placements: Vec<(usize, u32)>,
    rule: &str,
    old: u32,
) -> TransformResult<RewriteStep> {
    let n = g.n();
    g.set(source, 0);
    let mut placed = Vec::with_capacity(placements.len());
    for (j, v) in placements {
        let j = j % n;
        if touched[j] || (j != source && g.get(j) > 0) {
            return Err(TransformError::Collision {
                source_vertex: source,
                vertex: j,
            });
        }
        g.set(j, v);
        touched[j] = true;
        placed.push((j, v));
    }
    Ok(RewriteStep {
        rule: rule.into(),
        vertex: source,
        old_value: old,
        placed,
    })
}

/// Hypotheses under which some optimal broadcast is `(a − 1)`-bounded via
/// this rewrite: `n = qa + r`, `q >= 2`, and either `4 <= a <= q + r + 1`
/// with `r <= a − 2`, or `a <= q + 1` with `r = a − 1`.
pub fn a_minus_1_regime(n: usize, a: usize) -> bool {
    let (q, r) = (n / a, n % a);
    a >= 4 && q >= 2 && ((r + 2 <= a && a <= q + r + 1) || (r == a - 1 && a <= q + 1))
}

/// Rewrites every vertex with `f(v) >= a` so that all values are `<= a − 1`.
pub fn bound_to_a_minus_1(
    graph: &Circulant,
    dist: &DistanceTable,
    f: &Broadcast,
) -> TransformResult<(Broadcast, RewriteTrace)> {
    let (n, a) = two_step(graph)?;
    if !a_minus_1_regime(n, a) {
        return Err(TransformError::Regime(format!(
            "n = {n}, a = {a}: needs n = qa + r with q >= 2 and (4 <= a <= q+r+1, r <= a-2) or (a <= q+1, r = a-1)"
        )));
    }
    check_input(dist, f)?;
    let am1 = a - 1;
    let mut g = f.clone();
    let mut touched = vec![false; n];
    let mut steps = Vec::new();
    for i in 0..n {
        let x = f.get(i) as usize;
        if x <= am1 {
            continue;
        }
        let (rule, placements) = if x <= 2 * a - 3 {
            (
                "a-1 item 1",
                vec![(i, (a - 2) as u32), (i + am1, (x - am1) as u32), (i + 2 * a - 2, 1)],
            )
        } else {
            let p = x / am1;
            (
                "a-1 item 2",
                (0..=4 * p - 5).map(|m| (i + m * am1, (a - 2) as u32)).collect(),
            )
        };
        steps.push(apply(&mut g, &mut touched, i, placements, rule, x as u32)?);
    }
    check_output(dist, f, &g)?;
    let trace = RewriteTrace {
        steps,
        input_cost: f.cost(),
        output_cost: g.cost(),
    };
    Ok((g, trace))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QVariant {
    /// `n = qa`.
    Qa,
    /// `n = qa + a − 1`.
    QaPlus,
}

/// Rewrites every vertex with `f(v) > q` so that all values are `<= q`.
///
/// In the `f(v) >= 2q` case the diagonal offset `k` runs over every value
/// (`1..=q` for `n = qa`, `0..=q` for `n = qa + a − 1`), one comb per `k`.
pub fn bound_to_q(
    graph: &Circulant,
    dist: &DistanceTable,
    f: &Broadcast,
    variant: QVariant,
) -> TransformResult<(Broadcast, RewriteTrace)> {
    let (n, a) = two_step(graph)?;
    let (q, r) = (n / a, n % a);
    let r_ok = match variant {
        QVariant::Qa => r == 0,
        QVariant::QaPlus => r == a - 1,
    };
    if !r_ok || q < 3 || q + 1 >= a {
        return Err(TransformError::Regime(format!(
            "n = {n}, a = {a}: {variant:?} needs n = qa{} with 3 <= q < a - 1",
            if variant == QVariant::QaPlus { " + a - 1" } else { "" }
        )));
    }
    check_input(dist, f)?;
    let k0 = match variant {
        QVariant::Qa => 1,
        QVariant::QaPlus => 0,
    };
    let diag = |i: usize, k: usize| i + (q - k) * a + k;
    let mut g = f.clone();
    let mut touched = vec![false; n];
    let mut steps = Vec::new();
    for i in 0..n {
        let x = f.get(i) as usize;
        if x <= q {
            continue;
        }
        let qm1 = (q - 1) as u32;
        let mut placements = vec![(i, qm1)];
        let rule = if x < 2 * q {
            let d = x - q;
            placements.extend((k0..=k0 + d).map(|k| (diag(i, k), d as u32)));
            "q item a"
        } else {
            let p = x / q;
            for k in k0..=q {
                placements.extend((0..=p - 2).map(|m| (diag(i, k) + m * q, qm1)));
            }
            "q item b"
        };
        steps.push(apply(&mut g, &mut touched, i, placements, rule, x as u32)?);
    }
    check_output(dist, f, &g)?;
    let trace = RewriteTrace {
        steps,
        input_cost: f.cost(),
        output_cost: g.cost(),
    };
    Ok((g, trace))
}

/// Outcome of one equalization step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqualizeStep {
    /// `g(v_{i+a−1})` already equals `ℓ − 1`.
    Done,
    Applied(Broadcast, RewriteStep),
}

fn hyp(msg: String) -> TransformError {
    TransformError::Regime(msg)
}

/// One application of the pair-equalization lemma at `v_i`.
///
/// Checks `4 <= a`, `2 <= ℓ <= a − 1`, `f` independent and `ℓ`-bounded,
/// `f(v_i) = ℓ − 1` and `d(v_{i+a−1}, v_i) >= ℓ`, then applies the case that
/// matches `p = f(v_{i+a−1})` and `q = f(v_{i+(p+2)a−1})`. The `p = 0`,
/// `ℓ < a − 1` cases leave `g(v_i) = ℓ`.
pub fn equalize_step(
    graph: &Circulant,
    dist: &DistanceTable,
    f: &Broadcast,
    i: usize,
    ell: u32,
) -> TransformResult<EqualizeStep> {
    let (n, a) = two_step(graph)?;
    if a < 4 || ell < 2 || ell as usize > a - 1 {
        return Err(hyp(format!("needs a >= 4 and 2 <= l <= a - 1, got a = {a}, l = {ell}")));
    }
    if i >= n {
        return Err(Error::VertexOutOfRange { vertex: i, n }.into());
    }
    check_input(dist, f)?;
    if !f.is_bounded_by(ell) {
        return Err(hyp(format!("f is not {ell}-bounded")));
    }
    if f.get(i) != ell - 1 {
        return Err(hyp(format!("f(v_{i}) = {} != l - 1 = {}", f.get(i), ell - 1)));
    }
    let j1 = (i + a - 1) % n;
    if dist.get(j1, i) < ell {
        return Err(hyp(format!("d(v_{j1}, v_{i}) = {} < l = {ell}", dist.get(j1, i))));
    }
    let p = f.get(j1);
    if p == ell - 1 {
        return Ok(EqualizeStep::Done);
    }
    if p > ell - 1 {
        return Err(hyp(format!("f(v_{j1}) = {p} exceeds l - 1")));
    }
    let pu = p as usize;
    let jq = (i + (pu + 2) * a - 1) % n;
    if jq == i || jq == j1 {
        return Err(TransformError::UncoveredCase(format!(
            "v_(i+(p+2)a-1) coincides with v_{i} or v_{j1} (n = {n})"
        )));
    }
    let qv = f.get(jq);
    let tail = (i + (pu + 2) * a + (a - 3 - pu)) % n;
    let top = ell - 1;
    let full = ell as usize == a - 1;

    let (rule, placements): (&str, Vec<(usize, u32)>) = if full || p > 0 {
        if qv + p < top {
            ("equalize (a)", vec![(j1, qv + p + 1), (jq, 0)])
        } else if (full && qv <= ell - 1) || (!full && qv + p > ell && qv <= ell) {
            let t = qv - (top - p);
            let mut pl = vec![(j1, top), (jq, 0)];
            if t > 0 {
                pl.push((tail, t));
            }
            ("equalize (b)", pl)
        } else {
            return Err(TransformError::UncoveredCase(format!(
                "l = {ell}, p = {p}, q = {qv}: q is neither <= l-p-2 nor >= l-p+1"
            )));
        }
    } else {
        let jq2 = (i + 2 * a - 1) % n;
        let dominators: Vec<usize> = f
            .support()
            .into_iter()
            .filter(|&u| u != j1 && dist.get(u, j1) <= f.get(u))
            .collect();
        match dominators.as_slice() {
            [] => ("equalize (c)(i)", vec![(i, ell), (j1, qv + 1), (jq2, 0)]),
            [k] if (1..a).contains(&((k + n - i) % n)) => (
                "equalize (c)(ii)",
                vec![(i, ell), (*k, f.get(*k) - 1), (j1, qv + 1), (jq2, 0)],
            ),
            _ => {
                return Err(TransformError::UncoveredCase(format!(
                    "v_{j1} is dominated by {dominators:?}, not by a single vertex strictly between v_{i} and v_{}",
                    (i + a) % n
                )))
            }
        }
    };

    let mut g = f.clone();
    for &(v, x) in &placements {
        // Only the pair, v_(i+(p+2)a-1) and a lowered dominator may already be occupied.
        if x > 0 && x >= f.get(v) && f.get(v) > 0 && ![i, j1, jq].contains(&v) {
            return Err(TransformError::Collision {
                source_vertex: i,
                vertex: v,
            });
        }
        g.set(v, x);
    }
    check_output(dist, f, &g)?;
    Ok(EqualizeStep::Applied(
        g,
        RewriteStep {
            rule: rule.into(),
            vertex: i,
            old_value: f.get(i),
            placed: placements,
        },
    ))
}

/// Repeats [`equalize_step`] until `g(v_i) = g(v_{i+a−1}) = ℓ − 1`.
///
/// After a `p = 0` step leaves `g(v_i) = ℓ`, the value is lowered back to
/// `ℓ − 1` (recorded as its own step) so the next step's hypotheses hold.
/// Lowering a value keeps independence, and the `p = 0` steps gain at least
/// one unit, so the cost never drops.
pub fn equalize_pair(
    graph: &Circulant,
    dist: &DistanceTable,
    f: &Broadcast,
    i: usize,
    ell: u32,
) -> TransformResult<(Broadcast, RewriteTrace)> {
    let mut g = f.clone();
    let mut steps = Vec::new();
    for _ in 0..=2 * ell as usize + 2 {
        match equalize_step(graph, dist, &g, i, ell)? {
            EqualizeStep::Done => {
                check_output(dist, f, &g)?;
                return Ok((
                    g.clone(),
                    RewriteTrace {
                        steps,
                        input_cost: f.cost(),
                        output_cost: g.cost(),
                    },
                ));
            }
            EqualizeStep::Applied(h, step) => {
                g = h;
                steps.push(step);
                if g.get(i) == ell {
                    g.set(i, ell - 1);
                    steps.push(RewriteStep {
                        rule: "restore".into(),
                        vertex: i,
                        old_value: ell,
                        placed: vec![(i, ell - 1)],
                    });
                }
            }
        }
    }
    Err(TransformError::UncoveredCase(format!(
        "equalization at v_{i} did not terminate"
    )))
}

/// Valid, bounded by `cap`, and at least as expensive as `f`.
pub fn is_sound_rewrite(dist: &DistanceTable, f: &Broadcast, g: &Broadcast, cap: u32) -> bool {
    is_independent(dist, g) && g.is_bounded_by(cap) && g.cost() >= f.cost()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, a: i64) -> (Circulant, DistanceTable) {
        let g = Circulant::two_step(n, a).unwrap();
        let d = g.all_pairs();
        (g, d)
    }

    #[test]
    fn item1_offsets() {
        // a = 6, f = 7: d = 2 at offset 5, 1 at offset 10.
        let (g, d) = graph(40, 6);
        let f = Broadcast::from_support(40, &[(0, 7)]).unwrap();
        let (out, tr) = bound_to_a_minus_1(&g, &d, &f).unwrap();
        assert_eq!(out.to_compact(), "0:4,5:2,10:1");
        assert_eq!(tr.steps.len(), 1);
        assert!(tr.output_cost >= tr.input_cost);
    }

    #[test]
    fn item2_comb() {
        // a = 4, f = 7, p = 2: value 2 at offsets 0, 3, 6, 9.
        let (g, d) = graph(25, 4);
        let f = Broadcast::from_support(25, &[(0, 7)]).unwrap();
        let (out, _) = bound_to_a_minus_1(&g, &d, &f).unwrap();
        assert_eq!(out.to_compact(), "0:2,3:2,6:2,9:2");
    }

    #[test]
    fn bounded_input_is_unchanged() {
        let (g, d) = graph(12, 4);
        let f = Broadcast::from_support(12, &[(0, 2), (3, 2), (6, 2), (9, 2)]).unwrap();
        let (out, tr) = bound_to_a_minus_1(&g, &d, &f).unwrap();
        assert_eq!(out, f);
        assert!(tr.steps.is_empty());
        let (g, d) = graph(21, 7);
        let f = Broadcast::from_support(21, &[(0, 2), (3, 2)]).unwrap();
        let (out, tr) = bound_to_q(&g, &d, &f, QVariant::Qa).unwrap();
        assert_eq!(out, f);
        assert!(tr.steps.is_empty());
    }

    #[test]
    fn lemma_gap_is_reported() {
        // n = 3a - 2: the 1 placed at offset 2a - 2 sits one hop before v_i.
        let (g, d) = graph(10, 4);
        let f = Broadcast::from_support(10, &[(0, 4)]).unwrap();
        assert!(matches!(
            bound_to_a_minus_1(&g, &d, &f),
            Err(TransformError::LemmaGap { .. })
        ));
    }

    #[test]
    fn regime_guards() {
        let (g, d) = graph(8, 4);
        assert!(matches!(
            bound_to_a_minus_1(&g, &d, &Broadcast::zeros(8)),
            Err(TransformError::Regime(_))
        ));
        let (g, d) = graph(12, 4);
        assert!(matches!(
            bound_to_q(&g, &d, &Broadcast::zeros(12), QVariant::Qa),
            Err(TransformError::Regime(_))
        ));
        let bad = Broadcast::from_support(12, &[(0, 3), (1, 1)]).unwrap();
        assert!(matches!(
            bound_to_a_minus_1(&g, &d, &bad),
            Err(TransformError::InvalidInput(_))
        ));
    }

    #[test]
    fn q_item_a_diagonal() {
        // q = 4, a = 7, f = 5: 3 at v_i and 1 at two diagonal offsets.
        let (g, d) = graph(28, 7);
        let f = Broadcast::from_support(28, &[(0, 5)]).unwrap();
        let (out, _) = bound_to_q(&g, &d, &f, QVariant::Qa).unwrap();
        let diag: Vec<usize> = (1..=2).map(|k| (4 - k) * 7 + k).collect();
        assert_eq!(out.get(0), 3);
        for j in diag {
            assert_eq!(out.get(j), 1);
        }
        assert_eq!(out.cost(), 5);
    }

    #[test]
    fn q_item_b_comb() {
        // q = 3, a = 13, f = 10: seven values 2.
        let (g, d) = graph(39, 13);
        let f = Broadcast::from_support(39, &[(0, 10)]).unwrap();
        let (out, _) = bound_to_q(&g, &d, &f, QVariant::Qa).unwrap();
        assert_eq!(out.support().len(), 7);
        assert!(out.values().iter().all(|&x| x == 0 || x == 2));
        assert!(is_sound_rewrite(&d, &f, &out, 3));
    }

    #[test]
    fn equalize_case_a_full() {
        // l = a - 1 = 5 on C(40; 1, 6): f(v_0) = 4, p = f(v_5) = 0, q = f(v_11) = 0.
        let (g, d) = graph(40, 6);
        let f = Broadcast::from_support(40, &[(0, 4)]).unwrap();
        match equalize_step(&g, &d, &f, 0, 5).unwrap() {
            EqualizeStep::Applied(h, step) => {
                assert_eq!(step.rule, "equalize (a)");
                assert_eq!(h.get(0), 4);
                assert_eq!(h.get(5), 1);
            }
            EqualizeStep::Done => panic!("expected a rewrite"),
        }
        let (h, tr) = equalize_pair(&g, &d, &f, 0, 5).unwrap();
        assert_eq!((h.get(0), h.get(5)), (4, 4));
        assert!(tr.output_cost >= tr.input_cost);
    }

    #[test]
    fn equalize_already_equal() {
        let (g, d) = graph(40, 6);
        let f = Broadcast::from_support(40, &[(0, 4), (5, 4)]).unwrap();
        assert_eq!(equalize_step(&g, &d, &f, 0, 5).unwrap(), EqualizeStep::Done);
        let (h, tr) = equalize_pair(&g, &d, &f, 0, 5).unwrap();
        assert_eq!(h, f);
        assert!(tr.steps.is_empty());
    }

    #[test]
    fn equalize_case_c_i() {
        // l = 3 < a - 1 on C(40; 1, 7), p = 0, v_6 undominated.
        let (g, d) = graph(40, 7);
        let f = Broadcast::from_support(40, &[(0, 2)]).unwrap();
        match equalize_step(&g, &d, &f, 0, 3).unwrap() {
            EqualizeStep::Applied(h, step) => {
                assert_eq!(step.rule, "equalize (c)(i)");
                assert_eq!((h.get(0), h.get(6), h.get(13)), (3, 1, 0));
            }
            EqualizeStep::Done => panic!("expected a rewrite"),
        }
    }

    #[test]
    fn equalize_hypothesis_errors() {
        let (g, d) = graph(40, 6);
        let f = Broadcast::from_support(40, &[(0, 3)]).unwrap();
        assert!(matches!(equalize_step(&g, &d, &f, 0, 5), Err(TransformError::Regime(_))));
        assert!(matches!(equalize_step(&g, &d, &f, 0, 1), Err(TransformError::Regime(_))));
    }
}
