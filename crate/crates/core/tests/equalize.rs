use std::collections::BTreeMap;

use obi_core::regime::validate_two_step;
use obi_core::sample::random_independent;
use obi_core::transforms::{equalize_pair, TransformError};
use obi_core::{is_independent, Circulant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kind(e: &TransformError) -> &'static str {
    match e {
        TransformError::Regime(_) => "hypothesis",
        TransformError::InvalidInput(_) => "invalid input",
        TransformError::Core(_) => "core",
        TransformError::Collision { .. } => "collision",
        TransformError::LemmaGap { .. } => "lemma gap",
        TransformError::UncoveredCase(_) => "uncovered",
        TransformError::CostDecreased { .. } => "cost decreased",
    }
}

#[test]
fn equalize_on_sampled_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    let mut applied = 0;
    while applied < 2000 {
        let n = rng.gen_range(10..=40);
        let a = rng.gen_range(4..n - 1);
        if validate_two_step(n, a).is_err() {
            continue;
        }
        let ell = rng.gen_range(2..a as u32);
        let g = Circulant::two_step(n, a as i64).unwrap();
        let d = g.all_pairs();
        let mut f = random_independent(&d, ell, &mut rng);
        let i = rng.gen_range(0..n);
        f.set(i, ell - 1);
        if !is_independent(&d, &f) || d.get((i + a - 1) % n, i) < ell {
            continue;
        }
        applied += 1;
        match equalize_pair(&g, &d, &f, i, ell) {
            Ok((out, trace)) => {
                assert!(is_independent(&d, &out));
                assert!(out.cost() >= f.cost());
                assert_eq!(out.get(i), ell - 1);
                assert_eq!(out.get((i + a - 1) % n), ell - 1);
                assert_eq!(trace.output_cost, out.cost());
                *tally.entry("ok").or_default() += 1;
            }
            Err(e) => *tally.entry(kind(&e)).or_default() += 1,
        }
    }
    println!("{tally:?}");
    assert_eq!(tally.get("cost decreased"), None);
    assert_eq!(tally.get("invalid input"), None);
    assert_eq!(tally.get("collision"), None);
    assert!(tally["ok"] > 500);
}
