use obi_core::solver::{beta_b_two_step, branch_and_bound_beta, brute_force_beta, SolveOptions};
use obi_core::regime::validate_two_step;
use obi_core::{is_independent, Circulant};

#[test]
fn brute_and_bnb_agree_up_to_18() {
    for n in 13..=18 {
        for a in 2..n {
            if validate_two_step(n, a).is_err() {
                continue;
            }
            let d = Circulant::two_step(n, a as i64).unwrap().all_pairs();
            let b = brute_force_beta(&d, &SolveOptions::default()).unwrap();
            let s = branch_and_bound_beta(&d, &SolveOptions::default()).unwrap();
            assert!(b.optimal && s.optimal);
            assert_eq!(b.beta, s.beta, "C({n};1,{a})");
            assert_eq!(b.witness, s.witness, "C({n};1,{a})");
        }
    }
}

#[test]
fn lemma_capped_solves_match_brute_force() {
    for (n, a) in [(17, 5), (18, 4), (19, 6), (20, 5), (20, 7)] {
        let d = Circulant::two_step(n, a as i64).unwrap().all_pairs();
        let b = brute_force_beta(&d, &SolveOptions::default()).unwrap();
        let (r, _) = beta_b_two_step(n, a, &SolveOptions::default()).unwrap();
        assert!(r.optimal);
        assert_eq!(r.beta, b.beta, "C({n};1,{a})");
        assert!(is_independent(&d, &r.witness));
    }
}

#[test]
fn parallel_solve_is_deterministic() {
    for (n, a) in [(24, 5), (22, 7), (26, 4)] {
        let one = beta_b_two_step(n, a, &SolveOptions::default()).unwrap().0;
        let many = beta_b_two_step(n, a, &SolveOptions { threads: 4, ..SolveOptions::default() }).unwrap().0;
        assert!(one.optimal && many.optimal);
        assert_eq!(one.beta, many.beta);
        assert_eq!(one.witness, many.witness);
    }
}
