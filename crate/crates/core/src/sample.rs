//! Random independent broadcasts, used to exercise the rewriting procedures.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::broadcast::Broadcast;
use crate::distance::DistanceTable;

/// Draws an independent broadcast with values at most `cap`.
///
/// Vertices are visited in random order. An undominated vertex whose largest
/// admissible value is `lim >= 1` is broadcast from with probability 1/2,
/// with a value drawn uniformly from `max(1, lim - 2)..=lim`.
pub fn random_independent<R: Rng + ?Sized>(dist: &DistanceTable, cap: u32, rng: &mut R) -> Broadcast {
    let n = dist.n();
    let mut f = Broadcast::zeros(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for v in order {
        if chosen.iter().any(|&u| dist.get(u, v) <= f.get(u)) {
            continue;
        }
        let mut lim = cap.min(dist.eccentricity(v));
        for &u in &chosen {
            lim = lim.min(dist.get(v, u).saturating_sub(1));
        }
        if lim == 0 || !rng.gen_bool(0.5) {
            continue;
        }
        let x = rng.gen_range(lim.saturating_sub(2).max(1)..=lim);
        f.set(v, x);
        chosen.push(v);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadcast::is_independent;
    use crate::circulant::Circulant;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_independent_and_capped() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, a) in [(12, 4), (21, 7), (17, 5), (30, 6)] {
            let d = Circulant::two_step(n, a).unwrap().all_pairs();
            for cap in 1..6 {
                let f = random_independent(&d, cap, &mut rng);
                assert!(is_independent(&d, &f));
                assert!(f.is_bounded_by(cap));
            }
        }
    }

    #[test]
    fn same_seed_same_sample() {
        let d = Circulant::two_step(20, 5).unwrap().all_pairs();
        let x = random_independent(&d, 4, &mut ChaCha8Rng::seed_from_u64(3));
        let y = random_independent(&d, 4, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(x, y);
    }
}
