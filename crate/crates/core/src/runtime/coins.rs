use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Shared randomness. Both parties hold the same seed, so any substream is
/// reproduced identically on either side and costs no communication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublicCoins {
    seed: u64,
}

impl PublicCoins {
    pub fn new(seed: u64) -> Self {
        PublicCoins { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for a tag path and stream label.
    pub fn stream(&self, path: &[u32], label: u64) -> ChaCha8Rng {
        let mut h = splitmix(self.seed);
        for &p in path {
            h = splitmix(h ^ (p as u64 + 1));
        }
        h = splitmix(h ^ label.wrapping_mul(0xd6e8_feb8_6659_fd93));
        ChaCha8Rng::seed_from_u64(h)
    }
}

/// Uniform permutation of `0..m` from a generator both parties share.
pub fn draw_permutation(rng: &mut ChaCha8Rng, m: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (0..m as u32).collect();
    p.shuffle(rng);
    p
}

/// Bernoulli(`p`) from one 64-bit draw via a fixed-point threshold.
pub fn bernoulli(draw: u64, p: f64) -> bool {
    if p >= 1.0 {
        return true;
    }
    let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
    draw < threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let c = PublicCoins::new(7);
        assert_eq!(c.stream(&[1, 2], 0).next_u64(), c.stream(&[1, 2], 0).next_u64());
        assert_ne!(c.stream(&[1, 2], 0).next_u64(), c.stream(&[2, 1], 0).next_u64());
        assert_ne!(c.stream(&[1], 0).next_u64(), c.stream(&[1], 1).next_u64());
        assert_ne!(
            c.stream(&[], 0).next_u64(),
            PublicCoins::new(8).stream(&[], 0).next_u64()
        );
    }

    #[test]
    fn permutation_basics() {
        let c = PublicCoins::new(1);
        assert_eq!(draw_permutation(&mut c.stream(&[], 0), 1), vec![0]);
        let a = draw_permutation(&mut c.stream(&[], 3), 3);
        assert_eq!(a, draw_permutation(&mut c.stream(&[], 3), 3));
        let mut s = a.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2]);
    }

    #[test]
    fn bernoulli_edges() {
        assert!(bernoulli(u64::MAX, 1.0));
        assert!(!bernoulli(0, 0.0));
        assert!(bernoulli(0, 0.5));
        assert!(!bernoulli(1 << 63, 0.5));
    }
}
