//! Index sampling shared by every optimizer loop.

use rand::Rng;

/// `size` distinct indices from `0..n`. When `size >= n` the full index set
/// is returned in order without consuming randomness.
pub fn sample_without_replacement<R: Rng + ?Sized>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    if size >= n {
        (0..n).collect()
    } else {
        rand::seq::index::sample(rng, n, size).into_vec()
    }
}

/// `size` i.i.d. uniform indices from `0..n`.
pub fn sample_with_replacement<R: Rng + ?Sized>(rng: &mut R, n: usize, size: usize) -> Vec<usize> {
    (0..size).map(|_| rng.random_range(0..n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn without_replacement_is_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = sample_without_replacement(&mut rng, 20, 7);
        s.sort_unstable();
        s.dedup();
        assert_eq!(s.len(), 7);
        assert!(s.iter().all(|&i| i < 20));
    }

    #[test]
    fn full_set_consumes_no_randomness() {
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let b = a.clone();
        assert_eq!(sample_without_replacement(&mut a, 5, 5), vec![0, 1, 2, 3, 4]);
        assert_eq!(a, b);
    }
}
