//! Deterministic low-discrepancy sampling.

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in `base`.
pub fn halton(index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let mut i = index;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// The first `count` points of the `dim`-dimensional Halton sequence, skipping
/// the origin.
pub fn halton_points(dim: usize, count: usize) -> impl Iterator<Item = Vec<f64>> {
    assert!(
        dim <= PRIMES.len(),
        "Halton sampling supports at most 16 dimensions"
    );
    (1..=count as u64).map(move |i| PRIMES[..dim].iter().map(|&b| halton(i, b)).collect())
}
