//! Data-parallel execution helpers.
//!
//! The hot loops (pairwise distance fills, coverage scans, verifier sample
//! sweeps) are embarrassingly parallel over independent items. With the
//! `parallel` feature (default) they run on rayon; without it they fall back
//! to plain iterators. Explicit `*_seq` variants stay available so the
//! benchmark suite can compare both paths in one build.

/// Map `f` over `0..n`, order-preserving, sequential.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync,
    T: Send,
{
    (0..n).map(f).collect()
}

/// Map `f` over `0..n`, order-preserving, parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, order-preserving, parallel when enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync,
    T: Send,
{
    map_indexed_seq(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let a = map_indexed(1000, |i| (i * i) as u64);
        let b = map_indexed_seq(1000, |i| (i * i) as u64);
        assert_eq!(a, b);
    }
}
