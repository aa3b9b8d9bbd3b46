//! Deterministic sampling.
//!
//! All randomness flows from an explicitly seeded counter-based stream
//! cipher (ChaCha8); there is no entropy-source default. Sub-streams are
//! derived from (seed, label) so independent sampling tasks stay decoupled
//! from each other and from run order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::sync::Arc;

use crate::chart::Interval;
use crate::manifold::{EmbeddedManifold, ManifoldPoint};

/// Seeded RNG for one sampling task.
pub fn stream(seed: u64, label: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng
}

/// Per-axis sampling window: the chart domain intersected with a truncation
/// box on unbounded axes, the full period on periodic axes.
pub fn sampling_ranges(m: &EmbeddedManifold, half_width: Option<f64>) -> Vec<Interval> {
    m.periods()
        .iter()
        .zip(m.domain())
        .map(|(p, d)| match p {
            Some(p) => Interval::new(0.0, *p),
            None => {
                let mut lo = d.lo;
                let mut hi = d.hi;
                if let Some(w) = half_width {
                    lo = lo.max(-w);
                    hi = hi.min(w);
                }
                Interval::new(lo, hi)
            }
        })
        .collect()
}

/// Uniform chart coordinates within the sampling ranges.
pub fn sample_coords(rng: &mut ChaCha8Rng, ranges: &[Interval]) -> Vec<f64> {
    ranges
        .iter()
        .map(|itv| {
            assert!(
                itv.lo.is_finite() && itv.hi.is_finite(),
                "sampling range must be bounded; supply a truncation box"
            );
            if itv.hi > itv.lo {
                rng.random_range(itv.lo..itv.hi)
            } else {
                itv.lo
            }
        })
        .collect()
}

/// Draw `n` random points on the manifold, restricted to the truncation
/// box on unbounded axes.
pub fn sample_points(
    m: &Arc<EmbeddedManifold>,
    n: usize,
    seed: u64,
    label: u64,
    half_width: Option<f64>,
) -> Vec<ManifoldPoint> {
    let ranges = sampling_ranges(m, half_width);
    let mut r = stream(seed, label);
    (0..n)
        .map(|_| {
            let u = sample_coords(&mut r, &ranges);
            m.embed(&u).expect("sampled coords lie in the domain")
        })
        .collect()
}
