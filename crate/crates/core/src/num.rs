//! Shared numeric configuration.
//!
//! Every tolerance used by the geometric kernels is declared here once, so
//! that consistency checks, rank tests and verifier slacks cannot drift apart
//! between modules.

/// Tolerance bundle threaded through all geometric operations.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Ambient-coordinate consistency: `chart(u)` vs cached coordinates.
    pub ambient: f64,
    /// Smallest singular value below which a Jacobian counts as rank-deficient.
    pub rank: f64,
    /// Smallest metric eigenvalue accepted as positive definite.
    pub spd: f64,
    /// `|pi(x) - b|` in base-ambient coordinates for fiber membership.
    pub fiber: f64,
    /// Expected per-node tracking error of an integrated horizontal lift.
    pub lift_track: f64,
    /// Hard ceiling on lift tracking error before `DriftExceeded` fires.
    pub lift_drift: f64,
    /// Slack subtracted when testing `inf |gamma'| >= beta`.
    pub beta_long: f64,
    /// Orthogonality of a tangent splitting under the ambient metric.
    pub split_ortho: f64,
    /// Max deviation `| |dpi h| - |h| |` accepted for submersion axiom S.2.
    pub s2: f64,
    /// Relative energy decrease per sweep at which curve shortening stops.
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ambient: 1e-10,
            rank: 1e-8,
            spd: 1e-9,
            fiber: 1e-8,
            lift_track: 1e-6,
            lift_drift: 1e-4,
            beta_long: 1e-9,
            split_ortho: 1e-9,
            s2: 1e-8,
            energy: 1e-9,
        }
    }
}

impl Tolerances {
    /// Slack used by the length-inequality verifiers; scales with the curve
    /// length so that long curves are not judged more strictly than short
    /// ones.
    pub fn verifier_slack(&self, scale: f64) -> f64 {
        1e-4 * (1.0 + scale)
    }
}

/// Euclidean norm of a coordinate slice.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Euclidean distance between two coordinate slices.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dot product of two coordinate slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
