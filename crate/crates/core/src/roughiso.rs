//! Rough-isometry machinery.
//!
//! A rough isometry satisfies the two-sided affine distance bound (RI.1,
//! constants `A >= 1`, `C >= 0`) and has an `eps`-full image (RI.2).
//! Sampling can only certify "no violation found" or exhibit a concrete
//! violation, so fits report the exact max residual on the sample, searches
//! return interval-provable witnesses, and fullness verdicts use the sound
//! interval endpoint for each direction.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::exec;
use crate::geodesic::{self, DistanceEstimate, DistanceOpts};
use crate::manifold::{EmbeddedManifold, ManifoldPoint};
use crate::num;
use crate::report::{Verdict, Witness};
use crate::rng;

/// Grid of admissible `A` values; `C` is then the exact max residual.
pub const A_GRID: [f64; 6] = [1.0, 1.25, 1.5, 2.0, 3.0, 5.0];

/// Smallest grid value at or above `x` (saturating at the top).
pub fn grid_ceil(x: f64) -> f64 {
    for &a in &A_GRID {
        if a >= x - 1e-12 {
            return a;
        }
    }
    *A_GRID.last().unwrap()
}

/// A map between sampled metric spaces: the domain manifold, the forward
/// map, and distance estimators on both sides.
pub trait RoughMap: Sync {
    fn domain(&self) -> &Arc<EmbeddedManifold>;
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint>;
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate;
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate;
}

/// The projection of a submersion-style map, measured `M -> B`.
pub struct ProjectionMap<'a> {
    pub map: &'a crate::submersion::SubmersionMap,
    pub opts: DistanceOpts,
}

impl RoughMap for ProjectionMap<'_> {
    fn domain(&self) -> &Arc<EmbeddedManifold> {
        &self.map.total
    }
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        self.map.apply(p)
    }
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.map.total, a, b, &self.opts)
    }
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.map.base, a, b, &self.opts)
    }
}

/// The inclusion of a fiber (with its induced metric) into the total space.
pub struct InclusionMap {
    pub fiber: Arc<EmbeddedManifold>,
    pub total: Arc<EmbeddedManifold>,
    pub form: crate::submersion::FiberForm,
    pub opts: DistanceOpts,
}

impl RoughMap for InclusionMap {
    fn domain(&self) -> &Arc<EmbeddedManifold> {
        &self.fiber
    }
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        self.total.embed(&self.form.to_total_coords(&p.chart))
    }
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.fiber, a, b, &self.opts)
    }
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.total, a, b, &self.opts)
    }
}

/// Identity map of a manifold (reference case for fits and searches).
pub struct IdentityMap {
    pub manifold: Arc<EmbeddedManifold>,
    pub opts: DistanceOpts,
}

impl RoughMap for IdentityMap {
    fn domain(&self) -> &Arc<EmbeddedManifold> {
        &self.manifold
    }
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        Ok(p.clone())
    }
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.manifold, a, b, &self.opts)
    }
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.manifold, a, b, &self.opts)
    }
}

/// Table-backed map (the shape of a rough inverse): each input goes to the
/// value stored for its nearest key, ties to the lowest index.
pub struct TableMap {
    pub key_space: Arc<EmbeddedManifold>,
    pub value_space: Arc<EmbeddedManifold>,
    pub entries: Vec<(ManifoldPoint, ManifoldPoint)>,
    pub opts: DistanceOpts,
}

impl RoughMap for TableMap {
    fn domain(&self) -> &Arc<EmbeddedManifold> {
        &self.key_space
    }
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, (k, _)) in self.entries.iter().enumerate() {
            let d = num::dist(&p.ambient, &k.ambient);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        Ok(self.entries[best].1.clone())
    }
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.key_space, a, b, &self.opts)
    }
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        geodesic::distance(&self.value_space, a, b, &self.opts)
    }
}

/// Composition `second o first`.
pub struct ComposedMap<'a> {
    pub first: &'a dyn RoughMap,
    pub second: &'a dyn RoughMap,
}

impl RoughMap for ComposedMap<'_> {
    fn domain(&self) -> &Arc<EmbeddedManifold> {
        self.first.domain()
    }
    fn apply(&self, p: &ManifoldPoint) -> Result<ManifoldPoint> {
        self.second.apply(&self.first.apply(p)?)
    }
    fn domain_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        self.first.domain_distance(a, b)
    }
    fn image_distance(&self, a: &ManifoldPoint, b: &ManifoldPoint) -> DistanceEstimate {
        self.second.image_distance(a, b)
    }
}

// ---------------------------------------------------------------------------
// Sample clouds
// ---------------------------------------------------------------------------

/// Deduplicated point sample with a cached pairwise distance matrix.
#[derive(Debug, Clone)]
pub struct MetricSampleCloud {
    pub manifold: Arc<EmbeddedManifold>,
    pub half_width: Option<f64>,
    pub points: Vec<ManifoldPoint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl MetricSampleCloud {
    /// Sample `n` points (deduplicated by canonical chart coordinates) and
    /// fill the pairwise matrix in parallel.
    pub fn build(
        manifold: &Arc<EmbeddedManifold>,
        n: usize,
        seed: u64,
        half_width: Option<f64>,
        opts: &DistanceOpts,
    ) -> Result<Self> {
        let mut points = rng::sample_points(manifold, n, seed, 0xC10D, half_width);
        dedup_points(&mut points);
        Ok(Self::from_points(manifold.clone(), half_width, points, opts))
    }

    /// Build from an explicit point list (used for fiber samples).
    pub fn from_points(
        manifold: Arc<EmbeddedManifold>,
        half_width: Option<f64>,
        mut points: Vec<ManifoldPoint>,
        opts: &DistanceOpts,
    ) -> Self {
        dedup_points(&mut points);
        let n = points.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let ests = exec::map_indexed(pairs.len(), |k| {
            let (i, j) = pairs[k];
            let e = geodesic::distance(&manifold, &points[i], &points[j], opts);
            (e.lower, e.upper)
        });
        let mut lower = vec![0.0; pairs.len()];
        let mut upper = vec![0.0; pairs.len()];
        for (k, (l, u)) in ests.into_iter().enumerate() {
            lower[k] = l;
            upper[k] = u;
        }
        MetricSampleCloud {
            manifold,
            half_width,
            points,
            lower,
            upper,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn pack(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // index into the packed strict upper triangle
        i * self.points.len() - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Distance interval between samples `i` and `j` (symmetric, zero on
    /// the diagonal).
    pub fn est(&self, i: usize, j: usize) -> (f64, f64) {
        if i == j {
            return (0.0, 0.0);
        }
        let k = self.pack(i, j);
        (self.lower[k], self.upper[k])
    }
}

fn dedup_points(points: &mut Vec<ManifoldPoint>) {
    let mut seen = std::collections::BTreeSet::new();
    points.retain(|p| {
        let key: Vec<i64> = p
            .chart
            .iter()
            .map(|x| (x / 1e-9).round() as i64)
            .collect();
        seen.insert(key)
    });
}

// ---------------------------------------------------------------------------
// RI.1
// ---------------------------------------------------------------------------

/// Result of fitting RI.1 constants on a sample cloud.
#[derive(Debug, Clone, Serialize)]
pub struct Ri1Fit {
    pub a: f64,
    pub c: f64,
    pub pairs: usize,
    /// Residual per grid `A` (same order as [`A_GRID`]).
    pub residuals: Vec<f64>,
}

/// Fit `(A, C)`: walk the `A` grid in ascending order and report the first
/// entry with its exact max residual
/// `C(A) = max(0, max_pairs max(d - A delta, delta / A - d))`
/// over the point estimates. The returned constants are certified: no
/// sampled pair can provably violate them through its interval endpoints.
pub fn fit_ri1(map: &dyn RoughMap, cloud: &MetricSampleCloud) -> Result<Ri1Fit> {
    if cloud.len() < 10 {
        return Err(GeomError::InsufficientSamples {
            need: 10,
            got: cloud.len(),
        });
    }
    let n = cloud.len();
    let images: Vec<ManifoldPoint> = cloud
        .points
        .iter()
        .map(|p| map.apply(p))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let image_d: Vec<f64> = exec::map_indexed(pairs.len(), |k| {
        let (i, j) = pairs[k];
        map.image_distance(&images[i], &images[j]).upper
    });
    let mut residuals = Vec::with_capacity(A_GRID.len());
    for &a in &A_GRID {
        let mut c: f64 = 0.0;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let (_, delta) = cloud.est(i, j);
            let d = image_d[k];
            c = c.max(d - a * delta).max(delta / a - d);
        }
        residuals.push(c.max(0.0));
    }
    Ok(Ri1Fit {
        a: A_GRID[0],
        c: residuals[0],
        pairs: pairs.len(),
        residuals,
    })
}

/// Count interval-provable violations of `(a, c)` on the sampled pairs.
pub fn certify_ri1(map: &dyn RoughMap, cloud: &MetricSampleCloud, a: f64, c: f64) -> Result<usize> {
    let n = cloud.len();
    let images: Vec<ManifoldPoint> = cloud
        .points
        .iter()
        .map(|p| map.apply(p))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let flags = exec::map_indexed(pairs.len(), |k| {
        let (i, j) = pairs[k];
        let (dl, du) = cloud.est(i, j);
        let d = map.image_distance(&images[i], &images[j]);
        let breach_upper = d.lower > a * du + c + 1e-9;
        let breach_lower = d.upper < dl / a - c - 1e-9;
        (breach_upper || breach_lower) as usize
    });
    Ok(flags.into_iter().sum())
}

/// Fit over nested truncation boxes and test whether the fitted `C` grows
/// without bound: strictly growing with non-decreasing slopes.
#[derive(Debug, Clone, Serialize)]
pub struct Ri1Trend {
    pub half_widths: Vec<f64>,
    pub cs: Vec<f64>,
    pub diverging: bool,
}

pub fn fit_ri1_over_boxes(
    map: &dyn RoughMap,
    n: usize,
    seed: u64,
    half_widths: &[f64],
    opts: &DistanceOpts,
) -> Result<(Vec<Ri1Fit>, Ri1Trend)> {
    let mut fits = Vec::new();
    for (k, &w) in half_widths.iter().enumerate() {
        let cloud = MetricSampleCloud::build(map.domain(), n, seed + k as u64, Some(w), opts)?;
        fits.push(fit_ri1(map, &cloud)?);
    }
    let cs: Vec<f64> = fits.iter().map(|f| f.c).collect();
    let diverging = cs.len() >= 3 && {
        let grow1 = cs[1] >= 1.1 * cs[0] + 0.01;
        let grow2 = cs[2] >= 1.1 * cs[1] + 0.01;
        let accel = (cs[2] - cs[1]) >= 0.99 * (cs[1] - cs[0]);
        grow1 && grow2 && accel
    };
    let trend = Ri1Trend {
        half_widths: half_widths.to_vec(),
        cs,
        diverging,
    };
    Ok((fits, trend))
}

/// Default nested-box schedule: three boxes, each 1.5x the previous.
pub fn box_schedule(base: f64) -> [f64; 3] {
    [base, base * 1.5, base * 2.25]
}

/// Search options for [`find_ri1_violation`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOpts {
    pub seed: u64,
    pub random_pairs: usize,
    pub ascent_iters: usize,
    pub half_width: Option<f64>,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            seed: 7,
            random_pairs: 128,
            ascent_iters: 60,
            half_width: None,
        }
    }
}

fn violation_margin(
    map: &dyn RoughMap,
    a: f64,
    c: f64,
    p: &ManifoldPoint,
    q: &ManifoldPoint,
) -> Result<(f64, Witness)> {
    let delta = map.domain_distance(p, q);
    let fp = map.apply(p)?;
    let fq = map.apply(q)?;
    let d = map.image_distance(&fp, &fq);
    let upper_breach = d.lower - (a * delta.upper + c);
    let lower_breach = (delta.lower / a - c) - d.upper;
    let (margin, note, bound) = if upper_breach >= lower_breach {
        (
            upper_breach,
            "d > A delta + C (upper RI.1 breached)",
            a * delta.upper + c,
        )
    } else {
        (
            lower_breach,
            "d < delta / A - C (lower RI.1 breached)",
            delta.lower / a - c,
        )
    };
    let wit = Witness {
        kind: "ri1_pair".into(),
        p: Some(p.ambient.clone()),
        q: Some(q.ambient.clone()),
        delta_lower: Some(delta.lower),
        delta_upper: Some(delta.upper),
        d_lower: Some(d.lower),
        d_upper: Some(d.upper),
        bound: Some(bound),
        margin: Some(margin),
        note: note.into(),
        ..Default::default()
    };
    Ok((margin, wit))
}

/// Search for a pair that provably violates RI.1 at `(a, c)`: supplied
/// witness generators first, then random pairs refined by coordinate
/// ascent on the violation margin. `None` after budget is not a proof of
/// satisfaction.
pub fn find_ri1_violation(
    map: &dyn RoughMap,
    a: f64,
    c: f64,
    hints: &[(ManifoldPoint, ManifoldPoint)],
    opts: &SearchOpts,
) -> Result<Option<Witness>> {
    assert!(a >= 1.0 && c >= 0.0);
    for (p, q) in hints {
        let (margin, wit) = violation_margin(map, a, c, p, q)?;
        if margin > 0.0 {
            return Ok(Some(wit));
        }
    }

    let domain = map.domain().clone();
    let pts = rng::sample_points(&domain, opts.random_pairs * 2, opts.seed, 0x5EA, opts.half_width);
    let mut best: Option<(f64, ManifoldPoint, ManifoldPoint)> = None;
    for k in 0..opts.random_pairs {
        let (p, q) = (&pts[2 * k], &pts[2 * k + 1]);
        let (margin, _) = violation_margin(map, a, c, p, q)?;
        if best.as_ref().map_or(true, |(m, _, _)| margin > *m) {
            best = Some((margin, p.clone(), q.clone()));
        }
    }
    let Some((mut margin, mut p, mut q)) = best else {
        return Ok(None);
    };

    // coordinate ascent with a shrinking step
    let ranges = rng::sampling_ranges(&domain, opts.half_width);
    let mut step: Vec<f64> = ranges.iter().map(|r| (r.hi - r.lo) * 0.1).collect();
    for _ in 0..opts.ascent_iters {
        let mut improved = false;
        for side in 0..2 {
            for axis in 0..domain.dim() {
                for dir in [-1.0, 1.0] {
                    let (mut cp, mut cq) = (p.chart.clone(), q.chart.clone());
                    let target = if side == 0 { &mut cp } else { &mut cq };
                    target[axis] += dir * step[axis];
                    let (Ok(np), Ok(nq)) = (domain.embed(&cp), domain.embed(&cq)) else {
                        continue;
                    };
                    let (m, _) = violation_margin(map, a, c, &np, &nq)?;
                    if m > margin {
                        margin = m;
                        p = np;
                        q = nq;
                        improved = true;
                    }
                }
            }
        }
        if margin > 0.0 {
            break;
        }
        if !improved {
            for s in step.iter_mut() {
                *s *= 0.5;
            }
            if step.iter().all(|s| *s < 1e-6) {
                break;
            }
        }
    }
    if margin > 0.0 {
        let (_, wit) = violation_margin(map, a, c, &p, &q)?;
        Ok(Some(wit))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// RI.2
// ---------------------------------------------------------------------------

/// Fullness verdict for the image of a map.
#[derive(Debug, Clone, Serialize)]
pub struct Ri2Report {
    pub verdict: Verdict,
    pub epsilon: f64,
    /// Max over target samples of the (upper-estimated) distance to the
    /// nearest image point.
    pub coverage_upper: f64,
    /// Least covered target point.
    pub worst: Witness,
    /// Interval-provable uncovered point, when the verdict is a violation.
    pub witness: Option<Witness>,
}

/// RI.2: is every target sample within `eps` of the image?
///
/// `Satisfied` is decided on upper estimates (sound: true coverage is
/// smaller); a violation needs a target whose chord distance to *every*
/// image point exceeds `eps` (sound: chords are lower bounds).
pub fn check_ri2_fullness(
    map: &dyn RoughMap,
    domain_points: &[ManifoldPoint],
    target_points: &[ManifoldPoint],
    epsilon: f64,
) -> Result<Ri2Report> {
    if domain_points.is_empty() || target_points.is_empty() {
        return Err(GeomError::InsufficientSamples {
            need: 1,
            got: 0,
        });
    }
    let images: Vec<ManifoldPoint> = domain_points
        .iter()
        .map(|p| map.apply(p))
        .collect::<Result<_>>()?;

    struct Coverage {
        min_upper: f64,
        min_lower: f64,
        nearest: usize,
    }
    let per: Vec<Coverage> = exec::map_indexed(target_points.len(), |qi| {
        let q = &target_points[qi];
        let chords: Vec<f64> = images
            .iter()
            .map(|im| num::dist(&im.ambient, &q.ambient))
            .collect();
        let min_chord = chords.iter().cloned().fold(f64::INFINITY, f64::min);
        let cutoff = min_chord + (0.5 + 0.5 * min_chord);
        let mut min_upper = f64::INFINITY;
        let mut nearest = 0usize;
        for (i, im) in images.iter().enumerate() {
            if chords[i] <= cutoff {
                let est = map.image_distance(im, q);
                if est.upper < min_upper {
                    min_upper = est.upper;
                    nearest = i;
                }
            }
        }
        Coverage {
            min_upper,
            min_lower: min_chord,
            nearest,
        }
    });

    let mut worst_q = 0usize;
    for (qi, cov) in per.iter().enumerate() {
        if cov.min_upper > per[worst_q].min_upper {
            worst_q = qi;
        }
    }
    let coverage_upper = per[worst_q].min_upper;
    let worst = Witness {
        kind: "ri2_least_covered".into(),
        p: Some(target_points[worst_q].ambient.clone()),
        q: Some(images[per[worst_q].nearest].ambient.clone()),
        d_lower: Some(per[worst_q].min_lower),
        d_upper: Some(per[worst_q].min_upper),
        bound: Some(epsilon),
        margin: Some(per[worst_q].min_upper - epsilon),
        ..Default::default()
    };

    if coverage_upper <= epsilon {
        return Ok(Ri2Report {
            verdict: Verdict::Satisfied,
            epsilon,
            coverage_upper,
            worst,
            witness: None,
        });
    }
    // find a provably uncovered target: chord distance to all images > eps
    let mut proof: Option<usize> = None;
    for (qi, cov) in per.iter().enumerate() {
        if cov.min_lower > epsilon {
            if proof.map_or(true, |b| cov.min_lower > per[b].min_lower) {
                proof = Some(qi);
            }
        }
    }
    match proof {
        Some(qi) => {
            let wit = Witness {
                kind: "ri2_uncovered".into(),
                p: Some(target_points[qi].ambient.clone()),
                q: Some(images[per[qi].nearest].ambient.clone()),
                d_lower: Some(per[qi].min_lower),
                d_upper: Some(per[qi].min_upper),
                bound: Some(epsilon),
                margin: Some(per[qi].min_lower - epsilon),
                note: "chord distance to every image sample exceeds epsilon".into(),
                ..Default::default()
            };
            Ok(Ri2Report {
                verdict: Verdict::ViolatedRi2,
                epsilon,
                coverage_upper,
                worst,
                witness: Some(wit),
            })
        }
        None => Ok(Ri2Report {
            verdict: Verdict::Indeterminate,
            epsilon,
            coverage_upper,
            worst,
            witness: None,
        }),
    }
}

// ---------------------------------------------------------------------------
// Rough inverse
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct RoughInverseReport {
    pub epsilon: f64,
    /// Max over domain samples of `delta(phi^-(phi(p)), p)` (upper).
    pub max_domain_displacement: f64,
    /// Max over target samples of `d(phi(phi^-(q)), q)` (upper).
    pub max_target_displacement: f64,
}

/// Build a table-backed rough inverse on the sampled clouds: each target
/// sample maps to the domain sample whose image is nearest (ties to the
/// lowest index). Requires fullness at `eps` on the clouds.
pub fn rough_inverse(
    map: &dyn RoughMap,
    target_space: Arc<EmbeddedManifold>,
    domain_points: &[ManifoldPoint],
    target_points: &[ManifoldPoint],
    epsilon: f64,
    opts: &DistanceOpts,
) -> Result<(TableMap, RoughInverseReport)> {
    let full = check_ri2_fullness(map, domain_points, target_points, epsilon)?;
    if full.verdict != Verdict::Satisfied {
        return Err(GeomError::FullnessFailed { epsilon });
    }
    let images: Vec<ManifoldPoint> = domain_points
        .iter()
        .map(|p| map.apply(p))
        .collect::<Result<_>>()?;

    let entries: Vec<(ManifoldPoint, ManifoldPoint)> = exec::map_indexed(
        target_points.len(),
        |qi| {
            let q = &target_points[qi];
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (i, im) in images.iter().enumerate() {
                let d = map.image_distance(im, q).upper;
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            (q.clone(), domain_points[best].clone())
        },
    );
    let table = TableMap {
        key_space: target_space,
        value_space: map.domain().clone(),
        entries,
        opts: *opts,
    };

    let dom_disp = exec::map_indexed(domain_points.len(), |pi| {
        let p = &domain_points[pi];
        let fp = map.apply(p).expect("image of a domain sample");
        let back = table.apply(&fp).expect("table lookup");
        map.domain_distance(&back, p).upper
    });
    let tgt_disp = exec::map_indexed(table.entries.len(), |qi| {
        let (q, p) = &table.entries[qi];
        let fp = map.apply(p).expect("image of a table value");
        map.image_distance(&fp, q).upper
    });
    let report = RoughInverseReport {
        epsilon,
        max_domain_displacement: dom_disp.into_iter().fold(0.0, f64::max),
        max_target_displacement: tgt_disp.into_iter().fold(0.0, f64::max),
    };
    Ok((table, report))
}

// ---------------------------------------------------------------------------
// Constructive constants
// ---------------------------------------------------------------------------

/// Fullness radius for the fiber inclusion under a compact base:
/// `eps = alpha * diam B + beta`.
pub fn theorem421_epsilon(alpha: f64, beta: f64, diam_b: f64) -> f64 {
    assert!(alpha >= 1.0 && beta > 0.0 && diam_b >= 0.0);
    alpha * diam_b + beta
}

/// RI.1 constants from the horizontal-lift control and the universal fiber
/// diameter bound: `A = alpha`, `C = max((beta + m)/alpha, alpha beta)`.
pub fn theorem423_constants(alpha: f64, beta: f64, m: f64) -> (f64, f64) {
    assert!(alpha >= 1.0 && beta > 0.0 && m > 0.0);
    (alpha, ((beta + m) / alpha).max(alpha * beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;
    use crate::submersion::{MapSpec, SubmersionMap};
    use std::f64::consts::PI;

    fn product_map() -> SubmersionMap {
        let chart = ChartSpec::Product(
            Box::new(ChartSpec::Circle { radius: 1.0 }),
            Box::new(ChartSpec::Circle { radius: 1.0 }),
        );
        SubmersionMap::new(
            EmbeddedManifold::new("S1xS1", chart),
            EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 }),
            MapSpec::ProductRight { left_dim: 1 },
            "p_B",
        )
    }

    #[test]
    fn grid_ceiling() {
        assert_eq!(grid_ceil(1.0), 1.0);
        assert_eq!(grid_ceil(1.1), 1.25);
        assert_eq!(grid_ceil(4.0), 5.0);
        assert_eq!(grid_ceil(99.0), 5.0);
    }

    #[test]
    fn cloud_intervals_are_ordered() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let cloud = MetricSampleCloud::build(&m, 24, 7, None, &DistanceOpts::bulk()).unwrap();
        for i in 0..cloud.len() {
            assert_eq!(cloud.est(i, i), (0.0, 0.0));
            for j in 0..cloud.len() {
                let (l, u) = cloud.est(i, j);
                assert!(l <= u + 1e-12);
                assert_eq!(cloud.est(i, j), cloud.est(j, i));
            }
        }
    }

    #[test]
    fn fit_identity_is_isometry() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let map = IdentityMap {
            manifold: m.clone(),
            opts: DistanceOpts::bulk(),
        };
        let cloud = MetricSampleCloud::build(&m, 24, 7, None, &DistanceOpts::bulk()).unwrap();
        let fit = fit_ri1(&map, &cloud).unwrap();
        assert_eq!(fit.a, 1.0);
        assert!(fit.c <= 1e-6, "C = {}", fit.c);
        assert_eq!(certify_ri1(&map, &cloud, fit.a, fit.c).unwrap(), 0);
    }

    #[test]
    fn fit_product_projection_bounded_by_fiber_diameter() {
        let s = product_map();
        let map = ProjectionMap {
            map: &s,
            opts: DistanceOpts::bulk(),
        };
        let cloud =
            MetricSampleCloud::build(&s.total, 40, 7, None, &DistanceOpts::bulk()).unwrap();
        let fit = fit_ri1(&map, &cloud).unwrap();
        assert_eq!(fit.a, 1.0);
        assert!(fit.c <= PI + 0.05, "C = {}", fit.c);
        assert_eq!(certify_ri1(&map, &cloud, fit.a, fit.c).unwrap(), 0);
    }

    #[test]
    fn fit_needs_samples() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let map = IdentityMap {
            manifold: m.clone(),
            opts: DistanceOpts::bulk(),
        };
        let cloud = MetricSampleCloud::build(&m, 5, 7, None, &DistanceOpts::bulk()).unwrap();
        assert!(matches!(
            fit_ri1(&map, &cloud),
            Err(GeomError::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn identity_search_finds_nothing() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let map = IdentityMap {
            manifold: m,
            opts: DistanceOpts::bulk(),
        };
        let found = find_ri1_violation(
            &map,
            1.0,
            0.5,
            &[],
            &SearchOpts {
                random_pairs: 32,
                ascent_iters: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(found.is_none());
    }

    #[test]
    fn ri2_identity_is_full() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let map = IdentityMap {
            manifold: m.clone(),
            opts: DistanceOpts::bulk(),
        };
        let pts = rng::sample_points(&m, 48, 7, 1, None);
        let targets = rng::sample_points(&m, 32, 8, 2, None);
        let rep = check_ri2_fullness(&map, &pts, &targets, 0.5).unwrap();
        assert_eq!(rep.verdict, Verdict::Satisfied);
        // monotone in epsilon: the same coverage satisfies any larger radius
        let rep2 = check_ri2_fullness(&map, &pts, &targets, 0.8).unwrap();
        assert_eq!(rep2.verdict, Verdict::Satisfied);
        assert!(rep2.coverage_upper <= 0.5);
    }

    #[test]
    fn rough_inverse_identity_has_zero_displacement() {
        let m = EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 });
        let map = IdentityMap {
            manifold: m.clone(),
            opts: DistanceOpts::bulk(),
        };
        let pts = rng::sample_points(&m, 48, 7, 1, None);
        let (_, rep) =
            rough_inverse(&map, m.clone(), &pts, &pts, 0.5, &DistanceOpts::bulk()).unwrap();
        assert!(rep.max_domain_displacement <= 1e-9);
        assert!(rep.max_target_displacement <= 1e-9);
    }

    #[test]
    fn rough_inverse_product_displacement_bound() {
        let s = product_map();
        let map = ProjectionMap {
            map: &s,
            opts: DistanceOpts::bulk(),
        };
        let eps = PI + 0.1;
        let dom = rng::sample_points(&s.total, 64, 7, 1, None);
        let tgt = rng::sample_points(&s.base, 32, 8, 2, None);
        let (table, rep) =
            rough_inverse(&map, s.base.clone(), &dom, &tgt, eps, &DistanceOpts::bulk()).unwrap();
        // displacement bounded by diam F + 2 eps
        assert!(rep.max_domain_displacement <= PI + 2.0 * eps);
        assert!(rep.max_target_displacement <= eps);

        // composition phi^- o phi passes RI.1 at the next grid value up
        let comp = ComposedMap {
            first: &map,
            second: &table,
        };
        let cloud = MetricSampleCloud::from_points(
            s.total.clone(),
            None,
            dom.clone(),
            &DistanceOpts::bulk(),
        );
        let fit = fit_ri1(&comp, &cloud).unwrap();
        assert_eq!(fit.a, grid_ceil(1.0));
        assert!(fit.c.is_finite());
        assert_eq!(certify_ri1(&comp, &cloud, fit.a, fit.c).unwrap(), 0);
    }

    #[test]
    fn theorem_constants_arithmetic() {
        assert!((theorem421_epsilon(1.0, 0.1, PI) - (PI + 0.1)).abs() < 1e-15);
        assert!((theorem421_epsilon(2.0, 1.0, PI) - (2.0 * PI + 1.0)).abs() < 1e-15);
        let (a, c) = theorem423_constants(1.0, 0.5, PI);
        assert_eq!(a, 1.0);
        assert!((c - (PI + 0.5)).abs() < 1e-15);
        let (a, c) = theorem423_constants(2.0, 1.0, 1.0);
        assert_eq!(a, 2.0);
        assert_eq!(c, 2.0);
    }
}
