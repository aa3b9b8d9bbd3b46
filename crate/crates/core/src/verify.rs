//! Verifiers for the length/distance inequalities of maximal-rank maps.
//!
//! Each verifier first checks its hypothesis on a point sample, then tests
//! the claimed inequality with explicit slack. Hypotheses are evaluated
//! through the singular values of the metric-adjusted differential, which
//! give the exact extremal ratios over unit tangent vectors at each sampled
//! point. Distance comparisons are decided only when interval endpoints
//! decide them; otherwise the verdict is `Indeterminate`.
//!
//! The `|v| <= 1` normalization in the hypotheses of the distance and
//! lower-length bounds is enforced by rescaling to unit norm, mirroring the
//! rescaling argument used to extend the horizontal-lift control to long
//! vectors.

use crate::curve::DiscreteCurve;
use crate::error::Result;
use crate::exec;
use crate::geodesic::{self, DistanceOpts, MeshOpts};
use crate::manifold::ManifoldPoint;
use crate::num;
use crate::report::{HypothesisInfo, ScanEntry, Verdict, VerifierReport, Witness};
use crate::submersion::SubmersionMap;

/// Beta grid used by the constants scan.
pub const BETA_GRID: [f64; 4] = [0.01, 0.1, 0.5, 1.0];

/// Which affine control on the differential a hypothesis asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypKind {
    /// `|dpi v| <= alpha |v| + beta` for all `|v| <= 1`.
    UpperControl,
    /// `|dpi v| >= (1/alpha) |v| - beta` for horizontal `v`.
    HorizontalLowerControl,
    /// `(1/alpha) |w| - beta <= |v|` for unit-rescaled lifts `v` of `w`.
    LiftLowerControl,
    /// `|v| <= alpha |w| + beta` for lifts `v` of arbitrary `w`; since `w`
    /// scales freely this pins `alpha >= |v| / |w|` pointwise and `beta`
    /// only absorbs short vectors.
    LiftUpperControl,
    /// Both sides of the horizontal-lift control.
    TwoSided,
}

/// Extremal singular values of the adjusted differential over a sample.
#[derive(Debug, Clone)]
pub struct HypExtremes {
    pub sigma_max: f64,
    pub argmax: usize,
    pub sigma_min: f64,
    pub argmin: usize,
}

/// Max/min singular values over the sampled points (parallel over points).
pub fn hlc_extremes(s: &SubmersionMap, pts: &[ManifoldPoint]) -> Result<HypExtremes> {
    let per: Vec<Result<(f64, f64)>> = exec::map_indexed(pts.len(), |i| {
        let sv = s.differential_singular_values(&pts[i])?;
        Ok((sv[0], *sv.last().unwrap()))
    });
    let mut ext = HypExtremes {
        sigma_max: f64::NEG_INFINITY,
        argmax: 0,
        sigma_min: f64::INFINITY,
        argmin: 0,
    };
    for (i, r) in per.into_iter().enumerate() {
        let (hi, lo) = r?;
        if hi > ext.sigma_max {
            ext.sigma_max = hi;
            ext.argmax = i;
        }
        if lo < ext.sigma_min {
            ext.sigma_min = lo;
            ext.argmin = i;
        }
    }
    Ok(ext)
}

fn alpha_min(kind: HypKind, ext: &HypExtremes, beta: f64) -> f64 {
    match kind {
        HypKind::UpperControl => (ext.sigma_max - beta).max(1.0),
        HypKind::HorizontalLowerControl => {
            if ext.sigma_min + beta >= 1.0 {
                1.0
            } else {
                1.0 / (ext.sigma_min + beta)
            }
        }
        HypKind::LiftLowerControl => (ext.sigma_max / (1.0 + beta)).max(1.0),
        HypKind::LiftUpperControl => (1.0 / ext.sigma_min).max(1.0),
        HypKind::TwoSided => alpha_min(HypKind::LiftUpperControl, ext, beta)
            .max(alpha_min(HypKind::LiftLowerControl, ext, beta)),
    }
}

/// Fit the tightest feasible `(alpha, beta)` over the sample: least alpha
/// with beta on the grid, ties broken toward small beta.
pub fn scan_constants(
    s: &SubmersionMap,
    pts: &[ManifoldPoint],
    kind: HypKind,
) -> Result<HypothesisInfo> {
    let ext = hlc_extremes(s, pts)?;
    let scan: Vec<ScanEntry> = BETA_GRID
        .iter()
        .map(|&beta| ScanEntry {
            beta,
            alpha_min: alpha_min(kind, &ext, beta),
        })
        .collect();
    let best = scan
        .iter()
        .min_by(|a, b| {
            a.alpha_min
                .total_cmp(&b.alpha_min)
                .then(a.beta.total_cmp(&b.beta))
        })
        .expect("beta grid is nonempty");
    Ok(HypothesisInfo {
        alpha: best.alpha_min,
        beta: best.beta,
        scan,
    })
}

/// Check a hypothesis at given constants. Returns `Ok(None)` when it holds
/// on the whole sample and a witness for the worst point otherwise.
pub fn hypothesis_check(
    s: &SubmersionMap,
    pts: &[ManifoldPoint],
    kind: HypKind,
    alpha: f64,
    beta: f64,
) -> Result<Option<Witness>> {
    let ext = hlc_extremes(s, pts)?;
    let tol = 1e-9;
    let fail = |idx: usize, value: f64, bound: f64, note: &str| -> Option<Witness> {
        Some(Witness {
            kind: "hypothesis".into(),
            p: Some(pts[idx].ambient.clone()),
            d_upper: Some(value),
            bound: Some(bound),
            margin: Some(value - bound),
            note: note.into(),
            ..Default::default()
        })
    };
    Ok(match kind {
        HypKind::UpperControl => {
            let bound = alpha + beta;
            if ext.sigma_max > bound + tol {
                fail(
                    ext.argmax,
                    ext.sigma_max,
                    bound,
                    "|dpi v| exceeds alpha |v| + beta on a unit vector",
                )
            } else {
                None
            }
        }
        HypKind::HorizontalLowerControl => {
            let bound = 1.0 / alpha - beta;
            if ext.sigma_min < bound - tol {
                fail(
                    ext.argmin,
                    ext.sigma_min,
                    bound,
                    "|dpi v| drops below (1/alpha)|v| - beta on a unit horizontal vector",
                )
            } else {
                None
            }
        }
        HypKind::LiftLowerControl => {
            let bound = alpha * (1.0 + beta);
            if ext.sigma_max > bound + tol {
                fail(
                    ext.argmax,
                    ext.sigma_max,
                    bound,
                    "(1/alpha)|w| - beta exceeds |v| for the unit-rescaled lift",
                )
            } else {
                None
            }
        }
        HypKind::LiftUpperControl => {
            let bound = 1.0 / alpha;
            if ext.sigma_min < bound - tol {
                fail(
                    ext.argmin,
                    ext.sigma_min,
                    bound,
                    "|v| exceeds alpha |w| + beta for lifts of long base vectors",
                )
            } else {
                None
            }
        }
        HypKind::TwoSided => {
            match hypothesis_check(s, pts, HypKind::LiftUpperControl, alpha, beta)? {
                Some(w) => Some(w),
                None => hypothesis_check(s, pts, HypKind::LiftLowerControl, alpha, beta)?,
            }
        }
    })
}

fn supplied_hypothesis(alpha: f64, beta: f64) -> HypothesisInfo {
    HypothesisInfo {
        alpha,
        beta,
        scan: Vec::new(),
    }
}

/// Lower length bound for lifts: if `|dpi v| <= alpha |v| + beta` on unit
/// vectors and `gamma` is beta-long, then
/// `len(Gamma) >= (1/alpha) [len(gamma) - beta (t2 - t1)]`.
pub fn verify_prop34(
    case: &str,
    s: &SubmersionMap,
    gamma: &DiscreteCurve,
    big_gamma: &DiscreteCurve,
    alpha: f64,
    beta: f64,
    hyp_points: &[ManifoldPoint],
) -> Result<VerifierReport> {
    let mut rep = VerifierReport::new(case, "prop34");
    rep.hypothesis = Some(supplied_hypothesis(alpha, beta));
    if let Some(w) = hypothesis_check(s, hyp_points, HypKind::UpperControl, alpha, beta)? {
        rep.verdict = Verdict::HypothesisFailed;
        rep.witnesses.push(w);
        return Ok(rep);
    }
    if !crate::curve::is_beta_long(gamma, beta) {
        rep.verdict = Verdict::HypothesisFailed;
        rep.notes.push(format!(
            "base curve is not {beta}-long (min speed {:.3e})",
            gamma.min_speed()
        ));
        return Ok(rep);
    }
    let l_gamma = gamma.length();
    let l_lift = big_gamma.length();
    let span = gamma.t2() - gamma.t1();
    let slack = s.total.tolerances().verifier_slack(l_gamma);
    rep.lhs = l_lift;
    rep.rhs = (l_gamma - beta * span) / alpha;
    rep.slack = slack;
    rep.verdict = if l_lift >= rep.rhs - slack {
        Verdict::Passed
    } else {
        Verdict::VerificationFailed
    };
    Ok(rep)
}

/// Upper length bound for lifts: if `|dpi v| >= (1/alpha)|v| - beta` on
/// horizontal vectors and `gamma` is beta-long, then
/// `len(Gamma) <= alpha [len(gamma) + beta (t2 - t1)]`.
pub fn verify_prop35(
    case: &str,
    s: &SubmersionMap,
    gamma: &DiscreteCurve,
    big_gamma: &DiscreteCurve,
    alpha: f64,
    beta: f64,
    hyp_points: &[ManifoldPoint],
) -> Result<VerifierReport> {
    let mut rep = VerifierReport::new(case, "prop35");
    rep.hypothesis = Some(supplied_hypothesis(alpha, beta));
    if let Some(w) =
        hypothesis_check(s, hyp_points, HypKind::HorizontalLowerControl, alpha, beta)?
    {
        rep.verdict = Verdict::HypothesisFailed;
        rep.witnesses.push(w);
        return Ok(rep);
    }
    if !crate::curve::is_beta_long(gamma, beta) {
        rep.verdict = Verdict::HypothesisFailed;
        rep.notes.push(format!(
            "base curve is not {beta}-long (min speed {:.3e})",
            gamma.min_speed()
        ));
        return Ok(rep);
    }
    let l_gamma = gamma.length();
    let l_lift = big_gamma.length();
    let span = gamma.t2() - gamma.t1();
    let slack = s.total.tolerances().verifier_slack(l_gamma);
    rep.lhs = l_lift;
    rep.rhs = alpha * (l_gamma + beta * span);
    rep.slack = slack;
    rep.verdict = if l_lift <= rep.rhs + slack {
        Verdict::Passed
    } else {
        Verdict::VerificationFailed
    };
    Ok(rep)
}

/// Lifts of long curves are non-vertical: the horizontal component of
/// `Gamma'` never vanishes. Reports the minimum horizontal norm.
pub fn verify_nonvertical(
    case: &str,
    s: &SubmersionMap,
    gamma: &DiscreteCurve,
    big_gamma: &DiscreteCurve,
) -> Result<VerifierReport> {
    let mut rep = VerifierReport::new(case, "nonvertical");
    let gamma_min_speed = gamma.min_speed();
    if gamma_min_speed <= 1e-12 {
        rep.verdict = Verdict::HypothesisFailed;
        rep.notes
            .push("base curve is not long: its speed vanishes somewhere".into());
        return Ok(rep);
    }
    let mut min_h = f64::INFINITY;
    let mut arg_t = big_gamma.t1();
    for i in 0..big_gamma.nodes() - 1 {
        let du = big_gamma.segment_velocity(i);
        for end in [i, i + 1] {
            let p = big_gamma.point(end);
            let split = s.splitting(&p)?;
            let v_amb = s
                .total
                .push_chart_velocity(&big_gamma.coords[end], &du);
            let mut h2 = 0.0;
            for h in &split.horizontal {
                let c = num::dot(&v_amb, &h.ambient);
                h2 += c * c;
            }
            let hnorm = h2.sqrt();
            if hnorm < min_h {
                min_h = hnorm;
                arg_t = big_gamma.params[end];
            }
        }
    }
    rep.lhs = min_h;
    rep.rhs = 1e-9;
    rep.verdict = if min_h > rep.rhs {
        Verdict::Passed
    } else {
        Verdict::VerificationFailed
    };
    if rep.verdict == Verdict::VerificationFailed {
        rep.witnesses.push(Witness {
            kind: "vertical_velocity".into(),
            param: Some(arg_t),
            d_upper: Some(min_h),
            ..Default::default()
        });
    }
    Ok(rep)
}

/// Options for the distance comparison of [`verify_lemma32`].
pub struct Lemma32Opts {
    pub dist: DistanceOpts,
    /// Strengthen the total-space lower bound with the mesh oracle.
    pub mesh: Option<MeshOpts>,
}

impl Default for Lemma32Opts {
    fn default() -> Self {
        Lemma32Opts {
            dist: DistanceOpts::default(),
            mesh: None,
        }
    }
}

/// Distance control from below: under the lift lower control,
/// `d_M(x, x') >= (1/alpha) d_B(pi x, pi x') - beta`.
///
/// The claim is certified when `d_M.lower >= (1/alpha) d_B.upper - beta -
/// slack`, refuted when `d_M.upper < (1/alpha) d_B.lower - beta - slack`,
/// and `Indeterminate` otherwise, with both intervals reported.
pub fn verify_lemma32(
    case: &str,
    s: &SubmersionMap,
    x: &ManifoldPoint,
    x2: &ManifoldPoint,
    alpha: f64,
    beta: f64,
    hyp_points: &[ManifoldPoint],
    opts: &Lemma32Opts,
) -> Result<VerifierReport> {
    let mut rep = VerifierReport::new(case, "lemma32");
    rep.hypothesis = Some(supplied_hypothesis(alpha, beta));
    if let Some(w) = hypothesis_check(s, hyp_points, HypKind::LiftLowerControl, alpha, beta)? {
        rep.verdict = Verdict::HypothesisFailed;
        rep.witnesses.push(w);
        return Ok(rep);
    }

    let bx = s.apply(x)?;
    let bx2 = s.apply(x2)?;
    let d_b = geodesic::distance(&s.base, &bx, &bx2, &opts.dist);
    let d_m = geodesic::distance(&s.total, x, x2, &opts.dist);
    let mut m_lower = d_m.lower;
    let mut notes = Vec::new();
    if let Some(mesh_opts) = &opts.mesh {
        if s.total.dim() <= 2 {
            let mesh = geodesic::mesh_distance_oracle(&s.total, x, x2, mesh_opts)?;
            if let Some(lb) = geodesic::mesh_lower_bound(&s.total, &mesh, mesh_opts) {
                if lb > m_lower {
                    notes.push(format!(
                        "total-space lower bound strengthened by mesh oracle: chord {:.6} -> {:.6}",
                        m_lower, lb
                    ));
                    m_lower = lb;
                }
            }
        }
    }

    let slack = s.total.tolerances().verifier_slack(d_b.upper);
    rep.lhs = m_lower;
    rep.rhs = d_b.upper / alpha - beta;
    rep.slack = slack;
    rep.notes = notes;
    rep.witnesses.push(Witness {
        kind: "distance_intervals".into(),
        p: Some(x.ambient.clone()),
        q: Some(x2.ambient.clone()),
        delta_lower: Some(m_lower),
        delta_upper: Some(d_m.upper),
        d_lower: Some(d_b.lower),
        d_upper: Some(d_b.upper),
        ..Default::default()
    });
    rep.verdict = if m_lower >= rep.rhs - slack {
        Verdict::Passed
    } else if d_m.upper < d_b.lower / alpha - beta - slack {
        Verdict::VerificationFailed
    } else {
        Verdict::Indeterminate
    };
    Ok(rep)
}

/// Axiom S.2: `dpi` preserves lengths of horizontal vectors. Reports the
/// max deviation `| |dpi h| - 1 |` over unit horizontal vectors at the
/// sampled points.
pub fn check_submersion_axiom_s2(
    case: &str,
    s: &SubmersionMap,
    pts: &[ManifoldPoint],
) -> Result<VerifierReport> {
    let mut rep = VerifierReport::new(case, "s2");
    let per: Vec<Result<f64>> = exec::map_indexed(pts.len(), |i| {
        let sv = s.differential_singular_values(&pts[i])?;
        Ok(sv
            .iter()
            .map(|sigma| (sigma - 1.0).abs())
            .fold(0.0, f64::max))
    });
    let mut max_dev = 0.0;
    let mut arg = 0;
    for (i, r) in per.into_iter().enumerate() {
        let d = r?;
        if d > max_dev {
            max_dev = d;
            arg = i;
        }
    }
    rep.lhs = max_dev;
    rep.rhs = s.total.tolerances().s2;
    rep.verdict = if max_dev <= rep.rhs {
        Verdict::IsSubmersion
    } else {
        Verdict::NotSubmersion
    };
    if rep.verdict == Verdict::NotSubmersion {
        rep.witnesses.push(Witness {
            kind: "s2_deviation".into(),
            p: Some(pts[arg].ambient.clone()),
            d_upper: Some(max_dev),
            bound: Some(rep.rhs),
            margin: Some(max_dev - rep.rhs),
            ..Default::default()
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartSpec, TAU};
    use crate::manifold::EmbeddedManifold;
    use crate::rng;
    use crate::submersion::MapSpec;
    use std::f64::consts::PI;

    fn product() -> SubmersionMap {
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

    fn hyperboloid() -> SubmersionMap {
        SubmersionMap::new(
            EmbeddedManifold::new("M422", ChartSpec::Hyperboloid),
            EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 }),
            MapSpec::HyperboloidAngle,
            "pi422",
        )
    }

    fn cylinder() -> SubmersionMap {
        SubmersionMap::new(
            EmbeddedManifold::new("M424", ChartSpec::Cylinder { radius: 1.0 }),
            EmbeddedManifold::new("R", ChartSpec::Line),
            MapSpec::CylinderExp,
            "pi424",
        )
    }

    fn curve_pair(
        s: &SubmersionMap,
        x0: &[f64],
        t2: f64,
    ) -> (DiscreteCurve, DiscreteCurve) {
        let gamma = DiscreteCurve::sample(s.base.clone(), 0.0, t2, 128, |t| vec![t]).unwrap();
        let x0 = s.total.embed(x0).unwrap();
        let lift = s.horizontal_lift_curve(&gamma, &x0, 128, None).unwrap();
        (gamma, lift.curve)
    }

    #[test]
    fn scan_product_gives_alpha_one() {
        let s = product();
        let pts = rng::sample_points(&s.total, 20, 7, 1, None);
        for kind in [
            HypKind::UpperControl,
            HypKind::HorizontalLowerControl,
            HypKind::LiftLowerControl,
            HypKind::TwoSided,
        ] {
            let hyp = scan_constants(&s, &pts, kind).unwrap();
            assert_eq!(hyp.alpha, 1.0, "{kind:?}");
        }
    }

    #[test]
    fn scan_hyperboloid_tracks_radius() {
        let s = hyperboloid();
        let pts = rng::sample_points(&s.total, 200, 7, 1, Some(3.0));
        // the lift-upper control is what degrades as |r| grows: lifts of
        // unit base vectors have norm sqrt(r^2 + 1)
        let hyp = scan_constants(&s, &pts, HypKind::LiftUpperControl).unwrap();
        assert!(hyp.alpha > 2.5 && hyp.alpha < 10.0_f64.sqrt() + 0.01, "{}", hyp.alpha);
        // the lift-lower control holds trivially here: lifts only grow
        let lower = scan_constants(&s, &pts, HypKind::LiftLowerControl).unwrap();
        assert_eq!(lower.alpha, 1.0);
    }

    #[test]
    fn prop34_product_passes() {
        let s = product();
        let (gamma, lift) = curve_pair(&s, &[0.9, 0.0], PI);
        let pts = rng::sample_points(&s.total, 20, 7, 1, None);
        let rep = verify_prop34("product", &s, &gamma, &lift, 1.0, 0.1, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
        assert!(rep.lhs >= rep.rhs);
    }

    #[test]
    fn prop34_hyperboloid_full_circle() {
        let s = hyperboloid();
        let gamma = DiscreteCurve::sample(s.base.clone(), 0.0, TAU, 256, |t| vec![t]).unwrap();
        let x0 = s.total.embed(&[0.0, 1.0]).unwrap();
        let lift = s.horizontal_lift_curve(&gamma, &x0, 256, None).unwrap().curve;
        let pts = rng::sample_points(&s.total, 50, 7, 1, Some(3.0));
        // alpha = 1 works: |dpi v| <= |v| on the hyperboloid
        let rep = verify_prop34("hyperboloid422", &s, &gamma, &lift, 1.0, 0.01, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
        // margin is large: 2 pi sqrt 2 vs 2 pi - small
        assert!(rep.lhs > rep.rhs + 2.0);
    }

    #[test]
    fn prop34_cylinder_hypothesis_fails() {
        let s = cylinder();
        let (gamma, lift) = curve_pair(&s, &[0.0, 0.0], 1.0);
        let pts = rng::sample_points(&s.total, 50, 7, 1, Some(5.0));
        // e^{|y|} on |y| <= 5 far exceeds alpha + beta = 2.01
        let rep = verify_prop34("cylinder424", &s, &gamma, &lift, 2.0, 0.01, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesisFailed);
        assert!(!rep.witnesses.is_empty());
    }

    #[test]
    fn prop35_product_passes() {
        let s = product();
        let (gamma, lift) = curve_pair(&s, &[0.9, 0.0], PI);
        let pts = rng::sample_points(&s.total, 20, 7, 1, None);
        let rep = verify_prop35("product", &s, &gamma, &lift, 1.0, 0.1, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
    }

    #[test]
    fn prop35_hyperboloid_needs_alpha_of_box() {
        let s = hyperboloid();
        let gamma = DiscreteCurve::sample(s.base.clone(), 0.0, TAU, 256, |t| vec![t]).unwrap();
        let x0 = s.total.embed(&[0.0, 1.0]).unwrap();
        let lift = s.horizontal_lift_curve(&gamma, &x0, 256, None).unwrap().curve;
        let pts = rng::sample_points(&s.total, 50, 7, 1, Some(1.0));
        // alpha = sqrt(R0^2 + 1) with R0 = 1 is feasible on |r| <= 1
        let alpha = 2.0_f64.sqrt();
        let rep = verify_prop35("hyperboloid422", &s, &gamma, &lift, alpha, 0.01, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
    }

    #[test]
    fn nonvertical_hyperboloid_lift() {
        let s = hyperboloid();
        let gamma = DiscreteCurve::sample(s.base.clone(), 0.0, TAU, 128, |t| vec![t]).unwrap();
        let x0 = s.total.embed(&[0.0, 1.0]).unwrap();
        let lift = s.horizontal_lift_curve(&gamma, &x0, 128, None).unwrap().curve;
        let rep = verify_nonvertical("hyperboloid422", &s, &gamma, &lift).unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
        // min horizontal norm = sqrt(r^2 + 1) = sqrt 2 at r = 1
        assert!((rep.lhs - 2.0_f64.sqrt()).abs() < 1e-6, "{}", rep.lhs);
    }

    #[test]
    fn lemma32_same_point_trivial() {
        let s = product();
        let x = s.total.embed(&[0.3, 0.7]).unwrap();
        let pts = rng::sample_points(&s.total, 15, 7, 1, None);
        let rep =
            verify_lemma32("product", &s, &x, &x, 1.0, 0.1, &pts, &Lemma32Opts::default())
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
    }

    #[test]
    fn lemma32_product_mixed_pair() {
        let s = product();
        // antipodal in the fiber, quarter turn in the base: the chord lower
        // bound already certifies the claim
        let x = s.total.embed(&[0.0, 0.0]).unwrap();
        let x2 = s.total.embed(&[PI, PI / 2.0]).unwrap();
        let pts = rng::sample_points(&s.total, 15, 7, 1, None);
        let rep =
            verify_lemma32("product", &s, &x, &x2, 1.0, 0.1, &pts, &Lemma32Opts::default())
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Passed);
    }

    #[test]
    fn lemma32_cylinder_hypothesis_fails_on_wide_box() {
        let s = cylinder();
        let x = s.total.embed(&[0.0, 0.0]).unwrap();
        let x2 = s.total.embed(&[0.0, 1.0]).unwrap();
        let pts = rng::sample_points(&s.total, 50, 7, 1, Some(5.0));
        let rep =
            verify_lemma32("cylinder424", &s, &x, &x2, 2.0, 1.0, &pts, &Lemma32Opts::default())
                .unwrap();
        assert_eq!(rep.verdict, Verdict::HypothesisFailed);
    }

    #[test]
    fn s2_discriminates() {
        let prod = product();
        let pts = rng::sample_points(&prod.total, 30, 7, 1, None);
        let rep = check_submersion_axiom_s2("product", &prod, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::IsSubmersion);
        assert!(rep.lhs <= 1e-10);

        let hyp = hyperboloid();
        let pts = rng::sample_points(&hyp.total, 30, 7, 1, Some(3.0));
        let rep = check_submersion_axiom_s2("hyperboloid422", &hyp, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSubmersion);
        // deviation is |1 - 1/sqrt(r^2+1)| at the sampled extreme
        let r_max = pts
            .iter()
            .map(|p| p.chart[1].abs())
            .fold(0.0, f64::max);
        let expect = 1.0 - 1.0 / (r_max * r_max + 1.0).sqrt();
        assert!((rep.lhs - expect).abs() < 1e-6, "{} vs {}", rep.lhs, expect);
    }

    #[test]
    fn s2_plane_is_submersion() {
        let s = SubmersionMap::new(
            EmbeddedManifold::new("M425", ChartSpec::PlaneYz),
            EmbeddedManifold::new("R", ChartSpec::Line),
            MapSpec::PlaneHeight,
            "pi425",
        );
        let pts = rng::sample_points(&s.total, 30, 7, 1, Some(5.0));
        let rep = check_submersion_axiom_s2("plane425", &s, &pts).unwrap();
        assert_eq!(rep.verdict, Verdict::IsSubmersion);
    }
}
