//! Case studies with closed-form oracles.
//!
//! Four families: product projections (where every verifier should pass),
//! the hyperboloid counterexample 4.2.2 (fiber inclusion fails RI.2), the
//! exponential-cylinder counterexample 4.2.4 (RI.1 fails: lifts shrink like
//! `e^{-|y|}`), and the plane counterexample 4.2.5 (RI.1 fails: fibers have
//! unbounded diameter). Each case carries exact formulas and witness
//! generators for the generic machinery to cross-validate against.
//!
//! Cases are built from declarative key-value descriptors naming built-in
//! chart and map ids; no symbolic expressions are parsed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::chart::ChartSpec;
use crate::curve::DiscreteCurve;
use crate::error::{GeomError, Result};
use crate::geodesic::MeshOpts;
use crate::manifold::{EmbeddedManifold, ManifoldPoint};
use crate::report::{CheckKind, Verdict};
use crate::submersion::{exp_diffeo, FiberForm, MapSpec, SubmersionMap};

/// Default fiber angle for the hyperboloid case; the angle `pi/2` opposite
/// to it hosts the uncovered witnesses.
pub const DEFAULT_FIBER_ANGLE: f64 = 1.5 * PI;

/// Angle at circular distance `pi` from `t_b`, wrapped into `[0, 2 pi)`.
pub fn opposite_angle(t_b: f64) -> f64 {
    let t = t_b.rem_euclid(crate::chart::TAU);
    if t < PI {
        t + PI
    } else {
        t - PI
    }
}

// ---------------------------------------------------------------------------
// Hyperboloid (counterexample 4.2.2) closed forms
// ---------------------------------------------------------------------------

/// The fiber point `xi_r = (sqrt(r^2+1) cos t_b, sqrt(r^2+1) sin t_b, r)`.
pub fn hyperboloid_fiber_point(m: &Arc<EmbeddedManifold>, t_b: f64, r: f64) -> ManifoldPoint {
    m.embed(&[t_b, r]).expect("hyperboloid chart is global")
}

/// Chord distance between the antipodal same-height pair `xi_r`, `y_r`:
/// `2 sqrt(r^2 + 1)`.
pub fn hyperboloid_chord_distance(r: f64) -> f64 {
    2.0 * (r * r + 1.0).sqrt()
}

/// Height of the perpendicular foot construction: the unique admissible
/// root `r_eps = 4 r^3 + 3 r` of the defining equation
/// `sqrt(r_eps^2+1) + sqrt(r^2+1) = (sqrt(r^2+1)/r)(r_eps - r)`.
pub fn hyperboloid_r_epsilon(r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(GeomError::NonPositiveR { r });
    }
    Ok(4.0 * r.powi(3) + 3.0 * r)
}

/// Residual of the defining equation at a candidate root.
pub fn hyperboloid_r_epsilon_residual(r: f64, r_eps: f64) -> f64 {
    let lhs = (r_eps * r_eps + 1.0).sqrt() + (r * r + 1.0).sqrt();
    let rhs = (r * r + 1.0).sqrt() / r * (r_eps - r);
    lhs - rhs
}

/// Independent root of the defining equation by bisection; brackets grow
/// until the residual changes sign.
pub fn hyperboloid_r_epsilon_bisect(r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(GeomError::NonPositiveR { r });
    }
    let mut lo = r;
    let mut hi = r + 1.0;
    // residual is positive at r_eps = r and eventually negative
    while hyperboloid_r_epsilon_residual(r, hi) > 0.0 {
        hi *= 2.0;
        assert!(hi < 1e12, "root bracket failed to close");
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hyperboloid_r_epsilon_residual(r, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Chord distance from the perpendicular foot witness `y_eps` to `xi_r`:
/// `2 (2 r^2 + 1)^{3/2}`.
pub fn hyperboloid_perp_distance(r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(GeomError::NonPositiveR { r });
    }
    Ok(2.0 * (2.0 * r * r + 1.0).powf(1.5))
}

/// An uncovered point for the fiber inclusion at radius `eps`.
#[derive(Debug, Clone)]
pub struct Ri2Witness {
    pub point: ManifoldPoint,
    /// Guaranteed chord distance to the whole fiber: exceeds `eps`.
    pub chord_bound: f64,
    /// The neck parameter when the large-`eps` branch was taken.
    pub r: Option<f64>,
}

/// Witness for the fullness failure: for `eps <= 2` the waist point
/// opposite the fiber works at chord distance exactly 2; for larger `eps`
/// the perpendicular-foot point over `r > sqrt(eps^2 - 4)/2` does.
pub fn hyperboloid_ri2_witness(
    m: &Arc<EmbeddedManifold>,
    t_b: f64,
    eps: f64,
) -> Result<Ri2Witness> {
    assert!(eps > 0.0);
    let t_far = opposite_angle(t_b);
    if eps <= 2.0 {
        Ok(Ri2Witness {
            point: m.embed(&[t_far, 0.0])?,
            chord_bound: 2.0,
            r: None,
        })
    } else {
        let r = (eps * eps - 4.0).sqrt() / 2.0 + 0.5;
        let r_eps = hyperboloid_r_epsilon(r)?;
        Ok(Ri2Witness {
            point: m.embed(&[t_far, r_eps])?,
            chord_bound: hyperboloid_chord_distance(r),
            r: Some(r),
        })
    }
}

// ---------------------------------------------------------------------------
// Exponential cylinder (counterexample 4.2.4) closed forms
// ---------------------------------------------------------------------------

/// `f(y) = e^y - 1` for `y >= 0`, `1 - e^{-y}` for `y <= 0`.
pub fn cylinder_f(y: f64) -> f64 {
    exp_diffeo(y)
}

/// `f'(y) = e^{|y|} >= 1`.
pub fn cylinder_f_prime(y: f64) -> f64 {
    y.abs().exp()
}

/// `g(y) = e^y - 1 - A y - C`, positive beyond the witness threshold.
pub fn cylinder_g(y: f64, a: f64, c: f64) -> f64 {
    y.exp() - 1.0 - a * y - c
}

/// The positive root `y_AC` of `g`: beyond it the pair
/// `((x,0,z), (x,y,z))` breaches the upper RI.1 inequality since the base
/// distance is `f(y)` while the cylinder distance is `y`.
pub fn cylinder_ri1_witness(a: f64, c: f64) -> f64 {
    assert!(a >= 1.0 && c > 0.0);
    let mut hi = 1.0;
    while cylinder_g(hi, a, c) <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cylinder_g(mid, a, c) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// Plane (counterexample 4.2.5) closed form
// ---------------------------------------------------------------------------

/// `eta_AC = A C + 1`: for `eta >= eta_AC` the pair `X(mu, eta), X(mu, 0)`
/// breaches the lower RI.1 inequality, as the base distance is 0 while the
/// plane distance is `|eta|` and `(1/A) eta_AC - C = 1/A > 0`.
pub fn plane_ri1_witness(a: f64, c: f64) -> f64 {
    assert!(a >= 1.0 && c > 0.0);
    a * c + 1.0
}

// ---------------------------------------------------------------------------
// Case studies
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseId {
    ProductS1S1,
    ProductPointS1,
    ProductS1Line,
    Hyperboloid422,
    CylinderExp424,
    Plane425,
}

/// A case study: manifolds, map, defaults, expected per-check verdicts and
/// witness generators.
#[derive(Debug, Clone)]
pub struct CaseStudy {
    pub id: CaseId,
    pub key: String,
    pub section: String,
    pub description: String,
    pub map: SubmersionMap,
    /// Truncation half-width for sampling the total space, when unbounded.
    pub half_width: Option<f64>,
    /// Truncation half-width for the base, when unbounded.
    pub base_half_width: Option<f64>,
    pub compact_base: bool,
    /// Fixed universal fiber-diameter bound, when the case prescribes one.
    pub udf_bound: Option<f64>,
    /// Supplied hypothesis constants for checks that are expected to refute
    /// them; `None` means scan.
    pub default_alpha_beta: Option<(f64, f64)>,
    /// Default fullness radius for the `ri2` check.
    pub default_epsilon: f64,
    /// Expected `(A_max, C_max)` for the RI.1 fit to count as matched.
    pub fit_bounds: Option<(f64, f64)>,
    pub expected: BTreeMap<CheckKind, Verdict>,
    pub notes: Vec<String>,
}

impl CaseStudy {
    pub fn total(&self) -> &Arc<EmbeddedManifold> {
        &self.map.total
    }

    pub fn base(&self) -> &Arc<EmbeddedManifold> {
        &self.map.base
    }

    /// Base point of the distinguished fiber.
    pub fn fiber_base(&self) -> ManifoldPoint {
        match self.id {
            CaseId::Hyperboloid422 => self
                .base()
                .embed(&[DEFAULT_FIBER_ANGLE])
                .expect("circle chart is global"),
            CaseId::ProductS1S1 | CaseId::ProductPointS1 => {
                self.base().embed(&[0.0]).expect("circle chart is global")
            }
            CaseId::ProductS1Line | CaseId::CylinderExp424 | CaseId::Plane425 => {
                self.base().embed(&[0.0]).expect("line chart is global")
            }
        }
    }

    /// Closed-form parametrization of the distinguished fiber.
    pub fn fiber_form(&self) -> FiberForm {
        let b = self.fiber_base();
        match self.id {
            CaseId::Hyperboloid422 => FiberForm::HyperboloidMeridianAt {
                angle: DEFAULT_FIBER_ANGLE,
            },
            CaseId::CylinderExp424 => FiberForm::CylinderCircleAt {
                y: crate::submersion::exp_diffeo_inv(b.chart[0]),
            },
            CaseId::Plane425 => FiberForm::PlaneLineAt { y: b.chart[0] },
            CaseId::ProductS1S1 | CaseId::ProductPointS1 | CaseId::ProductS1Line => {
                FiberForm::Product {
                    base_coords: b.chart.clone(),
                }
            }
        }
    }

    /// Default base curve for the lift-based verifiers: a full turn on
    /// compact bases, a unit-speed segment on the line.
    pub fn default_base_curve(&self, nodes: usize) -> DiscreteCurve {
        let base = self.base().clone();
        if self.compact_base {
            DiscreteCurve::sample(base, 0.0, crate::chart::TAU, nodes, |t| vec![t])
                .expect("circle curve")
        } else {
            DiscreteCurve::sample(base, 0.0, 2.0, nodes, |t| vec![t]).expect("line curve")
        }
    }

    /// Start point over `gamma(t1)` for the default lift.
    pub fn default_lift_start(&self) -> ManifoldPoint {
        let u = match self.id {
            CaseId::ProductS1S1 => vec![0.9, 0.0],
            CaseId::ProductPointS1 => vec![0.0],
            CaseId::ProductS1Line => vec![0.9, 0.0],
            CaseId::Hyperboloid422 => vec![0.0, 1.0],
            CaseId::CylinderExp424 => vec![0.2, 0.0],
            CaseId::Plane425 => vec![0.0, 1.5],
        };
        self.total().embed(&u).expect("start point in chart domain")
    }

    /// Point pair for the distance-control check, chosen so a determinate
    /// verdict is reachable from certified interval endpoints.
    pub fn lemma32_pair(&self) -> (ManifoldPoint, ManifoldPoint) {
        let t = self.total();
        let (u, v) = match self.id {
            // antipodal in the fiber, quarter turn in the base
            CaseId::ProductS1S1 => (vec![0.0, 0.0], vec![PI, PI / 2.0]),
            CaseId::ProductPointS1 => (vec![0.0], vec![0.5]),
            CaseId::ProductS1Line => (vec![PI, 0.0], vec![0.0, 1.5]),
            // xi_1 and y_1: same height, opposite angle
            CaseId::Hyperboloid422 => {
                (vec![DEFAULT_FIBER_ANGLE, 1.0], vec![opposite_angle(DEFAULT_FIBER_ANGLE), 1.0])
            }
            CaseId::CylinderExp424 => (vec![0.0, 0.0], vec![0.0, 1.0]),
            CaseId::Plane425 => (vec![0.0, 0.0], vec![2.0, 3.0]),
        };
        (
            t.embed(&u).expect("pair in chart domain"),
            t.embed(&v).expect("pair in chart domain"),
        )
    }

    /// Mesh options used to strengthen the distance-control lower bound,
    /// for cases whose chord bound cannot decide the claim.
    pub fn lemma32_mesh(&self) -> Option<MeshOpts> {
        match self.id {
            CaseId::Hyperboloid422 => Some(MeshOpts {
                resolution: 256,
                half_width: Some(3.0),
            }),
            _ => None,
        }
    }

    /// Witness-pair generators for the RI.1 violation search.
    pub fn ri1_hints(&self, a: f64, c: f64) -> Vec<(ManifoldPoint, ManifoldPoint)> {
        let t = self.total();
        match self.id {
            CaseId::CylinderExp424 => {
                let y = cylinder_ri1_witness(a, c) + 1.0;
                vec![(
                    t.embed(&[0.0, 0.0]).unwrap(),
                    t.embed(&[0.0, y]).unwrap(),
                )]
            }
            CaseId::Plane425 => {
                let eta = plane_ri1_witness(a, c);
                [-1.0, 0.0, 5.0]
                    .iter()
                    .map(|&mu| {
                        (
                            t.embed(&[mu, eta]).unwrap(),
                            t.embed(&[mu, 0.0]).unwrap(),
                        )
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Extra target points seeding the fullness check with the closed-form
    /// uncovered witnesses.
    pub fn ri2_extra_targets(&self, eps: f64) -> Vec<ManifoldPoint> {
        match self.id {
            CaseId::Hyperboloid422 => {
                let w = hyperboloid_ri2_witness(self.total(), DEFAULT_FIBER_ANGLE, eps)
                    .expect("witness construction");
                vec![w.point]
            }
            _ => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

/// Parse a `key = value` descriptor (with `#` comments) into a map.
pub fn parse_descriptor(text: &str) -> Result<BTreeMap<String, String>> {
    let mut kv = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(GeomError::Descriptor(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        kv.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(kv)
}

/// Build a manifold from descriptor keys under a prefix.
pub fn manifold_from_descriptor(
    name: &str,
    prefix: &str,
    kv: &BTreeMap<String, String>,
) -> Result<Arc<EmbeddedManifold>> {
    let chart = ChartSpec::from_descriptor(prefix, kv)?;
    Ok(EmbeddedManifold::new(name, chart))
}

const DESCRIPTORS: [(&str, &str); 6] = [
    (
        "product-s1-s1",
        r#"
# projection of a torus onto one circle factor
id = product-s1-s1
section = §4.1, Theorem 4.1.2; §4.2, Theorems 4.2.1/4.2.3 (product case)
description = Riemannian product S1 x S1 with the projection p_B onto the second factor; every check passes
total_chart = product
total_left_chart = circle
total_right_chart = circle
base_chart = circle
map = product_projection
"#,
    ),
    (
        "product-point-s1",
        r#"
# degenerate product: the projection is an isometry
id = product-point-s1
section = §2, Definition 2.1 (isometric degenerate product)
description = point x S1 projected onto S1; the projection is an isometry on samples (A = 1, C ~ 0)
total_chart = product
total_left_chart = point
total_right_chart = circle
base_chart = circle
map = product_projection
"#,
    ),
    (
        "product-s1-line",
        r#"
# compact fiber over a noncompact base
id = product-s1-line
section = §4.1, Theorem 4.1.3; §4.2, Theorem 4.2.3 (product case, noncompact base)
description = S1 x R projected onto the line; uniform fiber diameter and exact lift control, RI.1 stable across nested boxes
total_chart = product
total_left_chart = circle
total_right_chart = line
base_chart = line
map = product_projection
box = 5
"#,
    ),
    (
        "hyperboloid422",
        r#"
# one-sheet hyperboloid over the unit circle
id = hyperboloid422
section = §4.2, Counterexample 4.2.2
description = onto smooth maximal-rank map from the hyperboloid x1^2 + x2^2 = x3^2 + 1 to S1; lifts grow like sqrt(r^2+1), the fiber inclusion fails RI.2 at every radius
total_chart = hyperboloid
base_chart = circle
map = hyperboloid_angle
box = 3
"#,
    ),
    (
        "cylinder424",
        r#"
# unit cylinder over the line through the exponential diffeomorphism
id = cylinder424
section = §4.2, Counterexample 4.2.4
description = cylinder x^2 + z^2 = 1 mapped by (x,y,z) -> f(y); compact fibers, but lift control fails (ratio e^{-|y|}) and RI.1 fails with witnesses past the root of g
total_chart = cylinder
base_chart = line
map = cylinder_exp
box = 5
"#,
    ),
    (
        "plane425",
        r#"
# vertical-line projection of the plane
id = plane425
section = §4.2, Counterexample 4.2.5
description = plane {0} x R^2 projected to the y-axis; a Riemannian submersion whose fibers have unbounded diameter, so RI.1 fails along the fibers
total_chart = plane_yz
base_chart = line
map = plane_height
box = 5
"#,
    ),
];

/// Raw descriptor text for a case key.
pub fn builtin_descriptor(key: &str) -> Option<&'static str> {
    DESCRIPTORS
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, text)| *text)
}

/// All case keys in catalogue order.
pub fn case_keys() -> Vec<&'static str> {
    DESCRIPTORS.iter().map(|(k, _)| *k).collect()
}

/// Build a case study from descriptor text.
pub fn case_from_descriptor(text: &str) -> Result<CaseStudy> {
    let kv = parse_descriptor(text)?;
    let id_key = kv
        .get("id")
        .ok_or_else(|| GeomError::Descriptor("missing `id`".into()))?
        .clone();
    let id = match id_key.as_str() {
        "product-s1-s1" => CaseId::ProductS1S1,
        "product-point-s1" => CaseId::ProductPointS1,
        "product-s1-line" => CaseId::ProductS1Line,
        "hyperboloid422" => CaseId::Hyperboloid422,
        "cylinder424" => CaseId::CylinderExp424,
        "plane425" => CaseId::Plane425,
        other => {
            return Err(GeomError::Descriptor(format!("unknown case id `{other}`")));
        }
    };
    let total = manifold_from_descriptor(&format!("total[{id_key}]"), "total_", &kv)?;
    let base = manifold_from_descriptor(&format!("base[{id_key}]"), "base_", &kv)?;
    let map_id = kv
        .get("map")
        .ok_or_else(|| GeomError::Descriptor("missing `map`".into()))?;
    let map_spec = match map_id.as_str() {
        "product_projection" => {
            let left_dim = total.dim() - base.dim();
            MapSpec::ProductRight { left_dim }
        }
        "hyperboloid_angle" => MapSpec::HyperboloidAngle,
        "cylinder_exp" => MapSpec::CylinderExp,
        "plane_height" => MapSpec::PlaneHeight,
        other => {
            return Err(GeomError::Descriptor(format!("unknown map id `{other}`")));
        }
    };
    let half_width = match kv.get("box") {
        None => None,
        Some(s) => Some(s.parse::<f64>().map_err(|_| {
            GeomError::Descriptor("bad number for `box`".into())
        })?),
    };
    let map = SubmersionMap::new(total, base, map_spec, id_key.clone());
    let compact_base = map.base.is_compact();

    use CheckKind::*;
    use Verdict::*;
    let (expected, udf_bound, default_alpha_beta, default_epsilon, fit_bounds, notes): (
        Vec<(CheckKind, Verdict)>,
        Option<f64>,
        Option<(f64, f64)>,
        f64,
        Option<(f64, f64)>,
        Vec<String>,
    ) = match id {
        CaseId::ProductS1S1 => (
            vec![
                (S2, IsSubmersion),
                (Prop34, Passed),
                (Prop35, Passed),
                (Lemma32, Passed),
                (Ri1Fit, Fitted),
                (Ri1Search, NotFound),
                (Ri2, Satisfied),
                (Thm421, Satisfied),
                (Thm423, Passed),
            ],
            None,
            None,
            3.25,
            Some((1.0, PI + 0.25)),
            vec![],
        ),
        CaseId::ProductPointS1 => (
            vec![
                (S2, IsSubmersion),
                (Prop34, Passed),
                (Prop35, Passed),
                (Lemma32, Passed),
                (Ri1Fit, Fitted),
                (Ri1Search, NotFound),
                (Ri2, Satisfied),
                (Thm421, Satisfied),
                (Thm423, Passed),
            ],
            None,
            None,
            3.25,
            Some((1.0, 0.05)),
            vec![],
        ),
        CaseId::ProductS1Line => (
            vec![
                (S2, IsSubmersion),
                (Prop34, Passed),
                (Prop35, Passed),
                (Lemma32, Passed),
                (Ri1Fit, Fitted),
                (Ri1Search, NotFound),
                (Thm423, Passed),
            ],
            None,
            None,
            3.25,
            Some((1.0, PI + 0.25)),
            vec![],
        ),
        CaseId::Hyperboloid422 => (
            vec![
                (S2, NotSubmersion),
                (Prop34, Passed),
                (Prop35, Passed),
                (Lemma32, Passed),
                (Ri1Fit, Fitted),
                (Ri2, ViolatedRi2),
                (Thm421, ViolatedRi2),
            ],
            None,
            None,
            2.0,
            Some((1.0, 0.05)),
            vec![
                "perpendicular-foot root: r_eps = 4r^3 + 3r = r(4r^2 + 3); the printed form 4^3 + 3r does not satisfy the defining equation (residual check rejects it)".into(),
                "the fiber parameter is named r throughout; a stray s appears in one displayed description of the same family".into(),
                "base-curve speeds are measured in the base metric; one displayed integrand mixes the total-space norm symbol".into(),
            ],
        ),
        CaseId::CylinderExp424 => (
            vec![
                (S2, NotSubmersion),
                (Prop34, HypothesisFailed),
                (Prop35, Passed),
                (Lemma32, HypothesisFailed),
                (Ri1Fit, ViolationTrend),
                (Ri1Search, ViolatedRi1),
                (Thm423, ViolationTrend),
            ],
            // fiber circles have diameter pi; 3.2 keeps the universal bound
            // convention-independent
            Some(3.2),
            Some((2.0, 0.1)),
            3.25,
            None,
            vec![
                "universal fiber-diameter bound taken as 3.2 (verified circle diameter pi plus margin)".into(),
            ],
        ),
        CaseId::Plane425 => (
            vec![
                (S2, IsSubmersion),
                (Prop34, Passed),
                (Prop35, Passed),
                (Lemma32, Passed),
                (Ri1Fit, ViolationTrend),
                (Ri1Search, ViolatedRi1),
                (Thm423, ViolationTrend),
            ],
            None,
            None,
            3.25,
            None,
            vec![],
        ),
    };

    Ok(CaseStudy {
        id,
        key: id_key,
        section: kv.get("section").cloned().unwrap_or_default(),
        description: kv.get("description").cloned().unwrap_or_default(),
        map,
        half_width,
        base_half_width: half_width.filter(|_| !compact_base),
        compact_base,
        udf_bound,
        default_alpha_beta,
        default_epsilon,
        fit_bounds,
        expected: expected.into_iter().collect(),
        notes,
    })
}

/// Load a case by key.
pub fn case(key: &str) -> Result<CaseStudy> {
    let text = builtin_descriptor(key)
        .ok_or_else(|| GeomError::Descriptor(format!("unknown case `{key}`")))?;
    case_from_descriptor(text)
}

/// All built-in cases, catalogue order.
pub fn catalog() -> Vec<CaseStudy> {
    case_keys()
        .into_iter()
        .map(|k| case(k).expect("built-in descriptors parse"))
        .collect()
}
