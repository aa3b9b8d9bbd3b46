//! Built-in chart catalogue.
//!
//! Manifolds are constructed from a closed set of parametrized charts rather
//! than user-supplied symbolic expressions; a descriptor names a chart id
//! plus numeric parameters. Every chart is written once, generically over
//! [`Real`], so the same code path produces values and exact dual-number
//! derivatives.

use crate::dual::Real;
use crate::error::{GeomError, Result};

pub const TAU: f64 = std::f64::consts::TAU;

/// Closed or unbounded interval of admissible chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// A chart embedding into Euclidean space, identified by id + parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartSpec {
    /// `t -> (R cos t, R sin t, 0)`, periodic in `t`.
    Circle { radius: f64 },
    /// `(t, r) -> (sqrt(r^2+1) cos t, sqrt(r^2+1) sin t, r)`,
    /// the one-sheet hyperboloid `x1^2 + x2^2 = x3^2 + 1`.
    Hyperboloid,
    /// `(t, y) -> (R cos t, y, R sin t)`, the cylinder `x^2 + z^2 = R^2`.
    Cylinder { radius: f64 },
    /// `(y, z) -> (0, y, z)`, the plane `{0} x R^2`, isometric chart.
    PlaneYz,
    /// `y -> (y)`, the real line.
    Line,
    /// `() -> (0)`, a single point (used as a degenerate product factor).
    Point,
    /// `r -> (sqrt(r^2+1) cos a, sqrt(r^2+1) sin a, r)`: one hyperboloid
    /// fiber, a meridian at fixed angle `a`.
    HyperboloidMeridian { angle: f64 },
    /// `t -> (R cos t, y, R sin t)`: one cylinder fiber at height `y`.
    CircleAtHeight { radius: f64, y: f64 },
    /// `z -> (0, y, z)`: one vertical line of the plane at fixed `y`.
    VerticalLine { y: f64 },
    /// Concatenated charts of a Riemannian product.
    Product(Box<ChartSpec>, Box<ChartSpec>),
}

impl ChartSpec {
    pub fn dim(&self) -> usize {
        match self {
            ChartSpec::Circle { .. }
            | ChartSpec::Line
            | ChartSpec::HyperboloidMeridian { .. }
            | ChartSpec::CircleAtHeight { .. }
            | ChartSpec::VerticalLine { .. } => 1,
            ChartSpec::Hyperboloid | ChartSpec::Cylinder { .. } | ChartSpec::PlaneYz => 2,
            ChartSpec::Point => 0,
            ChartSpec::Product(f, b) => f.dim() + b.dim(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ChartSpec::Circle { .. }
            | ChartSpec::Hyperboloid
            | ChartSpec::Cylinder { .. }
            | ChartSpec::PlaneYz
            | ChartSpec::HyperboloidMeridian { .. }
            | ChartSpec::CircleAtHeight { .. }
            | ChartSpec::VerticalLine { .. } => 3,
            ChartSpec::Line | ChartSpec::Point => 1,
            ChartSpec::Product(f, b) => f.ambient_dim() + b.ambient_dim(),
        }
    }

    /// Per-coordinate period, `None` for aperiodic coordinates.
    pub fn periods(&self) -> Vec<Option<f64>> {
        match self {
            ChartSpec::Circle { .. } | ChartSpec::CircleAtHeight { .. } => vec![Some(TAU)],
            ChartSpec::Hyperboloid => vec![Some(TAU), None],
            ChartSpec::Cylinder { .. } => vec![Some(TAU), None],
            ChartSpec::PlaneYz => vec![None, None],
            ChartSpec::Line
            | ChartSpec::HyperboloidMeridian { .. }
            | ChartSpec::VerticalLine { .. } => vec![None],
            ChartSpec::Point => vec![],
            ChartSpec::Product(f, b) => {
                let mut p = f.periods();
                p.extend(b.periods());
                p
            }
        }
    }

    pub fn domain(&self) -> Vec<Interval> {
        vec![Interval::UNBOUNDED; self.dim()]
    }

    /// Conservative bound on the ambient curvature of curves drawn on the
    /// surface; used by the mesh oracle to budget chord-vs-arc deficits.
    pub fn curvature_bound(&self) -> f64 {
        match self {
            ChartSpec::Circle { radius } | ChartSpec::CircleAtHeight { radius, .. } => {
                1.0 / radius.max(1e-12)
            }
            ChartSpec::Cylinder { radius } => 1.0 / radius.max(1e-12),
            // Principal curvatures peak at the waist where both radii are 1.
            ChartSpec::Hyperboloid | ChartSpec::HyperboloidMeridian { .. } => 1.5,
            ChartSpec::PlaneYz
            | ChartSpec::Line
            | ChartSpec::Point
            | ChartSpec::VerticalLine { .. } => 0.0,
            ChartSpec::Product(f, b) => f.curvature_bound().max(b.curvature_bound()),
        }
    }

    /// Evaluate the chart at `u`, writing `ambient_dim` outputs.
    pub fn eval<R: Real>(&self, u: &[R], out: &mut Vec<R>) {
        debug_assert_eq!(u.len(), self.dim());
        match self {
            ChartSpec::Circle { radius } => {
                let r = R::from_f64(*radius);
                out.push(r * u[0].cos());
                out.push(r * u[0].sin());
                out.push(R::from_f64(0.0));
            }
            ChartSpec::Hyperboloid => {
                let rho = (u[1] * u[1] + R::from_f64(1.0)).sqrt();
                out.push(rho * u[0].cos());
                out.push(rho * u[0].sin());
                out.push(u[1]);
            }
            ChartSpec::Cylinder { radius } => {
                let r = R::from_f64(*radius);
                out.push(r * u[0].cos());
                out.push(u[1]);
                out.push(r * u[0].sin());
            }
            ChartSpec::PlaneYz => {
                out.push(R::from_f64(0.0));
                out.push(u[0]);
                out.push(u[1]);
            }
            ChartSpec::Line => out.push(u[0]),
            ChartSpec::Point => out.push(R::from_f64(0.0)),
            ChartSpec::HyperboloidMeridian { angle } => {
                let rho = (u[0] * u[0] + R::from_f64(1.0)).sqrt();
                out.push(rho * R::from_f64(angle.cos()));
                out.push(rho * R::from_f64(angle.sin()));
                out.push(u[0]);
            }
            ChartSpec::CircleAtHeight { radius, y } => {
                let r = R::from_f64(*radius);
                out.push(r * u[0].cos());
                out.push(R::from_f64(*y));
                out.push(r * u[0].sin());
            }
            ChartSpec::VerticalLine { y } => {
                out.push(R::from_f64(0.0));
                out.push(R::from_f64(*y));
                out.push(u[0]);
            }
            ChartSpec::Product(f, b) => {
                let k = f.dim();
                f.eval(&u[..k], out);
                b.eval(&u[k..], out);
            }
        }
    }

    /// Stable identifier used by descriptors and reports.
    pub fn id(&self) -> String {
        match self {
            ChartSpec::Circle { .. } => "circle".into(),
            ChartSpec::Hyperboloid => "hyperboloid".into(),
            ChartSpec::Cylinder { .. } => "cylinder".into(),
            ChartSpec::PlaneYz => "plane_yz".into(),
            ChartSpec::Line => "line".into(),
            ChartSpec::Point => "point".into(),
            ChartSpec::HyperboloidMeridian { .. } => "hyperboloid_meridian".into(),
            ChartSpec::CircleAtHeight { .. } => "circle_at_height".into(),
            ChartSpec::VerticalLine { .. } => "vertical_line".into(),
            ChartSpec::Product(f, b) => format!("product({},{})", f.id(), b.id()),
        }
    }

    /// Build a chart from a descriptor id plus numeric parameters.
    ///
    /// Product factors use the `<prefix>left_` / `<prefix>right_` key
    /// prefixes, e.g. `chart = product`, `left_chart = circle`,
    /// `right_chart = line`.
    pub fn from_descriptor(
        prefix: &str,
        kv: &std::collections::BTreeMap<String, String>,
    ) -> Result<ChartSpec> {
        let key = |name: &str| format!("{prefix}{name}");
        let get = |name: &str| -> Result<&String> {
            kv.get(&key(name))
                .ok_or_else(|| GeomError::Descriptor(format!("missing key `{}`", key(name))))
        };
        let num = |name: &str, default: f64| -> Result<f64> {
            match kv.get(&key(name)) {
                None => Ok(default),
                Some(s) => s
                    .parse::<f64>()
                    .map_err(|_| GeomError::Descriptor(format!("bad number for `{}`", key(name)))),
            }
        };
        let id = get("chart")?.as_str();
        Ok(match id {
            "circle" => ChartSpec::Circle {
                radius: num("radius", 1.0)?,
            },
            "hyperboloid" => ChartSpec::Hyperboloid,
            "cylinder" => ChartSpec::Cylinder {
                radius: num("radius", 1.0)?,
            },
            "plane_yz" => ChartSpec::PlaneYz,
            "line" => ChartSpec::Line,
            "point" => ChartSpec::Point,
            "hyperboloid_meridian" => ChartSpec::HyperboloidMeridian {
                angle: num("angle", 0.0)?,
            },
            "circle_at_height" => ChartSpec::CircleAtHeight {
                radius: num("radius", 1.0)?,
                y: num("y", 0.0)?,
            },
            "vertical_line" => ChartSpec::VerticalLine { y: num("y", 0.0)? },
            "product" => {
                let left = ChartSpec::from_descriptor(&format!("{prefix}left_"), kv)?;
                let right = ChartSpec::from_descriptor(&format!("{prefix}right_"), kv)?;
                ChartSpec::Product(Box::new(left), Box::new(right))
            }
            other => {
                return Err(GeomError::Descriptor(format!("unknown chart id `{other}`")));
            }
        })
    }
}
