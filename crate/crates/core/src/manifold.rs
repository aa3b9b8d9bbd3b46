//! Embedded manifolds with explicit charts.
//!
//! A manifold is represented by a single global chart into Euclidean space,
//! with periodic identifications where needed. All metric data is induced
//! from the ambient space: the metric tensor is the Gram matrix `J^T J` of
//! the chart Jacobian, inner products of tangent vectors reduce to Euclidean
//! dots of their ambient representations.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::{ChartSpec, Interval};
use crate::dual::Dual;
use crate::error::{GeomError, Result};
use crate::num::{self, Tolerances};

/// A chart-parametrized manifold sitting in Euclidean ambient space.
#[derive(Debug, Clone)]
pub struct EmbeddedManifold {
    name: String,
    chart: ChartSpec,
    dim: usize,
    ambient_dim: usize,
    periods: Vec<Option<f64>>,
    domain: Vec<Interval>,
    curvature_bound: f64,
    tol: Tolerances,
}

/// A point with both chart and ambient representations.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    /// Chart coordinates, canonicalized into `[0, period)` on periodic axes.
    pub chart: Vec<f64>,
    /// Cached ambient coordinates, equal to `chart(chart)` within tolerance.
    pub ambient: Vec<f64>,
}

/// A base point plus tangent direction in both representations.
#[derive(Debug, Clone)]
pub struct TangentVector {
    pub base: ManifoldPoint,
    pub chart: Vec<f64>,
    pub ambient: Vec<f64>,
}

impl TangentVector {
    /// Ambient Euclidean norm, which equals the Riemannian norm for induced
    /// metrics.
    pub fn norm(&self) -> f64 {
        num::norm(&self.ambient)
    }
}

/// The induced metric `J^T J` at a point.
#[derive(Debug, Clone)]
pub struct MetricTensor {
    pub base: ManifoldPoint,
    pub gram: DMatrix<f64>,
}

impl MetricTensor {
    pub fn min_eigenvalue(&self) -> f64 {
        if self.gram.nrows() == 0 {
            return f64::INFINITY;
        }
        self.gram
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    /// Norm of a chart-components vector under this metric.
    pub fn norm_of(&self, comps: &[f64]) -> f64 {
        let v = DVector::from_column_slice(comps);
        (v.transpose() * &self.gram * &v)[(0, 0)].max(0.0).sqrt()
    }
}

impl EmbeddedManifold {
    pub fn new(name: impl Into<String>, chart: ChartSpec) -> Arc<Self> {
        let dim = chart.dim();
        let ambient_dim = chart.ambient_dim();
        let periods = chart.periods();
        let domain = chart.domain();
        let curvature_bound = chart.curvature_bound();
        Arc::new(EmbeddedManifold {
            name: name.into(),
            chart,
            dim,
            ambient_dim,
            periods,
            domain,
            curvature_bound,
            tol: Tolerances::default(),
        })
    }

    /// Restrict an aperiodic coordinate to a closed interval.
    pub fn with_domain(mut self: Arc<Self>, index: usize, interval: Interval) -> Arc<Self> {
        let m = Arc::make_mut(&mut self);
        m.domain[index] = interval;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn chart_spec(&self) -> &ChartSpec {
        &self.chart
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn periods(&self) -> &[Option<f64>] {
        &self.periods
    }
    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }
    pub fn curvature_bound(&self) -> f64 {
        self.curvature_bound
    }
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// True when every coordinate is periodic or has a bounded domain.
    pub fn is_compact(&self) -> bool {
        self.periods
            .iter()
            .zip(&self.domain)
            .all(|(p, d)| p.is_some() || d.is_bounded())
    }

    /// First coordinate that is unbounded and aperiodic, if any.
    pub fn noncompact_axis(&self) -> Option<usize> {
        self.periods
            .iter()
            .zip(&self.domain)
            .position(|(p, d)| p.is_none() && !d.is_bounded())
    }

    /// Wrap periodic coordinates into `[0, period)`.
    pub fn canonicalize(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.periods)
            .map(|(&x, p)| match p {
                Some(p) => x.rem_euclid(*p),
                None => x,
            })
            .collect()
    }

    /// Coordinate difference `to - from`, wrapped into `(-p/2, p/2]` on
    /// periodic axes so curves interpolate the short way around.
    pub fn chart_delta(&self, from: &[f64], to: &[f64]) -> Vec<f64> {
        from.iter()
            .zip(to)
            .zip(&self.periods)
            .map(|((&a, &b), p)| {
                let mut d = b - a;
                if let Some(p) = p {
                    d = d.rem_euclid(*p);
                    if d > p / 2.0 {
                        d -= p;
                    }
                }
                d
            })
            .collect()
    }

    /// Raw chart evaluation without domain checks or canonicalization.
    pub fn chart_eval(&self, u: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.ambient_dim);
        self.chart.eval(u, &mut out);
        out
    }

    /// Embed chart coordinates into a [`ManifoldPoint`].
    pub fn embed(&self, u: &[f64]) -> Result<ManifoldPoint> {
        if u.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: u.len(),
            });
        }
        let canon = self.canonicalize(u);
        for (i, (&x, itv)) in canon.iter().zip(&self.domain).enumerate() {
            if self.periods[i].is_none() && !itv.contains(x) {
                return Err(GeomError::DomainViolation {
                    index: i,
                    value: x,
                    lo: itv.lo,
                    hi: itv.hi,
                });
            }
        }
        let ambient = self.chart_eval(&canon);
        Ok(ManifoldPoint {
            chart: canon,
            ambient,
        })
    }

    /// Chart Jacobian at a point: column `i` is `d(chart)/du_i`.
    ///
    /// Errors with `RankDeficient` when the smallest singular value drops
    /// below the rank tolerance (a chart singularity).
    pub fn jacobian(&self, p: &ManifoldPoint) -> Result<DMatrix<f64>> {
        let j = self.jacobian_at(&p.chart);
        if self.dim > 0 {
            let sigma = smallest_singular_value(&j);
            if sigma < self.tol.rank {
                return Err(GeomError::RankDeficient {
                    sigma,
                    tol: self.tol.rank,
                });
            }
        }
        Ok(j)
    }

    /// Jacobian without the rank check (chart coordinates given directly).
    pub fn jacobian_at(&self, u: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.ambient_dim, self.dim);
        let mut out: Vec<Dual> = Vec::with_capacity(self.ambient_dim);
        for col in 0..self.dim {
            out.clear();
            let du: Vec<Dual> = u
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if i == col {
                        Dual::seeded(x)
                    } else {
                        Dual::constant(x)
                    }
                })
                .collect();
            self.chart.eval(&du, &mut out);
            for (row, d) in out.iter().enumerate() {
                j[(row, col)] = d.de;
            }
        }
        j
    }

    /// Directional derivative of the chart: ambient velocity of the path
    /// `t -> chart(u + t du)` at `t = 0`.
    pub fn push_chart_velocity(&self, u: &[f64], du: &[f64]) -> Vec<f64> {
        let duals: Vec<Dual> = u.iter().zip(du).map(|(&x, &d)| Dual::new(x, d)).collect();
        let mut out: Vec<Dual> = Vec::with_capacity(self.ambient_dim);
        self.chart.eval(&duals, &mut out);
        out.into_iter().map(|d| d.de).collect()
    }

    /// Induced metric tensor `J^T J` at `p`.
    pub fn metric_at(&self, p: &ManifoldPoint) -> Result<MetricTensor> {
        let j = self.jacobian(p)?;
        let gram = j.transpose() * &j;
        Ok(MetricTensor {
            base: p.clone(),
            gram,
        })
    }

    /// Tangent vector from chart components.
    pub fn tangent_from_chart(&self, p: &ManifoldPoint, comps: &[f64]) -> Result<TangentVector> {
        if comps.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: comps.len(),
            });
        }
        let ambient = self.push_chart_velocity(&p.chart, comps);
        Ok(TangentVector {
            base: p.clone(),
            chart: comps.to_vec(),
            ambient,
        })
    }

    /// Orthogonal projection of an ambient vector onto the tangent space.
    pub fn tangent_project(&self, p: &ManifoldPoint, a: &[f64]) -> Result<TangentVector> {
        if a.len() != self.ambient_dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.ambient_dim,
                got: a.len(),
            });
        }
        let j = self.jacobian(p)?;
        let comps = project_to_columns(&j, a)?;
        self.tangent_from_chart(p, &comps)
    }
}

/// Solve the normal equations `(J^T J) c = J^T a`: chart components of the
/// orthogonal projection of `a` onto the column space of `J`.
pub(crate) fn project_to_columns(j: &DMatrix<f64>, a: &[f64]) -> Result<Vec<f64>> {
    if j.ncols() == 0 {
        return Ok(Vec::new());
    }
    let gram = j.transpose() * j;
    let rhs = j.transpose() * DVector::from_column_slice(a);
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| GeomError::RankDeficient {
            sigma: smallest_singular_value(j),
            tol: Tolerances::default().rank,
        })?;
    Ok(chol.solve(&rhs).as_slice().to_vec())
}

pub(crate) fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Riemannian inner product of two tangent vectors at the same base point.
///
/// Equals the Euclidean dot of the ambient representations since the metric
/// is induced.
pub fn inner_product(v: &TangentVector, w: &TangentVector) -> Result<f64> {
    let sep = num::dist(&v.base.ambient, &w.base.ambient);
    if sep > Tolerances::default().ambient.max(1e-8) {
        return Err(GeomError::BasePointMismatch { distance: sep });
    }
    Ok(num::dot(&v.ambient, &w.ambient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::TAU;
    use approx::assert_abs_diff_eq;

    fn circle() -> Arc<EmbeddedManifold> {
        EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 })
    }

    fn hyperboloid() -> Arc<EmbeddedManifold> {
        EmbeddedManifold::new("M422", ChartSpec::Hyperboloid)
    }

    #[test]
    fn embed_circle_origin() {
        let p = circle().embed(&[0.0]).unwrap();
        assert_eq!(p.ambient, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn embed_hyperboloid_fiber_point() {
        // (t, r) = (3pi/2, 1) -> (0, -sqrt 2, 1)
        let p = hyperboloid().embed(&[1.5 * std::f64::consts::PI, 1.0]).unwrap();
        assert_abs_diff_eq!(p.ambient[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.ambient[1], -2.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(p.ambient[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn embed_cylinder() {
        let m = EmbeddedManifold::new("cyl", ChartSpec::Cylinder { radius: 1.0 });
        let p = m.embed(&[0.0, 5.0]).unwrap();
        assert_eq!(p.ambient, vec![1.0, 5.0, 0.0]);
    }

    #[test]
    fn canonicalization_wraps() {
        let p = circle().embed(&[TAU + 0.25]).unwrap();
        assert_abs_diff_eq!(p.chart[0], 0.25, epsilon = 1e-12);
        let q = circle().embed(&[0.25]).unwrap();
        assert_abs_diff_eq!(num::dist(&p.ambient, &q.ambient), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn domain_violation() {
        let m = EmbeddedManifold::new("seg", ChartSpec::Line).with_domain(0, Interval::new(-5.0, 5.0));
        assert!(m.embed(&[7.0]).is_err());
        assert!(m.embed(&[5.0]).is_ok());
    }

    #[test]
    fn jacobian_circle() {
        let m = circle();
        let p = m.embed(&[0.0]).unwrap();
        let j = m.jacobian(&p).unwrap();
        assert_abs_diff_eq!(j[(0, 0)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j[(1, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j[(2, 0)], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn jacobian_hyperboloid_r_column() {
        // r-column at (t, r) = (0, 1): (1/sqrt 2, 0, 1)
        let m = hyperboloid();
        let p = m.embed(&[0.0, 1.0]).unwrap();
        let j = m.jacobian(&p).unwrap();
        assert_abs_diff_eq!(j[(0, 1)], 1.0 / 2.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(j[(1, 1)], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(j[(2, 1)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let m = hyperboloid();
        for &(t, r) in &[(0.0, 0.0), (0.7, 1.3), (3.0, -2.0), (5.5, 0.4)] {
            let p = m.embed(&[t, r]).unwrap();
            let j = m.jacobian(&p).unwrap();
            let h = 1e-6;
            for col in 0..2 {
                let mut up = p.chart.clone();
                let mut dn = p.chart.clone();
                up[col] += h;
                dn[col] -= h;
                let fu = m.chart_eval(&up);
                let fd = m.chart_eval(&dn);
                for row in 0..3 {
                    let fdval = (fu[row] - fd[row]) / (2.0 * h);
                    let scale = 1.0 + j[(row, col)].abs();
                    assert!(
                        (j[(row, col)] - fdval).abs() / scale < 1e-7,
                        "entry ({row},{col}) at ({t},{r})"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_deficient_chart() {
        let m = EmbeddedManifold::new("bad", ChartSpec::Cylinder { radius: 0.0 });
        let p = m.embed(&[0.3, 1.0]).unwrap();
        assert!(matches!(
            m.jacobian(&p),
            Err(GeomError::RankDeficient { .. })
        ));
    }

    #[test]
    fn metric_hyperboloid_closed_form() {
        // gram = diag(r^2 + 1, (2r^2 + 1) / (r^2 + 1)); at r = 1: diag(2, 3/2)
        let m = hyperboloid();
        let p = m.embed(&[0.4, 1.0]).unwrap();
        let g = m.metric_at(&p).unwrap();
        assert_abs_diff_eq!(g.gram[(0, 0)], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.gram[(1, 1)], 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(g.gram[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn metric_plane_identity() {
        let m = EmbeddedManifold::new("plane", ChartSpec::PlaneYz);
        let p = m.embed(&[2.0, -3.0]).unwrap();
        let g = m.metric_at(&p).unwrap();
        assert_eq!(g.gram[(0, 0)], 1.0);
        assert_eq!(g.gram[(1, 1)], 1.0);
        assert_eq!(g.gram[(0, 1)], 0.0);
    }

    #[test]
    fn inner_product_orthogonal_directions() {
        let m = hyperboloid();
        let p = m.embed(&[0.0, 1.0]).unwrap();
        let vt = m.tangent_from_chart(&p, &[1.0, 0.0]).unwrap();
        let vr = m.tangent_from_chart(&p, &[0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(inner_product(&vt, &vr).unwrap(), 0.0, epsilon = 1e-12);
        assert!(inner_product(&vt, &vt).unwrap() > 0.0);
    }

    #[test]
    fn inner_product_base_mismatch() {
        let m = circle();
        let p = m.embed(&[0.0]).unwrap();
        let q = m.embed(&[1.0]).unwrap();
        let v = m.tangent_from_chart(&p, &[1.0]).unwrap();
        let w = m.tangent_from_chart(&q, &[1.0]).unwrap();
        assert!(matches!(
            inner_product(&v, &w),
            Err(GeomError::BasePointMismatch { .. })
        ));
    }

    #[test]
    fn tangent_project_idempotent_and_orthogonal() {
        let m = hyperboloid();
        let p = m.embed(&[1.1, 0.8]).unwrap();
        let a = vec![0.3, -1.2, 0.7];
        let t1 = m.tangent_project(&p, &a).unwrap();
        let t2 = m.tangent_project(&p, &t1.ambient).unwrap();
        assert!(num::dist(&t1.ambient, &t2.ambient) < 1e-12);
        // residual orthogonal to both Jacobian columns
        let j = m.jacobian(&p).unwrap();
        let res: Vec<f64> = a.iter().zip(&t1.ambient).map(|(x, y)| x - y).collect();
        for col in 0..2 {
            let c: Vec<f64> = (0..3).map(|row| j[(row, col)]).collect();
            assert!(num::dot(&res, &c).abs() < 1e-10);
        }
    }

    #[test]
    fn tangent_project_normal_vector_vanishes() {
        let m = circle();
        let p = m.embed(&[0.0]).unwrap();
        // radial direction at (1, 0, 0) is normal to the circle
        let t = m.tangent_project(&p, &[1.0, 0.0, 0.0]).unwrap();
        assert!(t.norm() < 1e-12);
    }

    #[test]
    fn chart_norm_equals_ambient_norm() {
        let m = hyperboloid();
        let p = m.embed(&[2.2, -0.7]).unwrap();
        let g = m.metric_at(&p).unwrap();
        let v = m.tangent_from_chart(&p, &[0.3, 0.9]).unwrap();
        assert_abs_diff_eq!(g.norm_of(&v.chart), v.norm(), epsilon = 1e-10);
    }
}
