//! Sampled curves on a manifold.
//!
//! A curve is a strictly increasing parameter sequence plus one chart point
//! per parameter. Chart coordinates are stored *unwrapped* (lifted to the
//! universal cover of periodic axes) so piecewise-linear interpolation never
//! jumps across a period seam; embedding canonicalizes on demand.

use std::sync::Arc;

use crate::error::{GeomError, Result};
use crate::manifold::{EmbeddedManifold, ManifoldPoint};
use crate::num;

/// A sampled parametrized curve.
#[derive(Debug, Clone)]
pub struct DiscreteCurve {
    pub manifold: Arc<EmbeddedManifold>,
    /// Strictly increasing parameters spanning `[t1, t2]`.
    pub params: Vec<f64>,
    /// Unwrapped chart coordinates, one per parameter.
    pub coords: Vec<Vec<f64>>,
    /// Cached ambient coordinates, one per parameter.
    pub ambient: Vec<Vec<f64>>,
}

impl DiscreteCurve {
    pub fn from_coords(
        manifold: Arc<EmbeddedManifold>,
        params: Vec<f64>,
        coords: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if params.len() != coords.len() || params.len() < 2 {
            return Err(GeomError::Config(
                "curve needs matching params/coords with at least two nodes".into(),
            ));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeomError::Config("curve params must strictly increase".into()));
        }
        let ambient = coords.iter().map(|u| manifold.chart_eval(u)).collect();
        Ok(DiscreteCurve {
            manifold,
            params,
            coords,
            ambient,
        })
    }

    /// Sample a chart-coordinate path `t -> u(t)` on `n + 1` nodes,
    /// unwrapping periodic coordinates so the stored path is continuous.
    pub fn sample<F>(
        manifold: Arc<EmbeddedManifold>,
        t1: f64,
        t2: f64,
        n: usize,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        assert!(n >= 1 && t2 > t1);
        let mut params = Vec::with_capacity(n + 1);
        let mut coords: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = t1 + (t2 - t1) * i as f64 / n as f64;
            params.push(t);
            let raw = f(t);
            if let Some(prev) = coords.last() {
                let delta = manifold.chart_delta(&manifold.canonicalize(prev), &raw);
                coords.push(prev.iter().zip(&delta).map(|(a, d)| a + d).collect());
            } else {
                coords.push(raw);
            }
        }
        DiscreteCurve::from_coords(manifold, params, coords)
    }

    /// Chart-linear interpolation between two points on `n` segments, taking
    /// the short way around periodic axes.
    pub fn linear_between(
        manifold: Arc<EmbeddedManifold>,
        p: &ManifoldPoint,
        q: &ManifoldPoint,
        n: usize,
    ) -> Result<Self> {
        let delta = manifold.chart_delta(&p.chart, &q.chart);
        let start = p.chart.clone();
        DiscreteCurve::sample(manifold, 0.0, 1.0, n, move |t| {
            start.iter().zip(&delta).map(|(a, d)| a + d * t).collect()
        })
    }

    pub fn nodes(&self) -> usize {
        self.params.len()
    }

    pub fn t1(&self) -> f64 {
        self.params[0]
    }

    pub fn t2(&self) -> f64 {
        *self.params.last().unwrap()
    }

    /// Canonicalized point at node `i`.
    pub fn point(&self, i: usize) -> ManifoldPoint {
        ManifoldPoint {
            chart: self.manifold.canonicalize(&self.coords[i]),
            ambient: self.ambient[i].clone(),
        }
    }

    /// Chart velocity of segment `i` (constant on the segment).
    pub fn segment_velocity(&self, i: usize) -> Vec<f64> {
        let dt = self.params[i + 1] - self.params[i];
        self.coords[i + 1]
            .iter()
            .zip(&self.coords[i])
            .map(|(b, a)| (b - a) / dt)
            .collect()
    }

    /// Ambient speeds at both ends of segment `i`, using that segment's
    /// chart velocity.
    fn segment_speeds(&self, i: usize) -> (f64, f64) {
        let du = self.segment_velocity(i);
        let v0 = self.manifold.push_chart_velocity(&self.coords[i], &du);
        let v1 = self.manifold.push_chart_velocity(&self.coords[i + 1], &du);
        (num::norm(&v0), num::norm(&v1))
    }

    /// Composite-trapezoid length of the interpolated chart path.
    pub fn length(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.nodes() - 1 {
            let dt = self.params[i + 1] - self.params[i];
            let (s0, s1) = self.segment_speeds(i);
            total += dt * 0.5 * (s0 + s1);
        }
        total
    }

    /// Minimum sampled speed, evaluated at both ends of every segment.
    pub fn min_speed(&self) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..self.nodes() - 1 {
            let (s0, s1) = self.segment_speeds(i);
            min = min.min(s0).min(s1);
        }
        min
    }

    /// Ambient chord distance between the endpoints.
    pub fn endpoint_chord(&self) -> f64 {
        num::dist(&self.ambient[0], self.ambient.last().unwrap())
    }
}

/// `true` iff the sampled speed never drops below `beta` (minus slack).
pub fn is_beta_long(curve: &DiscreteCurve, beta: f64) -> bool {
    assert!(beta > 0.0, "beta must be positive");
    curve.min_speed() >= beta - curve.manifold.tolerances().beta_long
}

/// Curve length via `curve.length()`; named entry point mirroring the
/// geometric operation.
pub fn curve_length(curve: &DiscreteCurve) -> f64 {
    curve.length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::ChartSpec;
    use approx::assert_abs_diff_eq;

    fn circle() -> Arc<EmbeddedManifold> {
        EmbeddedManifold::new("S1", ChartSpec::Circle { radius: 1.0 })
    }

    #[test]
    fn constant_curve_has_zero_length() {
        let m = circle();
        let c = DiscreteCurve::sample(m, 0.0, 1.0, 16, |_| vec![0.3]).unwrap();
        assert_eq!(c.length(), 0.0);
    }

    #[test]
    fn unit_speed_arc_length() {
        let m = circle();
        let c = DiscreteCurve::sample(m, 0.0, std::f64::consts::PI, 64, |t| vec![t]).unwrap();
        assert_abs_diff_eq!(c.length(), std::f64::consts::PI, epsilon = 1e-6);
    }

    #[test]
    fn hyperboloid_lift_length_closed_form() {
        // Gamma_1 over the full circle has speed sqrt(2), length 2 pi sqrt(2)
        let m = EmbeddedManifold::new("M", ChartSpec::Hyperboloid);
        let c = DiscreteCurve::sample(m, 0.0, crate::chart::TAU, 256, |t| vec![t, 1.0]).unwrap();
        assert_abs_diff_eq!(
            c.length(),
            crate::chart::TAU * 2.0_f64.sqrt(),
            epsilon = 1e-5
        );
    }

    #[test]
    fn wrapping_interpolation_takes_short_way() {
        let m = circle();
        let p = m.embed(&[6.2]).unwrap();
        let q = m.embed(&[0.1]).unwrap();
        let c = DiscreteCurve::linear_between(m, &p, &q, 32).unwrap();
        // short way has length 2 pi - 6.2 + 0.1
        assert_abs_diff_eq!(c.length(), crate::chart::TAU - 6.1, epsilon = 1e-9);
    }

    #[test]
    fn length_at_least_chord() {
        let m = EmbeddedManifold::new("M", ChartSpec::Hyperboloid);
        let c = DiscreteCurve::sample(m, 0.0, 1.0, 64, |t| vec![2.0 * t, t * t - 0.5]).unwrap();
        assert!(c.length() >= c.endpoint_chord() - 1e-9);
    }

    #[test]
    fn beta_long_unit_speed() {
        let m = circle();
        let c = DiscreteCurve::sample(m.clone(), 0.0, 2.0, 64, |t| vec![t]).unwrap();
        assert!(is_beta_long(&c, 1.0));
        assert!(!is_beta_long(&c, 1.01));
        let constant = DiscreteCurve::sample(m, 0.0, 1.0, 8, |_| vec![0.0]).unwrap();
        assert!(!is_beta_long(&constant, 0.1));
    }

    #[test]
    fn beta_long_vanishing_speed() {
        // u(t) = t^2 on the circle chart: speed 2t vanishes at t = 0
        let m = circle();
        let c = DiscreteCurve::sample(m, 0.0, 1.0, 256, |t| vec![t * t]).unwrap();
        assert!(!is_beta_long(&c, 0.5));
    }
}
