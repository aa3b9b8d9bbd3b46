//! Numerical toolkit for embedded Riemannian manifolds and maximal-rank
//! maps: horizontal lifts, length/distance inequality verifiers,
//! rough-isometry constant fitting and refutation, and a gallery of case
//! studies with closed-form oracles.

pub mod chart;
pub mod checks;
pub mod curve;
pub mod dual;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod geodesic;
pub mod manifold;
pub mod num;
pub mod report;
pub mod rng;
pub mod roughiso;
pub mod submersion;
pub mod verify;

pub use chart::{ChartSpec, Interval};
pub use checks::{run_case, run_check, CheckConfig, CheckOutcome};
pub use curve::{curve_length, is_beta_long, DiscreteCurve};
pub use error::{GeomError, Result};
pub use geodesic::{
    diameter_estimate, distance, mesh_distance_oracle, mesh_lower_bound, DiameterEstimate,
    DistanceEstimate, DistanceOpts, MeshDistance, MeshOpts,
};
pub use manifold::{inner_product, EmbeddedManifold, ManifoldPoint, MetricTensor, TangentVector};
pub use gallery::{case, catalog, CaseId, CaseStudy};
pub use num::Tolerances;
pub use report::{CheckKind, Verdict, VerifierReport, Witness};
pub use roughiso::{
    check_ri2_fullness, certify_ri1, find_ri1_violation, fit_ri1, fit_ri1_over_boxes,
    rough_inverse, theorem421_epsilon, theorem423_constants, MetricSampleCloud, Ri1Fit,
    Ri2Report, RoughMap,
};
pub use submersion::{
    exp_diffeo, exp_diffeo_inv, Fiber, FiberForm, HorizontalLift, MapSpec, SubmersionMap,
    TangentSplitting,
};
