//! Landscape analysis of `f(u) = ½‖uuᵀ − u*u*ᵀ‖₁`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod exec;
pub mod firstorder;
pub mod lp;
pub mod objective;
pub mod pattern;
pub mod secondorder;
pub mod sign;
pub mod stationarity;
pub mod subdiff;
pub mod tilting;
pub mod tolerance;
pub mod vector;

pub use dynamics::{
    conjecture_probe, flow_field, run_subgradient, ConjectureReport, DescentConfig, GridSpec, InitDistribution,
    ProbeConfig, Selection, StepSchedule, Trajectory,
};
pub use error::{LandscapeError, Result};
pub use exec::Execution;
pub use firstorder::{
    cone_membership, critical_cone, directional_derivative, growth_check, sharpness_coefficient, ConeComponent,
    CriticalConeDescriptor, GrowthReport,
};
pub use objective::{finite_difference_slope, objective};
pub use pattern::{residual_pattern, MagnitudeClass, ResidualPattern, SignTag};
pub use secondorder::{
    classify_point, escape_curvature, second_subderivative, second_subderivative_numeric, NumericGrid,
    PointClassification, PointKind, SecondOrderValue,
};
pub use sign::SignSet;
pub use stationarity::{
    distance_to_stationary_set, gaussian_separation, is_stationary_closed_form, is_stationary_lp,
    project_to_spurious_set, StationarityKind, StationarityVerdict,
};
pub use subdiff::{subgradient_select, SelectionRule, SubdifferentialModel};
pub use tilting::{
    certify_sharp_local_min_1d, certify_sharp_local_min_tilted_f, eval_ex41, eval_ex42, tilt_divergence_probe_ex41,
    tilt_samples, ScalarFn, SharpnessCertificate,
};
pub use tolerance::Tolerances;
pub use vector::RealVector;
