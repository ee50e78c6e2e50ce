//! Complex-function tools for Laplace transforms: ray maxima, vanishing
//! orders, the small-disk radius and the constructive Jordan curves.

mod babylem;
mod curve;
pub mod geometry;
mod ray;
mod separation;
mod taylor;
mod transform;

pub use babylem::{babylem_radius, BabyLemma};
pub use curve::{jordan_curve, vertices_csv, CurveMargins, CurveOptions, CurveParams, GridInfo, JordanCurve};
pub use ray::{ray_max, RayMaximum, DEFAULT_DECAY_FLOOR};
pub use separation::{separation_curve, SeparationCurve};
pub use taylor::{default_radius, taylor_coefficients, vanishing_order, VanishingOrder, CONTOUR_NODES, MAX_ORDER};
pub use transform::{Scaled, Transform};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexFnError {
    #[error("|F| is below the decay floor everywhere on the sampled ray")]
    AllZero,
    #[error("no Taylor coefficient above tolerance up to order {max_order}")]
    OrderNotFound { max_order: usize },
    #[error("every candidate circle contains a near-zero of F")]
    NoCircleFound,
    #[error("curve construction needs a real transform")]
    NotReal,
    #[error("vanishing order {0} at the ray maximum is odd")]
    OddOrder(usize),
    #[error("the component of a1 never reached the imaginary axis within the grid cap")]
    ComponentClosed,
    #[error("could not remove self-intersections of the curve")]
    SimplicityRepairFailed,
    #[error("condition ({condition}) failed with margin {margin}")]
    ConditionFailed { condition: &'static str, margin: f64 },
    #[error("window u * R_m = {window} is not below r = {r}")]
    WindowViolation { window: f64, r: f64 },
}
