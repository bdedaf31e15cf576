//! Domains, distance-to-boundary geometry and modulus-of-continuity calculus.

mod contact;
mod domain;
mod modulus;
mod point;

pub use contact::{boundary_contact, reach_estimate, BoundaryContact};
pub use domain::{
    BoundaryCurve, CurveProjection, DomainSpec, GraphDomain, GraphFamily, ImplicitShape, Projection,
};
pub use modulus::{
    dini_integral, log_dini_integral, omega_star, IntegralValue, ModulusFamily, ModulusIntegral,
    ModulusOfContinuity, DIVERGENCE_SLOPE,
};
pub use point::{Aabb, Point};
