//! Rasterized domains and their geometric quantities: measure, width,
//! inradius, regularized inradius and thickness.

mod balls;
mod domain;
mod measures;
mod shapes;

pub use balls::{
    ball_volume, complement_thickness, regularized_inradius, regularized_inradius_scan, slab_half_width,
    thickness_check, width_constant, RegularizedInradius, ThicknessCertificate,
};
pub use domain::GridDomain;
pub use measures::{inradius, measure, squared_distance_to_outside, width};
pub use shapes::{make_shape, Circle, Shape};

/// Default number of sampled directions for [`width`].
pub const DEFAULT_DIRECTIONS: usize = 180;
