//! Dimension-generic Euclidean primitives.

mod point;
mod regions;
mod shapes;
mod width;

pub use point::{Point, MAX_DIM};
pub use regions::{cone_leg_ok, cone_pointwise, detour_waypoint, in_cone, in_r_rho, in_s_lambda, STRICT_TOL};
pub use shapes::{Aabb, Ball, Dsu, Line, PolyCurve, PolyPath, Segment};
pub use width::{
    beta, beta_of_subset, convex_hull, direction_grid, directional_width, min_enclosing_ball,
    grid_min_width_with, min_width_line, refine_direction, DIRECTION_GRID,
};

/// Exact distance from `p` to the curve (brute force over edges).
pub fn dist_point_to_curve(p: &Point, curve: &PolyCurve) -> f64 {
    curve.dist(p)
}
