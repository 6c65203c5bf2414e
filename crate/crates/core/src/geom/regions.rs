use super::point::Point;
use crate::error::{Error, Result};
use crate::spatial::CurveIndex;

/// Relative slack applied to strict inequalities.
pub const STRICT_TOL: f64 = 1e-12;

#[inline]
fn strictly_less(a: f64, b: f64, scale: f64) -> bool {
    a < b - STRICT_TOL * scale
}

/// Membership in R_ρ(x,y), the open ball about the midpoint with radius (1+ρ)/2·|x−y|.
pub fn in_r_rho(p: &Point, x: &Point, y: &Point, rho: f64) -> Result<bool> {
    let l = x.dist(y);
    if l == 0.0 {
        return Err(Error::DegeneratePair);
    }
    Ok(strictly_less(p.dist(&x.midpoint(y)), (1.0 + rho) / 2.0 * l, l))
}

/// Membership in the lens S_λ(x,y) = B(x,(1−λ)|x−y|) ∩ B(y,(1−λ)|x−y|).
pub fn in_s_lambda(p: &Point, x: &Point, y: &Point, lambda: f64) -> Result<bool> {
    let l = x.dist(y);
    if l == 0.0 {
        return Err(Error::DegeneratePair);
    }
    let r = (1.0 - lambda) * l;
    Ok(strictly_less(p.dist(x), r, l) && strictly_less(p.dist(y), r, l))
}

/// Pointwise part of the cone condition |z−ξ| < α·dist(z,Γ).
#[inline]
pub fn cone_pointwise(z: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> bool {
    let r = z.dist(xi);
    r > 0.0 && strictly_less(r, alpha * curve.dist(z), r)
}

/// Sample parameters along a path leg ending at the cone apex: uniform plus
/// geometric refinement toward t = 1.
fn leg_params() -> impl Iterator<Item = f64> {
    let uniform = (0..64).map(|i| i as f64 / 64.0);
    let geometric = (1..=160).map(|m| 1.0 - (-(m as f64) / 4.0).exp2()).filter(|t| *t > 63.0 / 64.0);
    uniform.chain(geometric)
}

/// True when the straight segment from `a` toward `xi` (endpoint excluded)
/// stays inside the pointwise cone region.
pub fn cone_leg_ok(a: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> bool {
    leg_params().all(|t| cone_pointwise(&a.lerp(xi, t), xi, alpha, curve))
}

/// Uniformly sampled leg between two off-curve points, both endpoints included.
fn free_leg_ok(a: &Point, b: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> bool {
    (0..=64).all(|i| cone_pointwise(&a.lerp(b, i as f64 / 64.0), xi, alpha, curve))
}

/// Membership of `z` in the cone C_α(ξ): the pointwise inequality plus a
/// certified path to ξ inside the inequality region.
///
/// The path is the straight segment, or failing that a two-leg detour through
/// a high-clearance waypoint near the midpoint.
pub fn in_cone(z: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> Result<bool> {
    let off = curve.dist(xi);
    if off > 1e-9 * curve.scale() {
        return Err(Error::ApexOffCurve(off));
    }
    if !cone_pointwise(z, xi, alpha, curve) {
        return Ok(false);
    }
    if cone_leg_ok(z, xi, alpha, curve) {
        return Ok(true);
    }
    Ok(detour_waypoint(z, xi, alpha, curve).is_some())
}

/// A waypoint `w` such that z→w→ξ stays in the cone region.
pub fn detour_waypoint(z: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> Option<Point> {
    let mid = z.midpoint(xi);
    let half = z.dist(xi) / 2.0;
    let axis = (*z - *xi).normalized()?;
    let mut cands: Vec<(f64, Point)> = Vec::new();
    for n in axis.orthonormal_complement() {
        for s in [0.25, 0.5, 1.0] {
            for sign in [1.0, -1.0] {
                let w = mid + n * (sign * s * half);
                cands.push((curve.dist(&w), w));
            }
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.lex_cmp(&b.1)));
    cands
        .into_iter()
        .map(|(_, w)| w)
        .find(|w| free_leg_ok(z, w, xi, alpha, curve) && cone_leg_ok(w, xi, alpha, curve))
}
