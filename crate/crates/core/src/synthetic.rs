//! Executable checks of the cone-splicing inequality and of the clearance
//! point construction on synthetic configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{Line, Point, PolyCurve};
use crate::route::ConeFrame;
use crate::spatial::CurveIndex;

/// Dilation used by the clearance-point check; the construction needs M′ > 40.
pub const CLEARANCE_DILATION: f64 = 100.0;
/// Transverse noise of the synthetic near-line, in units of r₀.
pub const CLEARANCE_NOISE: f64 = 0.1;
/// Lower bound on |a − b| in units of r₀.
pub const CLEARANCE_MIN_GAP: f64 = 1.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCheck {
    pub dim: usize,
    pub configs: usize,
    pub violations: usize,
    /// Smallest normalized slack over all configurations.
    pub min_margin: f64,
}

fn unit_orthogonal(rng: &mut ChaCha8Rng, dir: &Point) -> Point {
    let basis = dir.orthonormal_complement();
    loop {
        let mut v = Point::zero(dir.dim());
        for b in &basis {
            v = v + *b * rng.gen_range(-1.0..1.0);
        }
        if let Some(u) = v.normalized() {
            return u;
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Point {
    let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Point::new(&c)
}

/// Point at projection `s` from z along `dir`, at angle `psi` from the axis.
fn off_axis(rng: &mut ChaCha8Rng, z: &Point, dir: &Point, s: f64, psi: f64) -> Point {
    let n = unit_orthogonal(rng, dir);
    *z + *dir * s + n * (s.abs() * psi.tan())
}

/// For random x, y, z ∈ (x,y), x′ ∈ H⁺∩V₁(z) and y′ ∈ H⁻∩V₁(z), checks
/// |x−y| − |x−x′| − |y−y′| ≥ ½|x″−y″| where x″, y″ are the projections on L.
pub fn splice_check(d: usize, phi: f64, configs: usize, seed: u64) -> SyntheticCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SyntheticCheck { dim: d, configs: 0, violations: 0, min_margin: f64::INFINITY };
    while out.configs < configs {
        let x = random_point(&mut rng, d);
        let y = random_point(&mut rng, d);
        let Some(dir) = (x - y).normalized() else { continue };
        let len = x.dist(&y);
        if len < 1e-3 {
            continue;
        }
        let z = y.lerp(&x, rng.gen_range(0.05..0.95));
        let Some(f) = ConeFrame::new(&x, &y, &z, phi) else { continue };
        let sx = rng.gen_range(0.0..1.0) * (len - f.uz);
        let sy = rng.gen_range(0.0..1.0) * f.uz;
        let (px, py) = (rng.gen_range(0.0..phi), rng.gen_range(0.0..phi));
        let xp = off_axis(&mut rng, &z, &dir, sx, px);
        let yp = off_axis(&mut rng, &z, &dir, -sy, py);
        if !(f.in_h_plus(&xp) && f.in_v(&xp, 1.0) && f.in_h_minus(&yp) && f.in_v(&yp, 1.0)) {
            continue;
        }
        out.configs += 1;
        let lhs = len - x.dist(&xp) - y.dist(&yp);
        let rhs = 0.5 * (f.proj(&xp) - f.proj(&yp));
        let margin = (lhs - rhs) / len;
        out.min_margin = out.min_margin.min(margin);
        if margin < -1e-12 {
            out.violations += 1;
        }
    }
    out
}

/// The clearance point z′ on L: Π(a) + w + 2r₀ with w = 2r₀(Π(a) − Π(b))/(dist(a,L) − dist(b,L)).
pub fn clearance_point(line: &Line, a: &Point, b: &Point, r0: f64) -> Point {
    let (pa, pb) = (line.coordinate(a), line.coordinate(b));
    let w = if pa > pb { 2.0 * r0 * (pa - pb) / (line.dist(a) - line.dist(b)) } else { 0.0 };
    line.anchor + line.direction * (pa + w + 2.0 * r0)
}

/// One synthetic configuration for the clearance-point check.
#[derive(Clone, Debug)]
pub struct ClearanceConfig {
    pub line: Line,
    pub z0: Point,
    pub r0: f64,
    pub a: Point,
    pub b: Point,
    /// Near-line through a and b, restricted to B(z₀, M′r₀).
    pub gamma: PolyCurve,
}

impl ClearanceConfig {
    /// Upper bound on β(B(z₀, M′r₀)) from the tube around L_{a,b}.
    pub fn beta_bound(&self) -> f64 {
        let lab = Line::through(self.a, self.b);
        let w = self.gamma.vertices().iter().map(|p| lab.dist(p)).fold(0.0, f64::max);
        w / (CLEARANCE_DILATION * self.r0)
    }
}

/// Samples a, b satisfying the projection, ball, separation and slope
/// hypotheses, and a near-line Γ through them.
pub fn sample_clearance_config(rng: &mut ChaCha8Rng, d: usize) -> ClearanceConfig {
    let mp = CLEARANCE_DILATION;
    loop {
        let r0 = 10f64.powf(rng.gen_range(-2.0..0.0));
        let Some(direction) = random_point(rng, d).normalized() else { continue };
        let anchor = random_point(rng, d);
        let line = Line::new(anchor, direction);
        let z0 = anchor + direction * rng.gen_range(-1.0..1.0);
        let in_ball = |rng: &mut ChaCha8Rng| loop {
            let v = random_point(rng, d) * (mp * r0 / 4.0);
            if v.norm() < mp * r0 / 4.0 {
                return z0 + v;
            }
        };
        let (a, b) = (in_ball(rng), in_ball(rng));
        let (pa, pb) = (line.coordinate(&a), line.coordinate(&b));
        let slope = (line.dist(&a) - line.dist(&b)) / a.dist(&b);
        if pa <= pb || a.dist(&b) <= CLEARANCE_MIN_GAP * r0 || slope <= 10.0 / mp {
            continue;
        }
        let Some(u) = (a - b).normalized() else { continue };
        let big = mp * r0;
        let mut pts: Vec<(f64, Point)> = vec![(0.0, b), ((a - b).dot(&u), a)];
        let mut t = -(z0 - b).norm() - big;
        while t < (z0 - b).norm() + big {
            let p = b + u * t + unit_orthogonal(rng, &u) * (rng.gen_range(0.0..CLEARANCE_NOISE) * r0);
            if p.dist(&z0) < big && (t - pts[0].0).abs() > 1e-9 && (t - pts[1].0).abs() > 1e-9 {
                pts.push((t, p));
            }
            t += r0;
        }
        pts.sort_by(|x, y| x.0.total_cmp(&y.0));
        let Ok(gamma) = PolyCurve::polyline(pts.into_iter().map(|(_, p)| p).collect()) else { continue };
        return ClearanceConfig { line, z0, r0, a, b, gamma };
    }
}

/// Checks z′ ∈ B(z₀, M′r₀/2) and dist(z′, Γ) > 3r₀/2 on random configurations.
/// Configurations whose tube bound exceeds 1/(8M′) would not satisfy the flatness
/// hypothesis and count as violations.
pub fn clearance_check(d: usize, configs: usize, seed: u64) -> SyntheticCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SyntheticCheck { dim: d, configs, violations: 0, min_margin: f64::INFINITY };
    for _ in 0..configs {
        let pc = sample_clearance_config(&mut rng, d);
        let zp = clearance_point(&pc.line, &pc.a, &pc.b, pc.r0);
        let clearance = CurveIndex::new(&pc.gamma).dist(&zp) / pc.r0 - 1.5;
        let inside = 0.5 * CLEARANCE_DILATION - zp.dist(&pc.z0) / pc.r0;
        let flat = 1.0 / (8.0 * CLEARANCE_DILATION) - pc.beta_bound();
        let margin = clearance.min(inside);
        out.min_margin = out.min_margin.min(margin);
        if margin <= 0.0 || flat < 0.0 {
            out.violations += 1;
        }
    }
    out
}
