//! Normal-ray transport between a convex boundary and a surrounding domain:
//! thickness, radial map, reciprocal map, and the numerical checker for the
//! geometric normal property.

use crate::error::{Error, Result};
use crate::geom::{BoundaryCurve, Point, Vec2};

/// Distance tolerance for "point lies on the boundary" checks.
pub const ON_BOUNDARY_TOL: f64 = 1e-9;
/// Bisection bracket width before the Newton polish.
const BISECT_WIDTH: f64 = 1e-13;
/// Double roots of the reciprocal quadratic closer than this are grazing.
const GRAZE_TOL: f64 = 1e-10;

/// A domain surrounding a convex body. The v1 domains are regions enclosed by
/// a convex boundary curve; a punctured variant (convex region minus a closed
/// disk) exists solely to exhibit geometric-normal-property failures.
#[derive(Debug, Clone)]
pub struct DomainBoundary {
    outer: BoundaryCurve,
    hole: Option<(Point, f64)>,
}

impl DomainBoundary {
    pub fn convex(outer: BoundaryCurve) -> Self {
        DomainBoundary { outer, hole: None }
    }

    pub fn punctured(outer: BoundaryCurve, hole_center: Point, hole_r: f64) -> Result<Self> {
        if !(hole_r > 0.0) {
            return Err(Error::InvalidShape(format!("hole radius {hole_r} must be positive")));
        }
        Ok(DomainBoundary { outer, hole: Some((hole_center, hole_r)) })
    }

    pub fn outer(&self) -> &BoundaryCurve {
        &self.outer
    }

    pub fn is_punctured(&self) -> bool {
        self.hole.is_some()
    }

    /// Strict interior test (the hole is a closed set, so its boundary is
    /// outside the domain).
    pub fn contains(&self, p: Point) -> bool {
        if !self.outer.contains(p) {
            return false;
        }
        match self.hole {
            Some((c, r)) => (p - c).norm() > r,
            None => true,
        }
    }

    pub fn diameter_bound(&self) -> f64 {
        self.outer.diameter_bound()
    }

    /// Verify that `curve` lies strictly inside the domain, sampled at
    /// `n` boundary points with the given margin.
    pub fn contains_curve(&self, curve: &BoundaryCurve, n: usize, margin: f64) -> bool {
        for i in 0..n {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            let p = curve.position(t);
            if !self.contains(p) {
                return false;
            }
            if self.outer.normal_gap(p) > -margin {
                return false;
            }
        }
        true
    }
}

/// Sample of the thickness function at one boundary parameter.
#[derive(Debug, Clone, Copy)]
pub struct ThicknessSample {
    pub t: f64,
    pub d: f64,
    pub hit: Point,
}

/// Diagnostics of a reciprocal-map evaluation.
#[derive(Debug, Clone, Copy)]
pub struct ReciprocalDiag {
    /// Ray parameter of the first intersection.
    pub ray_parameter: f64,
    /// The inward ray was tangent to the target (double root).
    pub grazing: bool,
}

/// Smallest positive root of the quadratic u^2 + 2 b u + c = 0, with grazing
/// detection for near-double roots. `scale` sets the grazing tolerance.
fn first_positive_root(b: f64, c: f64, scale: f64) -> Result<(f64, bool)> {
    let disc = b * b - c;
    if disc < 0.0 {
        if -disc <= GRAZE_TOL * scale * scale {
            let u = -b;
            if u > 0.0 {
                return Ok((u, true));
            }
        }
        return Err(Error::NoIntersection { closest: (-disc).sqrt() });
    }
    let sq = disc.sqrt();
    // Stable evaluation of both roots.
    let (r0, r1) = if b >= 0.0 {
        let big = -b - sq;
        (c / big, big)
    } else {
        let big = -b + sq;
        (big, c / big)
    };
    let (lo, hi) = if r0 <= r1 { (r0, r1) } else { (r1, r0) };
    let graze = sq * sq <= GRAZE_TOL * scale * scale;
    if lo > 0.0 {
        Ok((lo, graze))
    } else if hi > 0.0 {
        Ok((hi, graze))
    } else {
        Err(Error::NoIntersection { closest: -hi })
    }
}

/// Ray-circle first crossing: center `cc`, radius `r`.
fn ray_circle_first(origin: Point, dir: Vec2, cc: Point, r: f64) -> Result<(f64, bool)> {
    let oc = origin - cc;
    first_positive_root(oc.dot(dir), oc.norm_sq() - r * r, r)
}

/// Largest positive root for exiting a circle from inside.
fn ray_circle_exit(origin: Point, dir: Vec2, cc: Point, r: f64) -> Result<f64> {
    let oc = origin - cc;
    let b = oc.dot(dir);
    let disc = b * b - (oc.norm_sq() - r * r);
    if disc < 0.0 {
        return Err(Error::NoIntersection { closest: (-disc).sqrt() });
    }
    Ok(-b + disc.sqrt())
}

/// Map a point and direction into the normalized ellipse frame and solve.
fn ray_ellipse_roots(origin: Point, dir: Vec2, center: Point, a: f64, b: f64) -> (f64, f64, f64) {
    // Returns quadratic coefficients (A, B, C) of |M(o + t d)|^2 = 1.
    let ox = (origin.x - center.x) / a;
    let oy = (origin.y - center.y) / b;
    let dx = dir.x / a;
    let dy = dir.y / b;
    let qa = dx * dx + dy * dy;
    let qb = ox * dx + oy * dy;
    let qc = ox * ox + oy * oy - 1.0;
    (qa, qb, qc)
}

fn ray_ellipse_exit(origin: Point, dir: Vec2, center: Point, a: f64, b: f64) -> Result<f64> {
    let (qa, qb, qc) = ray_ellipse_roots(origin, dir, center, a, b);
    let disc = qb * qb - qa * qc;
    if disc < 0.0 {
        return Err(Error::NoIntersection { closest: (-disc).sqrt() });
    }
    Ok((-qb + disc.sqrt()) / qa)
}

fn ray_ellipse_first(origin: Point, dir: Vec2, center: Point, a: f64, b: f64) -> Result<(f64, bool)> {
    let (qa, qb, qc) = ray_ellipse_roots(origin, dir, center, a, b);
    first_positive_root(qb / qa, qc / qa, a.max(b))
}

/// First positive boundary crossing of a general convex curve along a ray,
/// by marching plus bisection and a Newton polish. `expect_inside` selects
/// exit-from-inside (gap goes negative to positive) versus first entry.
fn ray_curve_crossing(
    curve: &BoundaryCurve,
    origin: Point,
    dir: Vec2,
    expect_inside: bool,
    u_max: f64,
) -> Result<(f64, bool)> {
    let gap = |u: f64| curve.normal_gap(origin + u * dir);
    let scale = curve.diameter_bound();
    let step = scale / 256.0;
    let mut u_prev = 0.0;
    let mut g_prev = gap(0.0);
    let sign0 = if expect_inside { -1.0 } else { 1.0 };
    if g_prev * sign0 < 0.0 {
        // Starting on the wrong side (within roundoff of the boundary is ok).
        if g_prev.abs() > ON_BOUNDARY_TOL * scale.max(1.0) {
            return Err(Error::DegenerateGeometry(format!(
                "ray origin on unexpected side (gap {g_prev})"
            )));
        }
    }
    let mut min_gap = f64::INFINITY;
    let mut u = step;
    while u <= u_max {
        let g = gap(u);
        if !expect_inside {
            min_gap = min_gap.min(g.abs());
        }
        if (g_prev <= 0.0) != (g <= 0.0) {
            // Bracketed: bisect then polish.
            let (mut lo, mut hi) = (u_prev, u);
            let mut g_lo = g_prev;
            for _ in 0..200 {
                if hi - lo < BISECT_WIDTH * scale.max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let gm = gap(mid);
                if (g_lo <= 0.0) == (gm <= 0.0) {
                    lo = mid;
                    g_lo = gm;
                } else {
                    hi = mid;
                }
            }
            let mut root = 0.5 * (lo + hi);
            for _ in 0..3 {
                let p = origin + root * dir;
                let tc = curve.nearest_param(p);
                let nu = curve.outward_normal(tc);
                let denom = dir.dot(nu);
                if denom.abs() < 1e-12 {
                    break;
                }
                root -= (p - curve.position(tc)).dot(nu) / denom;
            }
            return Ok((root, false));
        }
        u_prev = u;
        g_prev = g;
        u += step;
    }
    if !expect_inside && min_gap <= GRAZE_TOL * scale {
        // Tangency: locate the minimum and report it as grazing.
        let mut best_u = 0.0;
        let mut best = f64::INFINITY;
        let fine = step / 64.0;
        let mut v = 0.0;
        while v <= u_max {
            let g = gap(v).abs();
            if g < best {
                best = g;
                best_u = v;
            }
            v += fine;
        }
        return Ok((best_u, true));
    }
    Err(if expect_inside {
        Error::UnboundedRay(u_max)
    } else {
        Error::NoIntersection { closest: min_gap }
    })
}

/// Maximal travel along `dir` from `origin` staying inside the domain, and
/// the boundary point reached.
///
/// `origin` must lie strictly inside; `dir` must be a unit vector. Circular
/// and elliptic boundaries are solved in closed form; other kinds bracket the
/// crossing geometrically and polish with Newton steps.
pub fn ray_exit(domain: &DomainBoundary, origin: Point, dir: Vec2) -> Result<(f64, Point)> {
    if !domain.contains(origin) {
        return Err(Error::OutsideDomain { x: origin.x, y: origin.y });
    }
    if (dir.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::DegenerateGeometry(format!("direction norm {} != 1", dir.norm())));
    }
    let diam = domain.diameter_bound();
    let u_max = 1e6 * diam;
    let t_outer = match domain.outer() {
        BoundaryCurve::Circle(c) => ray_circle_exit(origin, dir, c.center, c.r)?,
        BoundaryCurve::Ellipse(e) => ray_ellipse_exit(origin, dir, e.center, e.a, e.b)?,
        _ => ray_curve_crossing(domain.outer(), origin, dir, true, u_max)?.0,
    };
    let mut t_exit = t_outer;
    if let Some((hc, hr)) = domain.hole {
        if let Ok((t_hole, _)) = ray_circle_first(origin, dir, hc, hr) {
            if t_hole < t_exit {
                t_exit = t_hole;
            }
        }
    }
    // Interior sanity along the ray (64-point subdivision). A convex
    // hole-free domain cannot fail this; run it only when a hole can cut
    // the ray short.
    if domain.hole.is_some() {
        for i in 1..64 {
            let tau = t_exit * i as f64 / 64.0;
            if !domain.contains(origin + tau * dir) {
                return Err(Error::Accuracy(format!(
                    "ray leaves the domain before the computed exit (tau={tau})"
                )));
            }
        }
    }
    Ok((t_exit, origin + t_exit * dir))
}

/// Thickness of the domain over the convex body at boundary parameter `t`:
/// the travel along the outward normal until the domain boundary.
pub fn thickness(c: &BoundaryCurve, domain: &DomainBoundary, t: f64) -> Result<ThicknessSample> {
    let origin = c.position(t);
    let nu = c.outward_normal(t);
    let (d, hit) = ray_exit(domain, origin, nu)?;
    Ok(ThicknessSample { t, d, hit })
}

/// Outward normal transport of the boundary point at parameter `t` onto the
/// domain boundary.
pub fn radial_map(c: &BoundaryCurve, domain: &DomainBoundary, t: f64) -> Result<Point> {
    Ok(thickness(c, domain, t)?.hit)
}

/// Project a domain-boundary point along the inward normal of the domain to
/// the FIRST intersection with the target boundary.
pub fn reciprocal_map(
    domain: &DomainBoundary,
    target: &BoundaryCurve,
    x: Point,
) -> Result<(Point, ReciprocalDiag)> {
    let outer = domain.outer();
    let tx = outer.nearest_param(x);
    let scale = outer.diameter_bound();
    if x.dist(outer.position(tx)) > ON_BOUNDARY_TOL * scale.max(1.0) {
        return Err(Error::DegenerateGeometry(format!(
            "reciprocal map input ({}, {}) is not on the domain boundary",
            x.x, x.y
        )));
    }
    let n_in = -outer.outward_normal(tx);
    let (u, grazing) = match target {
        BoundaryCurve::Circle(c) => ray_circle_first(x, n_in, c.center, c.r)?,
        BoundaryCurve::Ellipse(e) => ray_ellipse_first(x, n_in, e.center, e.a, e.b)?,
        _ => {
            let u_max = (x - target.interior_point()).norm() + target.diameter_bound();
            ray_curve_crossing(target, x, n_in, false, u_max)?
        }
    };
    Ok((x + u * n_in, ReciprocalDiag { ray_parameter: u, grazing }))
}

/// One recorded geometric-normal-property violation.
#[derive(Debug, Clone)]
pub enum GnpViolation {
    /// The outward normal ray from the convex body re-enters the domain
    /// after its first exit.
    DisconnectedRay { t: f64, reentry_tau: f64 },
    /// The outward ray never exits (or exits could not be computed).
    RayFailure { t: f64, reason: String },
    /// The inward normal ray from the domain boundary misses the body.
    InwardMiss { t_omega: f64 },
}

#[derive(Debug, Clone)]
pub struct GnpReport {
    pub pass: bool,
    pub samples: usize,
    pub violations: Vec<GnpViolation>,
}

/// Sample the two conditions of the geometric normal property: connectivity
/// of outward normal rays inside the domain, and inward normal rays from the
/// domain boundary meeting the body.
pub fn check_gnp(c: &BoundaryCurve, domain: &DomainBoundary, n_samples: usize) -> Result<GnpReport> {
    if n_samples < 16 {
        return Err(Error::InsufficientData(format!(
            "check_gnp wants n_samples >= 16, got {n_samples}"
        )));
    }
    let mut violations = Vec::new();
    let diam = domain.diameter_bound();
    for i in 0..n_samples {
        let t = std::f64::consts::TAU * i as f64 / n_samples as f64;
        let origin = c.position(t);
        let nu = c.outward_normal(t);
        match ray_exit(domain, origin, nu) {
            Ok((t_exit, _)) => {
                // No re-entry out to exit + diameter (dense subdivision;
                // denser for punctured domains, whose holes are small).
                let subdiv = if domain.is_punctured() { 256 } else { 64 };
                let mut reentry = None;
                for j in 1..=subdiv {
                    let tau = t_exit + diam * j as f64 / subdiv as f64;
                    if domain.contains(origin + tau * nu) {
                        reentry = Some(tau);
                        break;
                    }
                }
                if let Some(tau) = reentry {
                    violations.push(GnpViolation::DisconnectedRay { t, reentry_tau: tau });
                }
            }
            Err(e) => violations.push(GnpViolation::RayFailure { t, reason: e.to_string() }),
        }
    }
    for i in 0..n_samples {
        let t_om = std::f64::consts::TAU * i as f64 / n_samples as f64;
        let x = domain.outer().position(t_om);
        if reciprocal_map(domain, c, x).is_err() {
            violations.push(GnpViolation::InwardMiss { t_omega: t_om });
        }
    }
    Ok(GnpReport { pass: violations.is_empty(), samples: n_samples, violations })
}
