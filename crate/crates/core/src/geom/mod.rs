//! Parametrized strictly convex planar curves with exact differential
//! geometry: position, tangent, outward normal, curvature, arclength and
//! geodesic coordinates around anchor points.
//!
//! All curves are closed, counterclockwise, parametrized on [0, 2*pi).

pub mod conformal;
pub mod oval;
pub mod point;
pub mod profile;
pub mod quadrature;

use std::f64::consts::TAU;

pub use conformal::ConformalBoundary;
pub use oval::FourierOval;
pub use point::{Point, Vec2};
pub use profile::ProfileCurve;

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Geometric identity checks are taken relative to the curve diameter.
pub const GEOM_IDENTITY_TOL: f64 = 1e-12;
/// Relative tolerance for arclength quadrature.
pub const ARCLENGTH_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct CircleShape {
    pub center: Point,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct EllipseShape {
    pub center: Point,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone)]
pub struct StadiumShape {
    pub center: Point,
    pub r: f64,
    pub l: f64,
    pub eps: f64,
    curve: ProfileCurve,
}

#[derive(Debug, Clone)]
pub struct TriangleShape {
    pub center: Point,
    pub height: f64,
    pub rc: f64,
    pub eps: f64,
    curve: ProfileCurve,
}

/// A closed strictly convex boundary curve.
#[derive(Debug, Clone)]
pub enum BoundaryCurve {
    Circle(CircleShape),
    Ellipse(EllipseShape),
    SmoothedStadium(StadiumShape),
    RoundedTriangle(TriangleShape),
    FourierOval(FourierOval),
    ConformalSeries(ConformalBoundary),
}

pub fn wrap_param(t: f64) -> f64 {
    let mut v = t % TAU;
    if v < 0.0 {
        v += TAU;
    }
    v
}

/// Signed wrap of a parameter difference into (-pi, pi].
pub fn wrap_param_signed(dt: f64) -> f64 {
    let mut v = dt % TAU;
    if v > std::f64::consts::PI {
        v -= TAU;
    } else if v <= -std::f64::consts::PI {
        v += TAU;
    }
    v
}

impl BoundaryCurve {
    pub fn circle(center: Point, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !center.is_finite() {
            return Err(Error::InvalidShape(format!("circle radius {r} must be positive")));
        }
        Ok(BoundaryCurve::Circle(CircleShape { center, r }))
    }

    pub fn ellipse(center: Point, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::InvalidShape(format!("ellipse semi-axes ({a}, {b}) must be positive")));
        }
        Ok(BoundaryCurve::Ellipse(EllipseShape { center, a, b }))
    }

    pub fn smoothed_stadium(center: Point, r: f64, l: f64, eps: f64) -> Result<Self> {
        let curve = profile::stadium(center, r, l, eps)?;
        let shape = StadiumShape { center, r, l, eps, curve };
        let c = BoundaryCurve::SmoothedStadium(shape);
        c.validate()?;
        Ok(c)
    }

    pub fn rounded_triangle(center: Point, height: f64, rc: f64, eps: f64) -> Result<Self> {
        let curve = profile::rounded_triangle(center, height, rc, eps)?;
        let shape = TriangleShape { center, height, rc, eps, curve };
        let c = BoundaryCurve::RoundedTriangle(shape);
        c.validate()?;
        Ok(c)
    }

    pub fn fourier_oval(
        anchor: Point,
        psi_anchor: f64,
        a0: f64,
        cos_terms: Vec<(u32, f64)>,
        sin_terms: Vec<(u32, f64)>,
    ) -> Result<Self> {
        let oval = FourierOval::new(anchor, psi_anchor, a0, cos_terms, sin_terms)?;
        Ok(BoundaryCurve::FourierOval(oval))
    }

    pub fn conformal_series(coeffs: Vec<Complex64>) -> Result<Self> {
        let b = ConformalBoundary::new(coeffs)?;
        let c = BoundaryCurve::ConformalSeries(b);
        c.validate()?;
        Ok(c)
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            BoundaryCurve::Circle(_) => "circle",
            BoundaryCurve::Ellipse(_) => "ellipse",
            BoundaryCurve::SmoothedStadium(_) => "smoothed_stadium",
            BoundaryCurve::RoundedTriangle(_) => "rounded_triangle",
            BoundaryCurve::FourierOval(_) => "fourier_oval",
            BoundaryCurve::ConformalSeries(_) => "conformal_series",
        }
    }

    /// Point on the boundary at parameter t (reduced mod 2*pi).
    pub fn position(&self, t: f64) -> Point {
        let t = wrap_param(t);
        match self {
            BoundaryCurve::Circle(c) => c.center + c.r * Vec2::from_angle(t),
            BoundaryCurve::Ellipse(e) => e.center + Vec2::new(e.a * t.cos(), e.b * t.sin()),
            BoundaryCurve::SmoothedStadium(s) => s.curve.position(self.param_to_arc(t)),
            BoundaryCurve::RoundedTriangle(s) => s.curve.position(self.param_to_arc(t)),
            BoundaryCurve::FourierOval(o) => o.position(t),
            BoundaryCurve::ConformalSeries(b) => b.position(t),
        }
    }

    /// dP/dt.
    pub fn velocity(&self, t: f64) -> Vec2 {
        let t = wrap_param(t);
        match self {
            BoundaryCurve::Circle(c) => c.r * Vec2::new(-t.sin(), t.cos()),
            BoundaryCurve::Ellipse(e) => Vec2::new(-e.a * t.sin(), e.b * t.cos()),
            BoundaryCurve::SmoothedStadium(s) => {
                let scale = s.curve.total_len() / TAU;
                scale * Vec2::from_angle(s.curve.tangent_angle(self.param_to_arc(t)))
            }
            BoundaryCurve::RoundedTriangle(s) => {
                let scale = s.curve.total_len() / TAU;
                scale * Vec2::from_angle(s.curve.tangent_angle(self.param_to_arc(t)))
            }
            BoundaryCurve::FourierOval(o) => o.velocity(t),
            BoundaryCurve::ConformalSeries(b) => b.velocity(t),
        }
    }

    /// d2P/dt2.
    pub fn acceleration(&self, t: f64) -> Vec2 {
        let t = wrap_param(t);
        match self {
            BoundaryCurve::Circle(c) => -c.r * Vec2::from_angle(t),
            BoundaryCurve::Ellipse(e) => Vec2::new(-e.a * t.cos(), -e.b * t.sin()),
            BoundaryCurve::SmoothedStadium(s) => {
                let arc = self.param_to_arc(t);
                let scale = s.curve.total_len() / TAU;
                let psi = s.curve.tangent_angle(arc);
                scale * scale * s.curve.curvature(arc) * Vec2::from_angle(psi).rot90()
            }
            BoundaryCurve::RoundedTriangle(s) => {
                let arc = self.param_to_arc(t);
                let scale = s.curve.total_len() / TAU;
                let psi = s.curve.tangent_angle(arc);
                scale * scale * s.curve.curvature(arc) * Vec2::from_angle(psi).rot90()
            }
            BoundaryCurve::FourierOval(o) => o.acceleration(t),
            BoundaryCurve::ConformalSeries(b) => b.acceleration(t),
        }
    }

    /// Unit tangent along the counterclockwise orientation.
    pub fn tangent(&self, t: f64) -> Vec2 {
        self.velocity(t).normalized()
    }

    /// Outward unit normal.
    pub fn outward_normal(&self, t: f64) -> Vec2 {
        let tan = self.tangent(t);
        Vec2::new(tan.y, -tan.x)
    }

    pub fn curvature(&self, t: f64) -> f64 {
        let t = wrap_param(t);
        match self {
            BoundaryCurve::Circle(c) => 1.0 / c.r,
            BoundaryCurve::Ellipse(e) => {
                let s = t.sin();
                let c2 = t.cos();
                e.a * e.b / (e.a * e.a * s * s + e.b * e.b * c2 * c2).powf(1.5)
            }
            BoundaryCurve::SmoothedStadium(s) => s.curve.curvature(self.param_to_arc(t)),
            BoundaryCurve::RoundedTriangle(s) => s.curve.curvature(self.param_to_arc(t)),
            BoundaryCurve::FourierOval(o) => 1.0 / o.rho(t),
            BoundaryCurve::ConformalSeries(b) => b.curvature(t),
        }
    }

    fn param_to_arc(&self, t: f64) -> f64 {
        match self {
            BoundaryCurve::SmoothedStadium(s) => t / TAU * s.curve.total_len(),
            BoundaryCurve::RoundedTriangle(s) => t / TAU * s.curve.total_len(),
            _ => unreachable!("param_to_arc is only used by profile curves"),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            BoundaryCurve::Circle(c) => TAU * c.r,
            BoundaryCurve::Ellipse(_) | BoundaryCurve::ConformalSeries(_) => {
                self.arclength(0.0, TAU).expect("perimeter quadrature")
            }
            BoundaryCurve::SmoothedStadium(s) => s.curve.total_len(),
            BoundaryCurve::RoundedTriangle(s) => s.curve.total_len(),
            BoundaryCurve::FourierOval(o) => o.perimeter(),
        }
    }

    /// Arclength from parameter t0 to t1 >= t0 (t1 - t0 <= 2*pi).
    pub fn arclength(&self, t0: f64, t1: f64) -> Result<f64> {
        if t1 < t0 || t1 - t0 > TAU + 1e-12 {
            return Err(Error::InvalidShape(format!(
                "arclength wants t0 <= t1 <= t0 + 2*pi, got ({t0}, {t1})"
            )));
        }
        match self {
            BoundaryCurve::Circle(c) => Ok(c.r * (t1 - t0)),
            BoundaryCurve::SmoothedStadium(s) => Ok((t1 - t0) / TAU * s.curve.total_len()),
            BoundaryCurve::RoundedTriangle(s) => Ok((t1 - t0) / TAU * s.curve.total_len()),
            BoundaryCurve::FourierOval(o) => Ok(o.arclength(t0, t1)),
            _ => {
                let f = |t: f64| self.velocity(t).norm();
                quadrature::integrate_adaptive(&f, t0, t1, ARCLENGTH_REL_TOL)
            }
        }
    }

    /// Parameter reached after traveling signed arclength `ds` from `t_from`.
    pub fn param_after_arclength(&self, t_from: f64, ds: f64) -> Result<f64> {
        match self {
            BoundaryCurve::Circle(c) => Ok(t_from + ds / c.r),
            BoundaryCurve::SmoothedStadium(s) => Ok(t_from + ds / s.curve.total_len() * TAU),
            BoundaryCurve::RoundedTriangle(s) => Ok(t_from + ds / s.curve.total_len() * TAU),
            _ => {
                // Newton on F(t) = arclength(t_from -> t) - ds.
                let mut t = t_from + ds / self.velocity(t_from).norm();
                for _ in 0..60 {
                    let val = self.signed_arclength(t_from, t)? - ds;
                    let speed = self.velocity(t).norm();
                    let step = val / speed;
                    t -= step;
                    if step.abs() < 1e-14 {
                        return Ok(t);
                    }
                }
                Err(Error::Accuracy("param_after_arclength did not converge".into()))
            }
        }
    }

    fn signed_arclength(&self, t0: f64, t1: f64) -> Result<f64> {
        if t1 >= t0 {
            self.arclength(t0, t1)
        } else {
            Ok(-self.arclength(t1, t0)?)
        }
    }

    /// Parameter where the outward normal points along direction angle
    /// `theta` (a cheap, often exact seed for nearest-point searches on
    /// convex curves).
    fn param_at_normal_angle(&self, theta: f64) -> f64 {
        match self {
            BoundaryCurve::Circle(_) => wrap_param(theta),
            BoundaryCurve::Ellipse(e) => {
                // Outward normal at t is parallel to (b cos t, a sin t).
                wrap_param((e.a * theta.sin()).atan2(e.b * theta.cos()))
            }
            BoundaryCurve::SmoothedStadium(s) => {
                let arc = s.curve.arclength_at_tangent_angle(theta + std::f64::consts::FRAC_PI_2);
                arc / s.curve.total_len() * TAU
            }
            BoundaryCurve::RoundedTriangle(s) => {
                let arc = s.curve.arclength_at_tangent_angle(theta + std::f64::consts::FRAC_PI_2);
                arc / s.curve.total_len() * TAU
            }
            BoundaryCurve::FourierOval(o) => {
                // Normal angle is psi - pi/2 = psi_anchor + phi - pi/2.
                wrap_param(theta + std::f64::consts::FRAC_PI_2 - o.psi_anchor())
            }
            BoundaryCurve::ConformalSeries(_) => wrap_param(theta),
        }
    }

    /// Parameter of the boundary point nearest to `p` (unique for convex
    /// curves away from the evolute).
    pub fn nearest_param(&self, p: Point) -> f64 {
        if let BoundaryCurve::Circle(c) = self {
            return wrap_param((p - c.center).angle());
        }
        // Cheap global distance bound to reject feet on the wrong side.
        let mut bound = f64::INFINITY;
        for i in 0..16 {
            bound = bound.min(self.position(TAU * i as f64 / 16.0).dist(p));
        }
        // Seed from the normal direction toward p, then Newton on
        // g(t) = (P(t) - p) . P'(t).
        let seed = self.param_at_normal_angle((p - self.interior_point()).angle());
        if let Some(t) = self.nearest_newton(p, seed, 0.2) {
            if self.position(t).dist(p) <= bound + 1e-12 {
                return t;
            }
        }
        // Fallback: coarse scan plus guarded Newton.
        let mut best_t = 0.0;
        let mut best_d = f64::INFINITY;
        const COARSE: usize = 256;
        for i in 0..COARSE {
            let t = TAU * i as f64 / COARSE as f64;
            let d = self.position(t).dist(p);
            if d < best_d {
                best_d = d;
                best_t = t;
            }
        }
        match self.nearest_newton(p, best_t, TAU / COARSE as f64) {
            Some(t) if self.position(t).dist(p) <= best_d + 1e-12 => t,
            _ => best_t,
        }
    }

    fn nearest_newton(&self, p: Point, seed: f64, max_step: f64) -> Option<f64> {
        let mut t = seed;
        let mut converged = false;
        for _ in 0..40 {
            let pos = self.position(t);
            let v = self.velocity(t);
            let g = (pos - p).dot(v);
            let gp = v.norm_sq() + (pos - p).dot(self.acceleration(t));
            if gp.abs() < 1e-300 {
                return None;
            }
            let mut step = g / gp;
            if step.abs() > max_step {
                step = max_step * step.signum();
            }
            t -= step;
            if step.abs() < 1e-14 {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        // Accept only a genuine foot point: the residual tangential
        // component must be negligible against the distance.
        let pos = self.position(t);
        let v = self.velocity(t);
        let dist = pos.dist(p).max(1e-300);
        if (pos - p).dot(v).abs() <= 1e-9 * dist * v.norm() {
            Some(wrap_param(t))
        } else {
            None
        }
    }

    /// Strict interior test.
    pub fn contains(&self, p: Point) -> bool {
        match self {
            BoundaryCurve::Circle(c) => (p - c.center).norm() < c.r,
            BoundaryCurve::Ellipse(e) => {
                let dx = (p.x - e.center.x) / e.a;
                let dy = (p.y - e.center.y) / e.b;
                dx * dx + dy * dy < 1.0
            }
            _ => {
                let t = self.nearest_param(p);
                (p - self.position(t)).dot(self.outward_normal(t)) < 0.0
            }
        }
    }

    /// Signed distance-like gap: negative inside, positive outside, measured
    /// along the nearest boundary normal.
    pub fn normal_gap(&self, p: Point) -> f64 {
        match self {
            BoundaryCurve::Circle(c) => (p - c.center).norm() - c.r,
            _ => {
                let t = self.nearest_param(p);
                (p - self.position(t)).dot(self.outward_normal(t))
            }
        }
    }

    /// A point in the interior.
    pub fn interior_point(&self) -> Point {
        match self {
            BoundaryCurve::Circle(c) => c.center,
            BoundaryCurve::Ellipse(e) => e.center,
            BoundaryCurve::SmoothedStadium(s) => s.center,
            BoundaryCurve::RoundedTriangle(s) => s.center,
            BoundaryCurve::FourierOval(_) => {
                let mut acc = Vec2::new(0.0, 0.0);
                for i in 0..64 {
                    acc = acc + self.position(TAU * i as f64 / 64.0).to_vec();
                }
                Point::new(acc.x / 64.0, acc.y / 64.0)
            }
            BoundaryCurve::ConformalSeries(b) => b.center(),
        }
    }

    /// Upper bound on the diameter (bounding-box diagonal over 256 samples).
    pub fn diameter_bound(&self) -> f64 {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for i in 0..256 {
            let p = self.position(TAU * i as f64 / 256.0);
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm()
    }

    /// Curve invariants: closure, strict convexity, unit normals.
    pub fn validate(&self) -> Result<()> {
        let diam = self.diameter_bound();
        let gap = self.position(0.0).dist(self.position(TAU));
        if gap > GEOM_IDENTITY_TOL * diam {
            return Err(Error::InvalidShape(format!("curve not closed: gap {gap}")));
        }
        // Stadium and rounded-triangle boundaries are convex with flat
        // segments (kappa = 0 there, by construction); all other kinds must
        // be strictly convex.
        let allow_flat = matches!(
            self,
            BoundaryCurve::SmoothedStadium(_) | BoundaryCurve::RoundedTriangle(_)
        );
        for i in 0..1024 {
            let t = TAU * i as f64 / 1024.0;
            let k = self.curvature(t);
            let convex = if allow_flat { k >= 0.0 } else { k > 0.0 };
            if !convex {
                return Err(Error::ConvexityViolation { t, kappa: k });
            }
            let n = self.outward_normal(t).norm();
            if (n - 1.0).abs() > GEOM_IDENTITY_TOL {
                return Err(Error::InvalidShape(format!("normal norm {n} at t={t}")));
            }
        }
        Ok(())
    }
}

/// Arclength chart anchored at a boundary point.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicFrame {
    pub t_anchor: f64,
}

impl GeodesicFrame {
    pub fn new(t_anchor: f64) -> Self {
        GeodesicFrame { t_anchor: wrap_param(t_anchor) }
    }
}

/// Signed arclength of the point at parameter `t` measured from the frame
/// anchor, positive along the counterclockwise orientation. `t` is taken on
/// the side of the anchor given by the shorter parameter wrap.
pub fn geodesic_coordinate(curve: &BoundaryCurve, frame: &GeodesicFrame, t: f64) -> Result<f64> {
    let dt = wrap_param_signed(t - frame.t_anchor);
    if dt >= 0.0 {
        curve.arclength(frame.t_anchor, frame.t_anchor + dt)
    } else {
        Ok(-curve.arclength(frame.t_anchor + dt, frame.t_anchor)?)
    }
}

/// Inverse of [`geodesic_coordinate`]: the parameter at signed arclength `s`
/// from the anchor.
pub fn param_at_geodesic(curve: &BoundaryCurve, frame: &GeodesicFrame, s: f64) -> Result<f64> {
    curve.param_after_arclength(frame.t_anchor, s)
}
