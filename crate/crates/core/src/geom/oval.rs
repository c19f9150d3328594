//! Strictly convex ovals defined by a Fourier profile of the curvature radius
//! as a function of the tangent angle.
//!
//! With rho(phi) = a0 + sum_{n>=2} a_n cos(n phi) + b_n sin(n phi) > 0 the
//! reconstruction P(phi) = P_a + integral of rho e^{i(psi_a + u)} du is a
//! closed strictly convex curve (the absent n = 1 harmonic is exactly the
//! closure condition), with closed-form position, arclength and curvature.
//! The profile gives pointwise control of the curvature radius and its slope
//! at a chosen boundary point, which the scenario builders use to shape outer
//! domains around tangency anchors.

use num_complex::Complex64;

use super::point::{Point, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FourierOval {
    /// Boundary point at phi = 0.
    anchor: Point,
    /// Tangent angle at the anchor.
    psi_anchor: f64,
    a0: f64,
    /// (n, a_n) cosine terms, n >= 2.
    cos_terms: Vec<(u32, f64)>,
    /// (n, b_n) sine terms, n >= 2.
    sin_terms: Vec<(u32, f64)>,
}

impl FourierOval {
    pub fn new(
        anchor: Point,
        psi_anchor: f64,
        a0: f64,
        cos_terms: Vec<(u32, f64)>,
        sin_terms: Vec<(u32, f64)>,
    ) -> Result<Self> {
        if !a0.is_finite() || a0 <= 0.0 {
            return Err(Error::InvalidShape(format!("oval mean radius a0={a0} must be positive")));
        }
        for &(n, _) in cos_terms.iter().chain(&sin_terms) {
            if n < 2 {
                return Err(Error::InvalidShape(format!(
                    "harmonic n={n} breaks closure; only n >= 2 is allowed"
                )));
            }
        }
        let oval = FourierOval { anchor, psi_anchor, a0, cos_terms, sin_terms };
        let min_rho = (0..4096)
            .map(|i| oval.rho(std::f64::consts::TAU * i as f64 / 4096.0))
            .fold(f64::INFINITY, f64::min);
        if min_rho <= 1e-9 * a0 {
            return Err(Error::ConvexityViolation { t: 0.0, kappa: 1.0 / min_rho });
        }
        Ok(oval)
    }

    pub fn psi_anchor(&self) -> f64 {
        self.psi_anchor
    }

    /// Curvature radius at parameter phi.
    pub fn rho(&self, phi: f64) -> f64 {
        let mut r = self.a0;
        for &(n, a) in &self.cos_terms {
            r += a * (n as f64 * phi).cos();
        }
        for &(n, b) in &self.sin_terms {
            r += b * (n as f64 * phi).sin();
        }
        r
    }

    /// d rho / d phi.
    pub fn rho_prime(&self, phi: f64) -> f64 {
        let mut r = 0.0;
        for &(n, a) in &self.cos_terms {
            r -= a * n as f64 * (n as f64 * phi).sin();
        }
        for &(n, b) in &self.sin_terms {
            r += b * n as f64 * (n as f64 * phi).cos();
        }
        r
    }

    pub fn tangent_angle(&self, phi: f64) -> f64 {
        self.psi_anchor + phi
    }

    pub fn position(&self, phi: f64) -> Point {
        // integral_0^phi rho(u) e^{i(psi_a + u)} du, term by term.
        let rot = Complex64::from_polar(1.0, self.psi_anchor);
        let mut acc = self.a0 * prim_exp(1.0, phi);
        for &(n, a) in &self.cos_terms {
            let nf = n as f64;
            acc += a * 0.5 * (prim_exp(nf + 1.0, phi) + prim_exp(1.0 - nf, phi));
        }
        for &(n, b) in &self.sin_terms {
            let nf = n as f64;
            let i = Complex64::new(0.0, 1.0);
            acc += b / (2.0 * i) * (prim_exp(nf + 1.0, phi) - prim_exp(1.0 - nf, phi));
        }
        let d = rot * acc;
        self.anchor + Vec2::new(d.re, d.im)
    }

    pub fn velocity(&self, phi: f64) -> Vec2 {
        let psi = self.tangent_angle(phi);
        self.rho(phi) * Vec2::from_angle(psi)
    }

    pub fn acceleration(&self, phi: f64) -> Vec2 {
        let psi = self.tangent_angle(phi);
        let e = Vec2::from_angle(psi);
        self.rho_prime(phi) * e + self.rho(phi) * e.rot90()
    }

    pub fn arclength(&self, phi0: f64, phi1: f64) -> f64 {
        let mut s = self.a0 * (phi1 - phi0);
        for &(n, a) in &self.cos_terms {
            let nf = n as f64;
            s += a / nf * ((nf * phi1).sin() - (nf * phi0).sin());
        }
        for &(n, b) in &self.sin_terms {
            let nf = n as f64;
            s -= b / nf * ((nf * phi1).cos() - (nf * phi0).cos());
        }
        s
    }

    pub fn perimeter(&self) -> f64 {
        std::f64::consts::TAU * self.a0
    }
}

/// integral_0^phi e^{i k u} du for k != 0.
fn prim_exp(k: f64, phi: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    (Complex64::from_polar(1.0, k * phi) - 1.0) / (i * k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_is_a_circle() {
        let o = FourierOval::new(Point::new(1.0, 0.0), std::f64::consts::FRAC_PI_2, 1.0, vec![], vec![])
            .unwrap();
        // Anchor (1,0) with upward tangent: unit circle about the origin.
        for i in 0..16 {
            let phi = std::f64::consts::TAU * i as f64 / 16.0;
            let p = o.position(phi);
            assert!((p.to_vec().norm() - 1.0).abs() < 1e-14);
        }
        assert!((o.arclength(0.0, std::f64::consts::TAU) - std::f64::consts::TAU).abs() < 1e-14);
    }

    #[test]
    fn closure_holds_with_higher_harmonics() {
        let o = FourierOval::new(
            Point::new(0.0, 2.0),
            std::f64::consts::PI,
            1.5,
            vec![(2, 0.3), (3, -0.2), (5, 0.05)],
            vec![(2, 0.1), (4, -0.07)],
        )
        .unwrap();
        let gap = o.position(std::f64::consts::TAU).dist(o.position(0.0));
        assert!(gap < 1e-12, "gap {gap}");
    }

    #[test]
    fn first_harmonic_is_rejected() {
        assert!(FourierOval::new(Point::new(0.0, 0.0), 0.0, 1.0, vec![(1, 0.1)], vec![]).is_err());
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        assert!(FourierOval::new(Point::new(0.0, 0.0), 0.0, 1.0, vec![(2, 1.2)], vec![]).is_err());
    }
}
