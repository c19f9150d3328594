//! Boundary curves given as the unit-circle image of a truncated power series
//! phi(z) = sum c_n z^n (a finite conformal parametrization of the interior).

use num_complex::Complex64;

use super::point::{Point, Vec2};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConformalBoundary {
    coeffs: Vec<Complex64>,
}

impl ConformalBoundary {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 || coeffs[1].norm() == 0.0 {
            return Err(Error::InvalidShape(
                "conformal series needs a nonzero linear coefficient".into(),
            ));
        }
        let b = ConformalBoundary { coeffs };
        // phi' must not vanish on the unit circle (sampled).
        for i in 0..512 {
            let theta = std::f64::consts::TAU * i as f64 / 512.0;
            let d = b.phi_prime(theta);
            if d.norm() < 1e-12 {
                return Err(Error::SingularParametrization(format!(
                    "phi' vanishes near theta={theta}"
                )));
            }
        }
        Ok(b)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn z(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    pub fn phi(&self, theta: f64) -> Complex64 {
        let z = Self::z(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// phi'(e^{i theta}) as a function of z.
    pub fn phi_prime(&self, theta: f64) -> Complex64 {
        let z = Self::z(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * n as f64;
        }
        acc
    }

    pub fn phi_second(&self, theta: f64) -> Complex64 {
        let z = Self::z(theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &c) in self.coeffs.iter().enumerate().skip(2).rev() {
            acc = acc * z + c * (n * (n - 1)) as f64;
        }
        acc
    }

    pub fn position(&self, theta: f64) -> Point {
        let w = self.phi(theta);
        Point::new(w.re, w.im)
    }

    /// dP/d theta = i e^{i theta} phi'.
    pub fn velocity(&self, theta: f64) -> Vec2 {
        let v = Complex64::new(0.0, 1.0) * Self::z(theta) * self.phi_prime(theta);
        Vec2::new(v.re, v.im)
    }

    pub fn acceleration(&self, theta: f64) -> Vec2 {
        let z = Self::z(theta);
        let a = -z * self.phi_prime(theta) - z * z * self.phi_second(theta);
        Vec2::new(a.re, a.im)
    }

    /// Boundary curvature; the parametric identity kappa =
    /// Re(1 + e^{i theta} phi''/phi') / |phi'|.
    pub fn curvature(&self, theta: f64) -> f64 {
        let d = self.phi_prime(theta);
        let dd = self.phi_second(theta);
        (1.0 + (Self::z(theta) * dd / d).re) / d.norm()
    }

    /// Interior reference point phi(0) = c_0.
    pub fn center(&self) -> Point {
        Point::new(self.coeffs[0].re, self.coeffs[0].im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_series_is_unit_circle() {
        let b = ConformalBoundary::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
            .unwrap();
        assert!((b.curvature(0.3) - 1.0).abs() < 1e-14);
        let p = b.position(std::f64::consts::FRAC_PI_2);
        assert!((p.x).abs() < 1e-15 && (p.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaled_series_has_reciprocal_curvature() {
        let b = ConformalBoundary::new(vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)])
            .unwrap();
        assert!((b.curvature(1.1) - 0.5).abs() < 1e-14);
    }
}
