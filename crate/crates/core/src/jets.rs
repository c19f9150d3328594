//! Truncated complex power-series (jet) arithmetic: composition and formal
//! inversion of conformal germs tangent to the identity, and curvature of a
//! conformal boundary parametrization.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::ConformalBoundary;

/// A truncated power series a_0 + a_1 z + ... + a_N z^N.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexJet {
    coeffs: Vec<Complex64>,
}

impl ComplexJet {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidShape("jet truncation order must be >= 2".into()));
        }
        Ok(ComplexJet { coeffs })
    }

    /// The germ z + a z^2 (+ zeros) at truncation order n.
    pub fn tangent_to_identity(a: Complex64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidShape("jet truncation order must be >= 2".into()));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[1] = Complex64::new(1.0, 0.0);
        coeffs[2] = a;
        Ok(ComplexJet { coeffs })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::tangent_to_identity(Complex64::new(0.0, 0.0), n)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_tangent_to_identity(&self, tol: f64) -> bool {
        self.coeff(0).norm() <= tol && (self.coeff(1) - 1.0).norm() <= tol
    }

    /// Formal composition self(other(z)), truncated to the shorter order.
    /// `other` must have zero constant term.
    pub fn compose(&self, other: &ComplexJet) -> Result<ComplexJet> {
        if other.coeff(0).norm() != 0.0 {
            return Err(Error::NonInvertibleSeries(
                "composition needs a vanishing constant term".into(),
            ));
        }
        let n = self.order().min(other.order());
        let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
        acc[0] = self.coeff(0);
        // Horner-free: accumulate self_k * other^k.
        let mut power = vec![Complex64::new(0.0, 0.0); n + 1]; // other^k, starts at k=1
        power[..=n.min(other.order())].copy_from_slice(&other.coeffs[..=n.min(other.order())]);
        for k in 1..=n {
            let fk = self.coeff(k);
            for (a, p) in acc.iter_mut().zip(&power) {
                *a += fk * p;
            }
            if k < n {
                power = mul_trunc(&power, &other.coeffs, n);
            }
        }
        ComplexJet::new(acc)
    }

    /// Formal inverse: the jet h with h(self(z)) = z + O(z^{N+1}).
    /// Requires a vanishing constant term and a nonzero linear coefficient.
    pub fn formal_inverse(&self) -> Result<ComplexJet> {
        if self.coeff(0).norm() != 0.0 {
            return Err(Error::NonInvertibleSeries("inverse needs f(0) = 0".into()));
        }
        let f1 = self.coeff(1);
        if f1.norm() == 0.0 {
            return Err(Error::NonInvertibleSeries("inverse needs f'(0) != 0".into()));
        }
        let n = self.order();
        let mut inv = vec![Complex64::new(0.0, 0.0); n + 1];
        inv[1] = 1.0 / f1;
        // f^k truncated, built incrementally.
        let mut f_pow = self.coeffs.clone(); // f^1
        let mut powers = vec![f_pow.clone()];
        for _ in 2..=n {
            f_pow = mul_trunc(&f_pow, &self.coeffs, n);
            powers.push(f_pow.clone());
        }
        for m in 2..=n {
            // Coefficient of z^m in sum_{k=1}^{m} inv_k f^k must vanish.
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..m {
                acc += inv[k] * powers[k - 1][m];
            }
            inv[m] = -acc / powers[m - 1][m];
        }
        ComplexJet::new(inv)
    }
}

fn mul_trunc(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, &ai) in a.iter().enumerate().take(n + 1) {
        if ai.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// The jet of psi^{-1} o phi to order `n`, for germs tangent to the identity.
/// Its quadratic coefficient is a - b where a, b are the quadratic
/// coefficients of phi and psi.
pub fn jet_compose_inverse(phi: &ComplexJet, psi: &ComplexJet, n: usize) -> Result<ComplexJet> {
    if !phi.is_tangent_to_identity(0.0) || !psi.is_tangent_to_identity(0.0) {
        return Err(Error::HypothesisViolation(
            "jet_compose_inverse wants germs tangent to the identity".into(),
        ));
    }
    if n < 2 || n > phi.order() || n > psi.order() {
        return Err(Error::InvalidShape(format!("order {n} out of range")));
    }
    let inv = psi.formal_inverse()?;
    let comp = inv.compose(phi)?;
    ComplexJet::new(comp.coeffs()[..=n].to_vec())
}

/// Curvature of the conformal boundary image at angle theta, via the
/// parametric identity kappa = Re(1 + e^{i theta} phi''/phi') / |phi'|,
/// together with the bare imaginary-part form Im(phi''/phi' e^{i theta}) /
/// |phi'| kept as a diagnostic (it vanishes for scaling maps, where the true
/// curvature is 1/R).
#[derive(Debug, Clone, Copy)]
pub struct ConformalCurvature {
    pub kappa: f64,
    pub im_form: f64,
    pub discrepancy: f64,
}

pub fn conformal_curvature(boundary: &ConformalBoundary, theta: f64) -> Result<ConformalCurvature> {
    let d = boundary.phi_prime(theta);
    if d.norm() < 1e-12 {
        return Err(Error::SingularParametrization(format!("phi' ~ 0 at theta={theta}")));
    }
    let kappa = boundary.curvature(theta);
    let z = Complex64::from_polar(1.0, theta);
    let im_form = (boundary.phi_second(theta) / d * z).im / d.norm();
    Ok(ConformalCurvature { kappa, im_form, discrepancy: (kappa - im_form).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_quadratic_coefficients_cancel() {
        let phi = ComplexJet::tangent_to_identity(c(2.0, 0.0), 6).unwrap();
        let psi = ComplexJet::tangent_to_identity(c(2.0, 0.0), 6).unwrap();
        let j = jet_compose_inverse(&phi, &psi, 6).unwrap();
        assert!(j.coeff(2).norm() < 1e-15);
        assert!(j.coeff(0).norm() == 0.0 && (j.coeff(1) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn quadratic_coefficient_is_difference() {
        let phi = ComplexJet::tangent_to_identity(c(3.0, 0.0), 4).unwrap();
        let psi = ComplexJet::tangent_to_identity(c(1.0, 0.0), 4).unwrap();
        let j = jet_compose_inverse(&phi, &psi, 4).unwrap();
        assert!((j.coeff(2) - c(2.0, 0.0)).norm() < 1e-14);

        let phi = ComplexJet::tangent_to_identity(c(0.0, 0.0), 4).unwrap();
        let psi = ComplexJet::tangent_to_identity(c(-2.0, 0.0), 4).unwrap();
        let j = jet_compose_inverse(&phi, &psi, 4).unwrap();
        assert!((j.coeff(2) - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn difference_identity_over_random_complex_pairs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for _ in 0..1000 {
            let a = c(next(), next());
            let b = c(next(), next());
            let phi = ComplexJet::tangent_to_identity(a, 3).unwrap();
            let psi = ComplexJet::tangent_to_identity(b, 3).unwrap();
            let j = jet_compose_inverse(&phi, &psi, 3).unwrap();
            assert!((j.coeff(2) - (a - b)).norm() <= 1e-14 * (1.0 + (a - b).norm()));
        }
    }

    #[test]
    fn inverse_round_trip_is_identity() {
        let f = ComplexJet::new(vec![
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(0.3, -0.2),
            c(-0.1, 0.05),
            c(0.02, 0.3),
            c(-0.4, 0.0),
        ])
        .unwrap();
        let inv = f.formal_inverse().unwrap();
        let round = inv.compose(&f).unwrap();
        let id = ComplexJet::identity(5).unwrap();
        for k in 0..=5 {
            assert!(
                (round.coeff(k) - id.coeff(k)).norm() < 1e-14,
                "k={k}: {:?}",
                round.coeff(k)
            );
        }
    }

    #[test]
    fn non_invertible_series_is_rejected() {
        let f = ComplexJet::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(f.formal_inverse(), Err(Error::NonInvertibleSeries(_))));
    }

    #[test]
    fn conformal_curvature_of_identity_and_scaling() {
        let b = ConformalBoundary::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let k = conformal_curvature(&b, 0.7).unwrap();
        assert!((k.kappa - 1.0).abs() < 1e-14);
        // phi = 2z: kappa = 0.5 while the bare Im form returns 0.
        let b = ConformalBoundary::new(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let k = conformal_curvature(&b, 1.2).unwrap();
        assert!((k.kappa - 0.5).abs() < 1e-14);
        assert_eq!(k.im_form, 0.0);
        assert!((k.discrepancy - 0.5).abs() < 1e-14);
    }

    #[test]
    fn conformal_curvature_matches_parametric_oracle() {
        // phi(z) = z + 0.1 z^2: compare against curvature from the position
        // derivatives (independent finite-difference oracle).
        let b = ConformalBoundary::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0)]).unwrap();
        for i in 0..16 {
            let theta = std::f64::consts::TAU * i as f64 / 16.0;
            let k = conformal_curvature(&b, theta).unwrap().kappa;
            // Finite-difference parametric curvature (h balances truncation
            // against the eps/h^2 roundoff of the second difference).
            let h = 1e-4;
            let p0 = b.position(theta - h);
            let p1 = b.position(theta);
            let p2 = b.position(theta + h);
            let vx = (p2.x - p0.x) / (2.0 * h);
            let vy = (p2.y - p0.y) / (2.0 * h);
            let ax = (p2.x - 2.0 * p1.x + p0.x) / (h * h);
            let ay = (p2.y - 2.0 * p1.y + p0.y) / (h * h);
            let speed = vx.hypot(vy);
            let k_fd = (vx * ay - vy * ax) / (speed * speed * speed);
            assert!((k - k_fd).abs() < 1e-6, "theta={theta}: {k} vs {k_fd}");
        }
    }
}
