//! Tangency detection, the quadratic coefficients and their local fits, the
//! angular variable, super-exponential certificates, and uniform coefficient
//! bounds.

use crate::dynamics::{transition, NestedScene, Orbit};
use crate::error::{Error, Result};
use crate::geom::{
    geodesic_coordinate, param_at_geodesic, BoundaryCurve, GeodesicFrame, Point,
};
use crate::transport::{thickness, DomainBoundary};

pub use crate::dynamics::angular_variable;

/// Default detection tolerance as a fraction of the body diameter.
pub const TANGENCY_TOL_FACTOR: f64 = 1e-7;
/// Normal alignment tolerance at a detected tangency.
pub const NORMAL_ALIGN_TOL: f64 = 1e-8;
/// Default coarse fit scale.
pub const FIT_SIGMA_DEFAULT: f64 = 1e-2;
/// Default number of dyadic fit scales.
pub const FIT_SCALES_DEFAULT: usize = 5;

/// A located tangency with its second-order data.
#[derive(Debug, Clone, Copy)]
pub struct TangencyPoint {
    pub level: usize,
    pub point: Point,
    pub t_on_c: f64,
    pub t_on_next: f64,
    pub kappa_k: f64,
    pub kappa_next: f64,
    /// Thickness of the level's domain at the anchor.
    pub d: f64,
    /// Curvature radius of the domain boundary at the radial image,
    /// measured from the actual curve.
    pub r_measured: f64,
    /// The printed parallel-surface relation R = 1/kappa - d, kept for
    /// comparison (it can vanish or go negative).
    pub r_paper_relation: f64,
}

/// Locate all tangencies between consecutive bodies: local minima of the
/// boundary-to-boundary distance below `tol`, with aligned outward normals.
pub fn find_tangencies(
    c_k: &BoundaryCurve,
    c_next: &BoundaryCurve,
    tol: f64,
) -> Result<Vec<(f64, f64, Point)>> {
    let n = 1024usize;
    let gap = |t: f64| -> f64 {
        let p = c_k.position(t);
        p.dist(c_next.position(c_next.nearest_param(p)))
    };
    let mut gaps = Vec::with_capacity(n);
    for i in 0..n {
        let t = std::f64::consts::TAU * i as f64 / n as f64;
        gaps.push(gap(t));
    }
    let mut found: Vec<(f64, f64, Point)> = Vec::new();
    for i in 0..n {
        let prev = gaps[(i + n - 1) % n];
        let next = gaps[(i + 1) % n];
        let here = gaps[i];
        if here <= prev && here <= next && here < tol * 16.0 {
            // Refine by golden-section on the bracketing interval.
            let step = std::f64::consts::TAU / n as f64;
            let t0 = std::f64::consts::TAU * i as f64 / n as f64;
            let (mut lo, mut hi) = (t0 - step, t0 + step);
            let phi = 0.5 * (3.0 - 5.0f64.sqrt());
            let (mut a, mut b) = (lo + phi * (hi - lo), hi - phi * (hi - lo));
            let (mut fa, mut fb) = (gap(a), gap(b));
            for _ in 0..90 {
                if fa < fb {
                    hi = b;
                    b = a;
                    fb = fa;
                    a = lo + phi * (hi - lo);
                    fa = gap(a);
                } else {
                    lo = a;
                    a = b;
                    fa = fb;
                    b = hi - phi * (hi - lo);
                    fb = gap(b);
                }
            }
            let mut t_star = 0.5 * (lo + hi);
            if gap(t_star) >= tol {
                continue;
            }
            // Sharpen the anchor by the normal misalignment, which crosses
            // zero transversally (the distance minimum itself is flat and
            // only localizes to sqrt(eps)).
            let misalign = |t: f64| -> f64 {
                let p = c_k.position(t);
                let tn = c_next.nearest_param(p);
                c_k.outward_normal(t).cross(c_next.outward_normal(tn))
            };
            let mut blo = t_star - step;
            let mut bhi = t_star + step;
            let (mut glo, ghi) = (misalign(blo), misalign(bhi));
            if glo * ghi < 0.0 {
                for _ in 0..80 {
                    let mid = 0.5 * (blo + bhi);
                    let gm = misalign(mid);
                    if glo * gm <= 0.0 {
                        bhi = mid;
                    } else {
                        blo = mid;
                        glo = gm;
                    }
                }
                t_star = 0.5 * (blo + bhi);
            }
            let p = c_k.position(t_star);
            let t_next = c_next.nearest_param(p);
            let nu_k = c_k.outward_normal(t_star);
            let nu_n = c_next.outward_normal(t_next);
            if (nu_k - nu_n).norm() > NORMAL_ALIGN_TOL {
                continue;
            }
            // Deduplicate against already found anchors.
            if found.iter().all(|(_, _, q)| q.dist(p) > tol.max(1e-9) * 100.0) {
                found.push((t_star, t_next, p));
            }
        }
    }
    Ok(found)
}

/// Populate the second-order data of a raw tangency within a scene level.
pub fn populate_tangency(
    scene: &NestedScene,
    level: usize,
    t_on_c: f64,
    t_on_next: f64,
) -> Result<TangencyPoint> {
    let lvl = &scene.levels[level];
    let next = scene
        .levels
        .get(level + 1)
        .ok_or_else(|| Error::InsufficientData(format!("level {} has no successor", level)))?;
    let point = lvl.c.position(t_on_c);
    let kappa_k = lvl.c.curvature(t_on_c);
    let kappa_next = next.c.curvature(t_on_next);
    let ts = thickness(&lvl.c, &lvl.omega, t_on_c)?;
    let tx = lvl.omega.outer().nearest_param(ts.hit);
    let r_measured = 1.0 / lvl.omega.outer().curvature(tx);
    Ok(TangencyPoint {
        level,
        point,
        t_on_c,
        t_on_next,
        kappa_k,
        kappa_next,
        d: ts.d,
        r_measured,
        r_paper_relation: 1.0 / kappa_k - ts.d,
    })
}

/// The explicit quadratic coefficients from second-order data:
/// alpha = (1/kappa_k - 1/kappa_{k+1}) d^2 / (2 R) and
/// beta = kappa_{k+1} alpha / (2 kappa_k^2).
pub fn alpha_beta_formula(tp: &TangencyPoint) -> Result<(f64, f64)> {
    alpha_beta_from_data(tp.kappa_k, tp.kappa_next, tp.d, tp.r_measured)
}

pub fn alpha_beta_from_data(kappa_k: f64, kappa_next: f64, d: f64, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::DegenerateGeometry(format!("curvature radius R = {r} must be positive")));
    }
    if !(kappa_k > 0.0) || !(kappa_next > 0.0) {
        return Err(Error::DegenerateGeometry("curvatures must be positive".into()));
    }
    let gap = 1.0 / kappa_k - 1.0 / kappa_next;
    let alpha = 0.5 * gap * d * d / r;
    let beta = kappa_next / (2.0 * kappa_k * kappa_k) * alpha;
    Ok((alpha, beta))
}

/// Least-squares fit of the transition in geodesic coordinates over a dyadic
/// grid of scales.
#[derive(Debug, Clone)]
pub struct QuadraticFit {
    /// Fitted linear coefficient (vanishes at genuine tangencies).
    pub g1: f64,
    /// Fitted quadratic coefficient.
    pub alpha: f64,
    /// Max absolute fit residual over the grid.
    pub residual: f64,
    /// Coarsest scale of the grid.
    pub sigma: f64,
    pub n_scales: usize,
    /// Per-scale (scale, g1, alpha) single-scale fits, coarse to fine.
    pub per_scale: Vec<(f64, f64, f64)>,
    /// Finest two single-scale alphas agree within 1 percent.
    pub scale_stable: bool,
}

impl QuadraticFit {
    /// Relative change of alpha between the two finest scales.
    pub fn alpha_scale_drift(&self) -> f64 {
        let n = self.per_scale.len();
        if n < 2 {
            return f64::NAN;
        }
        let a1 = self.per_scale[n - 2].2;
        let a2 = self.per_scale[n - 1].2;
        ((a1 - a2) / a2).abs()
    }
}

/// Sample the transition at geodesic offsets around an anchor and fit
/// s' = g1 s + alpha s^2 by least squares (the symmetric grid makes the two
/// regressors orthogonal). Nine symmetric points per scale, `n_scales`
/// dyadic scales below `sigma`.
pub fn fit_local_quadratic(
    scene: &NestedScene,
    level: usize,
    anchor_t_on_c: f64,
    anchor_t_on_next: f64,
    sigma: f64,
    n_scales: usize,
) -> Result<QuadraticFit> {
    if n_scales < 2 {
        return Err(Error::FitAborted("need at least two dyadic scales".into()));
    }
    let lvl = &scene.levels[level];
    let next = scene
        .levels
        .get(level + 1)
        .ok_or_else(|| Error::FitAborted(format!("level {} has no successor", level)))?;
    let frame_k = GeodesicFrame::new(anchor_t_on_c);
    let frame_n = GeodesicFrame::new(anchor_t_on_next);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for m in 0..n_scales {
        let scale = sigma / (1u64 << m) as f64;
        for j in (-4i32..=4).filter(|&j| j != 0) {
            let s = scale * j as f64 / 4.0;
            let t = param_at_geodesic(&lvl.c, &frame_k, s)?;
            let p = transition(&lvl.c, &lvl.omega, &next.c, t).map_err(|e| {
                Error::FitAborted(format!("transition failed at s={s}: {e}"))
            })?;
            let t1 = next.c.nearest_param(p);
            let s1 = geodesic_coordinate(&next.c, &frame_n, t1)?;
            samples.push((s, s1));
        }
    }
    let fit_subset = |pts: &[(f64, f64)]| -> (f64, f64) {
        let (mut s2, mut s4, mut ys, mut ys2) = (0.0, 0.0, 0.0, 0.0);
        for &(s, y) in pts {
            s2 += s * s;
            s4 += s * s * s * s;
            ys += y * s;
            ys2 += y * s * s;
        }
        (ys / s2, ys2 / s4)
    };
    let (g1, alpha) = fit_subset(&samples);
    let residual = samples
        .iter()
        .map(|&(s, y)| (y - g1 * s - alpha * s * s).abs())
        .fold(0.0, f64::max);
    let mut per_scale = Vec::with_capacity(n_scales);
    for m in 0..n_scales {
        let scale = sigma / (1u64 << m) as f64;
        let sub: Vec<(f64, f64)> = samples[m * 8..(m + 1) * 8].to_vec();
        let (g, a) = fit_subset(&sub);
        per_scale.push((scale, g, a));
    }
    let n = per_scale.len();
    let scale_stable = {
        let a1 = per_scale[n - 2].2;
        let a2 = per_scale[n - 1].2;
        a2 != 0.0 && ((a1 - a2) / a2).abs() <= 0.01
    };
    Ok(QuadraticFit { g1, alpha, residual, sigma, n_scales, per_scale, scale_stable })
}

/// Fit in a (possibly skewed) tangent-line chart instead of the geodesic
/// coordinate: offsets are projections onto the anchor tangent scaled by
/// `skew`. Used to check coordinate invariance of the quadratic coefficient.
pub fn fit_chart_quadratic(
    scene: &NestedScene,
    level: usize,
    anchor_t_on_c: f64,
    skew: f64,
    sigma: f64,
    n_scales: usize,
) -> Result<QuadraticFit> {
    let lvl = &scene.levels[level];
    let next = scene
        .levels
        .get(level + 1)
        .ok_or_else(|| Error::FitAborted(format!("level {} has no successor", level)))?;
    let frame_k = GeodesicFrame::new(anchor_t_on_c);
    let anchor_pt = lvl.c.position(anchor_t_on_c);
    let tangent = lvl.c.tangent(anchor_t_on_c);
    let chart = |p: Point| skew * (p - anchor_pt).dot(tangent);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for m in 0..n_scales {
        let scale = sigma / (1u64 << m) as f64;
        for j in (-4i32..=4).filter(|&j| j != 0) {
            let s = scale * j as f64 / 4.0;
            let t = param_at_geodesic(&lvl.c, &frame_k, s)?;
            let x = chart(lvl.c.position(t));
            let p = transition(&lvl.c, &lvl.omega, &next.c, t)
                .map_err(|e| Error::FitAborted(format!("transition failed at s={s}: {e}")))?;
            samples.push((x, chart(p)));
        }
    }
    let (mut s2, mut s4, mut s3, mut ys, mut ys2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &samples {
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
        ys += y * x;
        ys2 += y * x * x;
    }
    // General 2x2 normal equations (the skewed chart grid is only nearly
    // symmetric).
    let det = s2 * s4 - s3 * s3;
    let g1 = (ys * s4 - ys2 * s3) / det;
    let alpha = (ys2 * s2 - ys * s3) / det;
    let residual = samples
        .iter()
        .map(|&(x, y)| (y - g1 * x - alpha * x * x).abs())
        .fold(0.0, f64::max);
    Ok(QuadraticFit {
        g1,
        alpha,
        residual,
        sigma,
        n_scales,
        per_scale: vec![],
        scale_stable: true,
    })
}

/// Super-exponential convergence certificate extracted from an orbit's
/// u = -log|s| sequence.
#[derive(Debug, Clone)]
pub struct SuperExpCertificate {
    /// (k, u_{k+1} / (2 u_k)) pairs.
    pub ratios: Vec<(usize, f64)>,
    /// Extracted rate: |s_k| <= C rho^(2^k).
    pub rho: f64,
    pub c_const: f64,
    pub pass: bool,
}

pub fn superexp_certificate(orbit: &Orbit) -> Result<SuperExpCertificate> {
    let us: Vec<(usize, f64)> = orbit
        .steps
        .iter()
        .filter_map(|s| s.u.map(|u| (s.k, u)))
        .collect();
    if us.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "superexp certificate needs >= 4 steps with s != 0, got {}",
            us.len()
        )));
    }
    let mut ratios = Vec::new();
    for w in us.windows(2) {
        if w[1].0 == w[0].0 + 1 && w[0].1 > 0.0 {
            ratios.push((w[0].0, w[1].1 / (2.0 * w[0].1)));
        }
    }
    // Rate extraction: u_k ~ 2^k c, rho = exp(-c), C = max excess.
    let (k_last, u_last) = *us.last().unwrap();
    let c = u_last / (k_last as f64).exp2();
    let rho = (-c).exp();
    let c_const = us
        .iter()
        .map(|&(k, u)| (c * (k as f64).exp2() - u).exp())
        .fold(0.0, f64::max);
    let late: Vec<&(usize, f64)> = ratios.iter().filter(|(k, _)| *k >= 3).collect();
    let pass = !late.is_empty()
        && late.iter().all(|(_, r)| (r - 1.0).abs() <= 0.05)
        && rho > 0.0
        && rho < 1.0;
    Ok(SuperExpCertificate { ratios, rho, c_const, pass })
}

/// Uniform bounds on the quadratic coefficients from the scene's extremes.
#[derive(Debug, Clone, Copy)]
pub struct AlphaBounds {
    pub alpha_min: f64,
    pub alpha_max: f64,
}

pub fn alpha_bounds(tangencies: &[TangencyPoint]) -> Result<AlphaBounds> {
    if tangencies.is_empty() {
        return Err(Error::InsufficientData("no tangencies declared".into()));
    }
    let mut kappa_min = f64::INFINITY;
    let mut kappa_max: f64 = 0.0;
    let mut delta = f64::INFINITY;
    let mut d_min = f64::INFINITY;
    let mut d_max: f64 = 0.0;
    let mut r_min = f64::INFINITY;
    let mut r_max: f64 = 0.0;
    for tp in tangencies {
        kappa_min = kappa_min.min(tp.kappa_k.min(tp.kappa_next));
        kappa_max = kappa_max.max(tp.kappa_k.max(tp.kappa_next));
        delta = delta.min(tp.kappa_next - tp.kappa_k);
        d_min = d_min.min(tp.d);
        d_max = d_max.max(tp.d);
        r_min = r_min.min(tp.r_measured);
        r_max = r_max.max(tp.r_measured);
    }
    if !(delta > 0.0) {
        return Err(Error::HypothesisViolation(format!(
            "curvature gap delta = {delta} must be positive"
        )));
    }
    let alpha_min = 0.5 * (delta / (kappa_max * kappa_max)) * d_min * d_min / r_max;
    let alpha_max = 0.5 * (1.0 / kappa_min - 1.0 / kappa_max) * d_max * d_max / r_min;
    Ok(AlphaBounds { alpha_min, alpha_max })
}

/// Finite-difference slope of the angular variable against the geodesic
/// coordinate at an anchor.
pub fn angular_slope_at_anchor(
    c: &BoundaryCurve,
    omega: &DomainBoundary,
    anchor_t: f64,
    ds: f64,
) -> Result<f64> {
    let frame = GeodesicFrame::new(anchor_t);
    let t = param_at_geodesic(c, &frame, ds)?;
    let theta = angular_variable(c, omega, t)?;
    Ok(theta / ds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SceneLevel;

    fn circle(cx: f64, cy: f64, r: f64) -> BoundaryCurve {
        BoundaryCurve::circle(Point::new(cx, cy), r).unwrap()
    }

    fn disk(cx: f64, cy: f64, r: f64) -> DomainBoundary {
        DomainBoundary::convex(circle(cx, cy, r))
    }

    #[test]
    fn concentric_circles_have_no_tangency() {
        let found = find_tangencies(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.0, 0.5), 1e-7).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn tangent_circles_single_anchor() {
        let found = find_tangencies(&circle(0.0, 0.0, 1.0), &circle(0.0, 0.5, 0.5), 1e-7).unwrap();
        assert_eq!(found.len(), 1);
        let (t, t1, p) = found[0];
        assert!(p.dist(Point::new(0.0, 1.0)) < 1e-9);
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
        assert!((t1 - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn rounded_triangle_three_anchors_by_rotation() {
        // Nested rounded triangles sharing apexes: R1 = R0/2, same apex
        // radius; see the scenario builders for the exact construction.
        let c0 = BoundaryCurve::rounded_triangle(Point::new(0.0, 0.0), 3.0, 0.5, 0.02).unwrap();
        // A = D0 + R0 = 4/3 + 1/2; H1 = 1.5 A + 0.5 R1.
        let a = 4.0 / 3.0 + 0.5;
        let r1 = 0.25;
        let h1 = 1.5 * a + 0.5 * r1;
        let c1 = BoundaryCurve::rounded_triangle(Point::new(0.0, 0.0), h1, r1, 0.02).unwrap();
        let found = find_tangencies(&c0, &c1, 1e-5).unwrap();
        assert_eq!(found.len(), 3, "{found:?}");
        // Related by 120-degree rotation.
        let p0 = found[0].2;
        let rot = 2.0 * std::f64::consts::FRAC_PI_3;
        let q = Point::new(p0.x * rot.cos() - p0.y * rot.sin(), p0.x * rot.sin() + p0.y * rot.cos());
        assert!(found.iter().any(|(_, _, p)| p.dist(q) < 1e-6), "{found:?}");
    }

    #[test]
    fn alpha_beta_substitution_values() {
        // kappa = (1, 2), d = 1, R = 2: alpha = beta = 0.125.
        let (a, b) = alpha_beta_from_data(1.0, 2.0, 1.0, 2.0).unwrap();
        assert!((a - 0.125).abs() < 1e-15);
        assert!((b - 0.125).abs() < 1e-15);
        assert!((b - 2.0 * a / 2.0).abs() < 1e-16, "beta = kappa1 alpha / (2 kappa0^2)");
        // Equal curvatures: alpha = 0.
        let (a, _) = alpha_beta_from_data(2.0, 2.0, 1.0, 2.0).unwrap();
        assert_eq!(a, 0.0);
        assert!(alpha_beta_from_data(1.0, 2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn alpha_bounds_substitution() {
        // kappa in [1,2], delta = 1, d = 1, R = 2:
        // alpha_min = 0.0625, alpha_max = 0.125.
        let tp = TangencyPoint {
            level: 0,
            point: Point::new(0.0, 1.0),
            t_on_c: 0.0,
            t_on_next: 0.0,
            kappa_k: 1.0,
            kappa_next: 2.0,
            d: 1.0,
            r_measured: 2.0,
            r_paper_relation: 0.0,
        };
        let b = alpha_bounds(&[tp]).unwrap();
        assert!((b.alpha_min - 0.0625).abs() < 1e-15);
        assert!((b.alpha_max - 0.125).abs() < 1e-15);
        // The per-tangency alpha lies inside.
        let (a, _) = alpha_beta_formula(&tp).unwrap();
        assert!(a >= b.alpha_min - 1e-15 && a <= b.alpha_max + 1e-15);
    }

    #[test]
    fn superexp_on_synthetic_quadratic_orbit() {
        // Quadratic orbit in the scene regime: alpha = 0.125, s0 = 0.05.
        use crate::dynamics::{OrbitStep, StepMode};
        let mut steps = Vec::new();
        let mut s: f64 = 0.05;
        for k in 0..8 {
            steps.push(OrbitStep {
                k,
                mode: StepMode::Geometric,
                t: None,
                point: None,
                s: Some(s),
                branch: Some(0),
                theta: None,
                d: None,
                u: Some(-s.ln()),
            });
            s = 0.125 * s * s;
        }
        let orbit = Orbit { steps, truncated: None, log_switch_at: None };
        let cert = superexp_certificate(&orbit).unwrap();
        assert!(cert.pass, "{:?}", cert.ratios);
        assert!(cert.rho < 1.0);
        // Bound check in the Cor 3.4 form: s_n <= r q^(2^n - 1) with
        // r = 0.4, q = 0.8 holds for n <= 6 by direct iteration.
        let (r, q) = (0.4f64, 0.8f64);
        let mut sv: f64 = 0.25;
        for n in 0..=6u32 {
            let bound = r * q.powf((n as f64).exp2() - 1.0);
            assert!(sv <= bound + 1e-15, "n={n}: {sv} vs {bound}");
            sv = 2.0 * sv * sv;
        }
    }

    #[test]
    fn constant_orbit_fails_certificate() {
        use crate::dynamics::{OrbitStep, StepMode};
        let steps: Vec<OrbitStep> = (0..8)
            .map(|k| OrbitStep {
                k,
                mode: StepMode::Geometric,
                t: None,
                point: None,
                s: Some(0.3),
                branch: Some(0),
                theta: None,
                d: None,
                u: Some(-(0.3f64).ln()),
            })
            .collect();
        let orbit = Orbit { steps, truncated: None, log_switch_at: None };
        let cert = superexp_certificate(&orbit).unwrap();
        assert!(!cert.pass);
        for (_, r) in &cert.ratios {
            assert!((r - 0.5).abs() < 1e-12, "constant orbit ratios are 1/2");
        }
    }

    #[test]
    fn insufficient_steps_is_inconclusive() {
        use crate::dynamics::{OrbitStep, StepMode};
        let steps: Vec<OrbitStep> = (0..2)
            .map(|k| OrbitStep {
                k,
                mode: StepMode::Geometric,
                t: None,
                point: None,
                s: Some(0.1),
                branch: Some(0),
                theta: None,
                d: None,
                u: Some(-(0.1f64).ln()),
            })
            .collect();
        let orbit = Orbit { steps, truncated: None, log_switch_at: None };
        assert!(superexp_certificate(&orbit).is_err());
    }

    #[test]
    fn populate_tangency_reads_scene_data() {
        let c0 = circle(0.0, 0.0, 1.0);
        let c1 = circle(0.0, 0.5, 0.5);
        let scene = NestedScene::new(
            "pair",
            vec![
                SceneLevel { c: c0, omega: disk(0.0, 0.0, 2.0), anchors: vec![] },
                SceneLevel { c: c1, omega: disk(0.0, 0.0, 2.0), anchors: vec![] },
            ],
        )
        .unwrap();
        let tp = populate_tangency(
            &scene,
            0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
        )
        .unwrap();
        assert!((tp.kappa_k - 1.0).abs() < 1e-12);
        assert!((tp.kappa_next - 2.0).abs() < 1e-12);
        assert!((tp.d - 1.0).abs() < 1e-12);
        assert!((tp.r_measured - 2.0).abs() < 1e-9);
        // The printed relation gives 1/1 - 1 = 0 here, while the measured
        // outer radius is 2.
        assert!(tp.r_paper_relation.abs() < 1e-12);
    }
}
