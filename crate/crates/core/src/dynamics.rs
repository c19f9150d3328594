//! The return map, the level-crossing transition operators, orbit iteration
//! across a nested scene with logarithmic tracking, the first-order
//! (gradient-descent) expansion residual, and the thickness Lyapunov check.

use crate::error::{Error, Result};
use crate::geom::{
    geodesic_coordinate, wrap_param_signed, BoundaryCurve, GeodesicFrame, Point,
};
use crate::transport::{check_gnp, radial_map, reciprocal_map, thickness, DomainBoundary};

/// Default geodesic scale below which orbits switch to logarithmic tracking.
pub const LOG_SWITCH_THRESHOLD: f64 = 1e-8;

/// A declared tangency anchor between consecutive bodies.
#[derive(Debug, Clone, Copy)]
pub struct TangencyAnchor {
    /// Parameter of the anchor on this level's body.
    pub t_on_c: f64,
    /// Parameter of the same point on the next body.
    pub t_on_next: f64,
    pub point: Point,
}

#[derive(Debug, Clone)]
pub struct SceneLevel {
    pub c: BoundaryCurve,
    pub omega: DomainBoundary,
    /// Anchors of the tangency between this body and the next one.
    pub anchors: Vec<TangencyAnchor>,
}

/// A nested sequence of convex bodies and surrounding domains. A single-level
/// scene iterates the return map of its one body.
#[derive(Debug, Clone)]
pub struct NestedScene {
    pub name: String,
    pub levels: Vec<SceneLevel>,
}

#[derive(Debug, Clone)]
pub struct SceneValidation {
    pub c_nested: bool,
    pub omega_nested: bool,
    pub gnp_pass: bool,
    pub issues: Vec<String>,
}

impl NestedScene {
    pub fn new(name: impl Into<String>, levels: Vec<SceneLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidShape("a scene needs at least one level".into()));
        }
        Ok(NestedScene { name: name.into(), levels })
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Sampled scene invariants: body nesting (strict except near declared
    /// anchors), domain nesting (informational), and per-level geometric
    /// normal property at 128 samples.
    pub fn validate(&self) -> Result<SceneValidation> {
        let mut issues = Vec::new();
        let mut c_nested = true;
        let mut omega_nested = true;
        for k in 0..self.levels.len().saturating_sub(1) {
            let cur = &self.levels[k];
            let next = &self.levels[k + 1];
            let diam = cur.c.diameter_bound();
            for i in 0..512 {
                let t = std::f64::consts::TAU * i as f64 / 512.0;
                let p = next.c.position(t);
                let gap = cur.c.normal_gap(p);
                let near_anchor = cur
                    .anchors
                    .iter()
                    .any(|a| a.point.dist(p) < 0.05 * diam);
                let ok = if near_anchor { gap < 1e-9 * diam.max(1.0) } else { gap < -1e-9 };
                if !ok {
                    c_nested = false;
                    issues.push(format!("level {k}: body nesting violated at t={t} (gap {gap})"));
                    break;
                }
            }
            for i in 0..128 {
                let t = std::f64::consts::TAU * i as f64 / 128.0;
                let p = cur.omega.outer().position(t);
                if !next.omega.contains(p) && next.omega.outer().normal_gap(p) > 1e-9 {
                    omega_nested = false;
                    break;
                }
            }
        }
        let mut gnp_pass = true;
        for (k, lvl) in self.levels.iter().enumerate() {
            let rep = check_gnp(&lvl.c, &lvl.omega, 128)?;
            if !rep.pass {
                gnp_pass = false;
                issues.push(format!(
                    "level {k}: GNP violations at {} of {} samples",
                    rep.violations.len(),
                    rep.samples
                ));
            }
        }
        Ok(SceneValidation { c_nested, omega_nested, gnp_pass, issues })
    }
}

/// The return map of a single body: outward normal transport to the domain
/// boundary, then inward-normal first-intersection projection back.
pub fn return_map(c: &BoundaryCurve, omega: &DomainBoundary, t: f64) -> Result<f64> {
    let x = radial_map(c, omega, t)?;
    let (p, _) = reciprocal_map(omega, c, x)?;
    Ok(c.nearest_param(p))
}

/// The transition operator onto the next body.
pub fn transition(
    c_k: &BoundaryCurve,
    omega_k: &DomainBoundary,
    c_next: &BoundaryCurve,
    t: f64,
) -> Result<Point> {
    let x = radial_map(c_k, omega_k, t)?;
    let (p, _) = reciprocal_map(omega_k, c_next, x)?;
    Ok(p)
}

/// The unsigned angle between the body's outward normal at `t` and the
/// domain's inward normal at the radial image; zero exactly at tangency
/// configurations where the two rays are anti-aligned.
pub fn angular_variable(c: &BoundaryCurve, omega: &DomainBoundary, t: f64) -> Result<f64> {
    let x = radial_map(c, omega, t)?;
    let nu = c.outward_normal(t);
    let tx = omega.outer().nearest_param(x);
    let n_in = -omega.outer().outward_normal(tx);
    // atan2 keeps full precision for tiny deviations from anti-alignment,
    // where acos of the dot product floors at sqrt(eps).
    Ok(nu.cross(n_in).abs().atan2(-nu.dot(n_in)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    Geometric,
    LogTracked,
}

impl StepMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            StepMode::Geometric => "geometric",
            StepMode::LogTracked => "log-tracked",
        }
    }
}

/// One orbit step. Geometric fields are absent once the orbit switches to
/// logarithmic tracking.
#[derive(Debug, Clone)]
pub struct OrbitStep {
    pub k: usize,
    pub mode: StepMode,
    pub t: Option<f64>,
    pub point: Option<Point>,
    /// Geodesic coordinate relative to the nearest declared anchor.
    pub s: Option<f64>,
    /// Index of that anchor in the level's anchor list.
    pub branch: Option<usize>,
    pub theta: Option<f64>,
    pub d: Option<f64>,
    /// -log |s|; absent when s = 0 or no anchor is declared.
    pub u: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub steps: Vec<OrbitStep>,
    /// Reason the orbit stopped early, if it did.
    pub truncated: Option<String>,
    /// Step index at which logarithmic tracking began.
    pub log_switch_at: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct OrbitOptions {
    pub steps: usize,
    pub log_switch_threshold: f64,
    /// Fitted quadratic coefficients per level, used by the log track
    /// (u_{k+1} = 2 u_k - log alpha_k). Falls back to the last measured
    /// one-step quotient when absent.
    pub log_alphas: Option<Vec<f64>>,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions { steps: 10, log_switch_threshold: LOG_SWITCH_THRESHOLD, log_alphas: None }
    }
}

fn nearest_anchor_s(
    c: &BoundaryCurve,
    anchors: &[TangencyAnchor],
    t: f64,
) -> Result<Option<(usize, f64)>> {
    let mut best: Option<(usize, f64)> = None;
    for (i, a) in anchors.iter().enumerate() {
        let frame = GeodesicFrame::new(a.t_on_c);
        let s = geodesic_coordinate(c, &frame, t)?;
        if best.map(|(_, bs)| s.abs() < bs.abs()).unwrap_or(true) {
            best = Some((i, s));
        }
    }
    Ok(best)
}

/// Iterate the scene dynamics from parameter `t0` on the first body.
///
/// Multi-level scenes apply the transition operators level by level;
/// single-level scenes iterate the return map. When |s| falls below the
/// switching threshold the orbit continues affinely in u = -log|s|.
pub fn iterate_orbit(scene: &NestedScene, t0: f64, opts: &OrbitOptions) -> Result<Orbit> {
    let single = scene.level_count() == 1;
    if !single && opts.steps + 1 > scene.level_count() {
        return Err(Error::InsufficientData(format!(
            "{} steps need {} levels, scene has {}",
            opts.steps,
            opts.steps + 1,
            scene.level_count()
        )));
    }
    let mut steps: Vec<OrbitStep> = Vec::with_capacity(opts.steps + 1);
    let mut truncated = None;
    let mut log_switch_at = None;
    let mut t = t0;
    let mut u_track: Option<(f64, usize)> = None; // (u, branch)
    let mut last_alpha_est: Option<f64> = None;
    for k in 0..=opts.steps {
        let lvl = &scene.levels[if single { 0 } else { k.min(scene.level_count() - 1) }];
        if let Some((u, branch)) = u_track {
            steps.push(OrbitStep {
                k,
                mode: StepMode::LogTracked,
                t: None,
                point: None,
                s: None,
                branch: Some(branch),
                theta: None,
                d: None,
                u: Some(u),
            });
            if k < opts.steps {
                let alpha = opts
                    .log_alphas
                    .as_ref()
                    .and_then(|v| v.get(if single { 0 } else { k }).copied())
                    .or(last_alpha_est)
                    .unwrap_or(1.0);
                u_track = Some((2.0 * u - alpha.abs().ln(), branch));
            }
            continue;
        }
        let point = lvl.c.position(t);
        let d = thickness(&lvl.c, &lvl.omega, t)?.d;
        let theta = angular_variable(&lvl.c, &lvl.omega, t)?;
        let anchor_s = nearest_anchor_s(&lvl.c, &lvl.anchors, t)?;
        let (branch, s) = match anchor_s {
            Some((i, s)) => (Some(i), Some(s)),
            None => (None, None),
        };
        let u = s.and_then(|v| if v != 0.0 { Some(-v.abs().ln()) } else { None });
        steps.push(OrbitStep { k, mode: StepMode::Geometric, t: Some(t), point: Some(point), s, branch, theta: Some(theta), d: Some(d), u });
        if k == opts.steps {
            break;
        }
        // Switch to the log track when the geodesic coordinate is tiny.
        if let (Some(sv), Some(uv), Some(b)) = (s, u, branch) {
            if sv != 0.0 && sv.abs() < opts.log_switch_threshold {
                log_switch_at = Some(k);
                let alpha = opts
                    .log_alphas
                    .as_ref()
                    .and_then(|v| v.get(if single { 0 } else { k }).copied())
                    .or(last_alpha_est)
                    .unwrap_or(1.0);
                u_track = Some((2.0 * uv - alpha.abs().ln(), b));
                continue;
            }
        }
        // Geometric step.
        let next_t = if single {
            match return_map(&lvl.c, &lvl.omega, t) {
                Ok(v) => v,
                Err(e) => {
                    truncated = Some(format!("step {k}: {e}"));
                    break;
                }
            }
        } else {
            let next_c = &scene.levels[k + 1].c;
            match transition(&lvl.c, &lvl.omega, next_c, t) {
                Ok(p) => next_c.nearest_param(p),
                Err(e) => {
                    truncated = Some(format!("step {k}: {e}"));
                    break;
                }
            }
        };
        // One-step quadratic coefficient estimate |s'|/s^2 for the log track.
        if let Some(sv) = s {
            if sv != 0.0 && !single {
                let next_lvl = &scene.levels[k + 1];
                if let Some((_, s_next)) = nearest_anchor_s(&next_lvl.c, &next_lvl.anchors, next_t)? {
                    if s_next != 0.0 {
                        last_alpha_est = Some(s_next.abs() / (sv * sv));
                    }
                }
            }
        }
        t = next_t;
    }
    Ok(Orbit { steps, truncated, log_switch_at })
}

/// One gradient-expansion residual sample.
#[derive(Debug, Clone, Copy)]
pub struct GradientCheck {
    pub eps: f64,
    pub d: f64,
    pub grad_d: f64,
    /// |F(c) - c + 2 d grad d| in the arclength metric.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct GradientExpansion {
    pub checks: Vec<GradientCheck>,
    /// Log-log slope of residual against eps (None when residuals vanish).
    pub slope: Option<f64>,
}

/// Residual of the first-order return-map expansion over a family of outward
/// offsets Omega(eps), evaluated at boundary parameter `t`. The tangential
/// derivative of the thickness is a central finite difference with arclength
/// step 1e-5.
pub fn gradient_expansion_residual<F>(
    c: &BoundaryCurve,
    omega_family: F,
    t: f64,
    eps_grid: &[f64],
) -> Result<GradientExpansion>
where
    F: Fn(f64) -> Result<DomainBoundary>,
{
    let mut checks = Vec::with_capacity(eps_grid.len());
    let h = 1e-5;
    for &eps in eps_grid {
        let omega = omega_family(eps)?;
        let d0 = thickness(c, &omega, t)?.d;
        let t_plus = c.param_after_arclength(t, h)?;
        let t_minus = c.param_after_arclength(t, -h)?;
        let grad = (thickness(c, &omega, t_plus)?.d - thickness(c, &omega, t_minus)?.d) / (2.0 * h);
        let t1 = return_map(c, &omega, t)?;
        let frame = GeodesicFrame::new(t);
        let ds = geodesic_coordinate(c, &frame, t1)?;
        let residual = (ds + 2.0 * d0 * grad).abs();
        checks.push(GradientCheck { eps, d: d0, grad_d: grad, residual });
    }
    let pts: Vec<(f64, f64)> = checks
        .iter()
        .filter(|c| c.residual > 1e-300)
        .map(|c| (c.eps.ln(), c.residual.ln()))
        .collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };
    Ok(GradientExpansion { checks, slope })
}

#[derive(Debug, Clone)]
pub struct LyapunovReport {
    /// The hypotheses (d'(p) = 0, d''(p) > 0) hold numerically at the anchor.
    pub applicable: bool,
    pub d_prime: f64,
    pub d_second: f64,
    pub monotone: bool,
    pub first_violation: Option<usize>,
    /// Strict decrease held at every step with s != 0.
    pub strict: bool,
}

/// Verify the thickness decreases along a geometric orbit, after checking the
/// regularity hypotheses at the first declared anchor by finite differences.
pub fn lyapunov_check(scene: &NestedScene, orbit: &Orbit) -> Result<LyapunovReport> {
    let lvl0 = &scene.levels[0];
    let anchor = lvl0
        .anchors
        .first()
        .ok_or_else(|| Error::HypothesisViolation("scene declares no tangency anchor".into()))?;
    let h = 1e-4;
    let ta = anchor.t_on_c;
    let tp = lvl0.c.param_after_arclength(ta, h)?;
    let tm = lvl0.c.param_after_arclength(ta, -h)?;
    let dp = thickness(&lvl0.c, &lvl0.omega, tp)?.d;
    let dm = thickness(&lvl0.c, &lvl0.omega, tm)?.d;
    let d0 = thickness(&lvl0.c, &lvl0.omega, ta)?.d;
    let d_prime = (dp - dm) / (2.0 * h);
    let d_second = (dp - 2.0 * d0 + dm) / (h * h);
    let applicable = d_prime.abs() <= 1e-5 * (1.0 + d0) && d_second > 0.0;
    let mut monotone = true;
    let mut strict = true;
    let mut first_violation = None;
    let mut prev: Option<(f64, f64)> = None; // (d, s)
    for step in &orbit.steps {
        let (Some(d), StepMode::Geometric) = (step.d, step.mode) else { break };
        let s = step.s.unwrap_or(0.0);
        if let Some((d_prev, s_prev)) = prev {
            if d > d_prev + 1e-10 {
                monotone = false;
                if first_violation.is_none() {
                    first_violation = Some(step.k);
                }
            }
            if s_prev != 0.0 && d >= d_prev {
                strict = false;
            }
        }
        prev = Some((d, s));
    }
    Ok(LyapunovReport { applicable, d_prime, d_second, monotone, first_violation, strict })
}

/// Serialize an orbit as CSV with 17 significant digits per numeric field.
pub fn orbit_to_csv(orbit: &Orbit) -> String {
    let mut out = String::from("k,t,x,y,s,theta,d,u,mode\n");
    for s in &orbit.steps {
        let f = |v: Option<f64>| v.map(fmt_g17).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.k,
            f(s.t),
            f(s.point.map(|p| p.x)),
            f(s.point.map(|p| p.y)),
            f(s.s),
            f(s.theta),
            f(s.d),
            f(s.u),
            s.mode.as_str()
        ));
    }
    out
}

/// 17-significant-digit scientific format (byte-stable).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Signed parameter distance helper exposed for diagnostics.
pub fn param_distance(a: f64, b: f64) -> f64 {
    wrap_param_signed(a - b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;

    fn unit_circle() -> BoundaryCurve {
        BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0).unwrap()
    }

    fn disk(cx: f64, cy: f64, r: f64) -> DomainBoundary {
        DomainBoundary::convex(BoundaryCurve::circle(Point::new(cx, cy), r).unwrap())
    }

    fn concentric_scene() -> NestedScene {
        NestedScene::new(
            "concentric",
            vec![SceneLevel { c: unit_circle(), omega: disk(0.0, 0.0, 2.0), anchors: vec![] }],
        )
        .unwrap()
    }

    #[test]
    fn return_map_is_identity_for_concentric_circles() {
        let c = unit_circle();
        let om = disk(0.0, 0.0, 2.0);
        for i in 0..16 {
            let t = std::f64::consts::TAU * i as f64 / 16.0;
            let t1 = return_map(&c, &om, t).unwrap();
            assert!(param_distance(t1, t).abs() < 1e-12);
        }
    }

    #[test]
    fn return_map_eccentric_example() {
        // Landing point (0.05, sqrt(3.99)/2), t' = atan2(...) ~ 1.5207755.
        let c = unit_circle();
        let om = disk(0.1, 0.0, 2.0);
        let t1 = return_map(&c, &om, std::f64::consts::FRAC_PI_2).unwrap();
        let expect = (3.99f64.sqrt() / 2.0).atan2(0.05);
        assert!((t1 - expect).abs() < 1e-9, "{t1} vs {expect}");
        assert!((t1 - 1.5207755).abs() < 1e-6);
        // The axis point is fixed by symmetry.
        let t0 = return_map(&c, &om, 0.0).unwrap();
        assert!(param_distance(t0, 0.0).abs() < 1e-12);
    }

    #[test]
    fn transition_degenerate_same_body_is_identity() {
        let c = unit_circle();
        let om = disk(0.0, 0.0, 2.0);
        let p = transition(&c, &om, &c, 0.7).unwrap();
        assert!(p.dist(c.position(0.7)) < 1e-12);
    }

    #[test]
    fn tangent_circles_anchor_is_fixed() {
        let c0 = unit_circle();
        let c1 = BoundaryCurve::circle(Point::new(0.0, 0.5), 0.5).unwrap();
        let om = disk(0.0, 0.0, 2.0);
        let p = transition(&c0, &om, &c1, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(p.dist(Point::new(0.0, 1.0)) < 1e-9);
    }

    #[test]
    fn concentric_orbit_is_constant() {
        let scene = concentric_scene();
        let orbit =
            iterate_orbit(&scene, 0.3, &OrbitOptions { steps: 10, ..Default::default() }).unwrap();
        assert_eq!(orbit.steps.len(), 11);
        for s in &orbit.steps {
            assert_eq!(s.mode, StepMode::Geometric);
            assert!((s.d.unwrap() - 1.0).abs() < 1e-10);
            assert!(param_distance(s.t.unwrap(), 0.3).abs() < 1e-10);
        }
    }

    #[test]
    fn orbit_angular_variable_vanishes_concentric() {
        let scene = concentric_scene();
        let orbit = iterate_orbit(&scene, 1.1, &OrbitOptions::default()).unwrap();
        for s in &orbit.steps {
            assert!(s.theta.unwrap() < 1e-9);
        }
    }

    #[test]
    fn multi_level_orbit_needs_enough_levels() {
        let c0 = unit_circle();
        let c1 = BoundaryCurve::circle(Point::new(0.0, 0.5), 0.5).unwrap();
        let lv = |c: BoundaryCurve| SceneLevel { c, omega: disk(0.0, 0.0, 2.0), anchors: vec![] };
        let scene = NestedScene::new("two", vec![lv(c0), lv(c1)]).unwrap();
        assert!(iterate_orbit(&scene, 0.0, &OrbitOptions { steps: 5, ..Default::default() }).is_err());
    }

    #[test]
    fn gradient_residual_zero_for_concentric_family() {
        let c = unit_circle();
        let fam = |eps: f64| {
            Ok(DomainBoundary::convex(
                BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0 + eps).unwrap(),
            ))
        };
        let g = gradient_expansion_residual(&c, fam, 0.9, &[1e-1, 1e-2, 1e-3]).unwrap();
        for chk in &g.checks {
            assert!(chk.grad_d.abs() < 1e-9);
            assert!(chk.residual < 1e-9);
        }
    }

    #[test]
    fn gradient_residual_slope_on_offset_family() {
        // Offset disks r = 1 + eps centered (eps/2, 0): slope >= 1.9.
        let c = unit_circle();
        let fam = |eps: f64| {
            Ok(DomainBoundary::convex(
                BoundaryCurve::circle(Point::new(eps / 2.0, 0.0), 1.0 + eps).unwrap(),
            ))
        };
        let grid = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];
        let g = gradient_expansion_residual(&c, fam, std::f64::consts::FRAC_PI_2, &grid).unwrap();
        let slope = g.slope.unwrap();
        assert!(slope >= 1.9, "slope {slope}");
    }

    #[test]
    fn orbit_csv_has_17_digits_and_modes() {
        let scene = concentric_scene();
        let orbit = iterate_orbit(&scene, 0.25, &OrbitOptions { steps: 2, ..Default::default() })
            .unwrap();
        let csv = orbit_to_csv(&orbit);
        assert!(csv.starts_with("k,t,x,y,s,theta,d,u,mode\n"));
        assert!(csv.contains("geometric"));
        let line = csv.lines().nth(1).unwrap();
        let txt = line.split(',').nth(1).unwrap();
        assert_eq!(txt, "2.5000000000000000e-1");
    }

    #[test]
    fn ray_dir_sanity() {
        // Vec2 helpers used across the module.
        let v = Vec2::from_angle(0.3);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }
}
