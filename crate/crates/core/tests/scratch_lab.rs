//! Scratch laboratory for the tangency-scene normalization. Not part of the
//! final suite; validates the local structure of the transition operator on
//! candidate scenes before the scenario constants are frozen.

use tangency_dynamics::geom::{
    geodesic_coordinate, param_at_geodesic, BoundaryCurve, GeodesicFrame, Point,
};
use tangency_dynamics::transport::{radial_map, reciprocal_map, DomainBoundary};

fn transition_s(
    ck: &BoundaryCurve,
    om: &DomainBoundary,
    ck1: &BoundaryCurve,
    anchor_k: f64,
    anchor_k1: f64,
    s0: f64,
) -> f64 {
    let fk = GeodesicFrame::new(anchor_k);
    let fk1 = GeodesicFrame::new(anchor_k1);
    let t = param_at_geodesic(ck, &fk, s0).unwrap();
    let x = radial_map(ck, om, t).unwrap();
    let (p, _) = reciprocal_map(om, ck1, x).unwrap();
    let t1 = ck1.nearest_param(p);
    geodesic_coordinate(ck1, &fk1, t1).unwrap()
}

fn theta_at(ck: &BoundaryCurve, om: &DomainBoundary, anchor_k: f64, s0: f64) -> f64 {
    let fk = GeodesicFrame::new(anchor_k);
    let t = param_at_geodesic(ck, &fk, s0).unwrap();
    let x = radial_map(ck, om, t).unwrap();
    let nu = ck.outward_normal(t);
    let tx = om.outer().nearest_param(x);
    let n_in = -om.outer().outward_normal(tx);
    let c = (-(nu.dot(n_in))).clamp(-1.0, 1.0);
    c.acos()
}

#[test]
fn lab_concentric_omega_transition_is_identity() {
    let c0 = BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0).unwrap();
    let c1 = BoundaryCurve::circle(Point::new(0.0, 0.5), 0.5).unwrap();
    let om = DomainBoundary::convex(BoundaryCurve::circle(Point::new(0.0, 0.0), 2.0).unwrap());
    let a0 = std::f64::consts::FRAC_PI_2;
    let a1 = std::f64::consts::FRAC_PI_2;
    for &s0 in &[0.001, 0.01, 0.05, 0.1, 0.2] {
        let s1 = transition_s(&c0, &om, &c1, a0, a1, s0);
        println!("s0={s0:7.4}  s1={s1:.12}  s1/s0={:.9}", s1 / s0);
        assert!((s1 - s0).abs() < 1e-9, "identity expected, s0={s0} s1={s1}");
    }
}

#[test]
fn lab_disk_omega_linear_coefficient_matches_formula() {
    // Lambda = (1 + h*kappa0) (1 - h/R) for orthogonal-incidence disk Omega.
    let c0 = BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0).unwrap();
    let c1 = BoundaryCurve::circle(Point::new(0.0, 0.5), 0.5).unwrap();
    let a = std::f64::consts::FRAC_PI_2;
    for &(h, r_om) in &[(0.8f64, 2.0f64), (0.5, 1.5), (0.3, 1.5), (0.6, 2.2)] {
        let yc = 1.0 + h - r_om;
        let om = DomainBoundary::convex(
            BoundaryCurve::circle(Point::new(0.0, yc), r_om).unwrap(),
        );
        let ds = 1e-5;
        let lam = (transition_s(&c0, &om, &c1, a, a, ds)
            - transition_s(&c0, &om, &c1, a, a, -ds))
            / (2.0 * ds);
        let formula = (1.0 + h) * (1.0 - h / r_om);
        println!("h={h} R={r_om}: measured={lam:.8} formula={formula:.8}");
        assert!((lam - formula).abs() < 1e-3, "h={h} R={r_om}");
    }
}

#[test]
fn lab_focusing_oval_quadratic_law() {
    // C0 unit circle, C1 = r/2 internally tangent at (0,1).
    // Omega: Fourier oval with rho(0) = h = 1/(2 kappa0) = 0.5 at the anchor
    // exit (0, 1.5), psi = pi, plus a sin-3phi aberration term.
    let c0 = BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0).unwrap();
    let c1 = BoundaryCurve::circle(Point::new(0.0, 0.5), 0.5).unwrap();
    let a = std::f64::consts::FRAC_PI_2;
    let slope = -0.027777777777777776f64; // rho'(0): alpha_pred = -4.5*slope = 0.125
    let om_curve = BoundaryCurve::fourier_oval(
        Point::new(0.0, 1.5),
        std::f64::consts::PI,
        1.825,
        vec![(2, -0.175), (3, -1.15)],
        vec![(3, slope / 3.0)],
    )
    .unwrap();
    // Containment check: unit circle strictly inside the oval.
    let om = DomainBoundary::convex(om_curve);
    assert!(
        om.contains_curve(&c0, 512, 1e-9),
        "oval must contain the unit circle"
    );

    // Anchor must be fixed.
    let s_fix = transition_s(&c0, &om, &c1, a, a, 0.0);
    println!("G(anchor) geodesic = {s_fix:e}");
    assert!(s_fix.abs() < 1e-9);

    // Thickness at the anchor should be exactly h = 0.5.
    let d = tangency_dynamics::transport::thickness(&c0, &om, a).unwrap().d;
    println!("d(anchor) = {d:.12}");
    assert!((d - 0.5).abs() < 1e-9);

    // Transition values on a dyadic grid.
    let sigma = 1e-2;
    for k in 0..5 {
        let s0 = sigma / (1u32 << k) as f64;
        let sp = transition_s(&c0, &om, &c1, a, a, s0);
        let sm = transition_s(&c0, &om, &c1, a, a, -s0);
        let g1 = (sp - sm) / (2.0 * s0);
        let alpha = (sp + sm) / (2.0 * s0 * s0);
        println!("s0={s0:9.6}: s+={sp:14.6e} s-={sm:14.6e}  g1={g1:11.4e}  alpha={alpha:.6}");
    }

    // Angular slope d theta / d s at the anchor should be 2 kappa0 = 2.
    for &ds in &[1e-3, 1e-4, 1e-5] {
        let th = theta_at(&c0, &om, a, ds);
        println!("ds={ds:7.0e}: theta={th:.10e} slope={:.6}", th / ds);
    }
}
