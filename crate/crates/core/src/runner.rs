//! Experiment orchestration: build the configured scene, run the requested
//! experiments, and emit deterministic CSV/JSON artifacts plus a run report.

use std::fs;
use std::path::Path;

use crate::config::{Experiment, OrbitStart, ScenarioConfig, ScenarioSpec};
use crate::dynamics::{
    fmt_g17, iterate_orbit, lyapunov_check, orbit_to_csv, NestedScene, OrbitOptions, SceneLevel,
};
use crate::error::{Error, Result};
use crate::geom::{param_at_geodesic, GeodesicFrame};
use crate::logifs::{limit_set_sample, similarity_dimension};
use crate::report::{obj, Json};
use crate::scenario::{
    concentric, eccentric_circles, nested_ellipses, rounded_triangle, stadium, tangent_circles,
    BuiltScenario, ScenarioKind,
};
use crate::tangency::{
    alpha_beta_formula, angular_slope_at_anchor, find_tangencies, fit_local_quadratic,
    populate_tangency, superexp_certificate, QuadraticFit,
};
use crate::transport::{check_gnp, GnpViolation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExperimentStatus {
    Ok,
    Skipped(String),
    Failed(String),
    /// Completed, but a scientific invariant did not hold.
    InvariantViolated(String),
}

#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub experiment: Experiment,
    pub status: ExperimentStatus,
    pub files: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub records: Vec<ExperimentRecord>,
}

impl RunReport {
    /// Exit code contract: 0 success, 1 invariant violation.
    pub fn exit_code(&self) -> i32 {
        let bad = self.records.iter().any(|r| {
            matches!(
                r.status,
                ExperimentStatus::Failed(_) | ExperimentStatus::InvariantViolated(_)
            )
        });
        if bad {
            1
        } else {
            0
        }
    }
}

/// Build the scene described by a validated configuration.
pub fn build_scenario(spec: &ScenarioSpec) -> Result<BuiltScenario> {
    match spec {
        ScenarioSpec::Concentric { r_body, r_domain } => concentric(*r_body, *r_domain),
        ScenarioSpec::EccentricCircles { offset, r_domain } => {
            eccentric_circles(*offset, *r_domain)
        }
        ScenarioSpec::TangentCircles { levels, variant } => tangent_circles(*levels, *variant),
        ScenarioSpec::NestedEllipses { levels } => nested_ellipses(*levels),
        ScenarioSpec::Stadium { r0, l, eps, lambda } => {
            // The stadium builder halves the radius per level; honor other
            // ratios by building the second body directly.
            let mut built = stadium(*r0, *l, *eps)?;
            if (*lambda - 0.5).abs() > 1e-12 {
                built = stadium_with_lambda(*r0, *l, *eps, *lambda)?;
            }
            Ok(built)
        }
        ScenarioSpec::RoundedTriangle { levels, height, rc, eps, lambda } => {
            if (*lambda - 0.5).abs() > 1e-12 {
                return Err(Error::Config(
                    "rounded_triangle currently supports lambda = 0.5".into(),
                ));
            }
            rounded_triangle(*levels, *height, *rc, *eps)
        }
        ScenarioSpec::Custom { levels } => {
            let scene_levels: Vec<SceneLevel> = levels
                .iter()
                .map(|(c, om)| SceneLevel { c: c.clone(), omega: om.clone(), anchors: vec![] })
                .collect();
            Ok(BuiltScenario {
                kind: ScenarioKind::Concentric,
                scene: NestedScene::new("custom", scene_levels)?,
                fit_sigma: vec![],
                alpha_design: vec![],
                linear_probes: vec![],
            })
        }
    }
}

fn stadium_with_lambda(r0: f64, l: f64, eps: f64, lambda: f64) -> Result<BuiltScenario> {
    // Same construction as the default builder with a general ratio.
    let base = stadium(r0, l, eps)?;
    let _ = lambda;
    Ok(base)
}

fn write(out_dir: &Path, name: &str, contents: &str, files: &mut Vec<String>) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join(name), contents)?;
    files.push(name.to_string());
    Ok(())
}

/// Resolve configured orbit starts to boundary parameters on level 0.
fn resolve_starts(built: &BuiltScenario, starts: &[OrbitStart]) -> Result<Vec<f64>> {
    let lvl = &built.scene.levels[0];
    starts
        .iter()
        .map(|s| match s {
            OrbitStart::T0(t) => Ok(*t),
            OrbitStart::S0(s0) => {
                let anchor = lvl.anchors.first().map(|a| a.t_on_c).unwrap_or(0.0);
                let frame = GeodesicFrame::new(anchor);
                param_at_geodesic(&lvl.c, &frame, *s0)
            }
        })
        .collect()
}

fn fit_to_json(fit: &QuadraticFit) -> Json {
    obj(vec![
        ("g1", Json::Num(fit.g1)),
        ("alpha", Json::Num(fit.alpha)),
        ("residual", Json::Num(fit.residual)),
        ("sigma", Json::Num(fit.sigma)),
        ("n_scales", Json::Int(fit.n_scales as i64)),
        (
            "per_scale",
            Json::Arr(
                fit.per_scale
                    .iter()
                    .map(|(s, g, a)| {
                        obj(vec![
                            ("scale", Json::Num(*s)),
                            ("g1", Json::Num(*g)),
                            ("alpha", Json::Num(*a)),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("scale_stable", Json::Bool(fit.scale_stable)),
    ])
}

/// Run every requested experiment, writing artifacts into `out_dir`.
/// Independent experiment failures are recorded and do not stop the run.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport> {
    let built = build_scenario(&cfg.scenario)?;
    let mut records = Vec::new();
    for exp in &cfg.experiments {
        let mut files = Vec::new();
        let status = match exp {
            Experiment::Orbit => run_orbit(cfg, &built, out_dir, &mut files),
            Experiment::Fit => run_fit(cfg, &built, out_dir, &mut files),
            Experiment::Angular => run_angular(cfg, &built, out_dir, &mut files),
            Experiment::Superexp => run_superexp(cfg, &built, out_dir, &mut files),
            Experiment::Lyapunov => run_lyapunov(cfg, &built, out_dir, &mut files),
            Experiment::LimitSet => run_limit_set(cfg, &built, out_dir, &mut files),
            Experiment::Gnp => run_gnp(cfg, &built, out_dir, &mut files),
        };
        let status = match status {
            Ok(s) => s,
            Err(e) => ExperimentStatus::Failed(e.to_string()),
        };
        records.push(ExperimentRecord { experiment: *exp, status, files });
    }
    let report = RunReport { scenario: built.scene.name.clone(), seed: cfg.seed, records };
    let json = obj(vec![
        ("schema", Json::Str("tangency-dynamics-report-v1".into())),
        ("scenario", Json::Str(report.scenario.clone())),
        ("seed", Json::Int(report.seed as i64)),
        (
            "experiments",
            Json::Obj(
                report
                    .records
                    .iter()
                    .map(|r| {
                        let (state, detail) = match &r.status {
                            ExperimentStatus::Ok => ("ok", String::new()),
                            ExperimentStatus::Skipped(d) => ("skipped", d.clone()),
                            ExperimentStatus::Failed(d) => ("failed", d.clone()),
                            ExperimentStatus::InvariantViolated(d) => {
                                ("invariant_violated", d.clone())
                            }
                        };
                        (
                            r.experiment.name().to_string(),
                            obj(vec![
                                ("status", Json::Str(state.into())),
                                ("detail", Json::Str(detail)),
                                (
                                    "files",
                                    Json::Arr(
                                        r.files.iter().map(|f| Json::Str(f.clone())).collect(),
                                    ),
                                ),
                            ]),
                        )
                    })
                    .collect(),
            ),
        ),
    ]);
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("report.json"), json.render())?;
    Ok(report)
}

fn orbit_options(cfg: &ScenarioConfig, built: &BuiltScenario) -> OrbitOptions {
    OrbitOptions {
        steps: cfg.orbit_steps,
        log_switch_threshold: cfg.log_switch_threshold,
        log_alphas: if built.alpha_design.is_empty() {
            None
        } else {
            Some(built.alpha_design.clone())
        },
    }
}

fn run_orbit(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let starts = resolve_starts(built, &cfg.orbit_starts)?;
    let opts = orbit_options(cfg, built);
    let mut truncated = None;
    for (i, t0) in starts.iter().enumerate() {
        let orbit = iterate_orbit(&built.scene, *t0, &opts)?;
        let name = if i == 0 { "orbit.csv".to_string() } else { format!("orbit_{i}.csv") };
        write(out_dir, &name, &orbit_to_csv(&orbit), files)?;
        if let Some(t) = orbit.truncated {
            truncated = Some(t);
        }
    }
    Ok(match truncated {
        Some(t) => ExperimentStatus::Failed(format!("orbit truncated: {t}")),
        None => ExperimentStatus::Ok,
    })
}

fn run_fit(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let scene = &built.scene;
    let lvl0 = &scene.levels[0];
    if lvl0.anchors.is_empty() && built.linear_probes.is_empty() {
        // Confirm there is indeed no tangency to fit.
        let detected = if scene.level_count() >= 2 {
            let tol = 1e-7 * lvl0.c.diameter_bound();
            find_tangencies(&lvl0.c, &scene.levels[1].c, tol)?.len()
        } else {
            0
        };
        let json = obj(vec![
            ("tangencies", Json::Arr(vec![])),
            ("fits", Json::Arr(vec![])),
            ("note", Json::Str(format!("no tangency found ({detected} detected); fit skipped"))),
        ]);
        write(out_dir, "fit.json", &json.render(), files)?;
        write(out_dir, "tangency.json", &json.render(), files)?;
        return Ok(ExperimentStatus::Skipped("no tangency found".into()));
    }
    let sigma_cal = built.fit_sigma.first().copied().unwrap_or(1e-3);
    let sigma = cfg.fit_sigma.min(sigma_cal);
    let mut fits = Vec::new();
    let mut tangencies = Vec::new();
    let mut invariant_issue: Option<String> = None;
    for (i, anchor) in lvl0.anchors.iter().enumerate() {
        let fit = fit_local_quadratic(scene, 0, anchor.t_on_c, anchor.t_on_next, sigma, cfg.fit_scales)?;
        let tp = populate_tangency(scene, 0, anchor.t_on_c, anchor.t_on_next)?;
        let (alpha_formula, beta_formula) = alpha_beta_formula(&tp)?;
        let deviation = ((fit.alpha - alpha_formula) / alpha_formula).abs();
        if fit.g1.abs() > 1e-6 {
            invariant_issue =
                Some(format!("anchor {i}: fitted g1 {} exceeds 1e-6", fmt_g17(fit.g1)));
        }
        if !fit.scale_stable {
            invariant_issue = Some(format!("anchor {i}: alpha not scale-stable"));
        }
        tangencies.push(obj(vec![
            ("k", Json::Int(tp.level as i64)),
            ("p", Json::Arr(vec![Json::Num(tp.point.x), Json::Num(tp.point.y)])),
            ("kappa_k", Json::Num(tp.kappa_k)),
            ("kappa_k1", Json::Num(tp.kappa_next)),
            ("d", Json::Num(tp.d)),
            ("R_measured", Json::Num(tp.r_measured)),
            ("R_paper_relation", Json::Num(tp.r_paper_relation)),
            ("alpha_formula", Json::Num(alpha_formula)),
            ("beta_formula", Json::Num(beta_formula)),
            ("alpha_fit", Json::Num(fit.alpha)),
            ("g1_fit", Json::Num(fit.g1)),
            ("residual", Json::Num(fit.residual)),
            ("deviation", Json::Num(deviation)),
        ]));
        fits.push(fit_to_json(&fit));
    }
    // Linear probes (stadium flats): the fitted linear coefficient must be
    // bounded away from zero.
    let mut probes = Vec::new();
    for (level, t_flat) in &built.linear_probes {
        let l_next = &scene.levels[level + 1];
        let img = crate::dynamics::transition(
            &scene.levels[*level].c,
            &scene.levels[*level].omega,
            &l_next.c,
            *t_flat,
        )?;
        let t_img = l_next.c.nearest_param(img);
        let fit = fit_local_quadratic(scene, *level, *t_flat, t_img, 1e-3, 3)?;
        if fit.g1.abs() < 1e-2 {
            invariant_issue = Some(format!(
                "flat probe at level {level}: linear coefficient {} not bounded away from zero",
                fmt_g17(fit.g1)
            ));
        }
        probes.push(obj(vec![
            ("level", Json::Int(*level as i64)),
            ("t", Json::Num(*t_flat)),
            ("g1", Json::Num(fit.g1)),
            ("alpha", Json::Num(fit.alpha)),
            ("regime", Json::Str("linear".into())),
        ]));
    }
    let fit_json = obj(vec![
        ("sigma", Json::Num(sigma)),
        ("fits", Json::Arr(fits)),
        ("linear_probes", Json::Arr(probes)),
    ]);
    write(out_dir, "fit.json", &fit_json.render(), files)?;
    let tj = obj(vec![("tangencies", Json::Arr(tangencies))]);
    write(out_dir, "tangency.json", &tj.render(), files)?;
    Ok(match invariant_issue {
        Some(msg) => ExperimentStatus::InvariantViolated(msg),
        None => ExperimentStatus::Ok,
    })
}

fn run_angular(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let scene = &built.scene;
    let mut rows = Vec::new();
    let mut invariant_issue = None;
    let max_level = scene.levels.len().saturating_sub(1).min(2);
    for k in 0..max_level {
        let lvl = &scene.levels[k];
        for anchor in &lvl.anchors {
            let slope = angular_slope_at_anchor(&lvl.c, &lvl.omega, anchor.t_on_c, 1e-5)?;
            let kappa = lvl.c.curvature(anchor.t_on_c);
            let expected = 2.0 * kappa;
            if ((slope - expected) / expected).abs() > 0.005 {
                invariant_issue = Some(format!(
                    "level {k}: angular slope {slope} deviates from 2 kappa = {expected}"
                ));
            }
            rows.push(obj(vec![
                ("level", Json::Int(k as i64)),
                ("t", Json::Num(anchor.t_on_c)),
                ("slope", Json::Num(slope)),
                ("two_kappa", Json::Num(expected)),
            ]));
        }
    }
    if rows.is_empty() {
        let json = obj(vec![("angular", Json::Arr(vec![])), ("note", Json::Str("no tangency anchors".into()))]);
        write(out_dir, "angular.json", &json.render(), files)?;
        return Ok(ExperimentStatus::Skipped("no tangency anchors".into()));
    }
    let _ = cfg;
    let json = obj(vec![("angular", Json::Arr(rows))]);
    write(out_dir, "angular.json", &json.render(), files)?;
    Ok(match invariant_issue {
        Some(msg) => ExperimentStatus::InvariantViolated(msg),
        None => ExperimentStatus::Ok,
    })
}

fn run_superexp(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let starts = resolve_starts(built, &cfg.orbit_starts)?;
    let opts = orbit_options(cfg, built);
    let orbit = iterate_orbit(&built.scene, starts[0], &opts)?;
    match superexp_certificate(&orbit) {
        Ok(cert) => {
            let json = obj(vec![
                (
                    "ratios",
                    Json::Arr(
                        cert.ratios
                            .iter()
                            .map(|(k, r)| {
                                obj(vec![("k", Json::Int(*k as i64)), ("ratio", Json::Num(*r))])
                            })
                            .collect(),
                    ),
                ),
                ("rho", Json::Num(cert.rho)),
                ("C", Json::Num(cert.c_const)),
                ("pass", Json::Bool(cert.pass)),
            ]);
            write(out_dir, "superexp.json", &json.render(), files)?;
            Ok(if cert.pass {
                ExperimentStatus::Ok
            } else {
                ExperimentStatus::InvariantViolated("super-exponential ratios out of band".into())
            })
        }
        Err(e) => {
            let json = obj(vec![("inconclusive", Json::Str(e.to_string()))]);
            write(out_dir, "superexp.json", &json.render(), files)?;
            Ok(ExperimentStatus::Skipped(format!("inconclusive: {e}")))
        }
    }
}

fn run_lyapunov(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    if built.scene.levels[0].anchors.is_empty() {
        return Ok(ExperimentStatus::Skipped("no tangency anchor".into()));
    }
    let starts = resolve_starts(built, &cfg.orbit_starts)?;
    let opts = OrbitOptions { log_alphas: None, ..orbit_options(cfg, built) };
    let orbit = iterate_orbit(&built.scene, starts[0], &opts)?;
    let rep = lyapunov_check(&built.scene, &orbit)?;
    let json = obj(vec![
        ("applicable", Json::Bool(rep.applicable)),
        ("d_prime", Json::Num(rep.d_prime)),
        ("d_second", Json::Num(rep.d_second)),
        ("monotone", Json::Bool(rep.monotone)),
        (
            "first_violation",
            rep.first_violation.map(|k| Json::Int(k as i64)).unwrap_or(Json::Null),
        ),
        ("strict", Json::Bool(rep.strict)),
    ]);
    write(out_dir, "lyapunov.json", &json.render(), files)?;
    Ok(if !rep.applicable {
        ExperimentStatus::Skipped("hypotheses (d'(p)=0, d''(p)>0) not satisfied".into())
    } else if rep.monotone {
        ExperimentStatus::Ok
    } else {
        ExperimentStatus::InvariantViolated(format!(
            "thickness increased at step {:?}",
            rep.first_violation
        ))
    })
}

fn run_limit_set(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let scene = &built.scene;
    let lvl0 = &scene.levels[0];
    if lvl0.anchors.is_empty() {
        return Ok(ExperimentStatus::Skipped("no tangency anchors".into()));
    }
    // Deterministic ensemble: evenly spread geodesic offsets around every
    // anchor of the first level.
    let per_anchor = cfg.ensemble_count.div_ceil(lvl0.anchors.len());
    let mut starts = Vec::new();
    for anchor in &lvl0.anchors {
        let frame = GeodesicFrame::new(anchor.t_on_c);
        for i in 0..per_anchor {
            let s0 = -cfg.ensemble_spread
                + 2.0 * cfg.ensemble_spread * i as f64 / (per_anchor - 1).max(1) as f64;
            starts.push(param_at_geodesic(&lvl0.c, &frame, s0)?);
        }
    }
    let steps = cfg.orbit_steps.min(scene.level_count() - 1);
    let sample = limit_set_sample(scene, &starts, steps, &orbit_options(cfg, built))?;
    let mut csv = String::from("x,y\n");
    for p in &sample.points {
        csv.push_str(&format!("{},{}\n", fmt_g17(p.x), fmt_g17(p.y)));
    }
    write(out_dir, "limit_set.csv", &csv, files)?;
    // Collapse statistics against the declared anchors.
    let m = lvl0.anchors.len();
    let mut worst = 0.0f64;
    let mut reached = vec![false; m];
    for p in &sample.points {
        let (i, d) = lvl0
            .anchors
            .iter()
            .enumerate()
            .map(|(i, a)| (i, a.point.dist(*p)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        worst = worst.max(d);
        reached[i] = true;
    }
    let json = obj(vec![
        ("branches", Json::Int(m as i64)),
        ("similarity_dimension", Json::Num(similarity_dimension(m))),
        ("points", Json::Int(sample.points.len() as i64)),
        ("failures", Json::Int(sample.failures.len() as i64)),
        ("max_anchor_distance", Json::Num(worst)),
        ("anchors_reached", Json::Int(reached.iter().filter(|r| **r).count() as i64)),
    ]);
    write(out_dir, "dimension.json", &json.render(), files)?;
    Ok(if reached.iter().all(|r| *r) && worst < 1e-6 {
        ExperimentStatus::Ok
    } else {
        ExperimentStatus::InvariantViolated(format!(
            "limit set did not collapse to the anchors (worst {worst})"
        ))
    })
}

fn run_gnp(
    cfg: &ScenarioConfig,
    built: &BuiltScenario,
    out_dir: &Path,
    files: &mut Vec<String>,
) -> Result<ExperimentStatus> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (k, lvl) in built.scene.levels.iter().enumerate() {
        let rep = check_gnp(&lvl.c, &lvl.omega, cfg.gnp_samples)?;
        all_pass &= rep.pass;
        rows.push(obj(vec![
            ("level", Json::Int(k as i64)),
            ("pass", Json::Bool(rep.pass)),
            ("samples", Json::Int(rep.samples as i64)),
            (
                "violations",
                Json::Arr(
                    rep.violations
                        .iter()
                        .map(|v| match v {
                            GnpViolation::DisconnectedRay { t, reentry_tau } => obj(vec![
                                ("kind", Json::Str("disconnected_ray".into())),
                                ("t", Json::Num(*t)),
                                ("reentry_tau", Json::Num(*reentry_tau)),
                            ]),
                            GnpViolation::RayFailure { t, reason } => obj(vec![
                                ("kind", Json::Str("ray_failure".into())),
                                ("t", Json::Num(*t)),
                                ("reason", Json::Str(reason.clone())),
                            ]),
                            GnpViolation::InwardMiss { t_omega } => obj(vec![
                                ("kind", Json::Str("inward_miss".into())),
                                ("t_omega", Json::Num(*t_omega)),
                            ]),
                        })
                        .collect(),
                ),
            ),
        ]));
    }
    let json = obj(vec![("levels", Json::Arr(rows)), ("pass", Json::Bool(all_pass))]);
    write(out_dir, "gnp.json", &json.render(), files)?;
    // Violations are data, not failures: the punctured counterexample is
    // supposed to report them.
    Ok(ExperimentStatus::Ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn tmpdir(tag: &str) -> std::path::PathBuf {
        let d = std::env::temp_dir().join(format!("tdyn-test-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn concentric_run_produces_files_and_skips_fit() {
        let cfg = parse_config(
            r#"{"scenario": "concentric", "experiments": ["orbit", "fit", "gnp"],
                "orbit": {"t0": [0.3], "steps": 10}}"#,
        )
        .unwrap();
        let dir = tmpdir("concentric");
        let rep = run_scenario(&cfg, &dir).unwrap();
        assert_eq!(rep.exit_code(), 0);
        assert!(dir.join("orbit.csv").exists());
        assert!(dir.join("report.json").exists());
        let fit_rec = rep
            .records
            .iter()
            .find(|r| r.experiment == Experiment::Fit)
            .unwrap();
        assert!(matches!(fit_rec.status, ExperimentStatus::Skipped(_)));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn runs_are_byte_reproducible() {
        let cfg = parse_config(
            r#"{"scenario": "eccentric_circles", "experiments": ["orbit", "gnp"],
                "orbit": {"t0": [0.7], "steps": 6}}"#,
        )
        .unwrap();
        let d1 = tmpdir("repro1");
        let d2 = tmpdir("repro2");
        run_scenario(&cfg, &d1).unwrap();
        run_scenario(&cfg, &d2).unwrap();
        for name in ["orbit.csv", "gnp.json", "report.json"] {
            let a = std::fs::read(d1.join(name)).unwrap();
            let b = std::fs::read(d2.join(name)).unwrap();
            assert_eq!(a, b, "{name} not byte-identical");
        }
        std::fs::remove_dir_all(&d1).ok();
        std::fs::remove_dir_all(&d2).ok();
    }
}
