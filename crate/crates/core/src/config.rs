//! Scenario configuration: a restricted JSON profile (objects, arrays,
//! numbers, strings, booleans; no comments) with strict schema validation
//! that reports every violation, not just the first.

use serde_json::Value;

use crate::error::Error;
use crate::geom::{BoundaryCurve, Point};
use crate::scenario::TangentCirclesVariant;
use crate::transport::DomainBoundary;

/// Parsed and validated scenario configuration with defaults filled.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSpec,
    pub orbit_starts: Vec<OrbitStart>,
    pub orbit_steps: usize,
    pub log_switch_threshold: f64,
    /// Coarse fit scale (default 1e-2); fits never exceed the scenario's
    /// calibrated reliable scale.
    pub fit_sigma: f64,
    pub fit_scales: usize,
    pub experiments: Vec<Experiment>,
    pub ensemble_count: usize,
    pub ensemble_spread: f64,
    pub gnp_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrbitStart {
    /// Geodesic offset from the first declared anchor.
    S0(f64),
    /// Raw boundary parameter.
    T0(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Orbit,
    Fit,
    Angular,
    Superexp,
    Lyapunov,
    LimitSet,
    Gnp,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Orbit => "orbit",
            Experiment::Fit => "fit",
            Experiment::Angular => "angular",
            Experiment::Superexp => "superexp",
            Experiment::Lyapunov => "lyapunov",
            Experiment::LimitSet => "limit_set",
            Experiment::Gnp => "gnp",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "orbit" => Experiment::Orbit,
            "fit" => Experiment::Fit,
            "angular" => Experiment::Angular,
            "superexp" => Experiment::Superexp,
            "lyapunov" => Experiment::Lyapunov,
            "limit_set" => Experiment::LimitSet,
            "gnp" => Experiment::Gnp,
            _ => return None,
        })
    }

    pub fn all() -> Vec<Experiment> {
        vec![
            Experiment::Orbit,
            Experiment::Fit,
            Experiment::Angular,
            Experiment::Superexp,
            Experiment::Lyapunov,
            Experiment::LimitSet,
            Experiment::Gnp,
        ]
    }
}

/// Which named scene to build, with its shape parameters.
#[derive(Debug, Clone)]
pub enum ScenarioSpec {
    Concentric { r_body: f64, r_domain: f64 },
    EccentricCircles { offset: f64, r_domain: f64 },
    TangentCircles { levels: usize, variant: TangentCirclesVariant },
    NestedEllipses { levels: usize },
    Stadium { r0: f64, l: f64, eps: f64, lambda: f64 },
    RoundedTriangle { levels: usize, height: f64, rc: f64, eps: f64, lambda: f64 },
    Custom { levels: Vec<(BoundaryCurve, DomainBoundary)> },
}

impl ScenarioSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioSpec::Concentric { .. } => "concentric",
            ScenarioSpec::EccentricCircles { .. } => "eccentric_circles",
            ScenarioSpec::TangentCircles { .. } => "tangent_circles",
            ScenarioSpec::NestedEllipses { .. } => "nested_ellipses",
            ScenarioSpec::Stadium { .. } => "stadium",
            ScenarioSpec::RoundedTriangle { .. } => "rounded_triangle",
            ScenarioSpec::Custom { .. } => "custom",
        }
    }
}

/// Configuration failure: either a syntax error with position, or the full
/// list of semantic violations.
#[derive(Debug, Clone)]
pub enum ConfigError {
    Syntax { line: usize, column: usize, message: String },
    Violations(Vec<String>),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            ConfigError::Violations(v) => {
                writeln!(f, "{} config violation(s):", v.len())?;
                for item in v {
                    writeln!(f, "  - {item}")?;
                }
                Ok(())
            }
        }
    }
}

struct Checker<'a> {
    violations: Vec<String>,
    root: &'a Value,
}

impl<'a> Checker<'a> {
    fn reject_unknown(&mut self, obj: &Value, path: &str, allowed: &[&str]) {
        if let Value::Object(map) = obj {
            for key in map.keys() {
                if !allowed.contains(&key.as_str()) {
                    self.violations.push(format!("{path}: unknown key \"{key}\""));
                }
            }
        }
    }

    fn number(&mut self, v: Option<&Value>, path: &str, default: f64) -> f64 {
        match v {
            None => default,
            Some(Value::Number(n)) => n.as_f64().unwrap_or(default),
            Some(other) => {
                self.violations.push(format!("{path}: expected a number, got {other}"));
                default
            }
        }
    }

    fn integer(&mut self, v: Option<&Value>, path: &str, default: i64) -> i64 {
        match v {
            None => default,
            Some(Value::Number(n)) if n.is_i64() || n.is_u64() => n.as_i64().unwrap_or(default),
            Some(other) => {
                self.violations.push(format!("{path}: expected an integer, got {other}"));
                default
            }
        }
    }

    fn string(&mut self, v: Option<&Value>, path: &str, default: &str) -> String {
        match v {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(other) => {
                self.violations.push(format!("{path}: expected a string, got {other}"));
                default.to_string()
            }
        }
    }

    fn require(&mut self, cond: bool, msg: String) {
        if !cond {
            self.violations.push(msg);
        }
    }

    fn get<'b>(&self, v: &'b Value, key: &str) -> Option<&'b Value> {
        v.get(key)
    }

    fn root_get(&self, key: &str) -> Option<&'a Value> {
        self.root.get(key)
    }
}

/// Shape fragment: {"kind": ..., "center": [x, y], ...per-kind parameters}.
pub fn make_curve(v: &Value, path: &str, violations: &mut Vec<String>) -> Option<BoundaryCurve> {
    let Some(obj) = v.as_object() else {
        violations.push(format!("{path}: expected an object"));
        return None;
    };
    let kind = obj.get("kind").and_then(|k| k.as_str()).unwrap_or_else(|| {
        violations.push(format!("{path}.kind: required string"));
        ""
    });
    let center = match obj.get("center") {
        Some(Value::Array(a)) if a.len() == 2 => Point::new(
            a[0].as_f64().unwrap_or(0.0),
            a[1].as_f64().unwrap_or(0.0),
        ),
        None => Point::new(0.0, 0.0),
        Some(other) => {
            violations.push(format!("{path}.center: expected [x, y], got {other}"));
            Point::new(0.0, 0.0)
        }
    };
    let num = |key: &str, default: f64| obj.get(key).and_then(|x| x.as_f64()).unwrap_or(default);
    let allowed: &[&str] = match kind {
        "circle" => &["kind", "center", "r"],
        "ellipse" => &["kind", "center", "a", "b"],
        "smoothed_stadium" => &["kind", "center", "r", "l", "eps"],
        "rounded_triangle" => &["kind", "center", "height", "rc", "eps"],
        _ => {
            violations.push(format!("{path}.kind: unknown shape \"{kind}\""));
            return None;
        }
    };
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            violations.push(format!("{path}: unknown key \"{key}\""));
        }
    }
    let built = match kind {
        "circle" => BoundaryCurve::circle(center, num("r", 1.0)),
        "ellipse" => BoundaryCurve::ellipse(center, num("a", 2.0), num("b", 1.0)),
        "smoothed_stadium" => {
            BoundaryCurve::smoothed_stadium(center, num("r", 1.0), num("l", 2.0), num("eps", 0.05))
        }
        "rounded_triangle" => BoundaryCurve::rounded_triangle(
            center,
            num("height", 3.0),
            num("rc", 0.5),
            num("eps", 0.02),
        ),
        _ => unreachable!(),
    };
    match built {
        Ok(c) => Some(c),
        Err(e) => {
            violations.push(format!("{path}: {e}"));
            None
        }
    }
}

fn make_domain(v: &Value, path: &str, violations: &mut Vec<String>) -> Option<DomainBoundary> {
    let Some(obj) = v.as_object() else {
        violations.push(format!("{path}: expected an object"));
        return None;
    };
    let mut shape = obj.clone();
    let hole = shape.remove("hole");
    let curve = make_curve(&Value::Object(shape), path, violations)?;
    match hole {
        None => Some(DomainBoundary::convex(curve)),
        Some(h) => {
            let hc = match h.get("center") {
                Some(Value::Array(a)) if a.len() == 2 => {
                    Point::new(a[0].as_f64().unwrap_or(0.0), a[1].as_f64().unwrap_or(0.0))
                }
                _ => {
                    violations.push(format!("{path}.hole.center: expected [x, y]"));
                    Point::new(0.0, 0.0)
                }
            };
            let hr = h.get("r").and_then(|x| x.as_f64()).unwrap_or(0.0);
            match DomainBoundary::punctured(curve, hc, hr) {
                Ok(d) => Some(d),
                Err(e) => {
                    violations.push(format!("{path}.hole: {e}"));
                    None
                }
            }
        }
    }
}

/// Parse and validate a configuration document, filling defaults
/// (fit sigma 1e-2, log-switch threshold 1e-8, 128 GNP samples).
pub fn parse_config(text: &str) -> std::result::Result<ScenarioConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut ck = Checker { violations: Vec::new(), root: &value };
    ck.reject_unknown(
        &value,
        "$",
        &[
            "scenario", "levels", "lambda", "params", "levels_spec", "orbit", "fit",
            "experiments", "ensemble", "gnp_samples", "seed",
        ],
    );
    let scenario_name = ck.string(ck.root_get("scenario"), "$.scenario", "");
    let levels = ck.integer(ck.root_get("levels"), "$.levels", -1);
    let lambda = ck.number(ck.root_get("lambda"), "$.lambda", 0.5);
    ck.require(
        lambda > 0.0 && lambda < 1.0,
        format!("$.lambda: 0 < lambda < 1 required, got {lambda}"),
    );
    let params = ck.root_get("params").cloned().unwrap_or(Value::Object(Default::default()));

    let scenario = match scenario_name.as_str() {
        "concentric" => {
            ck.reject_unknown(&params, "$.params", &["r_body", "r_domain"]);
            let r_body = ck.number(ck.get(&params, "r_body"), "$.params.r_body", 1.0);
            let r_domain = ck.number(ck.get(&params, "r_domain"), "$.params.r_domain", 2.0);
            ck.require(r_body > 0.0 && r_domain > r_body, "$.params: need 0 < r_body < r_domain".into());
            Some(ScenarioSpec::Concentric { r_body, r_domain })
        }
        "eccentric_circles" => {
            ck.reject_unknown(&params, "$.params", &["offset", "r_domain"]);
            let offset = ck.number(ck.get(&params, "offset"), "$.params.offset", 0.1);
            let r_domain = ck.number(ck.get(&params, "r_domain"), "$.params.r_domain", 2.0);
            ck.require(
                r_domain > 1.0 + offset.abs(),
                "$.params: domain must contain the unit body".into(),
            );
            Some(ScenarioSpec::EccentricCircles { offset, r_domain })
        }
        "tangent_circles" => {
            ck.reject_unknown(&params, "$.params", &["variant"]);
            let variant = match ck.string(ck.get(&params, "variant"), "$.params.variant", "quadratic").as_str() {
                "quadratic" => TangentCirclesVariant::Quadratic,
                "lyapunov" => TangentCirclesVariant::Lyapunov,
                other => {
                    ck.violations.push(format!(
                        "$.params.variant: expected \"quadratic\" or \"lyapunov\", got \"{other}\""
                    ));
                    TangentCirclesVariant::Quadratic
                }
            };
            let lv = if levels < 0 { 8 } else { levels as usize };
            ck.require(lv >= 2, format!("$.levels: need >= 2, got {lv}"));
            Some(ScenarioSpec::TangentCircles { levels: lv.max(2), variant })
        }
        "nested_ellipses" => {
            ck.reject_unknown(&params, "$.params", &[]);
            let lv = if levels < 0 { 5 } else { levels as usize };
            ck.require(lv >= 2, format!("$.levels: need >= 2, got {lv}"));
            Some(ScenarioSpec::NestedEllipses { levels: lv.max(2) })
        }
        "stadium" => {
            ck.reject_unknown(&params, "$.params", &["r0", "l", "eps"]);
            let r0 = ck.number(ck.get(&params, "r0"), "$.params.r0", 1.0);
            let l = ck.number(ck.get(&params, "l"), "$.params.l", 2.0);
            let eps = ck.number(ck.get(&params, "eps"), "$.params.eps", 0.05);
            Some(ScenarioSpec::Stadium { r0, l, eps, lambda })
        }
        "rounded_triangle" => {
            ck.reject_unknown(&params, "$.params", &["height", "rc", "eps"]);
            let height = ck.number(ck.get(&params, "height"), "$.params.height", 3.0);
            let rc = ck.number(ck.get(&params, "rc"), "$.params.rc", 0.5);
            let eps = ck.number(ck.get(&params, "eps"), "$.params.eps", 0.02);
            let lv = if levels < 0 { 8 } else { levels as usize };
            ck.require(lv >= 2, format!("$.levels: need >= 2, got {lv}"));
            Some(ScenarioSpec::RoundedTriangle { levels: lv.max(2), height, rc, eps, lambda })
        }
        "custom" => {
            let mut built = Vec::new();
            match ck.root_get("levels_spec") {
                Some(Value::Array(items)) if !items.is_empty() => {
                    for (i, item) in items.iter().enumerate() {
                        let path = format!("$.levels_spec[{i}]");
                        if let Some(o) = item.as_object() {
                            for key in o.keys() {
                                if !["c", "omega"].contains(&key.as_str()) {
                                    ck.violations.push(format!("{path}: unknown key \"{key}\""));
                                }
                            }
                        }
                        let c = item
                            .get("c")
                            .and_then(|v| make_curve(v, &format!("{path}.c"), &mut ck.violations));
                        let om = item
                            .get("omega")
                            .and_then(|v| make_domain(v, &format!("{path}.omega"), &mut ck.violations));
                        if let (Some(c), Some(om)) = (c, om) {
                            built.push((c, om));
                        } else if item.get("c").is_none() || item.get("omega").is_none() {
                            ck.violations.push(format!("{path}: needs both \"c\" and \"omega\""));
                        }
                    }
                }
                _ => ck
                    .violations
                    .push("$.levels_spec: custom scenario needs a nonempty level array".into()),
            }
            Some(ScenarioSpec::Custom { levels: built })
        }
        "" => {
            ck.violations.push("$.scenario: required".into());
            None
        }
        other => {
            ck.violations.push(format!("$.scenario: unknown scenario \"{other}\""));
            None
        }
    };

    // Orbit settings.
    let orbit = ck.root_get("orbit").cloned().unwrap_or(Value::Object(Default::default()));
    ck.reject_unknown(&orbit, "$.orbit", &["s0", "t0", "steps", "log_switch_threshold"]);
    let mut orbit_starts = Vec::new();
    match (orbit.get("s0"), orbit.get("t0")) {
        (Some(_), Some(_)) => ck
            .violations
            .push("$.orbit: give either s0 or t0, not both".into()),
        (Some(Value::Array(a)), None) => {
            for x in a {
                match x.as_f64() {
                    Some(v) => orbit_starts.push(OrbitStart::S0(v)),
                    None => ck.violations.push("$.orbit.s0: numbers required".into()),
                }
            }
        }
        (None, Some(Value::Array(a))) => {
            for x in a {
                match x.as_f64() {
                    Some(v) => orbit_starts.push(OrbitStart::T0(v)),
                    None => ck.violations.push("$.orbit.t0: numbers required".into()),
                }
            }
        }
        (None, None) => orbit_starts.push(OrbitStart::S0(0.05)),
        _ => ck.violations.push("$.orbit.s0/t0: expected arrays of numbers".into()),
    }
    let orbit_steps = ck.integer(orbit.get("steps"), "$.orbit.steps", 7);
    ck.require(orbit_steps >= 1, format!("$.orbit.steps: need >= 1, got {orbit_steps}"));
    let log_switch = ck.number(orbit.get("log_switch_threshold"), "$.orbit.log_switch_threshold", 1e-8);
    ck.require(log_switch > 0.0, "$.orbit.log_switch_threshold: must be positive".into());

    // Fit settings.
    let fit = ck.root_get("fit").cloned().unwrap_or(Value::Object(Default::default()));
    ck.reject_unknown(&fit, "$.fit", &["sigma", "scales"]);
    let fit_sigma = ck.number(fit.get("sigma"), "$.fit.sigma", 1e-2);
    ck.require(fit_sigma > 0.0, "$.fit.sigma: must be positive".into());
    let fit_scales = ck.integer(fit.get("scales"), "$.fit.scales", 5);
    ck.require(fit_scales >= 2, "$.fit.scales: need >= 2".into());

    // Experiments.
    let mut experiments = Vec::new();
    match ck.root_get("experiments") {
        None => experiments = Experiment::all(),
        Some(Value::Array(items)) => {
            for item in items {
                match item.as_str().and_then(Experiment::from_name) {
                    Some(e) => {
                        if !experiments.contains(&e) {
                            experiments.push(e);
                        }
                    }
                    None => ck
                        .violations
                        .push(format!("$.experiments: unknown experiment {item}")),
                }
            }
        }
        Some(other) => ck
            .violations
            .push(format!("$.experiments: expected an array, got {other}")),
    }

    // Ensemble.
    let ens = ck.root_get("ensemble").cloned().unwrap_or(Value::Object(Default::default()));
    ck.reject_unknown(&ens, "$.ensemble", &["count", "spread"]);
    let ensemble_count = ck.integer(ens.get("count"), "$.ensemble.count", 64);
    ck.require(ensemble_count >= 64, "$.ensemble.count: need >= 64".into());
    let ensemble_spread = ck.number(ens.get("spread"), "$.ensemble.spread", 0.02);
    ck.require(ensemble_spread > 0.0, "$.ensemble.spread: must be positive".into());

    let gnp_samples = ck.integer(ck.root_get("gnp_samples"), "$.gnp_samples", 128);
    ck.require(gnp_samples >= 16, "$.gnp_samples: need >= 16".into());
    let seed = ck.integer(ck.root_get("seed"), "$.seed", 42);

    if !ck.violations.is_empty() {
        return Err(ConfigError::Violations(ck.violations));
    }
    Ok(ScenarioConfig {
        scenario: scenario.expect("validated"),
        orbit_starts,
        orbit_steps: orbit_steps as usize,
        log_switch_threshold: log_switch,
        fit_sigma,
        fit_scales: fit_scales as usize,
        experiments,
        ensemble_count: ensemble_count as usize,
        ensemble_spread,
        gnp_samples: gnp_samples as usize,
        seed: seed as u64,
    })
}

impl From<ConfigError> for Error {
    fn from(e: ConfigError) -> Self {
        Error::Config(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(r#"{"scenario": "tangent_circles"}"#).unwrap();
        assert_eq!(cfg.fit_sigma, 1e-2);
        assert_eq!(cfg.log_switch_threshold, 1e-8);
        assert_eq!(cfg.gnp_samples, 128);
        assert_eq!(cfg.experiments.len(), 7);
        assert!(matches!(cfg.scenario, ScenarioSpec::TangentCircles { levels: 8, .. }));
    }

    #[test]
    fn lambda_range_is_enforced() {
        let err = parse_config(r#"{"scenario": "stadium", "lambda": 1.5}"#).unwrap_err();
        match err {
            ConfigError::Violations(v) => {
                assert!(v.iter().any(|s| s.contains("0 < lambda < 1")), "{v:?}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_names() {
        let err =
            parse_config(r#"{"scenario": "concentric", "alpha_override": 3}"#).unwrap_err();
        match err {
            ConfigError::Violations(v) => {
                assert!(v.iter().any(|s| s.contains("alpha_override")), "{v:?}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn all_violations_are_collected() {
        let err = parse_config(
            r#"{"scenario": "bogus", "lambda": 2.0, "orbit": {"steps": 0}, "junk": 1}"#,
        )
        .unwrap_err();
        match err {
            ConfigError::Violations(v) => {
                assert!(v.len() >= 4, "{v:?}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_config("{\n  \"scenario\": \"concentric\",,\n}").unwrap_err();
        match err {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn custom_scenario_builds_shapes() {
        let cfg = parse_config(
            r#"{
                "scenario": "custom",
                "levels_spec": [
                    {"c": {"kind": "circle", "center": [0, 0], "r": 1},
                     "omega": {"kind": "circle", "center": [0, 0], "r": 2}}
                ]
            }"#,
        )
        .unwrap();
        match cfg.scenario {
            ScenarioSpec::Custom { levels } => assert_eq!(levels.len(), 1),
            other => panic!("{}", other.name()),
        }
    }

    #[test]
    fn custom_scenario_with_punctured_domain() {
        let cfg = parse_config(
            r#"{
                "scenario": "custom",
                "levels_spec": [
                    {"c": {"kind": "circle", "r": 1},
                     "omega": {"kind": "circle", "r": 2, "hole": {"center": [1.5, 0], "r": 0.3}}}
                ],
                "experiments": ["gnp"]
            }"#,
        )
        .unwrap();
        match &cfg.scenario {
            ScenarioSpec::Custom { levels } => assert!(levels[0].1.is_punctured()),
            other => panic!("{}", other.name()),
        }
    }

    #[test]
    fn invalid_shape_parameters_are_reported() {
        let err = parse_config(
            r#"{
                "scenario": "custom",
                "levels_spec": [
                    {"c": {"kind": "circle", "r": -1},
                     "omega": {"kind": "circle", "r": 2}}
                ]
            }"#,
        )
        .unwrap_err();
        match err {
            ConfigError::Violations(v) => assert!(v.iter().any(|s| s.contains("radius"))),
            other => panic!("{other}"),
        }
    }
}
