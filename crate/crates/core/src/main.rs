//! Command-line interface: configuration-driven scenario runs plus direct
//! access to the fit, IFS, toy-model, Ford-table and GNP tooling.
//!
//! Exit codes: 0 success, 1 scientific invariant violation, 2 usage or
//! configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tangency_dynamics::config::{parse_config, ConfigError};
use tangency_dynamics::dynamics::fmt_g17;
use tangency_dynamics::logifs::{
    box_counting_dimension, chaos_game, default_octaves, similarity_dimension, LogIfs,
};
use tangency_dynamics::numtheory::{convergents, curvature_ratio_table, CfInput};
use tangency_dynamics::quadmodel::{toy_orbit, ToyConfig};
use tangency_dynamics::report::{obj, Json};
use tangency_dynamics::runner::run_scenario;
use tangency_dynamics::scenario::{self, TangentCirclesVariant};
use tangency_dynamics::tangency::{alpha_beta_formula, fit_local_quadratic, populate_tangency};
use tangency_dynamics::transport::{check_gnp, DomainBoundary};
use tangency_dynamics::{BoundaryCurve, Point};

#[derive(Parser)]
#[command(name = "tdyn", version, about = "Tangency dynamics of nested convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Configuration-driven scenario runs.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Tangency detection and local quadratic fits.
    Tangency {
        #[command(subcommand)]
        action: TangencyAction,
    },
    /// Logarithmic IFS sampling and dimension estimation.
    Ifs {
        #[command(subcommand)]
        action: IfsAction,
    },
    /// The solvable quadratic branching model.
    Toy {
        #[command(subcommand)]
        action: ToyAction,
    },
    /// Continued fractions and Ford circles.
    Ford {
        #[command(subcommand)]
        action: FordAction,
    },
    /// Geometric normal property checks.
    Gnp {
        #[command(subcommand)]
        action: GnpAction,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Run the experiments requested by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TangencyAction {
    /// Fit the transition operator at the declared anchors of a scenario.
    Fit(TangencyFitArgs),
}

#[derive(Args)]
struct TangencyFitArgs {
    /// Named scenario (tangent_circles, nested_ellipses, stadium, rounded_triangle).
    #[arg(long)]
    scenario: String,
    /// Explicit coarse fit scale; defaults to the calibrated reliable scale.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 5)]
    scales: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum IfsAction {
    /// Chaos-game sampling with dimension estimates.
    Sample(IfsSampleArgs),
}

#[derive(Args)]
struct IfsSampleArgs {
    /// Branch count (fixed points default to log alpha_i).
    #[arg(long)]
    m: Option<usize>,
    /// Branch coefficients alpha_i (comma separated).
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    burn_in: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ToyAction {
    /// Iterate the quadratic recurrence and verify the closed form and bound.
    Verify(ToyVerifyArgs),
}

#[derive(Args)]
struct ToyVerifyArgs {
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    #[arg(long)]
    r: f64,
    #[arg(long)]
    s0: f64,
    /// 1-based branch itinerary, cycled (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    itinerary: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    steps: usize,
}

#[derive(Subcommand)]
enum FordAction {
    /// Convergent and curvature-ratio table.
    Table(FordTableArgs),
}

#[derive(Args)]
struct FordTableArgs {
    /// Input value: a decimal in (0,1), "golden", or "sqrt2m1".
    #[arg(long)]
    x: String,
    #[arg(long, default_value_t = 20)]
    n: usize,
}

#[derive(Subcommand)]
enum GnpAction {
    /// Check the geometric normal property of a named scenario or the
    /// punctured counterexample.
    Check(GnpCheckArgs),
}

#[derive(Args)]
struct GnpCheckArgs {
    #[arg(long, conflicts_with = "counterexample")]
    scenario: Option<String>,
    /// Run the punctured-domain counterexample instead.
    #[arg(long)]
    counterexample: bool,
    #[arg(long, default_value_t = 256)]
    samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Scenario { action: ScenarioAction::Run { config, out } } => {
            let text = std::fs::read_to_string(&config)?;
            let cfg = match parse_config(&text) {
                Ok(c) => c,
                Err(e @ ConfigError::Syntax { .. }) | Err(e @ ConfigError::Violations(_)) => {
                    eprintln!("{e}");
                    return Ok(ExitCode::from(2));
                }
            };
            let started = std::time::Instant::now();
            let report = run_scenario(&cfg, &out)?;
            for rec in &report.records {
                println!(
                    "{:10} {}",
                    rec.experiment.name(),
                    match &rec.status {
                        tangency_dynamics::runner::ExperimentStatus::Ok => "ok".to_string(),
                        s => format!("{s:?}"),
                    }
                );
            }
            println!("wall time: {} ms", started.elapsed().as_millis());
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::Tangency { action: TangencyAction::Fit(args) } => tangency_fit(args),
        Command::Ifs { action: IfsAction::Sample(args) } => ifs_sample(args),
        Command::Toy { action: ToyAction::Verify(args) } => toy_verify(args),
        Command::Ford { action: FordAction::Table(args) } => ford_table(args),
        Command::Gnp { action: GnpAction::Check(args) } => gnp_check(args),
    }
}

fn build_named(name: &str) -> Result<scenario::BuiltScenario, Box<dyn std::error::Error>> {
    Ok(match name {
        "concentric" => scenario::concentric(1.0, 2.0)?,
        "eccentric_circles" => scenario::eccentric_circles(0.1, 2.0)?,
        "tangent_circles" => scenario::tangent_circles(8, TangentCirclesVariant::Quadratic)?,
        "tangent_circles_lyapunov" => {
            scenario::tangent_circles(8, TangentCirclesVariant::Lyapunov)?
        }
        "nested_ellipses" => scenario::nested_ellipses(5)?,
        "stadium" => scenario::stadium(1.0, 2.0, 0.05)?,
        "rounded_triangle" => scenario::rounded_triangle(8, 3.0, 0.5, 0.02)?,
        other => return Err(format!("unknown scenario \"{other}\"").into()),
    })
}

fn tangency_fit(args: TangencyFitArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let built = build_named(&args.scenario)?;
    let lvl0 = &built.scene.levels[0];
    if lvl0.anchors.is_empty() {
        println!("no tangency found; fit skipped");
        return Ok(ExitCode::SUCCESS);
    }
    let sigma = args.sigma.unwrap_or_else(|| built.fit_sigma.first().copied().unwrap_or(1e-3));
    let mut rows = Vec::new();
    let mut ok = true;
    for anchor in &lvl0.anchors {
        let fit = fit_local_quadratic(
            &built.scene,
            0,
            anchor.t_on_c,
            anchor.t_on_next,
            sigma,
            args.scales,
        )?;
        let tp = populate_tangency(&built.scene, 0, anchor.t_on_c, anchor.t_on_next)?;
        let (af, bf) = alpha_beta_formula(&tp)?;
        ok &= fit.g1.abs() <= 1e-6 && fit.scale_stable;
        println!(
            "anchor t={:.6}: g1 = {}, alpha_fit = {}, alpha_formula = {}, beta_formula = {}, deviation = {:.6}",
            anchor.t_on_c,
            fmt_g17(fit.g1),
            fmt_g17(fit.alpha),
            fmt_g17(af),
            fmt_g17(bf),
            ((fit.alpha - af) / af).abs()
        );
        rows.push((anchor.t_on_c, fit, tp, af, bf));
    }
    if let Some(dir) = args.out {
        std::fs::create_dir_all(&dir)?;
        let json = obj(vec![
            ("sigma", Json::Num(sigma)),
            (
                "anchors",
                Json::Arr(
                    rows.iter()
                        .map(|(t, fit, tp, af, bf)| {
                            obj(vec![
                                ("t", Json::Num(*t)),
                                ("g1_fit", Json::Num(fit.g1)),
                                ("alpha_fit", Json::Num(fit.alpha)),
                                ("alpha_formula", Json::Num(*af)),
                                ("beta_formula", Json::Num(*bf)),
                                ("kappa_k", Json::Num(tp.kappa_k)),
                                ("kappa_k1", Json::Num(tp.kappa_next)),
                                ("d", Json::Num(tp.d)),
                                ("R_measured", Json::Num(tp.r_measured)),
                                ("R_paper_relation", Json::Num(tp.r_paper_relation)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ]);
        std::fs::write(dir.join("fit.json"), json.render())?;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn ifs_sample(args: IfsSampleArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let alphas = if args.alphas.is_empty() {
        match args.m {
            Some(m) if m >= 1 => (0..m).map(|i| (i as f64 + 1.0).exp()).collect(),
            _ => return Err("give --alphas or --m".into()),
        }
    } else {
        args.alphas.clone()
    };
    if let Some(m) = args.m {
        if m != alphas.len() {
            return Err(format!("--m {} disagrees with {} alphas", m, alphas.len()).into());
        }
    }
    let ifs = LogIfs::from_alphas(&alphas, args.ratio)?;
    let sample = chaos_game(&ifs, args.n, args.seed, args.burn_in)?;
    std::fs::create_dir_all(&args.out)?;
    let mut csv = String::new();
    for u in &sample.points {
        csv.push_str(&fmt_g17(*u));
        csv.push('\n');
    }
    std::fs::write(args.out.join("points.csv"), csv)?;
    let (lo, hi) = default_octaves(sample.points.len());
    let sim = similarity_dimension(ifs.branch_count());
    let est = box_counting_dimension(&sample.points, lo, hi, sim)?;
    let json = obj(vec![
        ("similarity", Json::Num(sim)),
        ("box", Json::Num(est.box_dim)),
        ("stderr", Json::Num(est.stderr)),
        (
            "scales",
            Json::Arr(
                est.scales
                    .iter()
                    .map(|(a, b)| Json::Arr(vec![Json::Num(*a), Json::Num(*b)]))
                    .collect(),
            ),
        ),
        ("non_paper_ratio", Json::Bool(ifs.non_paper_ratio())),
    ]);
    std::fs::write(args.out.join("dimension.json"), json.render())?;
    println!(
        "m = {}, similarity = {}, box = {} +- {}",
        ifs.branch_count(),
        fmt_g17(sim),
        fmt_g17(est.box_dim),
        fmt_g17(est.stderr)
    );
    Ok(ExitCode::SUCCESS)
}

fn toy_verify(args: ToyVerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let itinerary: Vec<usize> = args
        .itinerary
        .iter()
        .map(|&i| i.checked_sub(1).ok_or("itinerary indices are 1-based"))
        .collect::<Result<_, _>>()?;
    let cfg = ToyConfig { alphas: args.alphas, r: args.r, s0: args.s0, itinerary };
    let orbit = toy_orbit(&cfg, args.steps)?;
    println!("k,i_k,s_k,u_k,bound_k,closed_form_k");
    for st in &orbit.steps {
        let branch =
            if st.branch == usize::MAX { String::new() } else { (st.branch + 1).to_string() };
        println!(
            "{},{},{},{},{},{}",
            st.k,
            branch,
            fmt_g17(st.s),
            if st.u.is_finite() { fmt_g17(st.u) } else { "inf".into() },
            fmt_g17(st.bound),
            fmt_g17(st.closed_form)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn ford_table(args: FordTableArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let input = match args.x.as_str() {
        "golden" => CfInput::Golden,
        "sqrt2m1" => CfInput::Sqrt2MinusOne,
        other => match parse_decimal(other) {
            Some(rat) => rat,
            None => return Err(format!("cannot parse --x {other}").into()),
        },
    };
    let table = convergents(input, args.n)?;
    let ratios = curvature_ratio_table(input, args.n)?;
    println!("k,a_k,p_k,q_k,kappa_k,ratio,err,err_times_q2");
    for row in &table.rows {
        let ratio = ratios
            .iter()
            .find(|r| r.k == row.k)
            .map(|r| fmt_g17(r.kappa_ratio))
            .unwrap_or_default();
        println!(
            "{},{},{},{},{},{},{},{}",
            row.k,
            row.a,
            row.p,
            row.q,
            fmt_g17(row.kappa),
            ratio,
            fmt_g17(row.err),
            fmt_g17(row.err * row.q as f64 * row.q as f64)
        );
    }
    if table.terminated {
        println!("# expansion terminated (rational input)");
    }
    if table.unreliable_stop {
        println!("# stopped: float digits became unreliable");
    }
    if table.truncated_overflow {
        println!("# stopped: 64-bit overflow guard");
    }
    Ok(ExitCode::SUCCESS)
}

/// Exact decimal in (0, 1): "0.375" becomes 375/1000.
fn parse_decimal(text: &str) -> Option<CfInput> {
    let t = text.strip_prefix("0.")?;
    if t.is_empty() || t.len() > 17 || !t.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let num: i64 = t.parse().ok()?;
    let den = 10i64.checked_pow(t.len() as u32)?;
    Some(CfInput::Rational { num, den })
}

fn gnp_check(args: GnpCheckArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if args.counterexample {
        let c = BoundaryCurve::circle(Point::new(0.0, 0.0), 1.0)?;
        let outer = BoundaryCurve::circle(Point::new(0.0, 0.0), 2.0)?;
        let om = DomainBoundary::punctured(outer, Point::new(1.5, 0.0), 0.3)?;
        let rep = check_gnp(&c, &om, args.samples)?;
        println!(
            "punctured counterexample: pass = {}, violations = {}",
            rep.pass,
            rep.violations.len()
        );
        for v in rep.violations.iter().take(4) {
            println!("  {v:?}");
        }
        return Ok(ExitCode::SUCCESS);
    }
    let name = args.scenario.ok_or("give --scenario or --counterexample")?;
    let built = build_named(&name)?;
    let mut all = true;
    for (k, lvl) in built.scene.levels.iter().enumerate() {
        let rep = check_gnp(&lvl.c, &lvl.omega, args.samples)?;
        println!("level {k}: pass = {} ({} violations)", rep.pass, rep.violations.len());
        all &= rep.pass;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
