//! Command-line front end: single-point analysis, cost-grid sweeps,
//! threshold curves, dynamics runs and verification campaigns.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use transparency_game::analysis::AnalysisError;
use transparency_game::equilibrium::{solve_opaque, solve_transparent};
use transparency_game::format::fmt_sig;
use transparency_game::model::{validate_params, ModelParams, RawParams, Scenario};
use transparency_game::report::{
    analyze, run_sweep, sweep_csv, threshold_curve, thresholds_csv, validate_base, SweepError,
    SweepSpec, VaryParam,
};
use transparency_game::sampling::sample_valid;
use transparency_game::verify::{best_response_dynamics, verify_point};

#[derive(Parser)]
#[command(
    name = "transparency-game",
    about = "Equilibria of the two-feature algorithmic-transparency hiring game",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one parameter point (JSON).
    Analyze(AnalyzeArgs),
    /// Grid sweep over the (cost_h, cost_l) plane (CSV or JSON).
    Sweep(SweepArgs),
    /// Transparency thresholds as one base parameter varies (CSV).
    Thresholds(ThresholdArgs),
    /// Best-response dynamics trace (CSV).
    Simulate(SimulateArgs),
    /// Deviation-oracle campaign over random valid parameter points.
    Verify(VerifyArgs),
}

/// The seven model parameters, each overridable over a JSON config file.
#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    reward: Option<f64>,
    #[arg(long)]
    cost_h: Option<f64>,
    #[arg(long)]
    cost_l: Option<f64>,
    /// Flat JSON object with the seven parameter names; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl ParamArgs {
    fn any_given(&self) -> bool {
        self.config.is_some()
            || [
                self.theta,
                self.lambda,
                self.alpha,
                self.beta,
                self.reward,
                self.cost_h,
                self.cost_l,
            ]
            .iter()
            .any(Option::is_some)
    }

    fn resolve_raw(&self) -> Result<RawParams, String> {
        let mut file: Option<RawParams> = None;
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            file = Some(
                serde_json::from_str(&text)
                    .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?,
            );
        }
        let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
            flag.or(from_file)
                .ok_or_else(|| format!("missing parameter --{name}"))
        };
        Ok(RawParams {
            theta: pick(self.theta, file.map(|f| f.theta), "theta")?,
            lambda: pick(self.lambda, file.map(|f| f.lambda), "lambda")?,
            alpha: pick(self.alpha, file.map(|f| f.alpha), "alpha")?,
            beta: pick(self.beta, file.map(|f| f.beta), "beta")?,
            reward: pick(self.reward, file.map(|f| f.reward), "reward")?,
            cost_h: pick(self.cost_h, file.map(|f| f.cost_h), "cost-h")?,
            cost_l: pick(self.cost_l, file.map(|f| f.cost_l), "cost-l")?,
        })
    }

    /// Validates, writing violations as structured JSON on stderr.
    fn resolve(&self) -> Result<ModelParams, ExitCode> {
        let raw = self.resolve_raw().map_err(|msg| {
            eprintln!("{msg}");
            ExitCode::from(2)
        })?;
        validate_params(raw).map_err(|violations| {
            let payload = serde_json::json!({ "violations": violations });
            eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
            ExitCode::from(2)
        })
    }
}

/// The five non-cost parameters, for commands that sweep or ignore costs.
#[derive(Args, Clone)]
struct BaseArgs {
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    reward: Option<f64>,
    /// Flat JSON object with parameter names; flags override it. Cost
    /// entries, if present, are ignored by these commands.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl BaseArgs {
    /// Resolves the five base parameters; cost fields are placeholders.
    fn resolve_raw(&self) -> Result<RawParams, String> {
        let mut file = serde_json::Map::new();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?;
            file = value
                .as_object()
                .cloned()
                .ok_or_else(|| format!("config {} must be a JSON object", path.display()))?;
        }
        let pick = |flag: Option<f64>, name: &str| {
            flag.or_else(|| file.get(name).and_then(|v| v.as_f64()))
                .ok_or_else(|| format!("missing parameter --{name}"))
        };
        let reward = pick(self.reward, "reward")?;
        Ok(RawParams {
            theta: pick(self.theta, "theta")?,
            lambda: pick(self.lambda, "lambda")?,
            alpha: pick(self.alpha, "alpha")?,
            beta: pick(self.beta, "beta")?,
            reward,
            cost_h: 0.25 * reward,
            cost_l: 0.75 * reward,
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: BaseArgs,
    #[arg(long, default_value_t = 0.0)]
    c_min: f64,
    /// Defaults to 1.5 * reward, which contains every region boundary.
    #[arg(long)]
    c_max: Option<f64>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
    /// Run the deviation oracle at every feasible grid point.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    params: BaseArgs,
    /// Which parameter to vary.
    #[arg(long, value_parser = ["alpha", "lambda", "theta"])]
    vary: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_parser = ["opaque", "transparent"], default_value = "opaque")]
    scenario: String,
    /// Fraction of each type's mass moved toward its best response per round.
    #[arg(long, default_value_t = 1.0)]
    damping: f64,
    #[arg(long, default_value_t = 1000)]
    max_rounds: usize,
    /// Write the per-round CSV here (summary still goes to stdout).
    #[arg(long)]
    trace_out: Option<PathBuf>,
    /// Exit with code 4 when the dynamics do not converge.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Campaign size when no explicit point is given.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn configure_threads() {
    if let Ok(v) = std::env::var("TRANSPARENCY_GAME_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            eprintln!("cannot write {}: {e}", path.display());
            ExitCode::from(1)
        }),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn defect_exit(err: &AnalysisError) -> ExitCode {
    eprintln!("internal defect: {err}");
    ExitCode::from(3)
}

fn cmd_analyze(args: &AnalyzeArgs) -> ExitCode {
    let params = match args.params.resolve() {
        Ok(p) => p,
        Err(code) => return code,
    };
    match analyze(&params) {
        Ok(report) => {
            let mut json = serde_json::to_string_pretty(&report).unwrap();
            json.push('\n');
            match write_output(&args.out, &json) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => code,
            }
        }
        Err(err) => defect_exit(&err),
    }
}

fn cmd_sweep(args: &SweepArgs) -> ExitCode {
    let raw = match args.params.resolve_raw() {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(violations) = validate_base(&raw) {
        let payload = serde_json::json!({ "violations": violations });
        eprintln!("{}", serde_json::to_string_pretty(&payload).unwrap());
        return ExitCode::from(2);
    }
    let spec = SweepSpec {
        base: raw,
        c_min: args.c_min,
        c_max: args.c_max.unwrap_or(1.5 * raw.reward),
        steps: args.steps,
        verify: args.verify,
    };
    let rows = match run_sweep(&spec) {
        Ok(rows) => rows,
        Err(SweepError::Analysis(err)) => return defect_exit(&err),
        Err(err) => {
            eprintln!("{err}");
            return ExitCode::from(2);
        }
    };
    let content = if args.format == "json" {
        let mut s = serde_json::to_string_pretty(&rows).unwrap();
        s.push('\n');
        s
    } else {
        sweep_csv(&rows, spec.verify)
    };
    match write_output(&args.out, &content) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_thresholds(args: &ThresholdArgs) -> ExitCode {
    let raw = match args.params.resolve_raw() {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    let vary = match args.vary.as_str() {
        "alpha" => VaryParam::Alpha,
        "lambda" => VaryParam::Lambda,
        _ => VaryParam::Theta,
    };
    if args.steps < 2 {
        eprintln!("need at least 2 steps");
        return ExitCode::from(2);
    }
    let rows = threshold_curve(&raw, vary, args.from, args.to, args.steps);
    if rows.iter().all(|r| !r.feasible) {
        eprintln!("entire range is infeasible for the shape assumptions");
        return ExitCode::from(2);
    }
    match write_output(&args.out, &thresholds_csv(vary, &rows)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_simulate(args: &SimulateArgs) -> ExitCode {
    let params = match args.params.resolve() {
        Ok(p) => p,
        Err(code) => return code,
    };
    if !(args.damping > 0.0 && args.damping <= 1.0) {
        eprintln!("damping must lie in (0, 1]");
        return ExitCode::from(2);
    }
    let scenario = if args.scenario == "transparent" {
        Scenario::Transparent
    } else {
        Scenario::Opaque
    };
    let trace = best_response_dynamics(&params, scenario, args.damping, args.max_rounds);

    let analytic = match scenario {
        Scenario::Opaque => solve_opaque(&params),
        Scenario::Transparent => solve_transparent(&params),
    };
    let analytic = match analytic {
        Ok(a) => a,
        Err(err) => return defect_exit(&AnalysisError::Solve(err)),
    };
    let distance = (trace.limit.improve_h - analytic.profile.improve_h)
        .abs()
        .max((trace.limit.improve_l - analytic.profile.improve_l).abs());

    let mut csv = String::new();
    match scenario {
        Scenario::Opaque => csv.push_str("round,improve_h,improve_l,p_a,p_b,p_c,p_d,pi_firm\n"),
        Scenario::Transparent => csv.push_str("round,improve_h,improve_l,p_e,p_f,pi_firm\n"),
    }
    for row in &trace.rounds {
        let mut fields = vec![
            row.round.to_string(),
            fmt_sig(row.profile.improve_h),
            fmt_sig(row.profile.improve_l),
        ];
        for idx in 0..scenario.state_count() {
            fields.push(fmt_sig(row.policy.prob(idx)));
        }
        fields.push(fmt_sig(row.payoffs.firm));
        csv.push_str(&fields.join(","));
        csv.push('\n');
    }

    let summary = format!(
        "converged={} rounds={} distance_to_analytic={}",
        trace.converged,
        trace.rounds.len() - 1,
        fmt_sig(distance)
    );
    match &args.trace_out {
        Some(_) => {
            if let Err(code) = write_output(&args.trace_out, &csv) {
                return code;
            }
            println!("{summary}");
        }
        None => {
            print!("{csv}");
            println!("# {summary}");
        }
    }
    if args.strict && !trace.converged {
        return ExitCode::from(4);
    }
    ExitCode::SUCCESS
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    // With a full point given, verify just that point and report the details.
    if args.params.any_given() {
        let params = match args.params.resolve() {
            Ok(p) => p,
            Err(code) => return code,
        };
        let (opaque, transparent) = verify_point(&params);
        let payload = serde_json::json!({
            "opaque": opaque,
            "transparent": transparent,
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
        return if opaque.nash_ok && transparent.nash_ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let points: Vec<ModelParams> = (0..args.samples).map(|_| sample_valid(&mut rng)).collect();
    use rayon::prelude::*;
    let results: Vec<_> = points
        .par_iter()
        .map(|p| {
            let (o, t) = verify_point(p);
            (p.raw(), o, t)
        })
        .collect();

    let mut failures = 0usize;
    let mut max_agent_gain = 0.0f64;
    let mut max_firm_gain = 0.0f64;
    let mut first_failure: Option<String> = None;
    for (raw, o, t) in &results {
        max_agent_gain = max_agent_gain.max(o.max_agent_gain).max(t.max_agent_gain);
        max_firm_gain = max_firm_gain.max(o.max_firm_gain).max(t.max_firm_gain);
        if !(o.nash_ok && t.nash_ok) {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!(
                    "first failing point: cost_h={}, cost_l={}, lambda={}, reward={} \
                     (opaque ok: {}, transparent ok: {})",
                    fmt_sig(raw.cost_h),
                    fmt_sig(raw.cost_l),
                    fmt_sig(raw.lambda),
                    fmt_sig(raw.reward),
                    o.nash_ok,
                    t.nash_ok
                ));
            }
        }
    }
    println!(
        "verified {} sampled points: {} passed, {} failed",
        results.len(),
        results.len() - failures,
        failures
    );
    println!(
        "max agent deviation gain: {}, max firm policy gain: {}",
        fmt_sig(max_agent_gain),
        fmt_sig(max_firm_gain)
    );
    if let Some(msg) = first_failure {
        println!("{msg}");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Thresholds(args) => cmd_thresholds(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
    }
}
