//! Report assembly and flat-file output: the single-point analysis report,
//! cost-grid sweeps and threshold curves consumed by the CLI.
//!
//! Sweep output is deterministic byte-for-byte: rows are produced in grid
//! order regardless of which worker finished first, floats are printed with
//! twelve significant digits, and lines end with `\n`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    beta_thresholds, compare, AnalysisError, BetaThresholds, ComparisonReport, Preference,
};
use crate::equilibrium::{solve_opaque, solve_transparent, EquilibriumOutcome};
use crate::format::fmt_sig;
use crate::model::{validate_params, AssumptionViolation, ModelParams, RawParams};
use crate::verify::{verify_equilibrium, VerificationResult};

/// Derived quantities echoed alongside the validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub beta_lower: f64,
    pub beta_upper: f64,
    pub gamma_th0: f64,
    pub gamma_th1: f64,
}

/// Oracle verdicts for the two scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationPair {
    pub opaque: VerificationResult,
    pub transparent: VerificationResult,
}

/// Everything the `analyze` command reports for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub params: RawParams,
    pub derived: DerivedParams,
    pub opaque: EquilibriumOutcome,
    pub transparent: EquilibriumOutcome,
    pub comparison: ComparisonReport,
    pub thresholds: BetaThresholds,
    pub verification: VerificationPair,
    pub warnings: Vec<String>,
}

/// Runs the full single-point pipeline.
pub fn analyze(params: &ModelParams) -> Result<AnalysisReport, AnalysisError> {
    let opaque = solve_opaque(params)?;
    let transparent = solve_transparent(params)?;
    let comparison = compare(params)?;
    let thresholds = beta_thresholds(params);
    let verification = VerificationPair {
        opaque: verify_equilibrium(&opaque, params),
        transparent: verify_equilibrium(&transparent, params),
    };
    let mut warnings: Vec<String> = opaque
        .warnings
        .iter()
        .chain(transparent.warnings.iter())
        .map(|w| format!("boundary tie-break at {} (distance {})", w.boundary, w.distance))
        .collect();
    if !verification.opaque.nash_ok {
        warnings.push(format!(
            "opaque case {} fails independent verification (max agent gain {})",
            opaque.case_label(),
            fmt_sig(verification.opaque.max_agent_gain)
        ));
    }
    if !verification.transparent.nash_ok {
        warnings.push(format!(
            "transparent case {} fails independent verification (max agent gain {})",
            transparent.case_label(),
            fmt_sig(verification.transparent.max_agent_gain)
        ));
    }
    let (gamma_th0, gamma_th1) = crate::model::hiring_thresholds(params);
    let (alpha_lower, alpha_upper) = params.alpha_bounds();
    let (beta_lower, beta_upper) = params.beta_bounds();
    Ok(AnalysisReport {
        params: params.raw(),
        derived: DerivedParams {
            alpha_lower,
            alpha_upper,
            beta_lower,
            beta_upper,
            gamma_th0,
            gamma_th1,
        },
        opaque,
        transparent,
        comparison,
        thresholds,
        verification,
        warnings,
    })
}

/// Grid sweep request over the cost plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Base parameters; the cost fields are ignored and replaced per point.
    pub base: RawParams,
    pub c_min: f64,
    pub c_max: f64,
    /// Grid points per axis.
    pub steps: usize,
    /// Whether to run the deviation oracle at each feasible point.
    pub verify: bool,
}

/// One sweep row. Infeasible points (`c_h >= c_l`) keep `feasible = false`
/// and empty analysis columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub c_h: f64,
    pub c_l: f64,
    pub feasible: bool,
    pub opaque_case: Option<String>,
    pub transparent_case: Option<String>,
    pub region: Option<String>,
    pub pi_firm_opaque: Option<f64>,
    pub pi_firm_transparent: Option<f64>,
    pub firm_prefers: Option<Preference>,
    pub pi_agents_opaque: Option<f64>,
    pub pi_agents_transparent: Option<f64>,
    pub agents_prefer: Option<Preference>,
    pub dos_opaque: Option<f64>,
    pub dos_transparent: Option<f64>,
    pub boundary_flag: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash_ok_opaque: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nash_ok_transparent: Option<bool>,
}

/// Errors from the sweep runner.
#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    Spec(String),
    #[error("invalid base parameters")]
    BaseParams(Vec<AssumptionViolation>),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Validates the non-cost parameters of a sweep base. Uses a placeholder
/// cost pair strictly inside the feasible triangle.
pub fn validate_base(base: &RawParams) -> Result<ModelParams, Vec<AssumptionViolation>> {
    validate_params(RawParams {
        cost_h: 0.25 * base.reward,
        cost_l: 0.75 * base.reward,
        ..*base
    })
}

/// Runs a sweep; rows come back in row-major grid order (`c_h` outer, `c_l`
/// inner) no matter how the points were scheduled.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, SweepError> {
    if spec.steps < 2 {
        return Err(SweepError::Spec("steps must be at least 2".into()));
    }
    if !(spec.c_min >= 0.0 && spec.c_max > spec.c_min) {
        return Err(SweepError::Spec(format!(
            "need 0 <= c_min < c_max, got ({}, {})",
            spec.c_min, spec.c_max
        )));
    }
    let base = validate_base(&spec.base).map_err(SweepError::BaseParams)?;
    let n = spec.steps;
    let level = |i: usize| spec.c_min + (spec.c_max - spec.c_min) * i as f64 / (n - 1) as f64;

    let rows: Result<Vec<SweepRow>, AnalysisError> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let c_h = level(idx / n);
            let c_l = level(idx % n);
            sweep_point(&base, c_h, c_l, spec.verify)
        })
        .collect();
    Ok(rows?)
}

fn sweep_point(
    base: &ModelParams,
    c_h: f64,
    c_l: f64,
    verify: bool,
) -> Result<SweepRow, AnalysisError> {
    let infeasible = SweepRow {
        c_h,
        c_l,
        feasible: false,
        opaque_case: None,
        transparent_case: None,
        region: None,
        pi_firm_opaque: None,
        pi_firm_transparent: None,
        firm_prefers: None,
        pi_agents_opaque: None,
        pi_agents_transparent: None,
        agents_prefer: None,
        dos_opaque: None,
        dos_transparent: None,
        boundary_flag: None,
        nash_ok_opaque: None,
        nash_ok_transparent: None,
    };
    let params = match base.with_costs(c_h, c_l) {
        Ok(p) => p,
        Err(_) => return Ok(infeasible),
    };
    let opaque = solve_opaque(&params)?;
    let transparent = solve_transparent(&params)?;
    let comparison = compare(&params)?;
    let (nash_ok_opaque, nash_ok_transparent) = if verify {
        (
            Some(verify_equilibrium(&opaque, &params).nash_ok),
            Some(verify_equilibrium(&transparent, &params).nash_ok),
        )
    } else {
        (None, None)
    };
    Ok(SweepRow {
        c_h,
        c_l,
        feasible: true,
        opaque_case: Some(opaque.case_label().to_string()),
        transparent_case: Some(transparent.case_label().to_string()),
        region: Some(comparison.region.label().to_string()),
        pi_firm_opaque: Some(opaque.payoffs.firm),
        pi_firm_transparent: Some(transparent.payoffs.firm),
        firm_prefers: Some(comparison.firm_prefers),
        pi_agents_opaque: Some(opaque.payoffs.agents_total()),
        pi_agents_transparent: Some(transparent.payoffs.agents_total()),
        agents_prefer: Some(comparison.agents_prefer),
        dos_opaque: Some(comparison.dos_opaque),
        dos_transparent: Some(comparison.dos_transparent),
        boundary_flag: Some(comparison.boundary),
        nash_ok_opaque,
        nash_ok_transparent,
    })
}

/// Column names of the sweep CSV, in order.
pub fn sweep_header(verify: bool) -> String {
    let mut cols = vec![
        "c_h",
        "c_l",
        "feasible",
        "opaque_case",
        "transparent_case",
        "region",
        "pi_firm_opaque",
        "pi_firm_transparent",
        "firm_prefers",
        "pi_agents_opaque",
        "pi_agents_transparent",
        "agents_prefer",
        "dos_opaque",
        "dos_transparent",
        "boundary_flag",
    ];
    if verify {
        cols.push("nash_ok_opaque");
        cols.push("nash_ok_transparent");
    }
    cols.join(",")
}

fn opt_f(v: &Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_default()
}

fn opt_s<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl std::fmt::Display for Preference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Preference::Opaque => "opaque",
            Preference::Transparent => "transparent",
            Preference::Indifferent => "indifferent",
        };
        f.write_str(s)
    }
}

/// Renders sweep rows as CSV (UTF-8, LF line endings).
pub fn sweep_csv(rows: &[SweepRow], verify: bool) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 256);
    out.push_str(&sweep_header(verify));
    out.push('\n');
    for r in rows {
        let mut fields = vec![
            fmt_sig(r.c_h),
            fmt_sig(r.c_l),
            r.feasible.to_string(),
            opt_s(&r.opaque_case),
            opt_s(&r.transparent_case),
            opt_s(&r.region),
            opt_f(&r.pi_firm_opaque),
            opt_f(&r.pi_firm_transparent),
            opt_s(&r.firm_prefers),
            opt_f(&r.pi_agents_opaque),
            opt_f(&r.pi_agents_transparent),
            opt_s(&r.agents_prefer),
            opt_f(&r.dos_opaque),
            opt_f(&r.dos_transparent),
            opt_s(&r.boundary_flag),
        ];
        if verify {
            fields.push(opt_s(&r.nash_ok_opaque));
            fields.push(opt_s(&r.nash_ok_transparent));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Which base parameter a threshold curve varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VaryParam {
    Alpha,
    Lambda,
    Theta,
}

impl VaryParam {
    pub fn label(self) -> &'static str {
        match self {
            VaryParam::Alpha => "alpha",
            VaryParam::Lambda => "lambda",
            VaryParam::Theta => "theta",
        }
    }
}

/// One sample of a threshold curve. `feasible` marks whether the varied
/// combination satisfies the shape assumptions (the thresholds themselves
/// are plain formulas and are reported either way).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub value: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta_lower: f64,
    pub beta_upper: f64,
    pub feasible: bool,
}

/// Samples the beta thresholds while varying one parameter over `[from, to]`.
pub fn threshold_curve(
    base: &RawParams,
    vary: VaryParam,
    from: f64,
    to: f64,
    steps: usize,
) -> Vec<ThresholdRow> {
    assert!(steps >= 2, "steps must be at least 2");
    (0..steps)
        .map(|i| {
            let value = from + (to - from) * i as f64 / (steps - 1) as f64;
            let mut raw = *base;
            match vary {
                VaryParam::Alpha => raw.alpha = value,
                VaryParam::Lambda => raw.lambda = value,
                VaryParam::Theta => raw.theta = value,
            }
            threshold_row(&raw, value)
        })
        .collect()
}

fn threshold_row(raw: &RawParams, value: f64) -> ThresholdRow {
    let (theta, lam, alpha, r) = (raw.theta, raw.lambda, raw.alpha, raw.reward);
    let th = crate::analysis::beta_thresholds_for(theta, lam, alpha, r);
    let (beta1, beta2, beta3) = (th.beta1, th.beta2, th.beta3);
    let beta_lower = r - theta * alpha;
    let beta_upper =
        r - theta * (1.0 - lam) * alpha / (theta * (1.0 - lam) + (1.0 - theta) * lam);
    // Shape feasibility: ranges plus the assumption-2 interval.
    let alpha_lo = (theta * lam + (1.0 - theta) * (1.0 - lam)) * r / (theta * lam);
    let alpha_hi = r / theta;
    let feasible = theta > 0.0
        && theta < 1.0
        && (0.5..=1.0).contains(&lam)
        && alpha_hi - alpha_lo > crate::model::EPS
        && alpha > alpha_lo
        && alpha < alpha_hi
        && alpha > r;
    ThresholdRow {
        value,
        beta1,
        beta2,
        beta3,
        beta_lower,
        beta_upper,
        feasible,
    }
}

/// CSV rendering of a threshold curve; the first column is the varied
/// parameter's name.
pub fn thresholds_csv(vary: VaryParam, rows: &[ThresholdRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{},beta1,beta2,beta3,beta_lower,beta_upper,feasible\n",
        vary.label()
    ));
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_sig(r.value),
            fmt_sig(r.beta1),
            fmt_sig(r.beta2),
            fmt_sig(r.beta3),
            fmt_sig(r.beta_lower),
            fmt_sig(r.beta_upper),
            r.feasible
        ));
    }
    out
}
