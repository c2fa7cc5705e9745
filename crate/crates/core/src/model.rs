//! Model primitives: parameters, assumption validation, feature states and
//! population composition.
//!
//! A unit mass of agents splits into a `theta` share of high-talent (`H`)
//! agents and a `1 - theta` share of low-talent (`L`) agents. Agents carry two
//! binary features: a *causal* one (education, raises productivity by `beta`,
//! costs `cost_h`/`cost_l` to acquire) and a *correlational* one (no
//! productivity effect, positively correlated with talent at accuracy
//! `lambda`). The firm pays a fixed wage `reward` and hires by feature state.
//!
//! Everything downstream assumes parameters that survived [`validate_params`]:
//! the three interior assumptions rule out degenerate hiring behavior, and the
//! case analysis of the equilibrium solver is only meaningful strictly inside
//! them.

use serde::{Deserialize, Serialize};

/// Absolute tolerance used for assumption bounds and case boundaries.
pub const EPS: f64 = 1e-9;

/// Which of the two information regimes is being played.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    /// The firm conceals the correlational feature; agents decide only on
    /// education and keep their endowed correlational value.
    Opaque,
    /// The firm publishes feature and policy; every agent games the
    /// correlational feature at (effectively) zero cost, so only education
    /// separates states.
    Transparent,
}

impl Scenario {
    /// Number of feature states the firm distinguishes in this scenario.
    pub fn state_count(self) -> usize {
        match self {
            Scenario::Opaque => 4,
            Scenario::Transparent => 2,
        }
    }
}

/// Agent talent type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentType {
    H,
    L,
}

/// Feature states in the opaque scenario (causal x correlational).
///
/// `A = (0, 1)`, `B = (1, 1)`, `C = (0, 0)`, `D = (1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpaqueState {
    A,
    B,
    C,
    D,
}

impl OpaqueState {
    pub const ALL: [OpaqueState; 4] = [
        OpaqueState::A,
        OpaqueState::B,
        OpaqueState::C,
        OpaqueState::D,
    ];

    pub fn index(self) -> usize {
        match self {
            OpaqueState::A => 0,
            OpaqueState::B => 1,
            OpaqueState::C => 2,
            OpaqueState::D => 3,
        }
    }

    /// Causal-feature value (is the state educated?).
    pub fn educated(self) -> bool {
        matches!(self, OpaqueState::B | OpaqueState::D)
    }

    /// Correlational-feature value.
    pub fn correlational(self) -> bool {
        matches!(self, OpaqueState::A | OpaqueState::B)
    }

    pub fn label(self) -> &'static str {
        match self {
            OpaqueState::A => "A",
            OpaqueState::B => "B",
            OpaqueState::C => "C",
            OpaqueState::D => "D",
        }
    }
}

/// Feature states in the transparent scenario (causal only; everyone games
/// the correlational feature).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransparentState {
    E,
    F,
}

impl TransparentState {
    pub const ALL: [TransparentState; 2] = [TransparentState::E, TransparentState::F];

    pub fn index(self) -> usize {
        match self {
            TransparentState::E => 0,
            TransparentState::F => 1,
        }
    }

    pub fn educated(self) -> bool {
        matches!(self, TransparentState::F)
    }

    pub fn label(self) -> &'static str {
        match self {
            TransparentState::E => "E",
            TransparentState::F => "F",
        }
    }
}

/// Identifier of a violated parameter assumption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationId {
    /// `0 < beta < reward < alpha` failed.
    A1,
    /// `alpha` outside its interior interval.
    A2,
    /// `beta` outside its interior interval.
    A3,
    /// `0 <= cost_h < cost_l` failed.
    CostOrder,
    LambdaRange,
    ThetaRange,
    /// The assumption-2/3 interval is empty for the given `(theta, lambda, reward)`.
    EmptyInterval,
}

/// One violated assumption, with the breached bound spelled out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionViolation {
    pub id: ViolationId,
    pub detail: String,
}

impl std::fmt::Display for AssumptionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {}", self.id, self.detail)
    }
}

/// Unvalidated seven-tuple as read from flags or a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawParams {
    pub theta: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub reward: f64,
    pub cost_h: f64,
    pub cost_l: f64,
}

/// Validated model parameters. Construct through [`validate_params`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    theta: f64,
    lambda: f64,
    alpha: f64,
    beta: f64,
    reward: f64,
    cost_h: f64,
    cost_l: f64,
}

impl ModelParams {
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn reward(&self) -> f64 {
        self.reward
    }
    pub fn cost_h(&self) -> f64 {
        self.cost_h
    }
    pub fn cost_l(&self) -> f64 {
        self.cost_l
    }

    pub fn raw(&self) -> RawParams {
        RawParams {
            theta: self.theta,
            lambda: self.lambda,
            alpha: self.alpha,
            beta: self.beta,
            reward: self.reward,
            cost_h: self.cost_h,
            cost_l: self.cost_l,
        }
    }

    /// Interior interval `(alpha_lower, alpha_upper)` required of `alpha`.
    pub fn alpha_bounds(&self) -> (f64, f64) {
        alpha_bounds(self.theta, self.lambda, self.reward)
    }

    /// Interior interval `(beta_lower, beta_upper)` required of `beta`.
    pub fn beta_bounds(&self) -> (f64, f64) {
        beta_bounds(self.theta, self.lambda, self.alpha, self.reward)
    }

    /// Same parameters with a different cost pair; only the cost checks rerun.
    pub fn with_costs(&self, cost_h: f64, cost_l: f64) -> Result<Self, Vec<AssumptionViolation>> {
        let mut violations = Vec::new();
        check_costs(cost_h, cost_l, &mut violations);
        if violations.is_empty() {
            Ok(Self {
                cost_h,
                cost_l,
                ..*self
            })
        } else {
            Err(violations)
        }
    }
}

/// Hiring thresholds on the H-share of a state.
///
/// A state of uneducated agents is worth hiring iff its H-share is at least
/// `gamma_th0 = R / alpha`; an educated state iff at least
/// `gamma_th1 = (R - beta) / alpha`. Interior parameters guarantee
/// `0 < gamma_th1 < gamma_th0 < 1`, with `gamma_th1 < theta < gamma_th0`.
pub fn hiring_thresholds(params: &ModelParams) -> (f64, f64) {
    let gamma_th0 = params.reward() / params.alpha();
    let gamma_th1 = (params.reward() - params.beta()) / params.alpha();
    (gamma_th0, gamma_th1)
}

fn alpha_bounds(theta: f64, lambda: f64, reward: f64) -> (f64, f64) {
    let lower = (theta * lambda + (1.0 - theta) * (1.0 - lambda)) * reward / (theta * lambda);
    let upper = reward / theta;
    (lower, upper)
}

fn beta_bounds(theta: f64, lambda: f64, alpha: f64, reward: f64) -> (f64, f64) {
    let lower = reward - theta * alpha;
    let upper =
        reward - theta * (1.0 - lambda) * alpha / (theta * (1.0 - lambda) + (1.0 - theta) * lambda);
    (lower, upper)
}

fn check_costs(cost_h: f64, cost_l: f64, out: &mut Vec<AssumptionViolation>) {
    if !cost_h.is_finite() || !cost_l.is_finite() {
        out.push(AssumptionViolation {
            id: ViolationId::CostOrder,
            detail: format!("costs must be finite, got cost_h={cost_h}, cost_l={cost_l}"),
        });
        return;
    }
    if cost_h < 0.0 {
        out.push(AssumptionViolation {
            id: ViolationId::CostOrder,
            detail: format!("cost_h={cost_h} must be nonnegative"),
        });
    }
    if cost_l - cost_h < EPS {
        let kind = if cost_l > cost_h { "boundary" } else { "violated" };
        out.push(AssumptionViolation {
            id: ViolationId::CostOrder,
            detail: format!(
                "cost_h < cost_l must hold strictly ({kind}): cost_h={cost_h}, cost_l={cost_l}"
            ),
        });
    }
}

/// Checks a strict interior inequality `lo < x < hi`, flagging values within
/// [`EPS`] of either bound as `boundary`.
fn check_interior(
    id: ViolationId,
    name: &str,
    x: f64,
    lo: f64,
    hi: f64,
    out: &mut Vec<AssumptionViolation>,
) {
    if x - lo < EPS {
        let kind = if (x - lo).abs() <= EPS { "boundary" } else { "violated" };
        out.push(AssumptionViolation {
            id,
            detail: format!("{name}={x} must exceed lower bound {lo} strictly ({kind})"),
        });
    } else if hi - x < EPS {
        let kind = if (hi - x).abs() <= EPS { "boundary" } else { "violated" };
        out.push(AssumptionViolation {
            id,
            detail: format!("{name}={x} must stay below upper bound {hi} strictly ({kind})"),
        });
    }
}

/// Validates a raw seven-tuple against every parametric assumption.
///
/// Returns the complete list of violations rather than the first one, so a
/// caller can report them all at once. Assumption inequalities are strict and
/// values within `1e-9` of a bound are rejected with a `boundary` detail,
/// since the whole case analysis presumes interior parameters.
pub fn validate_params(raw: RawParams) -> Result<ModelParams, Vec<AssumptionViolation>> {
    let RawParams {
        theta,
        lambda,
        alpha,
        beta,
        reward,
        cost_h,
        cost_l,
    } = raw;
    let mut violations = Vec::new();

    let mut shape_ok = true;
    if !theta.is_finite() || theta <= 0.0 || theta >= 1.0 {
        shape_ok = false;
        violations.push(AssumptionViolation {
            id: ViolationId::ThetaRange,
            detail: format!("theta={theta} must lie strictly inside (0, 1)"),
        });
    }
    if !lambda.is_finite() || !(0.5..=1.0).contains(&lambda) {
        shape_ok = false;
        violations.push(AssumptionViolation {
            id: ViolationId::LambdaRange,
            detail: format!("lambda={lambda} must lie in [0.5, 1]"),
        });
    }
    for (name, v) in [("alpha", alpha), ("beta", beta), ("reward", reward)] {
        if !v.is_finite() {
            shape_ok = false;
            violations.push(AssumptionViolation {
                id: ViolationId::A1,
                detail: format!("{name}={v} must be a finite number"),
            });
        }
    }
    check_costs(cost_h, cost_l, &mut violations);
    // Without sane shape parameters the assumption bounds are garbage; stop
    // here. Cost violations alone do not block the bound checks.
    if !shape_ok {
        return Err(violations);
    }

    // Assumption 1: 0 < beta < reward < alpha.
    check_interior(ViolationId::A1, "beta", beta, 0.0, reward, &mut violations);
    if alpha - reward < EPS {
        violations.push(AssumptionViolation {
            id: ViolationId::A1,
            detail: format!("alpha={alpha} must exceed reward={reward} strictly"),
        });
    }

    // The assumption-2 and assumption-3 intervals are nonempty iff lambda > 0.5.
    let (alpha_lo, alpha_hi) = alpha_bounds(theta, lambda, reward);
    if alpha_hi - alpha_lo < EPS {
        violations.push(AssumptionViolation {
            id: ViolationId::EmptyInterval,
            detail: format!(
                "assumption-2 interval ({alpha_lo}, {alpha_hi}) is empty: requires \
                 theta*lambda + (1-theta)*(1-lambda) < lambda, i.e. lambda > 0.5"
            ),
        });
        return Err(violations);
    }
    check_interior(
        ViolationId::A2,
        "alpha",
        alpha,
        alpha_lo,
        alpha_hi,
        &mut violations,
    );

    let (beta_lo, beta_hi) = beta_bounds(theta, lambda, alpha, reward);
    if beta_hi - beta_lo < EPS {
        violations.push(AssumptionViolation {
            id: ViolationId::EmptyInterval,
            detail: format!("assumption-3 interval ({beta_lo}, {beta_hi}) is empty"),
        });
        return Err(violations);
    }
    check_interior(
        ViolationId::A3,
        "beta",
        beta,
        beta_lo,
        beta_hi,
        &mut violations,
    );

    if violations.is_empty() {
        Ok(ModelParams {
            theta,
            lambda,
            alpha,
            beta,
            reward,
            cost_h,
            cost_l,
        })
    } else {
        Err(violations)
    }
}

impl<'de> Deserialize<'de> for ModelParams {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = RawParams::deserialize(deserializer)?;
        validate_params(raw).map_err(|violations| {
            serde::de::Error::custom(format!(
                "invalid model parameters: {}",
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            ))
        })
    }
}

/// Per-(type, state) agent masses for one scenario.
///
/// Masses are expected (continuum) quantities, nonnegative, summing to one.
/// The H-share `gamma_S` of a state is undefined when the state is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationComposition {
    pub scenario: Scenario,
    /// H-type mass per state, indexed by `OpaqueState::index` / `TransparentState::index`.
    pub mass_h: Vec<f64>,
    /// L-type mass per state, same indexing.
    pub mass_l: Vec<f64>,
}

impl PopulationComposition {
    pub fn state_count(&self) -> usize {
        self.mass_h.len()
    }

    /// Total mass in state `idx`.
    pub fn mass(&self, idx: usize) -> f64 {
        self.mass_h[idx] + self.mass_l[idx]
    }

    pub fn total_mass(&self) -> f64 {
        self.mass_h.iter().sum::<f64>() + self.mass_l.iter().sum::<f64>()
    }

    /// H-share of state `idx`, or `None` for an empty state.
    pub fn gamma(&self, idx: usize) -> Option<f64> {
        let n = self.mass(idx);
        if n <= 0.0 {
            None
        } else {
            Some(self.mass_h[idx] / n)
        }
    }
}

/// Composition before anyone has decided on education.
///
/// Opaque: H-types sit in state A with probability `lambda` (high
/// correlational value) and in C otherwise; L-types the reverse. Transparent:
/// everyone has already gamed the correlational feature and pools at E.
pub fn initial_composition(params: &ModelParams, scenario: Scenario) -> PopulationComposition {
    let theta = params.theta();
    let lambda = params.lambda();
    match scenario {
        Scenario::Opaque => PopulationComposition {
            scenario,
            mass_h: vec![theta * lambda, 0.0, theta * (1.0 - lambda), 0.0],
            mass_l: vec![
                (1.0 - theta) * (1.0 - lambda),
                0.0,
                (1.0 - theta) * lambda,
                0.0,
            ],
        },
        Scenario::Transparent => PopulationComposition {
            scenario,
            mass_h: vec![theta, 0.0],
            mass_l: vec![1.0 - theta, 0.0],
        },
    }
}
