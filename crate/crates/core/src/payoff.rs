//! Payoff evaluation for arbitrary strategy profiles and hiring policies.
//!
//! These are the raw ingredients shared by the closed-form solver and the
//! brute-force oracle: agent performance, end-of-game composition, the firm's
//! total payoff and per-capita agent utilities. Mixed profiles are represented
//! by expected masses, never by sampled populations.

use serde::{Deserialize, Serialize};

use crate::model::{
    initial_composition, AgentType, ModelParams, OpaqueState, PopulationComposition, Scenario,
    TransparentState,
};

/// Education probabilities played by the two types in one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    /// Probability an H-type agent improves education.
    pub improve_h: f64,
    /// Probability an L-type agent improves education.
    pub improve_l: f64,
    pub scenario: Scenario,
}

impl StrategyProfile {
    /// Panics when a probability leaves `[0, 1]`; profiles are never clamped.
    pub fn new(scenario: Scenario, improve_h: f64, improve_l: f64) -> Self {
        assert!(
            (0.0..=1.0).contains(&improve_h) && (0.0..=1.0).contains(&improve_l),
            "strategy probabilities must lie in [0,1]: ({improve_h}, {improve_l})"
        );
        Self {
            improve_h,
            improve_l,
            scenario,
        }
    }

    pub fn improve(&self, agent: AgentType) -> f64 {
        match agent {
            AgentType::H => self.improve_h,
            AgentType::L => self.improve_l,
        }
    }
}

/// Per-state hiring probabilities, one entry per feature state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "lowercase")]
pub enum HiringPolicy {
    Opaque { a: f64, b: f64, c: f64, d: f64 },
    Transparent { e: f64, f: f64 },
}

impl HiringPolicy {
    pub fn opaque(a: f64, b: f64, c: f64, d: f64) -> Self {
        let p = Self::Opaque { a, b, c, d };
        p.assert_valid();
        p
    }

    pub fn transparent(e: f64, f: f64) -> Self {
        let p = Self::Transparent { e, f };
        p.assert_valid();
        p
    }

    fn assert_valid(&self) {
        for i in 0..self.scenario().state_count() {
            let p = self.prob(i);
            assert!(
                (0.0..=1.0).contains(&p),
                "hiring probabilities must lie in [0,1]: {self:?}"
            );
        }
    }

    pub fn scenario(&self) -> Scenario {
        match self {
            HiringPolicy::Opaque { .. } => Scenario::Opaque,
            HiringPolicy::Transparent { .. } => Scenario::Transparent,
        }
    }

    /// Hiring probability of the state with index `idx`.
    pub fn prob(&self, idx: usize) -> f64 {
        match self {
            HiringPolicy::Opaque { a, b, c, d } => [*a, *b, *c, *d][idx],
            HiringPolicy::Transparent { e, f } => [*e, *f][idx],
        }
    }

    pub fn with_prob(&self, idx: usize, p: f64) -> Self {
        let mut v: Vec<f64> = (0..self.scenario().state_count())
            .map(|i| self.prob(i))
            .collect();
        v[idx] = p;
        match self.scenario() {
            Scenario::Opaque => HiringPolicy::opaque(v[0], v[1], v[2], v[3]),
            Scenario::Transparent => HiringPolicy::transparent(v[0], v[1]),
        }
    }

    pub fn state_label(&self, idx: usize) -> &'static str {
        match self.scenario() {
            Scenario::Opaque => OpaqueState::ALL[idx].label(),
            Scenario::Transparent => TransparentState::ALL[idx].label(),
        }
    }
}

/// Firm payoff plus population-total agent payoffs for one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffTriple {
    pub firm: f64,
    pub agents_h: f64,
    pub agents_l: f64,
}

impl PayoffTriple {
    pub fn agents_total(&self) -> f64 {
        self.agents_h + self.agents_l
    }
}

/// Performance of a single agent: `alpha * [type = H] + beta * [educated]`,
/// normalized so an uneducated L-type produces zero.
pub fn performance(agent: AgentType, educated: bool, params: &ModelParams) -> f64 {
    let type_part = match agent {
        AgentType::H => params.alpha(),
        AgentType::L => 0.0,
    };
    let edu_part = if educated { params.beta() } else { 0.0 };
    type_part + edu_part
}

fn state_educated(scenario: Scenario, idx: usize) -> bool {
    match scenario {
        Scenario::Opaque => OpaqueState::ALL[idx].educated(),
        Scenario::Transparent => TransparentState::ALL[idx].educated(),
    }
}

/// Applies education choices to the initial composition.
///
/// Opaque moves mass `A -> B` and `C -> D` per type (correlational values are
/// fixed endowments); transparent moves `E -> F`. Per-type totals are
/// conserved exactly.
pub fn end_composition(profile: &StrategyProfile, params: &ModelParams) -> PopulationComposition {
    let start = initial_composition(params, profile.scenario);
    match profile.scenario {
        Scenario::Opaque => {
            let h = profile.improve_h;
            let l = profile.improve_l;
            PopulationComposition {
                scenario: Scenario::Opaque,
                mass_h: vec![
                    start.mass_h[0] * (1.0 - h),
                    start.mass_h[0] * h,
                    start.mass_h[2] * (1.0 - h),
                    start.mass_h[2] * h,
                ],
                mass_l: vec![
                    start.mass_l[0] * (1.0 - l),
                    start.mass_l[0] * l,
                    start.mass_l[2] * (1.0 - l),
                    start.mass_l[2] * l,
                ],
            }
        }
        Scenario::Transparent => {
            let h = profile.improve_h;
            let l = profile.improve_l;
            PopulationComposition {
                scenario: Scenario::Transparent,
                mass_h: vec![start.mass_h[0] * (1.0 - h), start.mass_h[0] * h],
                mass_l: vec![start.mass_l[0] * (1.0 - l), start.mass_l[0] * l],
            }
        }
    }
}

/// Mass-weighted contribution of state `idx` to the firm's payoff at full
/// hiring, i.e. `n_S * [gamma_S (W_H - R) + (1 - gamma_S)(W_L - R)]`.
pub fn state_margin(comp: &PopulationComposition, idx: usize, params: &ModelParams) -> f64 {
    let educated = state_educated(comp.scenario, idx);
    let w_h = performance(AgentType::H, educated, params);
    let w_l = performance(AgentType::L, educated, params);
    comp.mass_h[idx] * (w_h - params.reward()) + comp.mass_l[idx] * (w_l - params.reward())
}

/// Firm's total payoff for a profile under a hiring policy.
pub fn firm_payoff(
    profile: &StrategyProfile,
    policy: &HiringPolicy,
    params: &ModelParams,
) -> f64 {
    assert_eq!(
        profile.scenario,
        policy.scenario(),
        "policy dimension must match scenario"
    );
    let comp = end_composition(profile, params);
    (0..comp.state_count())
        .map(|i| policy.prob(i) * state_margin(&comp, i, params))
        .sum()
}

/// Per-capita utility of one agent type for a pure education choice.
///
/// Opaque agents land in the policy's states according to their endowed
/// correlational value; transparent agents face only `P_E`/`P_F`. The
/// correlational improvement itself is free, so no cost term appears for it.
pub fn agent_utility(
    agent: AgentType,
    improve: bool,
    policy: &HiringPolicy,
    params: &ModelParams,
) -> f64 {
    let r = params.reward();
    let cost = match agent {
        AgentType::H => params.cost_h(),
        AgentType::L => params.cost_l(),
    };
    match policy {
        HiringPolicy::Opaque { a, b, c, d } => {
            // Probability this type's correlational value is high.
            let corr_hi = match agent {
                AgentType::H => params.lambda(),
                AgentType::L => 1.0 - params.lambda(),
            };
            if improve {
                corr_hi * b * r + (1.0 - corr_hi) * d * r - cost
            } else {
                corr_hi * a * r + (1.0 - corr_hi) * c * r
            }
        }
        HiringPolicy::Transparent { e, f } => {
            if improve {
                f * r - cost
            } else {
                e * r
            }
        }
    }
}

/// Per-capita expected utility under a mixed education probability.
pub fn agent_mixed_utility(
    agent: AgentType,
    improve_prob: f64,
    policy: &HiringPolicy,
    params: &ModelParams,
) -> f64 {
    let u_imp = agent_utility(agent, true, policy, params);
    let u_not = agent_utility(agent, false, policy, params);
    improve_prob * u_imp + (1.0 - improve_prob) * u_not
}

/// Population-total payoffs for both types plus the firm, in one sweep.
pub fn payoff_triple(
    profile: &StrategyProfile,
    policy: &HiringPolicy,
    params: &ModelParams,
) -> PayoffTriple {
    let theta = params.theta();
    PayoffTriple {
        firm: firm_payoff(profile, policy, params),
        agents_h: theta * agent_mixed_utility(AgentType::H, profile.improve_h, policy, params),
        agents_l: (1.0 - theta)
            * agent_mixed_utility(AgentType::L, profile.improve_l, policy, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, RawParams};
    use proptest::prelude::*;

    fn base() -> ModelParams {
        validate_params(RawParams {
            theta: 0.5,
            lambda: 0.75,
            alpha: 1.5,
            beta: 0.5,
            reward: 1.0,
            cost_h: 0.5,
            cost_l: 1.2,
        })
        .unwrap()
    }

    #[test]
    fn performance_normalization() {
        let p = base();
        assert_eq!(performance(AgentType::L, false, &p), 0.0);
        assert!((performance(AgentType::H, true, &p) - 2.0).abs() < 1e-12);
        assert!((performance(AgentType::L, true, &p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn end_composition_pure_improvement() {
        let p = base();
        let prof = StrategyProfile::new(Scenario::Opaque, 1.0, 0.0);
        let comp = end_composition(&prof, &p);
        assert_eq!(comp.gamma(1), Some(1.0));
        assert_eq!(comp.gamma(3), Some(1.0));
        assert!((comp.mass(1) - 0.375).abs() < 1e-12);
        assert!((comp.mass(3) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn end_composition_no_movement_is_initial() {
        let p = base();
        let prof = StrategyProfile::new(Scenario::Opaque, 0.0, 0.0);
        assert_eq!(
            end_composition(&prof, &p),
            initial_composition(&p, Scenario::Opaque)
        );
    }

    #[test]
    fn transparent_mixed_l_share() {
        let p = base();
        let p_l = 2.0 / 3.0;
        let prof = StrategyProfile::new(Scenario::Transparent, 1.0, p_l);
        let comp = end_composition(&prof, &p);
        let expected = p.theta() / (p.theta() + (1.0 - p.theta()) * p_l);
        assert!((comp.gamma(1).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn firm_payoff_case1_fixture() {
        let p = base();
        let prof = StrategyProfile::new(Scenario::Opaque, 0.0, 0.0);
        let policy = HiringPolicy::opaque(1.0, 1.0, 0.0, 1.0);
        assert!((firm_payoff(&prof, &policy, &p) - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn firm_payoff_transparent_case3_fixture() {
        let p = base();
        let prof = StrategyProfile::new(Scenario::Transparent, 1.0, 1.0);
        let policy = HiringPolicy::transparent(0.0, 1.0);
        assert!((firm_payoff(&prof, &policy, &p) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn zero_policy_pays_zero_and_sinks_cost() {
        let p = base();
        let prof = StrategyProfile::new(Scenario::Opaque, 0.3, 0.7);
        let policy = HiringPolicy::opaque(0.0, 0.0, 0.0, 0.0);
        assert_eq!(firm_payoff(&prof, &policy, &p), 0.0);
        assert!((agent_utility(AgentType::H, true, &policy, &p) + p.cost_h()).abs() < 1e-12);
        assert!((agent_utility(AgentType::L, true, &policy, &p) + p.cost_l()).abs() < 1e-12);
    }

    #[test]
    fn agent_utility_fixtures() {
        let p = base();
        let policy = HiringPolicy::opaque(1.0, 0.0, 0.0, 0.0);
        assert!((agent_utility(AgentType::H, false, &policy, &p) - 0.75).abs() < 1e-12);
        let raw = RawParams {
            cost_l: 0.8,
            cost_h: 0.1,
            ..base().raw()
        };
        let p2 = validate_params(raw).unwrap();
        let tp = HiringPolicy::transparent(0.0, 1.0);
        assert!((agent_utility(AgentType::L, true, &tp, &p2) - 0.2).abs() < 1e-12);
    }

    proptest! {
        // Linearity of the firm payoff in each policy coordinate.
        #[test]
        fn firm_payoff_linear_in_each_policy_entry(
            h in 0.0f64..=1.0, l in 0.0f64..=1.0, idx in 0usize..4
        ) {
            let p = base();
            let prof = StrategyProfile::new(Scenario::Opaque, h, l);
            let base_policy = HiringPolicy::opaque(0.5, 0.5, 0.5, 0.5);
            let at = |v: f64| firm_payoff(&prof, &base_policy.with_prob(idx, v), &p);
            let (y0, ym, y1) = (at(0.0), at(0.5), at(1.0));
            prop_assert!((ym - 0.5 * (y0 + y1)).abs() < 1e-12);
        }

        // The improve/not-improve utility gap never depends on theta.
        #[test]
        fn utility_gap_is_theta_free(
            a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0, d in 0.0f64..=1.0,
            theta in 0.30f64..0.70
        ) {
            let raw = RawParams { theta, ..base().raw() };
            let p = validate_params(raw);
            prop_assume!(p.is_ok());
            let p = p.unwrap();
            let policy = HiringPolicy::opaque(a, b, c, d);
            let gap = |pp: &ModelParams| {
                agent_utility(AgentType::H, true, &policy, pp)
                    - agent_utility(AgentType::H, false, &policy, pp)
            };
            prop_assert!((gap(&p) - gap(&base())).abs() < 1e-12);
        }

        // Education moves mass between states but never across types.
        #[test]
        fn per_type_mass_conserved(h in 0.0f64..=1.0, l in 0.0f64..=1.0) {
            let p = base();
            for scenario in [Scenario::Opaque, Scenario::Transparent] {
                let prof = StrategyProfile::new(scenario, h, l);
                let comp = end_composition(&prof, &p);
                let mh: f64 = comp.mass_h.iter().sum();
                let ml: f64 = comp.mass_l.iter().sum();
                prop_assert!((mh - p.theta()).abs() < 1e-12);
                prop_assert!((ml - (1.0 - p.theta())).abs() < 1e-12);
                prop_assert!((comp.total_mass() - 1.0).abs() < 1e-12);
            }
        }
    }
}
