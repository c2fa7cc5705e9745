//! Independent brute-force verification of equilibria, plus population
//! dynamics probing convergence to the analytic fixed points.
//!
//! [`verify_equilibrium`] re-derives every no-deviation condition from the
//! payoff engine alone: per-capita agent deviations at a fixed policy (a
//! single agent in a continuum cannot move state shares) and per-state firm
//! optimality. Failures are data, not errors — the verifier exists precisely
//! to catch points where a claimed equilibrium does not hold. One such family
//! of points is real and reproducible: inside the opaque case-4 band the
//! L-type strictly gains by educating (`R - cost_l` exceeds
//! `(1-lambda) p4 R` whenever `cost_l < lambda R`), so `nash_ok` is honestly
//! `false` there even though the case's indifference conditions for the
//! H-type and the firm hold to machine precision.

use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve_opaque, solve_transparent, EquilibriumOutcome};
use crate::model::{AgentType, ModelParams, Scenario, EPS};
use crate::payoff::{
    agent_utility, end_composition, firm_payoff, payoff_triple, state_margin, HiringPolicy,
    PayoffTriple, StrategyProfile,
};

/// Tolerance below which a deviation gain counts as zero.
pub const NASH_TOL: f64 = 1e-9;

/// Mass below which a state counts as unpopulated for firm-side checks.
const MASS_TOL: f64 = 1e-12;

/// One checked no-deviation condition. `slack` is the margin by which the
/// condition holds; anything at or above `-NASH_TOL` passes. For indifference
/// conditions the slack is `-|difference|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionSlack {
    pub condition: String,
    pub slack: f64,
    pub ok: bool,
}

/// Verdict of the deviation oracle for one outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub nash_ok: bool,
    /// Largest per-capita utility gain available to either type from a
    /// unilateral pure deviation.
    pub max_agent_gain: f64,
    /// Largest firm-payoff gain available from any policy change.
    pub max_firm_gain: f64,
    pub details: Vec<ConditionSlack>,
}

fn push(details: &mut Vec<ConditionSlack>, condition: String, slack: f64) {
    details.push(ConditionSlack {
        condition,
        ok: slack >= -NASH_TOL,
        slack,
    });
}

/// Checks an outcome's profile/policy pair against every Nash condition.
pub fn verify_equilibrium(outcome: &EquilibriumOutcome, params: &ModelParams) -> VerificationResult {
    let mut details = Vec::new();
    let mut max_agent_gain: f64 = 0.0;

    for agent in [AgentType::H, AgentType::L] {
        let played = outcome.profile.improve(agent);
        let u_imp = agent_utility(agent, true, &outcome.policy, params);
        let u_not = agent_utility(agent, false, &outcome.policy, params);
        let u_mix = played * u_imp + (1.0 - played) * u_not;
        let gain = u_imp.max(u_not) - u_mix;
        max_agent_gain = max_agent_gain.max(gain);
        let name = match agent {
            AgentType::H => "H",
            AgentType::L => "L",
        };
        if played >= 1.0 - EPS {
            push(&mut details, format!("agent_{name}_improves"), u_imp - u_not);
        } else if played <= EPS {
            push(&mut details, format!("agent_{name}_stays"), u_not - u_imp);
        } else {
            push(
                &mut details,
                format!("agent_{name}_indifferent"),
                -(u_imp - u_not).abs(),
            );
        }
    }

    let comp = end_composition(&outcome.profile, params);
    let mut max_firm_gain = 0.0;
    for idx in 0..comp.state_count() {
        let label = outcome.policy.state_label(idx);
        if comp.mass(idx) <= MASS_TOL {
            // Empty state: its hiring probability is payoff-irrelevant.
            push(&mut details, format!("firm_state_{label}_empty"), 0.0);
            continue;
        }
        let margin = state_margin(&comp, idx, params);
        let unit = margin / comp.mass(idx);
        let p = outcome.policy.prob(idx);
        let (name, slack) = if p >= 1.0 - EPS {
            (format!("firm_state_{label}_hire"), unit)
        } else if p <= EPS {
            (format!("firm_state_{label}_reject"), -unit)
        } else {
            (format!("firm_state_{label}_indifferent"), -unit.abs())
        };
        push(&mut details, name, slack);
        // Gain from moving this state's probability to its best vertex.
        let gain = if margin > 0.0 {
            (1.0 - p) * margin
        } else {
            -p * margin
        };
        max_firm_gain += gain.max(0.0);
    }

    VerificationResult {
        nash_ok: max_agent_gain <= NASH_TOL && max_firm_gain <= NASH_TOL,
        max_agent_gain,
        max_firm_gain,
        details,
    }
}

/// Verifies both scenario equilibria at one parameter point.
pub fn verify_point(params: &ModelParams) -> (VerificationResult, VerificationResult) {
    let opaque = solve_opaque(params).expect("opaque map is total");
    let transparent = solve_transparent(params).expect("transparent map is total");
    (
        verify_equilibrium(&opaque, params),
        verify_equilibrium(&transparent, params),
    )
}

/// Best policy over a per-axis lattice with `grid` points per state.
///
/// The firm payoff is linear in each `P_S`, so `grid = 2` (the vertices)
/// already attains the global optimum over `[0,1]^k`.
pub fn exhaustive_policy_search(
    profile: &StrategyProfile,
    params: &ModelParams,
    grid: usize,
) -> (HiringPolicy, f64) {
    assert!(grid >= 2, "grid must be at least 2");
    let k = profile.scenario.state_count();
    let combos = grid.pow(k as u32);
    assert!(combos <= 1_000_000, "grid too fine: {combos} policies");
    let level = |j: usize| j as f64 / (grid - 1) as f64;

    let mut best: Option<(HiringPolicy, f64)> = None;
    for combo in 0..combos {
        let mut c = combo;
        let mut probs = [0.0f64; 4];
        for slot in probs.iter_mut().take(k) {
            *slot = level(c % grid);
            c /= grid;
        }
        let policy = match profile.scenario {
            Scenario::Opaque => HiringPolicy::opaque(probs[0], probs[1], probs[2], probs[3]),
            Scenario::Transparent => HiringPolicy::transparent(probs[0], probs[1]),
        };
        let value = firm_payoff(profile, &policy, params);
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((policy, value));
        }
    }
    best.expect("at least one policy evaluated")
}

/// One recorded round of the dynamics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsRound {
    pub round: usize,
    pub profile: StrategyProfile,
    pub policy: HiringPolicy,
    pub payoffs: PayoffTriple,
}

/// Trace of a best-response run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub rounds: Vec<DynamicsRound>,
    pub converged: bool,
    pub limit: StrategyProfile,
}

impl DynamicsTrace {
    pub fn final_policy(&self) -> HiringPolicy {
        self.rounds.last().expect("trace is never empty").policy
    }
}

/// Profile movement below which the dynamics count as converged.
pub const DYNAMICS_TOL: f64 = 1e-6;

/// Firm's vertex best response to a composition.
///
/// Occupied states follow the sign of their margin; a state within [`EPS`] of
/// indifference keeps its previous probability so mixed-region traces do not
/// chatter. Empty states take the off-path disposition of the analytic
/// policies: hire educated ghosts, reject uneducated ones. That disposition is
/// what steers the pure regions to the payoff-dominant fixed point instead of
/// a pessimistic pooling one.
fn firm_best_response(
    comp: &crate::model::PopulationComposition,
    prev: &HiringPolicy,
    params: &ModelParams,
) -> HiringPolicy {
    let k = comp.state_count();
    let mut probs = [0.0f64; 4];
    for (idx, slot) in probs.iter_mut().enumerate().take(k) {
        let educated = match comp.scenario {
            Scenario::Opaque => crate::model::OpaqueState::ALL[idx].educated(),
            Scenario::Transparent => crate::model::TransparentState::ALL[idx].educated(),
        };
        *slot = if comp.mass(idx) <= MASS_TOL {
            if educated {
                1.0
            } else {
                0.0
            }
        } else {
            let unit = state_margin(comp, idx, params) / comp.mass(idx);
            if unit > EPS {
                1.0
            } else if unit < -EPS {
                0.0
            } else {
                prev.prob(idx)
            }
        };
    }
    match comp.scenario {
        Scenario::Opaque => HiringPolicy::opaque(probs[0], probs[1], probs[2], probs[3]),
        Scenario::Transparent => HiringPolicy::transparent(probs[0], probs[1]),
    }
}

/// Agents' (possibly damped) response to a policy: each type moves a
/// `damping` fraction of its mass toward its strict best response and holds
/// its mixture when indifferent.
fn agent_response(
    profile: &StrategyProfile,
    policy: &HiringPolicy,
    params: &ModelParams,
    damping: f64,
) -> StrategyProfile {
    let mut next = [profile.improve_h, profile.improve_l];
    for (slot, agent) in next.iter_mut().zip([AgentType::H, AgentType::L]) {
        let u_imp = agent_utility(agent, true, policy, params);
        let u_not = agent_utility(agent, false, policy, params);
        let target = if u_imp > u_not + EPS {
            1.0
        } else if u_not > u_imp + EPS {
            0.0
        } else {
            *slot
        };
        *slot += damping * (target - *slot);
    }
    StrategyProfile::new(profile.scenario, next[0], next[1])
}

/// Alternating firm/agent best-response dynamics from the uneducated start.
///
/// Round 0 records the initial state under a hire-everyone policy; each later
/// round applies one firm step and one damped agent step. The run stops once
/// the agents' profile moves less than [`DYNAMICS_TOL`]. Mixed equilibria
/// are generally not asymptotically stable under best response, so
/// non-convergence there is an expected finding and is reported in the trace
/// rather than raised as an error.
pub fn best_response_dynamics(
    params: &ModelParams,
    scenario: Scenario,
    damping: f64,
    max_rounds: usize,
) -> DynamicsTrace {
    assert!(damping > 0.0 && damping <= 1.0, "damping must be in (0, 1]");
    let mut profile = StrategyProfile::new(scenario, 0.0, 0.0);
    let mut policy = match scenario {
        Scenario::Opaque => HiringPolicy::opaque(1.0, 1.0, 1.0, 1.0),
        Scenario::Transparent => HiringPolicy::transparent(1.0, 1.0),
    };
    let mut rounds = vec![DynamicsRound {
        round: 0,
        profile,
        policy,
        payoffs: payoff_triple(&profile, &policy, params),
    }];
    let mut converged = false;
    for round in 1..=max_rounds {
        let comp = end_composition(&profile, params);
        policy = firm_best_response(&comp, &policy, params);
        let next = agent_response(&profile, &policy, params, damping);
        let movement = (next.improve_h - profile.improve_h)
            .abs()
            .max((next.improve_l - profile.improve_l).abs());
        profile = next;
        rounds.push(DynamicsRound {
            round,
            profile,
            policy,
            payoffs: payoff_triple(&profile, &policy, params),
        });
        if movement < DYNAMICS_TOL {
            converged = true;
            break;
        }
    }
    DynamicsTrace {
        rounds,
        converged,
        limit: profile,
    }
}

/// Empirical averages from a fictitious-play run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FictitiousPlayAverages {
    pub improve_h: f64,
    pub improve_l: f64,
    pub policy: [f64; 4],
    pub rounds: usize,
}

/// Fictitious play: every round each side best-responds to the *empirical
/// average* of the other side's past play, and the averages are what gets
/// reported. In the mixed cases the raw play cycles, but the averages settle
/// near the equilibrium mixture; this is the time-averaged check used for
/// mixed-case acceptance.
pub fn fictitious_play(
    params: &ModelParams,
    scenario: Scenario,
    rounds: usize,
) -> FictitiousPlayAverages {
    let k = scenario.state_count();
    let mut avg_profile = StrategyProfile::new(scenario, 0.0, 0.0);
    let mut policy = match scenario {
        Scenario::Opaque => HiringPolicy::opaque(1.0, 1.0, 1.0, 1.0),
        Scenario::Transparent => HiringPolicy::transparent(1.0, 1.0),
    };
    let mut avg_policy = [0.0f64; 4];
    let mut play = [0.0f64; 2];
    let mut sum_profile = [0.0f64; 2];
    let mut sum_policy = [0.0f64; 4];

    for t in 1..=rounds {
        // Firm responds to the average profile so far.
        let comp = end_composition(&avg_profile, params);
        policy = firm_best_response(&comp, &policy, params);
        // Agents respond to the average policy so far (from round 2 on).
        let responded_to = if t == 1 { policy } else { mean_policy(scenario, &avg_policy) };
        for (slot, agent) in play.iter_mut().zip([AgentType::H, AgentType::L]) {
            let u_imp = agent_utility(agent, true, &responded_to, params);
            let u_not = agent_utility(agent, false, &responded_to, params);
            if u_imp > u_not + EPS {
                *slot = 1.0;
            } else if u_not > u_imp + EPS {
                *slot = 0.0;
            } // ties repeat the previous play
        }
        sum_profile[0] += play[0];
        sum_profile[1] += play[1];
        for (idx, slot) in sum_policy.iter_mut().enumerate().take(k) {
            *slot += policy.prob(idx);
        }
        let n = t as f64;
        avg_profile = StrategyProfile::new(scenario, sum_profile[0] / n, sum_profile[1] / n);
        for idx in 0..k {
            avg_policy[idx] = sum_policy[idx] / n;
        }
    }

    FictitiousPlayAverages {
        improve_h: avg_profile.improve_h,
        improve_l: avg_profile.improve_l,
        policy: avg_policy,
        rounds,
    }
}

fn mean_policy(scenario: Scenario, avg: &[f64; 4]) -> HiringPolicy {
    match scenario {
        Scenario::Opaque => HiringPolicy::opaque(avg[0], avg[1], avg[2], avg[3]),
        Scenario::Transparent => HiringPolicy::transparent(avg[0], avg[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, RawParams};

    fn params(ch: f64, cl: f64) -> ModelParams {
        validate_params(RawParams {
            theta: 0.5,
            lambda: 0.75,
            alpha: 1.5,
            beta: 0.5,
            reward: 1.0,
            cost_h: ch,
            cost_l: cl,
        })
        .unwrap()
    }

    #[test]
    fn pure_equilibria_verify_clean() {
        for (ch, cl) in [(0.5, 1.2), (0.2, 1.2), (0.1, 0.2), (1.1, 1.2), (0.5, 0.8)] {
            let p = params(ch, cl);
            let (o, t) = verify_point(&p);
            assert!(o.nash_ok, "opaque at ({ch},{cl}): {o:?}");
            assert!(t.nash_ok, "transparent at ({ch},{cl}): {t:?}");
        }
    }

    #[test]
    fn o5_indifference_verifies() {
        let p = params(0.1, 0.8);
        let out = solve_opaque(&p).unwrap();
        let v = verify_equilibrium(&out, &p);
        assert!(v.nash_ok, "{v:?}");
        let l_cond = v
            .details
            .iter()
            .find(|c| c.condition == "agent_L_indifferent")
            .unwrap();
        assert!(l_cond.slack.abs() < 1e-12);
    }

    #[test]
    fn case4_band_reports_l_deviation() {
        // Known finding: inside the case-4 band the L-type gains
        // R - cost_l - (1-lambda) p4 R by educating.
        let p = params(0.5, 0.7);
        let out = solve_opaque(&p).unwrap();
        let v = verify_equilibrium(&out, &p);
        assert!(!v.nash_ok);
        let expected_gain = (1.0 - 0.7) - 0.25 * (2.0 / 3.0);
        assert!((v.max_agent_gain - expected_gain).abs() < 1e-12);
        // The H-type indifference and the firm's state-A indifference still
        // hold to machine precision.
        let h = v
            .details
            .iter()
            .find(|c| c.condition == "agent_H_indifferent")
            .unwrap();
        assert!(h.slack.abs() < 1e-12);
        let a = v
            .details
            .iter()
            .find(|c| c.condition == "firm_state_A_indifferent")
            .unwrap();
        assert!(a.slack.abs() < 1e-12);
        assert!(v.max_firm_gain <= NASH_TOL);
    }

    #[test]
    fn flipping_a_rejected_state_costs_the_firm() {
        let p = params(0.5, 1.2);
        let out = solve_opaque(&p).unwrap();
        let bad = EquilibriumOutcome {
            policy: out.policy.with_prob(2, 1.0),
            ..out
        };
        let v = verify_equilibrium(&bad, &p);
        assert!(!v.nash_ok);
        assert!(v.max_firm_gain > 0.1);
    }

    #[test]
    fn t1_high_costs_all_margins_nonnegative() {
        let p = params(1.1, 1.2);
        let out = solve_transparent(&p).unwrap();
        let v = verify_equilibrium(&out, &p);
        assert!(v.nash_ok);
        assert!(v.details.iter().all(|c| c.slack >= 0.0), "{v:?}");
    }

    #[test]
    fn vertex_search_matches_analytic_policies() {
        let p = params(0.5, 1.2);
        let profile = StrategyProfile::new(Scenario::Opaque, 0.0, 0.0);
        let (_best, value) = exhaustive_policy_search(&profile, &p, 2);
        assert!((value - 0.0625).abs() < 1e-12);

        let profile = StrategyProfile::new(Scenario::Transparent, 0.0, 0.0);
        let (best, value) = exhaustive_policy_search(&profile, &p, 2);
        assert!(value.abs() < 1e-12);
        assert_eq!(best.prob(0), 0.0);

        // Single populated educated state with gamma = 1.
        let profile = StrategyProfile::new(Scenario::Opaque, 1.0, 0.0);
        let raw = RawParams {
            lambda: 1.0,
            ..p.raw()
        };
        let p2 = validate_params(raw).unwrap();
        let (best, value) = exhaustive_policy_search(&profile, &p2, 2);
        assert_eq!(best.prob(1), 1.0);
        let expected = 0.5 * (1.5 + 0.5 - 1.0);
        assert!((value - expected).abs() < 1e-12);
    }

    #[test]
    fn dynamics_converges_in_pure_regions() {
        // (region, point, expected limit profile)
        let cases = [
            ("N1", (1.1, 1.2), (0.0, 0.0)),
            ("N2", (0.2, 1.2), (1.0, 0.0)),
            ("N3", (0.1, 0.2), (1.0, 1.0)),
            ("C4", (0.5, 1.2), (0.0, 0.0)),
        ];
        for (name, (ch, cl), (h, l)) in cases {
            let p = params(ch, cl);
            let trace = best_response_dynamics(&p, Scenario::Opaque, 1.0, 50);
            assert!(trace.converged, "{name} opaque did not converge");
            assert_eq!(
                (trace.limit.improve_h, trace.limit.improve_l),
                (h, l),
                "{name} opaque limit"
            );
            // The converged payoff reproduces the closed form.
            let analytic = solve_opaque(&p).unwrap();
            let final_payoff = trace.rounds.last().unwrap().payoffs.firm;
            assert!(
                (final_payoff - analytic.payoffs.firm).abs() < 1e-6,
                "{name} payoff at convergence"
            );
        }
        // Transparent side of the same points.
        let p = params(0.5, 1.2);
        let trace = best_response_dynamics(&p, Scenario::Transparent, 1.0, 50);
        assert!(trace.converged);
        assert_eq!((trace.limit.improve_h, trace.limit.improve_l), (1.0, 0.0));
    }

    #[test]
    fn dynamics_cycles_at_mixed_point_with_full_damping() {
        let p = params(0.1, 0.8);
        let trace = best_response_dynamics(&p, Scenario::Opaque, 1.0, 200);
        assert!(!trace.converged);
    }

    #[test]
    fn zero_rounds_trace_has_initial_state_only() {
        let p = params(0.5, 1.2);
        let trace = best_response_dynamics(&p, Scenario::Opaque, 1.0, 0);
        assert_eq!(trace.rounds.len(), 1);
        assert!(!trace.converged);
    }

    #[test]
    fn search_never_beats_analytic_policy() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = crate::sampling::sample_valid(&mut rng);
            for out in [solve_opaque(&p).unwrap(), solve_transparent(&p).unwrap()] {
                let (_, best_value) = exhaustive_policy_search(&out.profile, &p, 2);
                assert!(
                    best_value <= out.payoffs.firm + NASH_TOL,
                    "vertex search beat the analytic policy by {}",
                    best_value - out.payoffs.firm
                );
            }
        }
    }

    #[test]
    fn fictitious_play_recovers_o5_mixture() {
        let p = params(0.1, 0.8);
        let avg = fictitious_play(&p, Scenario::Opaque, 10_000);
        assert!((avg.improve_h - 1.0).abs() < 0.05, "{avg:?}");
        assert!((avg.improve_l - 2.0 / 3.0).abs() < 0.05, "{avg:?}");
    }
}
