//! Scenario comparison: region map, transparency thresholds, welfare
//! comparisons, degree of separation, comparative statics and region areas.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::{solve_opaque, solve_transparent, EquilibriumOutcome, SolveError};
use crate::model::{ModelParams, EPS};
use crate::payoff::{end_composition, StrategyProfile};

/// The seven regions of the cost plane, named by the (opaque, transparent)
/// case pair they combine: `N*` regions keep the agents' education behavior
/// unchanged across scenarios, `C*` regions change it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// (O1, T1)
    N1,
    /// (O2, T2)
    N2,
    /// (O3, T3)
    N3,
    /// (O1, T3)
    C1,
    /// (O4, T3)
    C2,
    /// (O5, T3)
    C3,
    /// (O1, T2)
    C4,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 7] = [
        RegionLabel::N1,
        RegionLabel::N2,
        RegionLabel::N3,
        RegionLabel::C1,
        RegionLabel::C2,
        RegionLabel::C3,
        RegionLabel::C4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RegionLabel::N1 => "N1",
            RegionLabel::N2 => "N2",
            RegionLabel::N3 => "N3",
            RegionLabel::C1 => "C1",
            RegionLabel::C2 => "C2",
            RegionLabel::C3 => "C3",
            RegionLabel::C4 => "C4",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|r| *r == self).unwrap()
    }
}

/// Which party an outcome favors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preference {
    Opaque,
    Transparent,
    Indifferent,
}

/// The education-productivity thresholds beyond which transparency becomes
/// firm-preferred in regions C1, C2 and C3 respectively.
///
/// `beta3` coincides with the assumption-3 upper bound on `beta`, which is
/// why the firm never prefers transparency in C3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaThresholds {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

/// Errors raised by the comparison layer. Each indicates an internal defect:
/// the closed forms and the region rules are algebraically consistent, so a
/// mismatch means the implementation broke an identity.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum AnalysisError {
    #[error("solver returned the case pair ({opaque}, {transparent}), which maps to no region")]
    InconsistentPair {
        opaque: String,
        transparent: String,
    },
    #[error("{side} preference {computed:?} contradicts the region rule {expected:?} in {region}")]
    TheoremMismatch {
        side: String,
        region: String,
        computed: Preference,
        expected: Preference,
    },
    #[error("analytic derivative {name} = {value} has the wrong sign")]
    SignViolation { name: String, value: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Maps the solver's case pair to its region label.
pub fn classify_region(params: &ModelParams) -> Result<RegionLabel, AnalysisError> {
    let opaque = solve_opaque(params)?;
    let transparent = solve_transparent(params)?;
    region_of_pair(&opaque, &transparent)
}

pub(crate) fn region_of_pair(
    opaque: &EquilibriumOutcome,
    transparent: &EquilibriumOutcome,
) -> Result<RegionLabel, AnalysisError> {
    use crate::equilibrium::{OpaqueCase as O, TransparentCase as T};
    let o = opaque.opaque_case.as_ref().expect("opaque outcome");
    let t = transparent
        .transparent_case
        .as_ref()
        .expect("transparent outcome");
    let label = match (o, t) {
        (O::O1, T::T1) => RegionLabel::N1,
        (O::O2, T::T2) => RegionLabel::N2,
        (O::O3, T::T3) => RegionLabel::N3,
        (O::O1, T::T3) => RegionLabel::C1,
        (O::O4 { .. }, T::T3) => RegionLabel::C2,
        (O::O5 { .. }, T::T3) => RegionLabel::C3,
        (O::O1, T::T2) => RegionLabel::C4,
        _ => {
            return Err(AnalysisError::InconsistentPair {
                opaque: o.label().to_string(),
                transparent: t.label().to_string(),
            })
        }
    };
    Ok(label)
}

/// Computes the three transparency thresholds. Only `(theta, lambda, alpha,
/// reward)` matter; the point's own `beta` is irrelevant here.
pub fn beta_thresholds(params: &ModelParams) -> BetaThresholds {
    beta_thresholds_for(
        params.theta(),
        params.lambda(),
        params.alpha(),
        params.reward(),
    )
}

/// Threshold formulas on raw values, usable at interval endpoints where the
/// full parameter validation would reject the point.
pub fn beta_thresholds_for(theta: f64, lam: f64, alpha: f64, r: f64) -> BetaThresholds {
    let beta1 = lam * theta * (alpha - r) - (1.0 - lam) * (1.0 - theta) * r + r - theta * alpha;
    let beta2 = r - alpha * r * (1.0 - lam) / ((alpha - r) * lam + r * (1.0 - lam));
    let beta3 = (lam * theta * alpha - theta * alpha - 2.0 * lam * theta * r + theta * r
        + lam * r)
        / (lam - 2.0 * theta * lam + theta);
    BetaThresholds {
        beta1,
        beta2,
        beta3,
    }
}

/// Which threshold governs a region's firm decision, and whether the point's
/// `beta` clears it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    /// 1, 2 or 3.
    pub which: u8,
    pub value: f64,
    pub cleared: bool,
}

/// Side-by-side comparison of the two scenario equilibria at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub region: RegionLabel,
    pub firm_prefers: Preference,
    pub agents_prefer: Preference,
    /// Transparent minus opaque firm payoff.
    pub payoff_gap_firm: f64,
    /// Transparent minus opaque total agent payoff.
    pub payoff_gap_agents: f64,
    pub applicable_threshold: Option<ThresholdCheck>,
    pub dos_opaque: f64,
    pub dos_transparent: f64,
    /// True when either scenario's classification involved a boundary tie.
    pub boundary: bool,
}

fn preference_of_gap(gap: f64, scale: f64) -> Preference {
    let tol = EPS * scale.max(1.0);
    if gap > tol {
        Preference::Transparent
    } else if gap < -tol {
        Preference::Opaque
    } else {
        Preference::Indifferent
    }
}

/// Expected firm preference per the region rule; `None` entries of the pair
/// mean "either strict preference is impossible here".
fn firm_rule(region: RegionLabel, beta: f64, th: &BetaThresholds) -> Preference {
    match region {
        RegionLabel::N1 | RegionLabel::N3 | RegionLabel::C3 => Preference::Opaque,
        RegionLabel::N2 => Preference::Indifferent,
        RegionLabel::C4 => Preference::Transparent,
        RegionLabel::C1 => threshold_rule(beta, th.beta1),
        RegionLabel::C2 => threshold_rule(beta, th.beta2),
    }
}

fn threshold_rule(beta: f64, threshold: f64) -> Preference {
    if (beta - threshold).abs() <= EPS {
        Preference::Indifferent
    } else if beta > threshold {
        Preference::Transparent
    } else {
        Preference::Opaque
    }
}

fn agents_rule(region: RegionLabel) -> Preference {
    match region {
        RegionLabel::N1 | RegionLabel::C1 | RegionLabel::C4 => Preference::Opaque,
        RegionLabel::N2 => Preference::Indifferent,
        RegionLabel::N3 | RegionLabel::C2 | RegionLabel::C3 => Preference::Transparent,
    }
}

/// Builds the full comparison report, cross-checking the computed payoff gaps
/// against the region rules. The cross-checks are skipped on boundary-flagged
/// points, where weak ties are expected.
pub fn compare(params: &ModelParams) -> Result<ComparisonReport, AnalysisError> {
    let opaque = solve_opaque(params)?;
    let transparent = solve_transparent(params)?;
    let region = region_of_pair(&opaque, &transparent)?;
    let thresholds = beta_thresholds(params);
    let boundary = !opaque.warnings.is_empty() || !transparent.warnings.is_empty();

    let gap_firm = transparent.payoffs.firm - opaque.payoffs.firm;
    let gap_agents = transparent.payoffs.agents_total() - opaque.payoffs.agents_total();
    let scale_firm = opaque.payoffs.firm.abs().max(transparent.payoffs.firm.abs());
    let scale_agents = opaque
        .payoffs
        .agents_total()
        .abs()
        .max(transparent.payoffs.agents_total().abs());

    let firm_prefers = preference_of_gap(gap_firm, scale_firm);
    let agents_prefer = preference_of_gap(gap_agents, scale_agents);

    if !boundary {
        let expected = firm_rule(region, params.beta(), &thresholds);
        if expected != firm_prefers {
            return Err(AnalysisError::TheoremMismatch {
                side: "firm".to_string(),
                region: region.label().to_string(),
                computed: firm_prefers,
                expected,
            });
        }
        let expected = agents_rule(region);
        if expected != agents_prefer {
            return Err(AnalysisError::TheoremMismatch {
                side: "agents".to_string(),
                region: region.label().to_string(),
                computed: agents_prefer,
                expected,
            });
        }
    }

    let applicable_threshold = match region {
        RegionLabel::C1 => Some(ThresholdCheck {
            which: 1,
            value: thresholds.beta1,
            cleared: params.beta() > thresholds.beta1,
        }),
        RegionLabel::C2 => Some(ThresholdCheck {
            which: 2,
            value: thresholds.beta2,
            cleared: params.beta() > thresholds.beta2,
        }),
        RegionLabel::C3 => Some(ThresholdCheck {
            which: 3,
            value: thresholds.beta3,
            cleared: params.beta() > thresholds.beta3,
        }),
        _ => None,
    };

    Ok(ComparisonReport {
        region,
        firm_prefers,
        agents_prefer,
        payoff_gap_firm: gap_firm,
        payoff_gap_agents: gap_agents,
        applicable_threshold,
        dos_opaque: degree_of_separation(&opaque.profile, params),
        dos_transparent: degree_of_separation(&transparent.profile, params),
        boundary,
    })
}

/// Firm-side decision report.
pub fn firm_decision(params: &ModelParams) -> Result<ComparisonReport, AnalysisError> {
    compare(params)
}

/// Agent-side decision report.
pub fn agents_decision(params: &ModelParams) -> Result<ComparisonReport, AnalysisError> {
    compare(params)
}

/// Degree of separation between the types across education levels:
/// `1 - (min(n_H0, n_L0) + min(n_H1, n_L1)) / total`. Ranges from
/// `max(theta, 1-theta)` (identical behavior) up to `1` (full separation).
pub fn degree_of_separation(profile: &StrategyProfile, params: &ModelParams) -> f64 {
    let comp = end_composition(profile, params);
    let mut n_h = [0.0f64; 2];
    let mut n_l = [0.0f64; 2];
    for idx in 0..comp.state_count() {
        let educated = match comp.scenario {
            crate::model::Scenario::Opaque => crate::model::OpaqueState::ALL[idx].educated(),
            crate::model::Scenario::Transparent => {
                crate::model::TransparentState::ALL[idx].educated()
            }
        };
        let bucket = usize::from(educated);
        n_h[bucket] += comp.mass_h[idx];
        n_l[bucket] += comp.mass_l[idx];
    }
    let total = comp.total_mass();
    1.0 - (n_h[0].min(n_l[0]) + n_h[1].min(n_l[1])) / total
}

/// One analytic derivative with its finite-difference counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    pub name: String,
    pub analytic: f64,
    pub finite_difference: f64,
    /// +1, -1 or 0.
    pub expected_sign: i8,
}

/// Comparative statics of the transparency thresholds in `lambda` and
/// `theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparativeStatics {
    pub entries: Vec<DerivativeCheck>,
}

/// Analytic threshold derivatives, cross-checked against central finite
/// differences (step `1e-6`). Raises [`AnalysisError::SignViolation`] if a
/// derivative's sign disagrees with the comparative-statics results: the
/// lambda-derivatives of `beta1`/`beta2` are positive, the theta-derivative
/// of `beta1` negative, and `beta2` does not depend on `theta`.
pub fn comparative_statics(params: &ModelParams) -> Result<ComparativeStatics, AnalysisError> {
    let theta = params.theta();
    let lam = params.lambda();
    let alpha = params.alpha();
    let r = params.reward();

    let d_beta1_d_lambda = -2.0 * theta * r + theta * alpha + r;
    let d_beta2_d_lambda =
        alpha * r * (alpha - r) / (2.0 * lam * r - r - alpha * lam).powi(2);
    let d_beta1_d_theta = -2.0 * lam * r + lam * alpha + r - alpha;
    let d_beta2_d_theta = 0.0;

    let step = 1e-6;
    let beta1_at = |th: f64, la: f64| {
        la * th * (alpha - r) - (1.0 - la) * (1.0 - th) * r + r - th * alpha
    };
    let beta2_at =
        |la: f64| r - alpha * r * (1.0 - la) / ((alpha - r) * la + r * (1.0 - la));
    let fd = |f: &dyn Fn(f64) -> f64, x: f64| (f(x + step) - f(x - step)) / (2.0 * step);

    let entries = vec![
        DerivativeCheck {
            name: "d_beta1_d_lambda".to_string(),
            analytic: d_beta1_d_lambda,
            finite_difference: fd(&|la| beta1_at(theta, la), lam),
            expected_sign: 1,
        },
        DerivativeCheck {
            name: "d_beta2_d_lambda".to_string(),
            analytic: d_beta2_d_lambda,
            finite_difference: fd(&beta2_at, lam),
            expected_sign: 1,
        },
        DerivativeCheck {
            name: "d_beta1_d_theta".to_string(),
            analytic: d_beta1_d_theta,
            finite_difference: fd(&|th| beta1_at(th, lam), theta),
            expected_sign: -1,
        },
        DerivativeCheck {
            name: "d_beta2_d_theta".to_string(),
            analytic: d_beta2_d_theta,
            finite_difference: 0.0,
            expected_sign: 0,
        },
    ];

    for e in &entries {
        let sign_ok = match e.expected_sign {
            1 => e.analytic > 0.0,
            -1 => e.analytic < 0.0,
            _ => e.analytic.abs() <= EPS,
        };
        if !sign_ok {
            return Err(AnalysisError::SignViolation {
                name: e.name.clone(),
                value: e.analytic,
            });
        }
    }
    Ok(ComparativeStatics { entries })
}

/// Region of the cost point `(cost_h, cost_l)` under `(lambda, reward)`.
///
/// Region boundaries are multiples of `R`: `(1-lambda) R`, `lambda R` and
/// `R` itself, so membership needs no other parameters. Infeasible points
/// (`cost_h >= cost_l` or a negative cost) return `None`.
pub fn region_of_costs(lambda: f64, reward: f64, cost_h: f64, cost_l: f64) -> Option<RegionLabel> {
    if !(cost_h >= 0.0 && cost_l > cost_h) {
        return None;
    }
    let lo = (1.0 - lambda) * reward;
    let hi = lambda * reward;
    // Opaque side, dominance priority.
    let opaque = if cost_h >= lo && cost_l >= hi {
        0 // O1
    } else if cost_l >= reward {
        1 // O2
    } else if cost_l <= lo {
        2 // O3
    } else if cost_h >= lo {
        3 // O4
    } else {
        4 // O5
    };
    // Transparent side.
    let transparent = if cost_h >= reward {
        0 // T1
    } else if cost_l >= reward {
        1 // T2
    } else {
        2 // T3
    };
    match (opaque, transparent) {
        (0, 0) => Some(RegionLabel::N1),
        (1, 1) => Some(RegionLabel::N2),
        (2, 2) => Some(RegionLabel::N3),
        (0, 2) => Some(RegionLabel::C1),
        (3, 2) => Some(RegionLabel::C2),
        (4, 2) => Some(RegionLabel::C3),
        (0, 1) => Some(RegionLabel::C4),
        _ => None,
    }
}

/// Grid-quadrature areas of each region inside the bounded cost triangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionAreas {
    pub lambda: f64,
    pub reward: f64,
    pub c_max: f64,
    pub resolution: usize,
    /// Area per region, indexed like [`RegionLabel::ALL`].
    pub areas: [f64; 7],
    /// Total classified (feasible) area.
    pub feasible_area: f64,
}

impl RegionAreas {
    pub fn area(&self, region: RegionLabel) -> f64 {
        self.areas[region.index()]
    }
}

/// Deterministic cell-center quadrature of region areas over
/// `{0 <= cost_h < cost_l <= c_max}`.
///
/// The region map depends only on `(lambda, reward)`; the triangle's upper
/// bound `c_max` is an artifact choice that scales area numbers without
/// moving any boundary.
pub fn region_area(lambda: f64, reward: f64, c_max: f64, resolution: usize) -> RegionAreas {
    assert!(resolution >= 2, "resolution must be at least 2");
    assert!((0.5..=1.0).contains(&lambda) && reward > 0.0 && c_max > 0.0);
    let cell = c_max / resolution as f64;
    let cell_area = cell * cell;
    let mut areas = [0.0f64; 7];
    let mut feasible = 0.0;
    for i in 0..resolution {
        let ch = (i as f64 + 0.5) * cell;
        for j in 0..resolution {
            let cl = (j as f64 + 0.5) * cell;
            if let Some(region) = region_of_costs(lambda, reward, ch, cl) {
                areas[region.index()] += cell_area;
                feasible += cell_area;
            }
        }
    }
    RegionAreas {
        lambda,
        reward,
        c_max,
        resolution,
        areas,
        feasible_area: feasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_params, RawParams, Scenario};

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
    fn region_fixtures() {
        assert_eq!(classify_region(&params(0.5, 1.2)).unwrap(), RegionLabel::C4);
        assert_eq!(classify_region(&params(0.1, 0.2)).unwrap(), RegionLabel::N3);
        assert_eq!(classify_region(&params(0.5, 0.7)).unwrap(), RegionLabel::C2);
        assert_eq!(classify_region(&params(0.1, 0.8)).unwrap(), RegionLabel::C3);
        assert_eq!(classify_region(&params(1.1, 1.2)).unwrap(), RegionLabel::N1);
        assert_eq!(classify_region(&params(0.2, 1.2)).unwrap(), RegionLabel::N2);
        assert_eq!(classify_region(&params(0.5, 0.8)).unwrap(), RegionLabel::C1);
    }

    #[test]
    fn beta_threshold_values_and_identities() {
        let p = params(0.5, 1.2);
        let th = beta_thresholds(&p);
        assert!((th.beta1 - 0.3125).abs() < 1e-12);
        assert!((th.beta2 - 0.4).abs() < 1e-12);
        assert!((th.beta3 - 0.625).abs() < 1e-12);
        assert!(th.beta1 < th.beta2 && th.beta2 < th.beta3);
        // beta3 equals the assumption-3 upper bound.
        assert!((th.beta3 - p.beta_bounds().1).abs() < 1e-9);

        // The thresholds meet pairwise at the alpha interval's endpoints.
        let (a_lo, a_hi) = p.alpha_bounds();
        let near_lo = beta_thresholds_for(0.5, 0.75, a_lo, 1.0);
        assert!((near_lo.beta1 - near_lo.beta2).abs() < 1e-9);
        let near_hi = beta_thresholds_for(0.5, 0.75, a_hi, 1.0);
        assert!((near_hi.beta2 - near_hi.beta3).abs() < 1e-9);
    }

    #[test]
    fn firm_decision_fixtures() {
        let rep = compare(&params(0.5, 1.2)).unwrap();
        assert_eq!(rep.firm_prefers, Preference::Transparent);
        assert!((rep.payoff_gap_firm - 0.4375).abs() < 1e-12);
        assert_eq!(rep.agents_prefer, Preference::Opaque);

        let rep = compare(&params(0.2, 1.2)).unwrap();
        assert_eq!(rep.firm_prefers, Preference::Indifferent);
        assert!(rep.payoff_gap_firm.abs() < 1e-12);
        assert_eq!(rep.agents_prefer, Preference::Indifferent);

        // C2 point with beta = 0.5 > beta2 = 0.4.
        let rep = compare(&params(0.5, 0.7)).unwrap();
        assert_eq!(rep.firm_prefers, Preference::Transparent);
        assert!((rep.payoff_gap_firm - (0.25 - 1.0 / 6.0)).abs() < 1e-12);
        assert_eq!(rep.agents_prefer, Preference::Transparent);
        let th = rep.applicable_threshold.unwrap();
        assert_eq!(th.which, 2);
        assert!(th.cleared);
    }

    #[test]
    fn agents_decision_c3_fixture() {
        let rep = compare(&params(0.1, 0.8)).unwrap();
        assert_eq!(rep.region, RegionLabel::C3);
        assert_eq!(rep.agents_prefer, Preference::Transparent);
        assert!((rep.payoff_gap_agents - (0.55 - 0.625 * 2.0 / 3.0)).abs() < 1e-9);
        assert_eq!(rep.firm_prefers, Preference::Opaque);
    }

    #[test]
    fn dos_extremes_and_mixed_value() {
        let p = params(0.5, 1.2);
        let none = StrategyProfile::new(Scenario::Opaque, 0.0, 0.0);
        assert!((degree_of_separation(&none, &p) - 0.5).abs() < 1e-12);
        let separate = StrategyProfile::new(Scenario::Opaque, 1.0, 0.0);
        assert!((degree_of_separation(&separate, &p) - 1.0).abs() < 1e-12);
        let mixed = StrategyProfile::new(Scenario::Transparent, 1.0, 2.0 / 3.0);
        assert!((degree_of_separation(&mixed, &p) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn comparative_statics_fixtures() {
        let stats = comparative_statics(&params(0.5, 1.2)).unwrap();
        let by_name = |n: &str| {
            stats
                .entries
                .iter()
                .find(|e| e.name == n)
                .unwrap()
                .clone()
        };
        let e = by_name("d_beta1_d_lambda");
        assert!((e.analytic - 0.75).abs() < 1e-12);
        let e = by_name("d_beta1_d_theta");
        assert!((e.analytic + 0.875).abs() < 1e-12);
        let e = by_name("d_beta2_d_theta");
        assert_eq!(e.analytic, 0.0);
        for e in &stats.entries {
            let rel = (e.analytic - e.finite_difference).abs() / e.analytic.abs().max(1.0);
            assert!(rel < 1e-5, "{}: {} vs {}", e.name, e.analytic, e.finite_difference);
        }
    }

    #[test]
    fn region_areas_partition_and_lambda_growth() {
        let areas = region_area(0.75, 1.0, 1.5, 300);
        let sum: f64 = areas.areas.iter().sum();
        assert!((sum - areas.feasible_area).abs() < 1e-9);
        // Feasible triangle has area c_max^2 / 2.
        assert!((areas.feasible_area - 1.125).abs() < 0.02);

        let c_regions = |a: &RegionAreas| {
            a.area(RegionLabel::C1) + a.area(RegionLabel::C2) + a.area(RegionLabel::C4)
        };
        let low = region_area(0.65, 1.0, 1.5, 300);
        let high = region_area(0.85, 1.0, 1.5, 300);
        assert!(c_regions(&high) > c_regions(&low));
    }

    #[test]
    fn cost_classifier_agrees_with_solver_pair() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let p = crate::sampling::sample_valid(&mut rng);
            let via_solver = classify_region(&p).unwrap();
            let via_costs =
                region_of_costs(p.lambda(), p.reward(), p.cost_h(), p.cost_l()).unwrap();
            assert_eq!(via_solver, via_costs);
        }
    }

    #[test]
    fn lambda_one_makes_c4_band_maximal() {
        // At lambda = 1 the O1 condition on cost_h starts at zero, so C4
        // spans the whole band cost_h in [0, R].
        assert_eq!(
            region_of_costs(1.0, 1.0, 0.01, 1.2),
            Some(RegionLabel::C4)
        );
        assert_eq!(
            region_of_costs(0.75, 1.0, 0.01, 1.2),
            Some(RegionLabel::N2)
        );
    }
}
