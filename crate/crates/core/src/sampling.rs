//! Random draws of valid parameter points, for verification campaigns and
//! property tests.

use rand::Rng;

use crate::model::{validate_params, ModelParams, RawParams};

/// Draws a parameter point uniformly inside the assumption-feasible set.
///
/// Shape parameters are drawn first, then `alpha` and `beta` uniformly inside
/// their induced interior intervals (with a small inset so boundary rejection
/// cannot trigger), then a cost pair uniformly on the feasible triangle
/// `0 <= cost_h < cost_l <= 1.5 R`. The occasional degenerate draw is
/// resampled.
pub fn sample_valid<R: Rng + ?Sized>(rng: &mut R) -> ModelParams {
    for _ in 0..1000 {
        let theta = rng.gen_range(0.08..0.92);
        let lambda = rng.gen_range(0.55..0.98);
        let reward = rng.gen_range(0.5..2.0);

        let alpha_lo = (theta * lambda + (1.0 - theta) * (1.0 - lambda)) * reward
            / (theta * lambda);
        let alpha_hi = reward / theta;
        let alpha = inset_uniform(rng, alpha_lo, alpha_hi);

        let beta_lo = (reward - theta * alpha).max(0.0);
        let beta_hi = reward
            - theta * (1.0 - lambda) * alpha
                / (theta * (1.0 - lambda) + (1.0 - theta) * lambda);
        if beta_hi <= beta_lo {
            continue;
        }
        let beta = inset_uniform(rng, beta_lo, beta_hi);

        let c_max = 1.5 * reward;
        let cost_h = rng.gen_range(0.0..c_max * 0.98);
        let cost_l = rng.gen_range(cost_h + 1e-6..=c_max);

        if let Ok(params) = validate_params(RawParams {
            theta,
            lambda,
            alpha,
            beta,
            reward,
            cost_h,
            cost_l,
        }) {
            return params;
        }
    }
    unreachable!("valid parameter draws should not fail 1000 times in a row")
}

fn inset_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let t = rng.gen_range(0.02..0.98);
    lo + t * (hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid_and_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut lambdas = Vec::new();
        for _ in 0..200 {
            let p = sample_valid(&mut rng);
            assert!(validate_params(p.raw()).is_ok());
            lambdas.push(p.lambda());
        }
        let spread = lambdas.iter().cloned().fold(f64::MIN, f64::max)
            - lambdas.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 0.2);
    }
}
