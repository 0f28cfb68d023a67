use serde::{Deserialize, Serialize};

/// Shared parameter schedule for the pseudorandom restrictions and the
/// generators built on them.
///
/// Two profiles ship. `desk` keeps every component small enough that whole
/// seed spaces can be enumerated: marginal exponents are floored, total seed
/// bits are capped, and field sizes are explicit knobs. `honest` evaluates
/// the committed closed-form schedules at full strength; those instances are
/// astronomically large, so honest mode is report-only and constructors
/// refuse to build runnable objects from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamConfig {
    /// Exponent constant in the bias schedules.
    pub cprime: f64,
    /// Outer constant for block counts and recursion thresholds.
    pub c_alg: f64,
    /// Scale inside the marginal rule for the assigned fraction p.
    pub c0: f64,
    /// Floor: the assigned-set marginal p never drops below 2^-p_floor_exp.
    pub p_floor_exp: u32,
    /// Cap on total seed bits for anything that actually runs.
    pub seed_budget: u64,
    /// GF(2^k) size for subset samplers.
    pub subset_field_k: u32,
    /// GF(2^k) size for sign-assignment samplers.
    pub assign_field_k: u32,
    /// Degree of the xor stack used for subset selection in the
    /// many-products generator.
    pub low_degree_d: u32,
    /// Recursion cap for the short-xor generator.
    pub max_xor_depth: u32,
    /// Cap on composed restriction rounds inside the pipelines.
    pub iterate_rounds_cap: u32,
    /// Hash-tree chunk width in bits.
    pub hash_chunk: u32,
    /// Report-only profile: full-strength formulas, no execution.
    pub honest: bool,
}

impl ParamConfig {
    pub fn desk() -> ParamConfig {
        ParamConfig {
            cprime: 1.0,
            c_alg: 2.0,
            c0: 1.0,
            p_floor_exp: 4,
            seed_budget: 24,
            subset_field_k: 2,
            assign_field_k: 2,
            low_degree_d: 2,
            max_xor_depth: 0,
            iterate_rounds_cap: 1,
            hash_chunk: 4,
            honest: false,
        }
    }

    pub fn honest() -> ParamConfig {
        ParamConfig {
            cprime: 20.0,
            c_alg: 20.0,
            c0: 4.0,
            p_floor_exp: u32::MAX,
            seed_budget: u64::MAX,
            subset_field_k: 32,
            assign_field_k: 32,
            low_degree_d: 16,
            max_xor_depth: 64,
            iterate_rounds_cap: u32::MAX,
            hash_chunk: 16,
            honest: true,
        }
    }

    /// Uncapped marginal exponent: the largest power of two
    /// p = 2^-a with p <= 1 / (c0 * log2(b * log2(n/eps)))^(2w).
    pub fn p_exponent_raw(&self, n: usize, eps: f64, b: u32, w: u32) -> u32 {
        assert!(n >= 1 && eps > 0.0 && b >= 1 && w >= 1);
        let ratio = (n as f64 / eps).max(2.0);
        let inner = (b as f64 * ratio.log2()).max(2.0);
        let x = self.c0 * inner.log2();
        if x <= 1.0 {
            1
        } else {
            ((2.0 * w as f64 * x.log2()).ceil() as u32).max(1)
        }
    }

    /// Marginal exponent with the desk floor applied (honest mode has none).
    pub fn p_exponent(&self, n: usize, eps: f64, b: u32, w: u32) -> u32 {
        let a = self.p_exponent_raw(n, eps, b, w);
        if self.honest {
            a
        } else {
            a.min(self.p_floor_exp)
        }
    }

    /// Full-strength parameters implied by the committed schedules, in log2
    /// domain because the quantities underflow f64. Report-only.
    pub fn honest_xor_short(&self, n: usize, eps: f64, b: u32, w: u32) -> HonestRestrictionParams {
        let log_ne = (n as f64 / eps).log2();
        let a = self.p_exponent_raw(n, eps, b, w);
        let p_log2 = -(a as f64);
        let delta_t_log2 = 2.0 * self.cprime * log_ne * p_log2;
        let delta_log2 = -10.0 * self.cprime * log_ne;
        let delta_x_prime_log2 = -100.0 * self.cprime * log_ne;
        let delta_x_log2 = delta_x_prime_log2 * ((b + 1) as f64).ln() / 1.1f64.ln();
        // a powering sampler over N positions certifying bias delta needs a
        // field with N/2^k <= delta, i.e. 2*ceil(log2 N - log2 delta) bits
        let subset_bits = 2.0 * ((n as f64 * a as f64).log2() - delta_t_log2).ceil();
        let assign_bits = 2.0 * ((n as f64).log2() - delta_x_log2).ceil();
        HonestRestrictionParams {
            a,
            p_log2,
            delta_t_log2,
            delta_log2,
            delta_x_prime_log2,
            delta_x_log2,
            subset_bits,
            assign_bits,
            total_bits: subset_bits + assign_bits,
        }
    }

    /// Full-strength two-step parameters: a marginal-1/2 stage biased to
    /// (eps1/n)^10, then the short-block restriction at eps2 inside it.
    pub fn honest_two_step(&self, n: usize, eps: f64) -> HonestTwoStepParams {
        let eps1 = eps / 2.0;
        let eps2 = eps / (2.0 * n as f64);
        let b = (n as f64 / eps2).log2().ceil().max(1.0) as u32;
        let stage0_delta_log2 = 10.0 * (eps1 / n as f64).log2();
        let stage0_bits = 2.0 * ((n as f64).log2() - stage0_delta_log2).ceil();
        let inner = self.honest_xor_short(n, eps2, b, 3);
        let total_bits = stage0_bits + inner.total_bits;
        HonestTwoStepParams {
            eps1,
            eps2,
            b,
            stage0_delta_log2,
            stage0_bits,
            inner,
            total_bits,
        }
    }

    /// The first-stage bias must dominate p^(2k) for k = ceil(log2(n/eps));
    /// holds whenever cprime * log2(n/eps) >= ceil(log2(n/eps)).
    pub fn honest_delta_t_dominates(&self, n: usize, eps: f64, b: u32, w: u32) -> bool {
        let log_ne = (n as f64 / eps).log2();
        let k = log_ne.ceil();
        let h = self.honest_xor_short(n, eps, b, w);
        h.delta_t_log2 <= 2.0 * k * h.p_log2
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HonestRestrictionParams {
    pub a: u32,
    pub p_log2: f64,
    pub delta_t_log2: f64,
    pub delta_log2: f64,
    pub delta_x_prime_log2: f64,
    pub delta_x_log2: f64,
    pub subset_bits: f64,
    pub assign_bits: f64,
    pub total_bits: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HonestTwoStepParams {
    pub eps1: f64,
    pub eps2: f64,
    pub b: u32,
    pub stage0_delta_log2: f64,
    pub stage0_bits: f64,
    pub inner: HonestRestrictionParams,
    pub total_bits: f64,
}
