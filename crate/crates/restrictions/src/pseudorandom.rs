use smallbias::{SeedReport, SeedStream, SmallBiasSampler, SubsetSampler};

use crate::config::ParamConfig;
use crate::restriction::{Restriction, RestrictError};

/// Restriction tailored to products of short-block programs: sample the
/// ASSIGNED set with marginals p = 2^-a from a nearly-unbiased subset
/// distribution, then fill it from a nearly-unbiased sign string. The
/// complement stays alive.
#[derive(Clone, Debug)]
pub struct XorShortRestriction {
    n: usize,
    a: u32,
    subset: SubsetSampler,
    signs: SmallBiasSampler,
}

impl XorShortRestriction {
    pub fn new(
        n: usize,
        w: u32,
        b: u32,
        eps: f64,
        cfg: &ParamConfig,
    ) -> Result<XorShortRestriction, RestrictError> {
        if cfg.honest {
            return Err(RestrictError::ConfigInfeasible {
                what: "honest profile is report-only".into(),
            });
        }
        if n == 0 || n > 64 {
            return Err(RestrictError::SignShape);
        }
        let a = cfg.p_exponent(n, eps, b, w);
        let subset = SubsetSampler::new_powering(n, a, cfg.subset_field_k);
        let signs = SmallBiasSampler::powering(n, cfg.assign_field_k);
        let total = subset.seed_bits() + signs.seed_bits();
        if total > cfg.seed_budget {
            return Err(RestrictError::ConfigInfeasible {
                what: format!("needs {total} seed bits, budget {}", cfg.seed_budget),
            });
        }
        Ok(XorShortRestriction { n, a, subset, signs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Assigned-set marginal 2^-a.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn subset(&self) -> &SubsetSampler {
        &self.subset
    }

    pub fn sign_sampler(&self) -> &SmallBiasSampler {
        &self.signs
    }

    pub fn seed_bits(&self) -> u64 {
        self.subset.seed_bits() + self.signs.seed_bits()
    }

    pub fn report(&self) -> SeedReport {
        SeedReport::node(
            "xor-short-restriction",
            format!("assign marginal 2^-{}", self.a),
            vec![
                self.subset.report("assigned-set"),
                self.signs.report("assignment"),
            ],
        )
    }

    /// Deterministic in the seed; consumes exactly `seed_bits()`.
    pub fn build(&self, seed: &mut SeedStream) -> Restriction {
        let assigned = self.subset.generate(seed);
        let x = self.signs.generate(seed);
        let mask = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let alive = mask & !assigned;
        let signs = (0..self.n)
            .map(|i| if assigned >> i & 1 == 1 { x[i] } else { 0 })
            .collect();
        Restriction::new(self.n, alive, signs).unwrap()
    }
}

/// Convenience one-shot form.
pub fn xor_short_restriction(
    n: usize,
    w: u32,
    b: u32,
    eps: f64,
    cfg: &ParamConfig,
    seed: &mut SeedStream,
) -> Result<(Restriction, SeedReport), RestrictError> {
    let maker = XorShortRestriction::new(n, w, b, eps, cfg)?;
    let r = maker.build(seed);
    Ok((r, maker.report()))
}

/// Two-stage restriction for width-3 programs: a marginal-1/2 stage picks
/// T0, then the short-block restriction runs inside it; only coordinates
/// chosen by BOTH stages get assigned, from one full-length sign string.
#[derive(Clone, Debug)]
pub struct TwoStepRestriction {
    n: usize,
    stage0: SubsetSampler,
    inner: XorShortRestriction,
}

impl TwoStepRestriction {
    pub fn new(n: usize, eps: f64, cfg: &ParamConfig) -> Result<TwoStepRestriction, RestrictError> {
        if cfg.honest {
            return Err(RestrictError::ConfigInfeasible {
                what: "honest profile is report-only".into(),
            });
        }
        if n == 0 || n > 64 {
            return Err(RestrictError::SignShape);
        }
        // error split committed as eps/2 for the first stage, eps/2n inside
        let eps2 = eps / (2.0 * n as f64);
        let b = ((n as f64 / eps2).log2().ceil().max(1.0)) as u32;
        let stage0 = SubsetSampler::new_powering(n, 1, cfg.subset_field_k);
        let inner = XorShortRestriction::new(n, 3, b, eps2, cfg)?;
        let maker = TwoStepRestriction { n, stage0, inner };
        if maker.seed_bits() > cfg.seed_budget {
            return Err(RestrictError::ConfigInfeasible {
                what: format!(
                    "needs {} seed bits, budget {}",
                    maker.seed_bits(),
                    cfg.seed_budget
                ),
            });
        }
        Ok(maker)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stage0(&self) -> &SubsetSampler {
        &self.stage0
    }

    pub fn inner(&self) -> &XorShortRestriction {
        &self.inner
    }

    pub fn seed_bits(&self) -> u64 {
        self.stage0.seed_bits() + self.inner.seed_bits()
    }

    pub fn report(&self) -> SeedReport {
        SeedReport::node(
            "two-step-restriction",
            "half stage then short-block stage",
            vec![self.stage0.report("half-stage"), self.inner.report()],
        )
    }

    /// Assigned set = stage0 set ∩ inner assigned set.
    pub fn build(&self, seed: &mut SeedStream) -> Restriction {
        let t0 = self.stage0.generate(seed);
        let inner = self.inner.build(seed);
        let assigned = t0 & !inner.alive_mask();
        let mask = if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        };
        let signs = (0..self.n)
            .map(|i| if assigned >> i & 1 == 1 { inner.sign(i) } else { 0 })
            .collect();
        Restriction::new(self.n, mask & !assigned, signs).unwrap()
    }
}

/// Convenience one-shot form.
pub fn width3_two_step(
    n: usize,
    eps: f64,
    cfg: &ParamConfig,
    seed: &mut SeedStream,
) -> Result<(Restriction, SeedReport), RestrictError> {
    let maker = TwoStepRestriction::new(n, eps, cfg)?;
    let r = maker.build(seed);
    Ok((r, maker.report()))
}

/// Compose `t` independently seeded rounds. Each round's restriction covers
/// the full coordinate set; only its values on the still-alive set take
/// effect, so the alive set shrinks like (1-p)^t in expectation.
pub fn iterate<F>(n: usize, t: usize, mut maker: F) -> Result<Restriction, RestrictError>
where
    F: FnMut(usize) -> Result<Restriction, RestrictError>,
{
    assert!(t >= 1);
    let mut cum = Restriction::full(n);
    for round in 0..t {
        let r = maker(round)?;
        cum = cum.refine(&r)?;
    }
    Ok(cum)
}
