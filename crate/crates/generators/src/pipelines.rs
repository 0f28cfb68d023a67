//! Generator pipelines for read-once branching programs: the many-products
//! generator, the recursive short-xor generator, and the three end-user
//! generators built from them (width-3, locally-monotone, read-once-poly).

use restrictions::{ParamConfig, Restriction, TwoStepRestriction, XorShortRestriction};
use serde::Serialize;
use smallbias::{LowDegreeSampler, SeedReport, SeedStream, SmallBiasSampler, SubsetSampler};

use crate::generator::{GenError, Generator, SmallBiasGenerator};
use crate::hash_tree::{honest_hash_chunk, inw, HashTreeGenerator};

/// Mask with the low `n` bits set.
fn ones(n: usize) -> u64 {
    debug_assert!(n <= 64);
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// log2(n / eps), floored at 1 so downstream ceilings stay positive.
fn log_ratio(n: usize, eps: f64) -> f64 {
    (n.max(1) as f64 / eps).log2().max(1.0)
}

fn check_n(n: usize) -> Result<(), GenError> {
    if n == 0 || n > 64 {
        return Err(GenError::Infeasible {
            what: format!("output length {n} outside 1..=64"),
        });
    }
    Ok(())
}

fn check_budget(bits: u64, cfg: &ParamConfig, what: &str) -> Result<(), GenError> {
    if bits > cfg.seed_budget {
        return Err(GenError::Infeasible {
            what: format!("{what} needs {bits} seed bits, budget {}", cfg.seed_budget),
        });
    }
    Ok(())
}

fn reject_honest(cfg: &ParamConfig, what: &str) -> Result<(), GenError> {
    if cfg.honest {
        return Err(GenError::Infeasible {
            what: format!("{what}: honest profile is report-only"),
        });
    }
    Ok(())
}

/// Fools products of many short disjoint-input functions. A sparse set T
/// (marginal 2^-b per coordinate) receives a low-degree xor stack; the
/// complement receives a plain small-bias string. Conceptually the output
/// starts as the all-ones string and both assignments overwrite their own
/// side, so together they cover every coordinate.
pub struct ManyProductsGenerator {
    n: usize,
    b: u32,
    t: u32,
    eps: f64,
    subset: SubsetSampler,
    outside: SmallBiasSampler,
    inside: LowDegreeSampler,
}

impl ManyProductsGenerator {
    /// `b` controls the sparsity of T, `t` is the junta size the output is
    /// certified against (recorded, not consumed), `eps` the error target.
    pub fn new(n: usize, b: u32, t: u32, eps: f64, cfg: &ParamConfig) -> Result<Self, GenError> {
        reject_honest(cfg, "many-products")?;
        check_n(n)?;
        if b == 0 {
            return Err(GenError::Infeasible {
                what: "many-products needs block exponent b >= 1".into(),
            });
        }
        let subset = SubsetSampler::new_powering(n, b, cfg.subset_field_k);
        let outside = SmallBiasSampler::powering(n, cfg.assign_field_k);
        let inside = LowDegreeSampler::new_powering(n, cfg.low_degree_d, cfg.assign_field_k);
        let bits = subset.seed_bits() + outside.seed_bits() + inside.seed_bits();
        check_budget(bits, cfg, "many-products")?;
        Ok(ManyProductsGenerator {
            n,
            b,
            t,
            eps,
            subset,
            outside,
            inside,
        })
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn junta_size(&self) -> u32 {
        self.t
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Generator for ManyProductsGenerator {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        self.subset.seed_bits() + self.outside.seed_bits() + self.inside.seed_bits()
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        let t_mask = self.subset.generate(seed);
        let outside = self.outside.generate(seed);
        let inside = self.inside.generate(seed);
        (0..self.n)
            .map(|i| {
                if t_mask >> i & 1 == 1 {
                    inside[i]
                } else {
                    outside[i]
                }
            })
            .collect()
    }

    fn report(&self) -> SeedReport {
        SeedReport::node(
            "many-products",
            format!("sparsity 2^-{}, junta {}", self.b, self.t),
            vec![
                self.subset.report("sparse-set"),
                self.outside.report("outside-assignment"),
                self.inside.report("inside-assignment"),
            ],
        )
    }

    fn kind(&self) -> &'static str {
        "many-products"
    }
}

/// Which stand-in to use at the recursion floor of the short-xor generator.
/// Both are certified empirically; swapping them must preserve the contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseKind {
    HashTree,
    SmallBias,
}

/// Stand-in generator for short programs of bounded width. The default is
/// the recursive hash tree; the small-bias string is the alternative.
pub fn base_short_robp(
    n: usize,
    width_hint: u32,
    eps: f64,
    cfg: &ParamConfig,
) -> Result<Box<dyn Generator>, GenError> {
    base_short_robp_with(BaseKind::HashTree, n, width_hint, eps, cfg)
}

pub fn base_short_robp_with(
    kind: BaseKind,
    n: usize,
    width_hint: u32,
    eps: f64,
    cfg: &ParamConfig,
) -> Result<Box<dyn Generator>, GenError> {
    check_n(n)?;
    match kind {
        BaseKind::HashTree => Ok(Box::new(inw(n, width_hint, eps, cfg)?)),
        BaseKind::SmallBias => {
            let k = (log_ratio(n, eps).ceil() as u32).clamp(2, 12);
            Ok(Box::new(SmallBiasGenerator::new(
                SmallBiasSampler::powering(n, k),
            )))
        }
    }
}

enum ShortXorInner {
    Base {
        gen: Box<dyn Generator>,
        /// Length bound the stand-in is certified against (recorded).
        n_prime: u64,
    },
    Recurse {
        many: ManyProductsGenerator,
        rounds: Vec<XorShortRestriction>,
        child: Box<ShortXorGenerator>,
    },
}

/// Fools xors of short-block programs: width-w programs whose input splits
/// into consecutive blocks of length at most 2^b, each block read once.
///
/// Recursive structure: xor the many-products output (restricted to the
/// target coordinates) with a string that fills coordinates killed by
/// iterated assignment rounds from their sampled signs and the still-alive
/// coordinates from a half-exponent child built on the full ambient set.
/// Coordinates outside `t_mask` are emitted as +1.
pub struct ShortXorGenerator {
    n: usize,
    w: u32,
    b: u32,
    eps: f64,
    t_mask: u64,
    depth: u32,
    inner: ShortXorInner,
}

impl ShortXorGenerator {
    pub fn new(
        t_mask: u64,
        n: usize,
        w: u32,
        b: u32,
        eps: f64,
        cfg: &ParamConfig,
    ) -> Result<Self, GenError> {
        Self::with_base(BaseKind::HashTree, t_mask, n, w, b, eps, cfg)
    }

    pub fn with_base(
        kind: BaseKind,
        t_mask: u64,
        n: usize,
        w: u32,
        b: u32,
        eps: f64,
        cfg: &ParamConfig,
    ) -> Result<Self, GenError> {
        reject_honest(cfg, "short-xor")?;
        check_n(n)?;
        if t_mask & !ones(n) != 0 {
            return Err(GenError::Infeasible {
                what: "target mask has bits beyond the output length".into(),
            });
        }
        let gen = Self::build(kind, t_mask, n, w, b, eps, cfg, 0)?;
        check_budget(gen.seed_bits(), cfg, "short-xor")?;
        Ok(gen)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        kind: BaseKind,
        t_mask: u64,
        n: usize,
        w: u32,
        b: u32,
        eps: f64,
        cfg: &ParamConfig,
        depth: u32,
    ) -> Result<Self, GenError> {
        let log_ne = log_ratio(n, eps);
        // Once blocks are this short a single stand-in call suffices. The
        // b <= 1 leg also ends the halving recursion.
        let base_case =
            depth >= cfg.max_xor_depth || (b as f64) <= cfg.c_alg * log_ne.log2().max(1.0) || b <= 1;
        let inner = if base_case {
            // Restricted to one block, the xor is a single short program:
            // length 2 * 16^(2b) * b + 10 * log2(n/eps) suffices for the
            // collision argument, saturating on overflow.
            let pow: u128 = if 8 * (b as u32) >= 127 {
                u128::MAX
            } else {
                1u128 << (8 * b)
            };
            let n_prime = pow
                .saturating_mul(2)
                .saturating_mul(b as u128)
                .saturating_add((10.0 * log_ne).ceil() as u128);
            let n_prime = u64::try_from(n_prime).unwrap_or(u64::MAX);
            ShortXorInner::Base {
                gen: base_short_robp_with(kind, n, 2 * w, eps, cfg)?,
                n_prime,
            }
        } else {
            let t = (10.0 * log_ne).ceil() as u32;
            let many = ManyProductsGenerator::new(n, b, t, eps, cfg)?;
            let round_eps = eps / (n as f64).powi(2);
            let proto = XorShortRestriction::new(n, w, b, round_eps, cfg)?;
            // Enough rounds to assign everything but 1e-4 of the mass.
            let p = 0.5f64.powi(proto.a() as i32);
            let full_rounds = (1e-4f64.ln() / (1.0 - p).ln()).ceil() as u64;
            let t_rounds = full_rounds.min(cfg.iterate_rounds_cap as u64).max(1) as usize;
            let rounds = vec![proto; t_rounds];
            let child = Self::build(
                kind,
                ones(n),
                n,
                w,
                (b / 2).max(1),
                eps / 2.0,
                cfg,
                depth + 1,
            )?;
            ShortXorInner::Recurse {
                many,
                rounds,
                child: Box::new(child),
            }
        };
        Ok(ShortXorGenerator {
            n,
            w,
            b,
            eps,
            t_mask,
            depth,
            inner,
        })
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn width(&self) -> u32 {
        self.w
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn t_mask(&self) -> u64 {
        self.t_mask
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn is_base(&self) -> bool {
        matches!(self.inner, ShortXorInner::Base { .. })
    }

    /// Length bound recorded for the stand-in at the recursion floor.
    pub fn n_prime(&self) -> Option<u64> {
        match &self.inner {
            ShortXorInner::Base { n_prime, .. } => Some(*n_prime),
            ShortXorInner::Recurse { .. } => None,
        }
    }

    pub fn round_count(&self) -> usize {
        match &self.inner {
            ShortXorInner::Base { .. } => 0,
            ShortXorInner::Recurse { rounds, .. } => rounds.len(),
        }
    }

    pub fn child(&self) -> Option<&ShortXorGenerator> {
        match &self.inner {
            ShortXorInner::Base { .. } => None,
            ShortXorInner::Recurse { child, .. } => Some(child),
        }
    }
}

impl Generator for ShortXorGenerator {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        match &self.inner {
            ShortXorInner::Base { gen, .. } => gen.seed_bits(),
            ShortXorInner::Recurse {
                many,
                rounds,
                child,
            } => {
                many.seed_bits()
                    + rounds.iter().map(|r| r.seed_bits()).sum::<u64>()
                    + child.seed_bits()
            }
        }
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        match &self.inner {
            ShortXorInner::Base { gen, .. } => {
                let out = gen.emit(seed);
                (0..self.n)
                    .map(|i| if self.t_mask >> i & 1 == 1 { out[i] } else { 1 })
                    .collect()
            }
            ShortXorInner::Recurse {
                many,
                rounds,
                child,
            } => {
                let x = many.emit(seed);
                // Iterated rounds: each round assigns coordinates still
                // alive; the first assignment wins, the rest keep whatever
                // stays alive for the child.
                let mut alive = self.t_mask;
                let mut y = vec![1i8; self.n];
                for round in rounds {
                    let rho = round.build(seed);
                    let killed = alive & !rho.alive_mask();
                    for i in 0..self.n {
                        if killed >> i & 1 == 1 {
                            y[i] = rho.sign(i);
                        }
                    }
                    alive &= rho.alive_mask();
                }
                let z = child.emit(seed);
                (0..self.n)
                    .map(|i| {
                        if self.t_mask >> i & 1 == 0 {
                            1
                        } else if alive >> i & 1 == 1 {
                            x[i] * z[i]
                        } else {
                            x[i] * y[i]
                        }
                    })
                    .collect()
            }
        }
    }

    fn report(&self) -> SeedReport {
        let label = format!("w={} b={} depth={}", self.w, self.b, self.depth);
        match &self.inner {
            ShortXorInner::Base { gen, n_prime } => SeedReport::node(
                "short-xor",
                format!("{label} base, length bound {n_prime}"),
                vec![gen.report()],
            ),
            ShortXorInner::Recurse {
                many,
                rounds,
                child,
            } => SeedReport::node(
                "short-xor",
                label,
                vec![
                    many.report(),
                    SeedReport::node(
                        "assignment-rounds",
                        format!("{} rounds", rounds.len()),
                        rounds.iter().map(|r| r.report()).collect(),
                    ),
                    child.report(),
                ],
            ),
        }
    }

    fn kind(&self) -> &'static str {
        "short-xor"
    }
}

/// Restriction whose alive set is sparse: alive with probability 2^-a per
/// coordinate (sampled by the subset sampler), assigned coordinates filled
/// from a small-bias string.
pub struct SparseAliveRestriction {
    n: usize,
    a: u32,
    subset: SubsetSampler,
    signs: SmallBiasSampler,
}

impl SparseAliveRestriction {
    pub fn new(n: usize, a: u32, cfg: &ParamConfig) -> Result<Self, GenError> {
        reject_honest(cfg, "sparse-alive")?;
        check_n(n)?;
        if a == 0 {
            return Err(GenError::Infeasible {
                what: "sparse-alive needs a >= 1".into(),
            });
        }
        let subset = SubsetSampler::new_powering(n, a, cfg.subset_field_k);
        let signs = SmallBiasSampler::powering(n, cfg.assign_field_k);
        let bits = subset.seed_bits() + signs.seed_bits();
        check_budget(bits, cfg, "sparse-alive")?;
        Ok(SparseAliveRestriction {
            n,
            a,
            subset,
            signs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn seed_bits(&self) -> u64 {
        self.subset.seed_bits() + self.signs.seed_bits()
    }

    pub fn build(&self, seed: &mut SeedStream) -> Restriction {
        let alive = self.subset.generate(seed);
        let values = self.signs.generate(seed);
        let signs = (0..self.n)
            .map(|i| if alive >> i & 1 == 1 { 0 } else { values[i] })
            .collect::<Vec<i8>>();
        Restriction::new(self.n, alive, signs).expect("signs built to shape")
    }

    pub fn report(&self) -> SeedReport {
        SeedReport::node(
            "sparse-alive-restriction",
            format!("alive marginal 2^-{}", self.a),
            vec![
                self.subset.report("alive-set"),
                self.signs.report("assignment"),
            ],
        )
    }
}

/// Generator for locally monotone width-3 programs (every variable's two
/// labels agree layerwise up to a fixed relabeling): one sparse-alive
/// restriction, then the short-xor generator fills the alive coordinates.
pub struct LocallyMonotonePrg {
    n: usize,
    sparse: SparseAliveRestriction,
    fill: ShortXorGenerator,
}

impl LocallyMonotonePrg {
    pub fn new(n: usize, eps: f64, cfg: &ParamConfig) -> Result<Self, GenError> {
        // Alive fraction 2^-3: the nearest power of two to the nominal 1/10.
        let sparse = SparseAliveRestriction::new(n, 3, cfg)?;
        let ell0 = (cfg.c_alg * log_ratio(n, eps)).ceil().max(1.0) as u32;
        let fill = ShortXorGenerator::new(ones(n), n, 3, ell0, eps / (3.0 * n as f64), cfg)?;
        let prg = LocallyMonotonePrg { n, sparse, fill };
        check_budget(prg.seed_bits(), cfg, "locally-monotone-prg")?;
        Ok(prg)
    }

    pub fn sparse(&self) -> &SparseAliveRestriction {
        &self.sparse
    }

    pub fn fill(&self) -> &ShortXorGenerator {
        &self.fill
    }
}

impl Generator for LocallyMonotonePrg {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        self.sparse.seed_bits() + self.fill.seed_bits()
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        let rho = self.sparse.build(seed);
        let g = self.fill.emit(seed);
        (0..self.n)
            .map(|i| if rho.is_alive(i) { g[i] } else { rho.sign(i) })
            .collect()
    }

    fn report(&self) -> SeedReport {
        SeedReport::node(
            "locally-monotone-prg",
            format!("n={}", self.n),
            vec![self.sparse.report(), self.fill.report()],
        )
    }

    fn kind(&self) -> &'static str {
        "locally-monotone-prg"
    }
}

/// Generator for arbitrary width-3 programs: iterated two-step restrictions
/// composed by refinement, a hash-tree string filling whatever stays alive.
pub struct Width3Prg {
    n: usize,
    rounds: Vec<TwoStepRestriction>,
    base: HashTreeGenerator,
}

impl Width3Prg {
    pub fn new(n: usize, eps: f64, cfg: &ParamConfig) -> Result<Self, GenError> {
        reject_honest(cfg, "width3-prg")?;
        check_n(n)?;
        let k = cfg.iterate_rounds_cap.max(1);
        let eps_round = eps / (4.0 * k as f64);
        let rounds = (0..k)
            .map(|_| TwoStepRestriction::new(n, eps_round, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let base = inw(n, 4, eps_round, cfg)?;
        let prg = Width3Prg { n, rounds, base };
        check_budget(prg.seed_bits(), cfg, "width3-prg")?;
        Ok(prg)
    }

    pub fn rounds(&self) -> &[TwoStepRestriction] {
        &self.rounds
    }

    pub fn base(&self) -> &HashTreeGenerator {
        &self.base
    }

    /// The composed restriction the rounds produce for this seed prefix.
    pub fn restriction(&self, seed: &mut SeedStream) -> Restriction {
        let mut cum = Restriction::full(self.n);
        for round in &self.rounds {
            cum = cum.refine(&round.build(seed)).expect("matching length");
        }
        cum
    }
}

impl Generator for Width3Prg {
    fn n(&self) -> usize {
        self.n
    }

    fn seed_bits(&self) -> u64 {
        self.rounds.iter().map(|r| r.seed_bits()).sum::<u64>() + self.base.seed_bits()
    }

    fn emit(&self, seed: &mut SeedStream) -> Vec<i8> {
        let cum = self.restriction(seed);
        let fill = self.base.emit(seed);
        (0..self.n)
            .map(|i| if cum.is_alive(i) { fill[i] } else { cum.sign(i) })
            .collect()
    }

    fn report(&self) -> SeedReport {
        let mut children = vec![SeedReport::node(
            "restriction-rounds",
            format!("{} rounds", self.rounds.len()),
            self.rounds.iter().map(|r| r.report()).collect(),
        )];
        children.push(self.base.report());
        SeedReport::node("width3-prg", format!("n={}", self.n), children)
    }

    fn kind(&self) -> &'static str {
        "width3-prg"
    }
}

/// Generator for read-once polynomials over +-1 variables (xors of products
/// on disjoint variable sets): the short-xor generator at width 2 with the
/// block exponent covering the whole input.
pub fn read_once_poly_prg(
    n: usize,
    eps: f64,
    cfg: &ParamConfig,
) -> Result<ShortXorGenerator, GenError> {
    let b = log_ratio(8 * n.max(1), eps).ceil().max(1.0) as u32;
    ShortXorGenerator::new(ones(n), n, 2, b, eps / (8.0 * n.max(1) as f64), cfg)
}

/// Full-strength seed shape of the short-xor generator, in the log2 domain.
/// Report-only: mirrors the schedule the desk profile truncates.
#[derive(Clone, Debug, Serialize)]
pub struct HonestShortXorShape {
    pub b: u32,
    pub eps: f64,
    pub base: bool,
    pub many_bits: f64,
    pub rounds: f64,
    pub rounds_bits: f64,
    pub base_bits: f64,
    pub total_bits: f64,
    /// Seed growth the correctness claim permits for these parameters.
    pub claim_bits: f64,
    pub child: Option<Box<HonestShortXorShape>>,
}

pub fn honest_short_xor_shape(
    n: usize,
    w: u32,
    b: u32,
    eps: f64,
    cfg: &ParamConfig,
) -> HonestShortXorShape {
    let log_ne = log_ratio(n, eps);
    let claim_bits =
        ((b.max(2) as f64).log2() + log_ne.log2().max(1.0)).powi(2 * w as i32 + 2) * log_ne;
    let base_case = (b as f64) <= cfg.c_alg * log_ne.log2().max(1.0) || b <= 1;
    if base_case {
        let chunk = honest_hash_chunk(n, 2 * w, eps) as f64;
        let leaves = (n as f64 / chunk).ceil().max(1.0);
        let levels = leaves.log2().ceil().max(0.0);
        let base_bits = chunk * (1.0 + 2.0 * levels);
        return HonestShortXorShape {
            b,
            eps,
            base: true,
            many_bits: 0.0,
            rounds: 0.0,
            rounds_bits: 0.0,
            base_bits,
            total_bits: base_bits,
            claim_bits,
            child: None,
        };
    }
    let nf = n as f64;
    let t = 10.0 * log_ne;
    // Bias targets for the many-products stage, log2 domain (negative).
    let delta_t_log2 = 10.0 * cfg.cprime * (eps / nf).log2();
    let delta_v_log2 = (eps / 4.0).log2() + cfg.cprime * (eps / nf).log2() - t;
    let many_bits = 2.0 * ((nf * b as f64).log2() - delta_t_log2)
        + 2.0 * (nf.log2() - delta_t_log2)
        + 16.0 * 2.0 * (nf.log2() - delta_v_log2);
    let round_eps = eps / nf.powi(2);
    let hx = cfg.honest_xor_short(n, round_eps, b, w);
    let p = 0.5f64.powi(hx.a as i32);
    let rounds = (1e-4f64.ln() / (1.0 - p).ln()).ceil().max(1.0);
    let rounds_bits = rounds * hx.total_bits;
    let child = honest_short_xor_shape(n, w, (b / 2).max(1), eps / 2.0, cfg);
    let total_bits = many_bits + rounds_bits + child.total_bits;
    HonestShortXorShape {
        b,
        eps,
        base: false,
        many_bits,
        rounds,
        rounds_bits,
        base_bits: 0.0,
        total_bits,
        claim_bits,
        child: Some(Box::new(child)),
    }
}

/// Full-strength seed shape of the width-3 generator, log2 domain.
#[derive(Clone, Debug, Serialize)]
pub struct HonestWidth3Shape {
    pub rounds: u32,
    pub ell0: f64,
    pub ell_k: f64,
    /// Block-length bound on the residual program fed to the base stage.
    pub base_ell: f64,
    /// log2 of the per-round residual failure mass eps / n^10.
    pub delta_log2: f64,
    pub eps_round: f64,
    pub round_bits: f64,
    pub rounds_bits: f64,
    pub base_bits: f64,
    pub total_bits: f64,
}

pub fn honest_width3_shape(n: usize, eps: f64, cfg: &ParamConfig) -> HonestWidth3Shape {
    let nf = n.max(2) as f64;
    let log_ne = log_ratio(n, eps);
    let ell0 = (cfg.c_alg * log_ne).max(2.0);
    let lll = nf.log2().max(2.0).log2().max(2.0).log2().max(1.0);
    let ell_k = lll + (1.0 / eps).log2().max(1.0);
    let k = (ell0 / ell_k).log2().ceil().max(1.0) as u32;
    let eps_round = eps / (4.0 * k as f64);
    let round_bits = cfg.honest_two_step(n, eps_round).total_bits;
    let rounds_bits = (k as f64 + 1.0) * round_bits;
    let base_ell = ell_k * cfg.cprime.powf(ell_k);
    // Residual programs have few collisions and short blocks; the base
    // stage's seed is (loglog n + log(1/eps') + log ell + w) * log n.
    let base_bits =
        (nf.log2().max(2.0).log2() + (1.0 / eps_round).log2() + base_ell.log2() + 4.0) * nf.log2();
    let delta_log2 = eps.log2() - 10.0 * nf.log2();
    HonestWidth3Shape {
        rounds: k,
        ell0,
        ell_k,
        base_ell,
        delta_log2,
        eps_round,
        round_bits,
        rounds_bits,
        base_bits,
        total_bits: rounds_bits + base_bits,
    }
}

/// Full-strength seed shape of the locally-monotone generator, log2 domain.
#[derive(Clone, Debug, Serialize)]
pub struct HonestLocallyMonotoneShape {
    /// Nominal alive fraction of the sparse stage.
    pub alpha: f64,
    /// log2 of the sparse stage's bias target eps / 3.
    pub delta_log2: f64,
    pub ell0: f64,
    pub sparse_bits: f64,
    pub fill: HonestShortXorShape,
    pub total_bits: f64,
}

pub fn honest_locally_monotone_shape(
    n: usize,
    eps: f64,
    cfg: &ParamConfig,
) -> HonestLocallyMonotoneShape {
    let nf = n.max(2) as f64;
    let delta_log2 = (eps / 3.0).log2();
    // Subset sampler plus sign string at bias eps/3.
    let sparse_bits = 2.0 * ((nf * 4.0).log2() - delta_log2) + 2.0 * (nf.log2() - delta_log2);
    let ell0 = (cfg.c_alg * log_ratio(n, eps)).max(2.0);
    let fill = honest_short_xor_shape(n, 3, ell0.ceil() as u32, eps / (3.0 * nf), cfg);
    let total_bits = sparse_bits + fill.total_bits;
    HonestLocallyMonotoneShape {
        alpha: 0.1,
        delta_log2,
        ell0,
        sparse_bits,
        fill,
        total_bits,
    }
}
