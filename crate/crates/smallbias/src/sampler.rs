use robp_core::Dyadic;
use serde::Serialize;

use crate::bits::SeedStream;
use crate::field::Gf2k;

/// Seed accounting tree. A node's `bits` is the exact number of seed bits
/// the component consumes; parents sum their children.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeedReport {
    pub component: String,
    pub construction: String,
    pub bits: u64,
    pub children: Vec<SeedReport>,
}

impl SeedReport {
    pub fn leaf(component: impl Into<String>, construction: impl Into<String>, bits: u64) -> Self {
        SeedReport {
            component: component.into(),
            construction: construction.into(),
            bits,
            children: Vec::new(),
        }
    }

    pub fn node(
        component: impl Into<String>,
        construction: impl Into<String>,
        children: Vec<SeedReport>,
    ) -> Self {
        let bits = children.iter().map(|c| c.bits).sum();
        SeedReport {
            component: component.into(),
            construction: construction.into(),
            bits,
            children,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbKind {
    /// Seed `(r, s)` in GF(2^k)^2; output bit `i` is `<r, s^(i+1)>`.
    /// Bias at most `n / 2^k` against every nonzero character.
    Powering { k: u32 },
    /// `n` independent uniform bits; zero bias, testing only.
    NaiveUniform,
}

/// Sampler for nearly-unbiased ±1 strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallBiasSampler {
    n: usize,
    kind: SbKind,
}

impl SmallBiasSampler {
    pub fn powering(n: usize, k: u32) -> SmallBiasSampler {
        assert!((1..=32).contains(&k));
        assert!(n >= 1);
        SmallBiasSampler {
            n,
            kind: SbKind::Powering { k },
        }
    }

    pub fn naive(n: usize) -> SmallBiasSampler {
        SmallBiasSampler {
            n,
            kind: SbKind::NaiveUniform,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> SbKind {
        self.kind
    }

    pub fn seed_bits(&self) -> u64 {
        match self.kind {
            SbKind::Powering { k } => 2 * k as u64,
            SbKind::NaiveUniform => self.n as u64,
        }
    }

    /// Declared bias bound: `min(1, n/2^k)` for powering, 0 for naive.
    pub fn delta(&self) -> Dyadic {
        match self.kind {
            SbKind::Powering { k } => {
                let d = Dyadic::ratio_pow2(self.n as i64, k);
                if d > Dyadic::one() {
                    Dyadic::one()
                } else {
                    d
                }
            }
            SbKind::NaiveUniform => Dyadic::zero(),
        }
    }

    /// Emit the ±1 string, consuming exactly `seed_bits()`.
    pub fn generate(&self, seed: &mut SeedStream) -> Vec<i8> {
        match self.kind {
            SbKind::Powering { k } => {
                let field = Gf2k::new(k);
                let r = seed.take(k);
                let s = seed.take(k);
                let mut pw = 1u64;
                (0..self.n)
                    .map(|_| {
                        pw = field.mul(pw, s);
                        if field.dot(r, pw) == 1 {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            }
            SbKind::NaiveUniform => (0..self.n)
                .map(|_| if seed.take_bit() == 1 { -1 } else { 1 })
                .collect(),
        }
    }

    /// Sign mask form of `generate` (bit set = -1); needs `n <= 64`.
    pub fn generate_mask(&self, seed: &mut SeedStream) -> u64 {
        assert!(self.n <= 64);
        let mut m = 0u64;
        for (i, v) in self.generate(seed).iter().enumerate() {
            if *v < 0 {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn report(&self, component: &str) -> SeedReport {
        let construction = match self.kind {
            SbKind::Powering { k } => format!("powering k={k} n={}", self.n),
            SbKind::NaiveUniform => format!("naive-uniform n={}", self.n),
        };
        SeedReport::leaf(component, construction, self.seed_bits())
    }

    /// For every nonzero character count the seeds `(r, s)` where the
    /// character sums to zero; over `r` this collapses to counting roots of
    /// `p_S(s) = sum_{i in S} s^(i+1)`, so `bias(S) = #roots / 2^k`, exact.
    ///
    /// Only powering instances support this; naive sampling is exactly
    /// unbiased.
    pub fn char_bias(&self, s_mask: u64) -> Dyadic {
        assert!(self.n <= 64 && s_mask != 0 && s_mask >> self.n == 0);
        match self.kind {
            SbKind::NaiveUniform => Dyadic::zero(),
            SbKind::Powering { k } => {
                let field = Gf2k::new(k);
                let q = 1u64 << k;
                let mut roots = 0i64;
                for s in 0..q {
                    let mut acc = 0u64;
                    let mut pw = 1u64;
                    for i in 0..self.n {
                        pw = field.mul(pw, s);
                        if s_mask >> i & 1 == 1 {
                            acc ^= pw;
                        }
                    }
                    if acc == 0 {
                        roots += 1;
                    }
                }
                Dyadic::ratio_pow2(roots, k)
            }
        }
    }

    /// Root counts for all characters, Gray-code order internally; entry
    /// `S` is the number of `s` with `p_S(s) = 0`. `bias(S) = counts[S]/2^k`.
    pub fn char_root_counts(&self) -> Vec<u32> {
        let SbKind::Powering { k } = self.kind else {
            return vec![0; 1 << self.n];
        };
        assert!(self.n <= 24, "certification cap");
        let field = Gf2k::new(k);
        let q = 1usize << k;
        // powers[i][s] = s^(i+1)
        let powers: Vec<Vec<u64>> = (0..self.n)
            .map(|i| {
                (0..q as u64)
                    .map(|s| field.pow(s, i as u64 + 1))
                    .collect()
            })
            .collect();
        let mut counts = vec![0u32; 1 << self.n];
        let mut acc = vec![0u64; q];
        counts[0] = q as u32; // empty character: p = 0 everywhere
        let mut prev_gray = 0u64;
        for t in 1..(1u64 << self.n) {
            let gray = t ^ (t >> 1);
            let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
            prev_gray = gray;
            let row = &powers[flipped];
            let mut zero = 0u32;
            for s in 0..q {
                acc[s] ^= row[s];
                if acc[s] == 0 {
                    zero += 1;
                }
            }
            counts[gray as usize] = zero;
        }
        counts
    }

    /// Exhaustive certification: max over nonzero characters of the exact
    /// bias, plus the worst character.
    pub fn max_char_bias(&self) -> (Dyadic, u64) {
        match self.kind {
            SbKind::NaiveUniform => (Dyadic::zero(), 0),
            SbKind::Powering { k } => {
                let counts = self.char_root_counts();
                let mut worst = (0u32, 0u64);
                for (s, &c) in counts.iter().enumerate().skip(1) {
                    if c > worst.0 {
                        worst = (c, s as u64);
                    }
                }
                (Dyadic::ratio_pow2(worst.0 as i64, k), worst.1)
            }
        }
    }
}

/// Pseudorandom subsets with marginals `2^-a`: `n` blocks of `a` signs from
/// one inner small-bias string; index `i` joins the subset iff its whole
/// block is `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSampler {
    n: usize,
    a: u32,
    inner: SmallBiasSampler,
}

impl SubsetSampler {
    pub fn new_powering(n: usize, a: u32, k: u32) -> SubsetSampler {
        assert!(a >= 1);
        SubsetSampler {
            n,
            a,
            inner: SmallBiasSampler::powering(n * a as usize, k),
        }
    }

    pub fn new_naive(n: usize, a: u32) -> SubsetSampler {
        assert!(a >= 1);
        SubsetSampler {
            n,
            a,
            inner: SmallBiasSampler::naive(n * a as usize),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn inner(&self) -> &SmallBiasSampler {
        &self.inner
    }

    /// Marginal probability `2^-a`.
    pub fn p(&self) -> Dyadic {
        Dyadic::ratio_pow2(1, self.a)
    }

    pub fn delta(&self) -> Dyadic {
        self.inner.delta()
    }

    pub fn seed_bits(&self) -> u64 {
        self.inner.seed_bits()
    }

    pub fn report(&self, component: &str) -> SeedReport {
        let mut r = self.inner.report(component);
        r.construction = format!("subset a={} over {}", self.a, r.construction);
        r
    }

    /// Subset as a bitmask, `n <= 64`.
    pub fn generate(&self, seed: &mut SeedStream) -> u64 {
        assert!(self.n <= 64);
        let signs = self.inner.generate(seed);
        let mut t = 0u64;
        for i in 0..self.n {
            let all_plus = (0..self.a as usize).all(|j| signs[i * self.a as usize + j] == 1);
            if all_plus {
                t |= 1 << i;
            }
        }
        t
    }

    /// Exact `Pr[S subseteq T]`. For a powering inner sampler the block
    /// conditions are linear in `r`, so for each `s` the probability over
    /// `r` is `2^-rank{s^(j+1) : j in the blocks of S}`.
    pub fn subset_marginal(&self, s_mask: u64) -> Dyadic {
        assert!(s_mask >> self.n == 0);
        if s_mask == 0 {
            return Dyadic::one();
        }
        match self.inner.kind() {
            SbKind::NaiveUniform => self.p().pow(s_mask.count_ones()),
            SbKind::Powering { k } => {
                let field = Gf2k::new(k);
                let q = 1u64 << k;
                let bit_indices: Vec<u64> = (0..self.n as u64)
                    .filter(|i| s_mask >> i & 1 == 1)
                    .flat_map(|i| (0..self.a as u64).map(move |j| i * self.a as u64 + j))
                    .collect();
                let mut acc = Dyadic::zero();
                for s in 0..q {
                    let vectors: Vec<u64> = bit_indices
                        .iter()
                        .map(|&j| field.pow(s, j + 1))
                        .collect();
                    let r = gf2_rank(&vectors);
                    acc += Dyadic::ratio_pow2(1, k + r);
                }
                acc
            }
        }
    }

    /// Exact `Pr[S cap T = empty and S' subseteq T]` by inclusion-exclusion
    /// over subsets of `S`. `S` and `S'` must be disjoint.
    pub fn avoid_include_prob(&self, s_mask: u64, s_prime: u64) -> Dyadic {
        assert_eq!(s_mask & s_prime, 0);
        let bits: Vec<u64> = (0..self.n as u64)
            .filter(|i| s_mask >> i & 1 == 1)
            .collect();
        let mut acc = Dyadic::zero();
        for r in 0..(1u64 << bits.len()) {
            let mut sub = 0u64;
            for (j, &b) in bits.iter().enumerate() {
                if r >> j & 1 == 1 {
                    sub |= 1 << b;
                }
            }
            let term = self.subset_marginal(sub | s_prime);
            if r.count_ones() % 2 == 0 {
                acc += term;
            } else {
                acc = &acc - &term;
            }
        }
        acc
    }
}

fn gf2_rank(vectors: &[u64]) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    let mut rank = 0;
    for &v in vectors {
        let mut cur = v;
        for &b in &basis {
            cur = cur.min(cur ^ b);
        }
        if cur != 0 {
            basis.push(cur);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            rank += 1;
        }
    }
    rank
}

/// XOR (coordinatewise ±1 product) of `d` independent small-bias strings;
/// fools GF(2) polynomials of degree up to `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDegreeSampler {
    n: usize,
    parts: Vec<SmallBiasSampler>,
}

impl LowDegreeSampler {
    pub fn new_powering(n: usize, d: u32, k: u32) -> LowDegreeSampler {
        assert!(d >= 1);
        LowDegreeSampler {
            n,
            parts: (0..d).map(|_| SmallBiasSampler::powering(n, k)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn part_delta(&self) -> Dyadic {
        self.parts[0].delta()
    }

    pub fn seed_bits(&self) -> u64 {
        self.parts.iter().map(|p| p.seed_bits()).sum()
    }

    pub fn generate(&self, seed: &mut SeedStream) -> Vec<i8> {
        let mut out = vec![1i8; self.n];
        for p in &self.parts {
            for (o, v) in out.iter_mut().zip(p.generate(seed)) {
                *o *= v;
            }
        }
        out
    }

    pub fn report(&self, component: &str) -> SeedReport {
        SeedReport::node(
            component,
            format!("xor-stack d={} n={}", self.parts.len(), self.n),
            self.parts
                .iter()
                .enumerate()
                .map(|(i, p)| p.report(&format!("layer{i}")))
                .collect(),
        )
    }

    /// Independence makes character biases multiply.
    pub fn char_bias(&self, s_mask: u64) -> Dyadic {
        let mut acc = Dyadic::one();
        for p in &self.parts {
            acc = &acc * &p.char_bias(s_mask);
        }
        acc
    }
}
