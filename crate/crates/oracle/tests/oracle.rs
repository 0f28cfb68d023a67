use generators::{chain_decompose, HashTreeGenerator, LinearCombination, UniformGenerator};
use oracle::{
    exact_generator_accept, exact_generator_accept_seq, exact_uniform_accept,
    exact_uniform_accept_seq, expectation_drift, first_mismatch, fooling_error, mean_pow2,
    sampled_fooling, sum_tree, OracleError,
};
use restrictions::Restriction;
use robp_core::{Dyadic, Robp};

struct Rng64(u64);

impl Rng64 {
    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

fn random_program(rng: &mut Rng64, n: usize, max_w: u8) -> Robp {
    let mut widths = vec![1u8];
    for _ in 1..n {
        widths.push(1 + rng.below(max_w as u64) as u8);
    }
    widths.push(1 + rng.below(max_w as u64) as u8);
    let trans = (0..n)
        .map(|i| {
            (0..widths[i])
                .map(|_| {
                    [
                        rng.below(widths[i + 1] as u64) as u8,
                        rng.below(widths[i + 1] as u64) as u8,
                    ]
                })
                .collect()
        })
        .collect();
    let wl = *widths.last().unwrap();
    let accept = (0..wl).filter(|_| rng.below(2) == 1).collect();
    Robp::new(widths, trans, 0, accept, n, None).unwrap()
}

fn constant_program(n: usize, accept_all: bool) -> Robp {
    let widths = vec![1u8; n + 1];
    let trans = vec![vec![[0u8, 0u8]]; n];
    let accept = if accept_all { vec![0] } else { vec![] };
    Robp::new(widths, trans, 0, accept, n, None).unwrap()
}

#[test]
fn enumerated_uniform_matches_layered_walk() {
    let mut rng = Rng64(11);
    for case in 0..80 {
        let n = 2 + (case % 9);
        let p = random_program(&mut rng, n, 3);
        assert_eq!(exact_uniform_accept(&p).unwrap(), p.acceptance());
        assert_eq!(exact_uniform_accept_seq(&p).unwrap(), p.acceptance());
    }
}

#[test]
fn uniform_generator_has_zero_fooling_error() {
    let mut rng = Rng64(23);
    for case in 0..40 {
        let n = 2 + (case % 8);
        let p = random_program(&mut rng, n, 3);
        let g = UniformGenerator::new(n);
        let report = fooling_error(&p, &g).unwrap();
        assert!(report.error.is_zero());
        assert_eq!(report.pseudo, p.acceptance());
    }
}

#[test]
fn constant_programs_are_fooled_by_anything() {
    for accept_all in [false, true] {
        let p = constant_program(9, accept_all);
        let g = HashTreeGenerator::new(9, 3).unwrap();
        let report = fooling_error(&p, &g).unwrap();
        assert!(report.error.is_zero());
        let want = if accept_all { Dyadic::one() } else { Dyadic::zero() };
        assert_eq!(report.uniform, want);
    }
}

#[test]
fn parallel_and_sequential_sweeps_agree_bit_for_bit() {
    let mut rng = Rng64(37);
    for _ in 0..10 {
        let p = random_program(&mut rng, 12, 3);
        let g = HashTreeGenerator::new(12, 4).unwrap();
        let a = exact_generator_accept(&p, &g).unwrap();
        let b = exact_generator_accept_seq(&p, &g).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn replayed_reports_are_identical() {
    let mut rng = Rng64(41);
    let p = random_program(&mut rng, 10, 3);
    let g = HashTreeGenerator::new(10, 4).unwrap();
    assert_eq!(fooling_error(&p, &g).unwrap(), fooling_error(&p, &g).unwrap());
    let s1 = sampled_fooling(&p, &g, 2000, 7).unwrap();
    let s2 = sampled_fooling(&p, &g, 2000, 7).unwrap();
    assert_eq!(s1, s2);
}

#[test]
fn sampling_lands_within_its_confidence_radius() {
    let mut rng = Rng64(43);
    let p = random_program(&mut rng, 10, 3);
    let g = HashTreeGenerator::new(10, 4).unwrap();
    let exact = exact_generator_accept(&p, &g).unwrap().to_f64();
    let s = sampled_fooling(&p, &g, 4000, 99).unwrap();
    assert!((s.estimate - exact).abs() <= s.ci99);
    assert!(s.ci99 < 0.04);
}

#[test]
fn oversized_spaces_are_refused() {
    let p = constant_program(30, true);
    assert!(matches!(
        exact_uniform_accept(&p),
        Err(OracleError::InputSpaceTooLarge { n: 30 })
    ));
    let g = UniformGenerator::new(30);
    assert!(matches!(
        exact_generator_accept(&p, &g),
        Err(OracleError::SeedSpaceTooLarge { bits: 30 })
    ));
    let short = UniformGenerator::new(8);
    assert!(matches!(
        exact_generator_accept(&p, &short),
        Err(OracleError::LengthMismatch { .. })
    ));
}

#[test]
fn drift_vanishes_for_fully_uniform_families() {
    let mut rng = Rng64(53);
    for case in 0..20 {
        let n = 3 + (case % 6);
        let p = random_program(&mut rng, n, 3);
        // every coordinate stays alive: drift is zero by definition
        let d = expectation_drift(&p, 1, |seed| {
            seed.take_bit();
            Restriction::full(n)
        })
        .unwrap();
        assert!(d.is_zero());
        // every coordinate assigned uniformly: the average over all seeds
        // is the plain expectation, so the drift is exactly zero again
        let d = expectation_drift(&p, n as u64, |seed| {
            let mask = seed.take(n as u32);
            let signs = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            Restriction::new(n, 0, signs).unwrap()
        })
        .unwrap();
        assert!(d.is_zero(), "case {case}: drift {d:?}");
    }
}

#[test]
fn chain_expansion_passes_the_pointwise_check() {
    let mut rng = Rng64(61);
    let p = random_program(&mut rng, 9, 3);
    let lc = chain_decompose(&p).unwrap();
    assert_eq!(first_mismatch(&p, &lc).unwrap(), None);
    // corrupt the combination and the witness appears
    let broken = LinearCombination::new(vec![(
        Dyadic::from_int(-1),
        vec![std::sync::Arc::new(p.clone())],
    )]);
    assert_eq!(first_mismatch(&p, &broken).unwrap(), Some(0));
}

#[test]
fn pairwise_summation_is_exact() {
    let values: Vec<Dyadic> = (0..256)
        .map(|i| Dyadic::ratio_pow2(i as i64 - 128, 5))
        .collect();
    let total = sum_tree(&values);
    // arithmetic series: sum of (i - 128) for i in 0..256 is -128
    assert_eq!(total, Dyadic::ratio_pow2(-128, 5));
    let mean = mean_pow2(&values, 8);
    assert_eq!(mean, Dyadic::ratio_pow2(-128, 13));
    assert_eq!(sum_tree(&[]), Dyadic::zero());
}
