use cli::describe::{describe_desk, describe_honest, honest_sweep};
use cli::families::{self, Rng64};
use cli::listing::{from_listing, to_listing};
use cli::suite::{
    aggregates_csv, rows_csv, run_suite, split_seed, write_reports, GeneratorSpec, SuiteSpec,
};
use robp_core::{to_text, Dyadic};
use std::path::Path;

/// Mirrors the family block layout so the semantic checks below can
/// recompute the intended Boolean function from scratch.
fn partition_random(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = Rng64(seed);
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let take = (1 + rng.below(3) as usize).min(left);
        blocks.push(take);
        left -= take;
    }
    blocks
}

fn block_ranges(blocks: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut at = 0;
    for &len in blocks {
        out.push((at, at + len));
        at += len;
    }
    out
}

#[test]
fn documented_acceptances_hold() {
    assert_eq!(
        families::mod3(3).unwrap().acceptance(),
        Dyadic::ratio_pow2(1, 2)
    );
    for n in 1..=9 {
        assert_eq!(
            families::parity(n).unwrap().acceptance(),
            Dyadic::ratio_pow2(1, 1),
            "parity n={n}"
        );
        // count of -1 inputs divisible by 3
        let p = families::mod3(n).unwrap();
        let good = (0u64..1 << n)
            .filter(|x| x.count_ones() % 3 == 0)
            .count() as i64;
        assert_eq!(p.acceptance(), Dyadic::ratio_pow2(good, n as u32));
    }
}

#[test]
fn block_families_compute_their_formulas() {
    for seed in 0..20u64 {
        let n = 4 + (seed as usize % 7);
        let blocks = partition_random(n, seed);
        let ranges = block_ranges(&blocks);
        let dnf = families::read_once_dnf(n, seed).unwrap();
        let cnf = families::read_once_cnf(n, seed).unwrap();
        let poly = families::read_once_poly(n, seed).unwrap();
        for x in 0u64..1 << n {
            let fired: Vec<bool> = ranges
                .iter()
                .map(|&(lo, hi)| (lo..hi).all(|i| x >> i & 1 == 1))
                .collect();
            let any_clause_dead: bool = ranges
                .iter()
                .any(|&(lo, hi)| (lo..hi).all(|i| x >> i & 1 == 0));
            let dnf_true = fired.iter().any(|&f| f);
            let parity_odd = fired.iter().filter(|&&f| f).count() % 2 == 1;
            assert_eq!(dnf.evaluate_mask(x) == -1, dnf_true, "dnf seed={seed} x={x}");
            assert_eq!(
                cnf.evaluate_mask(x) == -1,
                !any_clause_dead,
                "cnf seed={seed} x={x}"
            );
            assert_eq!(
                poly.evaluate_mask(x) == -1,
                parity_odd,
                "poly seed={seed} x={x}"
            );
        }
    }
}

#[test]
fn tribes_is_an_or_of_equal_ands() {
    for n in [4usize, 6, 9, 12] {
        let k = (usize::BITS - n.leading_zeros()) as usize;
        let p = families::tribes(n).unwrap();
        for x in 0u64..1 << n {
            let mut expect = false;
            let mut at = 0;
            while at < n {
                let hi = if n - at < 2 * k { n } else { at + k };
                expect |= (at..hi).all(|i| x >> i & 1 == 1);
                at = hi;
            }
            assert_eq!(p.evaluate_mask(x) == -1, expect, "tribes n={n} x={x}");
        }
    }
}

#[test]
fn random_families_are_valid_and_seed_deterministic() {
    for name in ["random-width3", "random-permutation-bp"] {
        let a = families::build(name, 10, 5).unwrap();
        let b = families::build(name, 10, 5).unwrap();
        assert_eq!(to_text(&a), to_text(&b));
        let c = families::build(name, 10, 6).unwrap();
        assert_ne!(to_text(&a), to_text(&c), "{name} ignores its seed");
    }
    // permutation layers really are permutations
    let p = families::random_permutation_bp(12, 3).unwrap();
    for i in 0..p.n() {
        assert_ne!(
            p.classify_layer(i),
            robp_core::LayerClass::Colliding,
            "layer {i}"
        );
    }
}

fn tiny_spec() -> SuiteSpec {
    toml::from_str(
        r#"
            master_seed = 11
            [[corpus]]
            family = "mod3"
            n = 5
            [[corpus]]
            family = "random-width3"
            n = 6
            [[generators]]
            kind = "uniform"
            [[generators]]
            kind = "small-bias"
            k = 3
        "#,
    )
    .unwrap()
}

#[test]
fn suite_reruns_are_byte_identical() {
    let spec = tiny_spec();
    let a = run_suite(&spec, Path::new(".")).unwrap();
    let b = run_suite(&spec, Path::new(".")).unwrap();
    assert_eq!(rows_csv(&a.rows), rows_csv(&b.rows));
    assert_eq!(aggregates_csv(&a.aggregates), aggregates_csv(&b.aggregates));
    assert!(!a.hard_failure);
    assert_eq!(a.rows.len(), 4);
    assert!(a.rows.iter().all(|r| r.status == "ok"));
    // uniform rows have error exactly zero
    for r in a.rows.iter().filter(|r| r.generator == "uniform") {
        assert_eq!(r.error_exact, "0/2^0");
    }
    let dir = std::env::temp_dir().join(format!("suite-test-{}", std::process::id()));
    write_reports(&a, &dir).unwrap();
    let csv1 = std::fs::read(dir.join("results.csv")).unwrap();
    write_reports(&b, &dir).unwrap();
    let csv2 = std::fs::read(dir.join("results.csv")).unwrap();
    assert_eq!(csv1, csv2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn master_seed_changes_random_corpus_rows() {
    let mut spec = tiny_spec();
    let a = run_suite(&spec, Path::new(".")).unwrap();
    spec.master_seed = 12;
    let b = run_suite(&spec, Path::new(".")).unwrap();
    assert_ne!(rows_csv(&a.rows), rows_csv(&b.rows));
    // the deterministic mod3 rows still agree on the measured numbers
    assert_eq!(a.rows[0].uniform, b.rows[0].uniform);
    assert_ne!(a.rows[0].entry_seed, b.rows[0].entry_seed);
}

#[test]
fn empty_corpus_is_a_clean_run() {
    let spec: SuiteSpec = toml::from_str("master_seed = 1").unwrap();
    let out = run_suite(&spec, Path::new(".")).unwrap();
    assert!(out.rows.is_empty());
    assert!(out.aggregates.is_empty());
    assert!(!out.hard_failure);
}

#[test]
fn broken_descriptor_is_hard_and_bad_family_is_soft() {
    let spec: SuiteSpec = toml::from_str(
        r#"
            [[corpus]]
            family = "nosuch"
            n = 4
            [[corpus]]
            family = "parity"
            n = 4
            [[generators]]
            kind = "broken-kind"
        "#,
    )
    .unwrap();
    let out = run_suite(&spec, Path::new(".")).unwrap();
    assert_eq!(out.rows.len(), 2);
    assert_eq!(out.rows[0].status, "soft-error");
    assert_eq!(out.rows[1].status, "hard-error");
    assert!(out.hard_failure);
}

#[test]
fn honest_mode_rows_are_soft_errors() {
    let spec: SuiteSpec = toml::from_str(
        r#"
            mode = "honest"
            [[corpus]]
            family = "parity"
            n = 6
            [[generators]]
            kind = "width3-prg"
            [[generators]]
            kind = "uniform"
        "#,
    )
    .unwrap();
    let out = run_suite(&spec, Path::new(".")).unwrap();
    assert!(!out.hard_failure);
    assert_eq!(out.rows[0].status, "soft-error");
    assert_eq!(out.rows[1].status, "ok"); // uniform needs no config
}

#[test]
fn listing_round_trips_exactly() {
    let mut rng = Rng64(41);
    for case in 0..40 {
        let n = 1 + (case % 9);
        let mut p = families::random_program(&mut rng, n, 4);
        if case % 3 == 0 {
            // shuffled read order must survive the round trip
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.below(i as u64 + 1) as usize);
            }
            p = robp_core::Robp::new(
                p.widths().to_vec(),
                (0..p.n())
                    .map(|i| {
                        (0..p.widths()[i])
                            .map(|v| [p.transition(i, v, -1), p.transition(i, v, 1)])
                            .collect()
                    })
                    .collect(),
                p.start(),
                p.accept().to_vec(),
                p.ambient_n(),
                Some(perm),
            )
            .unwrap();
        }
        let text = to_listing(&p);
        let back = from_listing(&text).unwrap();
        assert_eq!(to_text(&p), to_text(&back), "case {case}");
        assert_eq!(to_listing(&back), text, "case {case}");
    }
}

#[test]
fn listing_errors_point_at_the_fault() {
    let good = to_listing(&families::parity(3).unwrap());
    let bad = good.replace("v1: -1 -> v0", "v1: -1 -> v7");
    let err = from_listing(&bad).unwrap_err();
    assert!(
        err.msg.contains("vertex 1") && err.msg.contains("out of range"),
        "got {err}"
    );
    assert!(err.line > 0);
    let truncated = good.replace("widths 1 2 2 2", "widths 1 2");
    assert!(from_listing(&truncated).is_err());
}

#[test]
fn describe_prints_totals_without_emitting() {
    let spec = GeneratorSpec {
        kind: "width3-prg".into(),
        eps: Some(0.25),
        k: None,
        chunk: None,
        w: None,
        b: None,
    };
    let text = describe_desk(&spec, 8).unwrap();
    assert!(text.contains("total 24 bits"), "got:\n{text}");
    let (total, _) = describe_honest(&spec, 8).unwrap();
    assert!(total > 24.0, "honest profile should dwarf the desk one");
    let uniform = GeneratorSpec {
        kind: "uniform".into(),
        eps: None,
        k: None,
        chunk: None,
        w: None,
        b: None,
    };
    let text = describe_desk(&uniform, 17).unwrap();
    assert!(text.contains("total 17 bits"));
    let (total, _) = describe_honest(&uniform, 17).unwrap();
    assert_eq!(total, 17.0);
}

#[test]
fn honest_totals_grow_monotonically() {
    let spec = GeneratorSpec {
        kind: "read-once-poly-prg".into(),
        eps: Some(0.01),
        k: None,
        chunk: None,
        w: None,
        b: None,
    };
    let ns: Vec<usize> = (8..=20).map(|e| 1usize << e).collect();
    let table = honest_sweep(&spec, &ns).unwrap();
    for w in table.windows(2) {
        assert!(
            w[1].1 >= w[0].1,
            "honest total dropped from {:?} to {:?}",
            w[0],
            w[1]
        );
    }
}

#[test]
fn split_seed_is_the_counter_mode_stream() {
    let master = 99;
    let mut rng = Rng64(master);
    for i in 0..10 {
        assert_eq!(split_seed(master, i), rng.next(), "index {i}");
    }
    assert_ne!(split_seed(1, 0), split_seed(2, 0));
}
