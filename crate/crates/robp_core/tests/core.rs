use robp_core::{from_text, recompose, to_text, Dyadic, LayerClass, Robp, RobpError};

/// splitmix64; test-local determinism without extra deps.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    fn below(&mut self, k: u64) -> u64 {
        self.next() % k
    }
}

fn mod3(n: usize) -> Robp {
    let mut widths = vec![3u8; n + 1];
    widths[0] = 1;
    let mut trans = Vec::new();
    for i in 0..n {
        let w = widths[i];
        let rows = (0..w)
            .map(|v| [v % 3, (v + 1) % 3]) // -1 keeps count, +1 increments
            .collect();
        trans.push(rows);
    }
    Robp::new(widths, trans, 0, vec![0], n, None).unwrap()
}

fn random_width3(rng: &mut Rng, n: usize) -> Robp {
    let mut widths = vec![3u8; n + 1];
    widths[0] = 1;
    widths[n] = 2;
    if n == 0 {
        widths[0] = 1;
    }
    let mut trans = Vec::new();
    for i in 0..n {
        let rows = (0..widths[i])
            .map(|_| {
                [
                    rng.below(widths[i + 1] as u64) as u8,
                    rng.below(widths[i + 1] as u64) as u8,
                ]
            })
            .collect();
        trans.push(rows);
    }
    Robp::new(widths, trans, 0, vec![1], n, None).unwrap()
}

fn brute_acceptance(p: &Robp) -> Dyadic {
    let n = p.ambient_n();
    let mut count = 0i64;
    for x in 0..(1u64 << n) {
        count += p.accept_indicator_mask(x) as i64;
    }
    Dyadic::ratio_pow2(count, n as u32)
}

#[test]
fn mod3_frozen_acceptance() {
    // n=3: accepted inputs have 0 or 3 coordinates set to +1.
    assert_eq!(mod3(3).acceptance(), Dyadic::ratio_pow2(1, 2));
    for n in 1..=10 {
        let p = mod3(n);
        assert_eq!(p.acceptance(), brute_acceptance(&p), "n={n}");
    }
}

#[test]
fn reach_stats_consistency() {
    let mut rng = Rng(7);
    for _ in 0..50 {
        let n = 1 + rng.below(8) as usize;
        let p = random_width3(&mut rng, n);
        let stats = p.reach_stats();
        for i in 0..=p.n() {
            let mut total = Dyadic::zero();
            for v in 0..p.widths()[i] as usize {
                total += stats.reach[i][v].clone();
            }
            assert_eq!(total, Dyadic::one(), "layer {i} mass");
        }
        assert_eq!(
            stats.accept_prob[0][p.start() as usize],
            brute_acceptance(&p)
        );
    }
}

#[test]
fn unordered_reads_respect_perm() {
    // Two-layer program reading variables 2 then 0 of a 3-var ambient space:
    // accepts iff x_2 = -1 and x_0 = +1.
    let p = Robp::new(
        vec![1, 2, 2],
        vec![vec![[0, 1]], vec![[1, 0], [1, 1]]],
        0,
        vec![0],
        3,
        Some(vec![2, 0]),
    )
    .unwrap();
    for x in 0..8u64 {
        let want = (x >> 2) & 1 == 1 && x & 1 == 0;
        assert_eq!(p.evaluate_mask(x) == -1, want, "x={x:03b}");
    }
}

#[test]
fn classify_precedence() {
    // Colliding wins over equal maps.
    let collide_equal = Robp::new(
        vec![2, 2],
        vec![vec![[0, 0], [0, 0]]],
        0,
        vec![0],
        1,
        None,
    )
    .unwrap();
    assert_eq!(collide_equal.classify_layer(0), LayerClass::Colliding);
    let ident = Robp::new(
        vec![2, 2],
        vec![vec![[1, 1], [0, 0]]],
        0,
        vec![0],
        1,
        None,
    )
    .unwrap();
    assert_eq!(ident.classify_layer(0), LayerClass::Identity);
    let perm = Robp::new(
        vec![2, 2],
        vec![vec![[0, 1], [1, 0]]],
        0,
        vec![0],
        1,
        None,
    )
    .unwrap();
    assert_eq!(perm.classify_layer(0), LayerClass::Permutation);
}

#[test]
fn normalize_preserves_function() {
    let mut rng = Rng(11);
    for case in 0..200 {
        let n = 1 + rng.below(7) as usize;
        let p = random_width3(&mut rng, n);
        let q = p.normalize(case % 2 == 0);
        assert_eq!(p.ambient_n(), q.ambient_n());
        for x in 0..(1u64 << p.ambient_n()) {
            assert_eq!(p.evaluate_mask(x), q.evaluate_mask(x), "case {case}");
        }
        let r = q.normalize(case % 2 == 0);
        assert_eq!(q, r, "normalize not idempotent, case {case}");
    }
}

#[test]
fn normalize_drops_irrelevant_variable() {
    // Middle layer ignores its variable entirely.
    let p = Robp::new(
        vec![1, 2, 2, 2],
        vec![
            vec![[0, 1]],
            vec![[0, 0], [1, 1]],
            vec![[0, 1], [1, 0]],
        ],
        0,
        vec![0],
        3,
        None,
    )
    .unwrap();
    let q = p.normalize(true);
    assert_eq!(q.n(), 2);
    assert_eq!(q.perm(), Some(&[0, 2][..]));
    for x in 0..8u64 {
        assert_eq!(p.evaluate_mask(x), q.evaluate_mask(x));
    }
}

#[test]
fn full_relabel_preserves_acceptance() {
    // Swapping edge labels per vertex never changes behavior under the
    // uniform distribution; with every layer selected, overall acceptance
    // is invariant.
    let mut rng = Rng(23);
    for _ in 0..100 {
        let n = 1 + rng.below(7) as usize;
        let p = random_width3(&mut rng, n);
        let q = p.relabel_locally_monotone(&vec![true; n]);
        assert_eq!(p.acceptance(), q.acceptance());
        // and the claimed monotone shape holds
        for i in 0..n {
            for v in 0..q.widths()[i] {
                assert!(q.transition(i, v, 1) >= q.transition(i, v, -1));
            }
        }
    }
}

#[test]
fn relabel_sorts_by_acceptance_prob() {
    let mut rng = Rng(29);
    for _ in 0..50 {
        let n = 1 + rng.below(6) as usize;
        let p = random_width3(&mut rng, n);
        let q = p.relabel_locally_monotone(&vec![false; n]);
        let stats = q.reach_stats();
        for i in 0..=n {
            for v in 1..q.widths()[i] as usize {
                assert!(stats.accept_prob[i][v - 1] <= stats.accept_prob[i][v]);
            }
        }
        assert_eq!(p.acceptance(), q.acceptance());
    }
}

#[test]
fn blocks_recompose() {
    let mut rng = Rng(31);
    for _ in 0..100 {
        let n = 2 + rng.below(8) as usize;
        let p = random_width3(&mut rng, n);
        let d = p.decompose_blocks();
        assert_eq!(d.m, d.blocks.len());
        for b in &d.blocks {
            // interior layers of a block are wide
            for i in 1..b.n() {
                assert!(b.widths()[i] >= 3 || b.n() == 0);
            }
        }
        let q = recompose(&d, p.start(), p.accept().to_vec()).unwrap();
        for x in 0..(1u64 << p.ambient_n()) {
            assert_eq!(p.evaluate_mask(x), q.evaluate_mask(x));
        }
    }
}

#[test]
fn first_collision_semantics() {
    let mut rng = Rng(37);
    let mut found = 0;
    for _ in 0..400 {
        let n = 1 + rng.below(6) as usize;
        // random block with a width-2 first layer
        let mut widths = vec![3u8; n + 1];
        widths[0] = 2;
        let mut trans = Vec::new();
        for i in 0..n {
            let rows = (0..widths[i])
                .map(|_| {
                    [
                        rng.below(widths[i + 1] as u64) as u8,
                        rng.below(widths[i + 1] as u64) as u8,
                    ]
                })
                .collect();
            trans.push(rows);
        }
        let block = Robp::new(widths, trans, 0, vec![], n, None).unwrap();
        match block.first_collision_program() {
            Err(RobpError::NoCollision) => {
                // brute force: no input may collide the pair anywhere
                for x in 0..(1u64 << n) {
                    let mut a = 0u8;
                    let mut b = 1u8;
                    for i in 0..n {
                        a = block.step_mask(i, a, x);
                        b = block.step_mask(i, b, x);
                        assert_ne!(a, b, "missed collision");
                    }
                }
            }
            Ok((fc, u_layer, u_vertex)) => {
                found += 1;
                assert!(fc.width() <= 3);
                assert_eq!(fc.n(), block.n());
                assert_eq!(fc.reads(), block.reads());
                assert!(
                    fc.colliding_layers().len() <= block.colliding_layers().len(),
                    "pair program gained collisions"
                );
                // earliest collidable layer: no input collides before u_layer
                for x in 0..(1u64 << n) {
                    let mut a = 0u8;
                    let mut b = 1u8;
                    let mut collided_at_u = false;
                    for i in 0..n {
                        a = block.step_mask(i, a, x);
                        b = block.step_mask(i, b, x);
                        if a == b {
                            assert!(i + 1 >= u_layer, "collision before u");
                            collided_at_u = i + 1 == u_layer && a == u_vertex;
                            break;
                        }
                    }
                    assert_eq!(
                        fc.evaluate_mask(x) == -1,
                        collided_at_u,
                        "first-collision event mismatch"
                    );
                }
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(found > 50, "corpus never collided");
}

#[test]
fn reroute_guarantees_reachability() {
    let mut rng = Rng(41);
    for _ in 0..60 {
        let n = 2 + rng.below(7) as usize;
        let p = random_width3(&mut rng, n);
        let w = p.width();
        let delta = Dyadic::ratio_pow2(1, 3); // 1/8 <= 2^-(w-1) for w=3
        let q = p.reroute_low_prob(&delta).unwrap();
        assert!(q.width() <= w + 1);
        let stats = q.reach_stats();
        for i in 0..=q.n() {
            for v in 0..q.widths()[i] as usize {
                let pr = &stats.reach[i][v];
                assert!(
                    pr.is_zero() || *pr >= delta,
                    "layer {i} vertex {v} reach {pr}"
                );
            }
        }
        // acceptance drift is at most the rerouted mass: each colliding
        // layer reroutes at most w vertices each below 2^(w-1)*delta.
        let ell = p.colliding_layers().len() as i64;
        let drift = (&p.acceptance() - &q.acceptance()).abs();
        let bound = delta.mul_pow2((w - 1) as u32) * Dyadic::from_int(ell * w as i64);
        assert!(drift <= bound);
    }
}

#[test]
fn text_roundtrip_is_byte_stable() {
    let mut rng = Rng(43);
    for _ in 0..50 {
        let n = 1 + rng.below(6) as usize;
        let p = random_width3(&mut rng, n);
        let t = to_text(&p);
        let q = from_text(&t).unwrap();
        assert_eq!(p, q);
        assert_eq!(to_text(&q), t);
    }
    // unordered program keeps its perm line
    let p = Robp::new(
        vec![1, 2],
        vec![vec![[0, 1]]],
        0,
        vec![1],
        4,
        Some(vec![2]),
    )
    .unwrap();
    let t = to_text(&p);
    assert!(t.contains("perm 2"));
    assert_eq!(from_text(&t).unwrap(), p);
}

#[test]
fn compose_rejects_overlap() {
    let a = Robp::new(vec![1, 2], vec![vec![[0, 1]]], 0, vec![], 2, Some(vec![0])).unwrap();
    let b = Robp::new(vec![2, 2], vec![vec![[0, 1], [1, 0]]], 0, vec![1], 2, Some(vec![0])).unwrap();
    assert_eq!(a.compose(&b), Err(RobpError::VariableOverlap));
    let c = Robp::new(vec![2, 2], vec![vec![[0, 1], [1, 0]]], 0, vec![1], 2, Some(vec![1])).unwrap();
    let ab = a.compose(&c).unwrap();
    assert_eq!(ab.n(), 2);
    for x in 0..4u64 {
        let mid = a.step_mask(0, 0, x);
        let end = c.step_mask(0, mid, x);
        assert_eq!(ab.evaluate_mask(x) == -1, end == 1);
    }
}
