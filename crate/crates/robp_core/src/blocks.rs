use crate::dyadic::Dyadic;
use crate::robp::{Robp, RobpError};

/// Chain decomposition of a program at its narrow vertex layers.
///
/// `cuts` lists the interior vertex layers of width <= 2 where the program
/// was split; every block is a slice whose interior layers all have width
/// >= 3. `ell` is the largest number of colliding layers in one block,
/// `m` the number of blocks.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub cuts: Vec<usize>,
    pub blocks: Vec<Robp>,
    pub ell: usize,
    pub m: usize,
}

impl Robp {
    /// Split at every interior vertex layer of width <= 2.
    ///
    /// Blocks are slices sharing their boundary vertex layers, so folding
    /// them back with `compose` (then restoring start and accept) rebuilds
    /// the program. Block `start` fields default to vertex 0; callers that
    /// care about the entry vertex pass it explicitly when evaluating.
    pub fn decompose_blocks(&self) -> BlockDecomposition {
        let n = self.n();
        if n == 0 {
            return BlockDecomposition {
                cuts: Vec::new(),
                blocks: Vec::new(),
                ell: 0,
                m: 0,
            };
        }
        let cuts: Vec<usize> = (1..n).filter(|&i| self.widths[i] <= 2).collect();
        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(0);
        bounds.extend_from_slice(&cuts);
        bounds.push(n);
        let blocks: Vec<Robp> = bounds
            .windows(2)
            .map(|w| {
                self.subprogram(w[0], w[1], Some(0), Some(Vec::new()))
                    .expect("in-range slice")
            })
            .collect();
        let ell = blocks
            .iter()
            .map(|b| b.colliding_layers().len())
            .max()
            .unwrap_or(0);
        let m = blocks.len();
        BlockDecomposition { cuts, blocks, ell, m }
    }
}

/// Rebuild the original program from its block decomposition.
pub fn recompose(d: &BlockDecomposition, start: u8, accept: Vec<u8>) -> Result<Robp, RobpError> {
    let mut iter = d.blocks.iter();
    let first = iter.next().ok_or(RobpError::BadSlice)?;
    let mut acc = first.clone();
    for b in iter {
        acc = acc.compose(b)?;
    }
    Robp::new(
        acc.widths().to_vec(),
        acc.trans.clone(),
        start,
        accept,
        acc.ambient_n(),
        acc.perm().map(|p| p.to_vec()),
    )
}

fn pairs_of_width(w: u8) -> Vec<(u8, u8)> {
    let mut v = Vec::new();
    for a in 0..w {
        for b in (a + 1)..w {
            v.push((a, b));
        }
    }
    v
}

impl Robp {
    /// Track the two paths started at vertices 0 and 1 of the first layer
    /// and accept exactly the inputs whose paths first meet at the earliest
    /// meeting point.
    ///
    /// The meeting point `u` is the lowest-indexed vertex in the earliest
    /// layer where any input makes the pair collide. The returned program
    /// reads the same variables as `self`, has width <= 3 (pair states,
    /// then a two-state tail padded with identity layers), and accepts x
    /// iff the pair walk on x sends both paths to `u` at u's layer.
    /// Also returns `(u_layer, u_vertex)`.
    pub fn first_collision_program(&self) -> Result<(Robp, usize, u8), RobpError> {
        if self.widths[0] != 2 {
            return Err(RobpError::NotTwoStart);
        }
        if self.width() > 3 {
            return Err(RobpError::TooWide { max: 3 });
        }
        let n = self.n();
        // Reachable pair sets, layer by layer, stopping at the first layer
        // where a collision is possible.
        let mut reach: Vec<Vec<(u8, u8)>> = vec![vec![(0, 1)]];
        let mut hit: Option<(usize, u8)> = None;
        for i in 0..n {
            let mut best: Option<u8> = None;
            let mut next: Vec<(u8, u8)> = Vec::new();
            for &(p, q) in &reach[i] {
                for lab in 0..2 {
                    let tp = self.trans[i][p as usize][lab];
                    let tq = self.trans[i][q as usize][lab];
                    if tp == tq {
                        best = Some(best.map_or(tp, |b| b.min(tp)));
                    } else {
                        let pr = (tp.min(tq), tp.max(tq));
                        if !next.contains(&pr) {
                            next.push(pr);
                        }
                    }
                }
            }
            if let Some(v) = best {
                hit = Some((i + 1, v));
                break;
            }
            next.sort_unstable();
            reach.push(next);
        }
        let Some((u_layer, u_vertex)) = hit else {
            return Err(RobpError::NoCollision);
        };
        // Pair program: full pair state space per layer up to u_layer - 1,
        // then {reject, accept-collided-at-u}, then identity padding.
        let mut widths: Vec<u8> = Vec::with_capacity(n + 1);
        let mut trans: Vec<Vec<[u8; 2]>> = Vec::with_capacity(n);
        let mut pair_idx: Vec<Vec<(u8, u8)>> = Vec::new();
        for i in 0..u_layer {
            pair_idx.push(pairs_of_width(self.widths[i]));
            widths.push(pair_idx[i].len() as u8);
        }
        widths.push(2);
        for w in &mut widths {
            debug_assert!(*w >= 1 && *w <= 3);
        }
        for i in 0..u_layer {
            let cur_pairs = &pair_idx[i];
            let mut rows: Vec<[u8; 2]> = Vec::with_capacity(cur_pairs.len());
            let last_step = i + 1 == u_layer;
            for &(p, q) in cur_pairs {
                let mut row = [0u8; 2];
                for lab in 0..2 {
                    let tp = self.trans[i][p as usize][lab];
                    let tq = self.trans[i][q as usize][lab];
                    if last_step {
                        row[lab] = (tp == tq && tp == u_vertex) as u8;
                    } else if tp == tq {
                        // collision on an unreachable pair: park on state 0
                        row[lab] = 0;
                    } else {
                        let pr = (tp.min(tq), tp.max(tq));
                        row[lab] = pair_idx[i + 1].iter().position(|&x| x == pr).unwrap() as u8;
                    }
                }
                rows.push(row);
            }
            trans.push(rows);
        }
        for _ in u_layer..n {
            widths.push(2);
            trans.push(vec![[0, 0], [1, 1]]);
        }
        let start_pair = pair_idx[0].iter().position(|&x| x == (0, 1)).unwrap() as u8;
        let prog = Robp::new(
            widths,
            trans,
            start_pair,
            vec![1],
            self.ambient_n(),
            Some(self.reads()),
        )?;
        Ok((prog, u_layer, u_vertex))
    }

    /// Reroute rarely-reached vertices at colliding layers into a rejecting
    /// sink so that every reachable vertex of the result has reach
    /// probability >= `delta`. Width grows by at most 1.
    ///
    /// `delta` must be <= 2^-(w-1) for the original width w.
    pub fn reroute_low_prob(&self, delta: &Dyadic) -> Result<Robp, RobpError> {
        let w = self.width();
        if w + 1 > crate::robp::MAX_WIDTH {
            return Err(RobpError::TooWide {
                max: crate::robp::MAX_WIDTH - 1,
            });
        }
        let bound = Dyadic::ratio_pow2(1, (w - 1) as u32);
        if *delta > bound {
            return Err(RobpError::DeltaTooLarge);
        }
        let n = self.n();
        // Absorbing rejecting sink appended to vertex layers 1..=n.
        let mut widths = self.widths.clone();
        let mut trans = self.trans.clone();
        for i in 1..=n {
            widths[i] += 1;
        }
        for i in 1..n {
            let sink_target = widths[i + 1] - 1;
            trans[i].push([sink_target, sink_target]);
        }
        let threshold = delta.mul_pow2((w - 1) as u32);
        let mut cur = Robp::new(
            widths,
            trans,
            self.start,
            self.accept.clone(),
            self.ambient_n,
            self.perm.clone(),
        )?;
        for i in self.colliding_layers() {
            let stats = cur.reach_stats();
            let sink_target = cur.widths[i + 1] - 1;
            for v in 0..self.widths[i] as usize {
                let p = &stats.reach[i][v];
                if !p.is_zero() && *p < threshold {
                    cur.trans[i][v] = [sink_target, sink_target];
                }
            }
        }
        Ok(cur)
    }
}
