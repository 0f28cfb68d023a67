use crate::robp::{Robp, RobpError};

impl Robp {
    /// Drop vertices unreachable from the start, keeping per-layer order.
    fn prune_unreachable(&self) -> Robp {
        let n = self.n();
        let mut live: Vec<Vec<bool>> = self
            .widths
            .iter()
            .map(|&w| vec![false; w as usize])
            .collect();
        live[0][self.start as usize] = true;
        for i in 0..n {
            for v in 0..self.widths[i] as usize {
                if live[i][v] {
                    live[i + 1][self.trans[i][v][0] as usize] = true;
                    live[i + 1][self.trans[i][v][1] as usize] = true;
                }
            }
        }
        // remap[i][old] = new index, for live vertices
        let remap: Vec<Vec<Option<u8>>> = live
            .iter()
            .map(|layer| {
                let mut next = 0u8;
                layer
                    .iter()
                    .map(|&l| {
                        if l {
                            let r = next;
                            next += 1;
                            Some(r)
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<u8> = live
            .iter()
            .map(|layer| layer.iter().filter(|&&l| l).count() as u8)
            .collect();
        let trans: Vec<Vec<[u8; 2]>> = (0..n)
            .map(|i| {
                (0..self.widths[i] as usize)
                    .filter(|&v| live[i][v])
                    .map(|v| {
                        let t = self.trans[i][v];
                        [
                            remap[i + 1][t[0] as usize].unwrap(),
                            remap[i + 1][t[1] as usize].unwrap(),
                        ]
                    })
                    .collect()
            })
            .collect();
        let accept: Vec<u8> = self
            .accept
            .iter()
            .filter_map(|&v| remap[n][v as usize])
            .collect();
        Robp {
            widths,
            trans,
            start: remap[0][self.start as usize].unwrap(),
            accept,
            ambient_n: self.ambient_n,
            perm: self.perm.clone(),
        }
    }

    /// One backward pass merging equivalent vertices per layer.
    ///
    /// Last layer: vertices merge iff same accept status. Interior: iff
    /// both labeled successors coincide. Representatives keep the lowest
    /// original index. Returns None if nothing merged.
    fn merge_equivalent(&self) -> Option<Robp> {
        let n = self.n();
        let mut widths = self.widths.clone();
        let mut trans = self.trans.clone();
        let mut accept = self.accept.clone();
        let mut start = self.start;
        let mut changed = false;
        for i in (0..=n).rev() {
            let w = widths[i] as usize;
            let keys: Vec<(u8, u8)> = (0..w)
                .map(|v| {
                    if i == n {
                        (accept.binary_search(&(v as u8)).is_ok() as u8, 0)
                    } else {
                        (trans[i][v][0], trans[i][v][1])
                    }
                })
                .collect();
            let mut remap: Vec<u8> = vec![0; w];
            let mut reps: Vec<(u8, u8)> = Vec::new();
            let mut rep_rows: Vec<[u8; 2]> = Vec::new();
            for v in 0..w {
                match reps.iter().position(|&k| k == keys[v]) {
                    Some(r) => {
                        remap[v] = r as u8;
                        changed = true;
                    }
                    None => {
                        remap[v] = reps.len() as u8;
                        reps.push(keys[v]);
                        if i < n {
                            rep_rows.push(trans[i][v]);
                        }
                    }
                }
            }
            if reps.len() == w {
                continue;
            }
            widths[i] = reps.len() as u8;
            if i == n {
                accept = (0..reps.len() as u8)
                    .filter(|&r| reps[r as usize].0 == 1)
                    .collect();
            } else {
                trans[i] = rep_rows;
            }
            if i > 0 {
                for row in trans[i - 1].iter_mut() {
                    row[0] = remap[row[0] as usize];
                    row[1] = remap[row[1] as usize];
                }
            } else {
                start = remap[start as usize];
            }
        }
        if !changed {
            return None;
        }
        Some(Robp {
            widths,
            trans,
            start,
            accept,
            ambient_n: self.ambient_n,
            perm: self.perm.clone(),
        })
    }

    /// Remove identity layers (both labels equal as maps), splicing the map
    /// into the predecessor. Shortens the program; ambient function is
    /// unchanged because the dropped variable was irrelevant.
    fn drop_identity_layers(&self) -> Robp {
        let mut cur = self.clone();
        loop {
            let pos = (0..cur.n()).find(|&i| cur.trans[i].iter().all(|t| t[0] == t[1]));
            let Some(i) = pos else {
                return cur;
            };
            let map: Vec<u8> = cur.trans[i].iter().map(|t| t[0]).collect();
            let mut widths = cur.widths.clone();
            let mut trans = cur.trans.clone();
            let mut start = cur.start;
            // Vertex layer i disappears; edges that arrived at layer i now
            // arrive at map[target] in the old layer i+1.
            widths.remove(i);
            if i == 0 {
                start = map[start as usize];
            } else {
                for row in trans[i - 1].iter_mut() {
                    row[0] = map[row[0] as usize];
                    row[1] = map[row[1] as usize];
                }
            }
            trans.remove(i);
            let perm: Vec<usize> = (0..cur.n()).filter(|&j| j != i).map(|j| cur.read_at(j)).collect();
            let n_new = trans.len();
            let perm = if perm.iter().enumerate().all(|(a, &b)| a == b) && n_new <= cur.ambient_n {
                None
            } else {
                Some(perm)
            };
            cur = Robp {
                widths,
                trans,
                start,
                accept: cur.accept.clone(),
                ambient_n: cur.ambient_n,
                perm,
            };
        }
    }

    /// Canonical trimming: drop unreachable vertices and merge equivalent
    /// ones (last layer first) to a fixpoint. With `drop_identity`, also
    /// delete layers whose two label maps coincide; the result may then be
    /// shorter than the source.
    pub fn normalize(&self, drop_identity: bool) -> Robp {
        let mut cur = self.prune_unreachable();
        loop {
            let mut changed = false;
            while let Some(next) = cur.merge_equivalent() {
                cur = next.prune_unreachable();
                changed = true;
            }
            if drop_identity {
                let next = cur.drop_identity_layers();
                if next.n() != cur.n() {
                    cur = next.prune_unreachable();
                    changed = true;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Reorder every vertex layer by acceptance probability (ties keep the
    /// original index), then in each selected edge layer swap the two labels
    /// on vertices where the +1 edge points below the -1 edge.
    ///
    /// Acceptance probabilities are label-invariant, so the reordering is
    /// computed once upfront. The result computes a different pointwise
    /// function in general; averaging over the variables read by the
    /// selected layers is what stays fixed.
    pub fn relabel_locally_monotone(&self, swap_layers: &[bool]) -> Robp {
        assert_eq!(swap_layers.len(), self.n());
        let stats = self.reach_stats();
        let n = self.n();
        // rank[i][old] = new index after stable sort by accept_prob
        let rank: Vec<Vec<u8>> = (0..=n)
            .map(|i| {
                let w = self.widths[i] as usize;
                let mut order: Vec<usize> = (0..w).collect();
                order.sort_by(|&a, &b| stats.accept_prob[i][a].cmp(&stats.accept_prob[i][b]));
                let mut r = vec![0u8; w];
                for (new, &old) in order.iter().enumerate() {
                    r[old] = new as u8;
                }
                r
            })
            .collect();
        let mut trans: Vec<Vec<[u8; 2]>> = (0..n)
            .map(|i| {
                let w = self.widths[i] as usize;
                let mut rows = vec![[0u8; 2]; w];
                for v in 0..w {
                    let t = self.trans[i][v];
                    rows[rank[i][v] as usize] = [rank[i + 1][t[0] as usize], rank[i + 1][t[1] as usize]];
                }
                rows
            })
            .collect();
        for i in 0..n {
            if swap_layers[i] {
                for row in trans[i].iter_mut() {
                    if row[1] < row[0] {
                        row.swap(0, 1);
                    }
                }
            }
        }
        let mut accept: Vec<u8> = self.accept.iter().map(|&v| rank[n][v as usize]).collect();
        accept.sort_unstable();
        Robp {
            widths: self.widths.clone(),
            trans,
            start: rank[0][self.start as usize],
            accept,
            ambient_n: self.ambient_n,
            perm: self.perm.clone(),
        }
    }

    /// Slice of vertex layers `from..=to`. `start` pins the entry vertex
    /// (defaults to the program start when `from == 0`, else vertex 0);
    /// `accept` overrides the accept set (defaults to the program's when
    /// `to == n`, else empty).
    pub fn subprogram(
        &self,
        from: usize,
        to: usize,
        start: Option<u8>,
        accept: Option<Vec<u8>>,
    ) -> Result<Robp, RobpError> {
        if from > to || to > self.n() {
            return Err(RobpError::BadSlice);
        }
        let widths: Vec<u8> = self.widths[from..=to].to_vec();
        let trans: Vec<Vec<[u8; 2]>> = self.trans[from..to].to_vec();
        let start = match start {
            Some(v) => v,
            None if from == 0 => self.start,
            None => 0,
        };
        let accept = match accept {
            Some(a) => a,
            None if to == self.n() => self.accept.clone(),
            None => Vec::new(),
        };
        let perm = Some((from..to).map(|i| self.read_at(i)).collect());
        Robp::new(widths, trans, start, accept, self.ambient_n, perm)
    }

    /// Glue `other` after `self`, identifying `self`'s last vertex layer
    /// with `other`'s first. Keeps `self.start` and `other.accept`. The two
    /// programs must read disjoint ambient variables.
    pub fn compose(&self, other: &Robp) -> Result<Robp, RobpError> {
        if self.ambient_n != other.ambient_n {
            return Err(RobpError::AmbientMismatch);
        }
        if self.widths.last() != other.widths.first() {
            return Err(RobpError::WidthMismatch);
        }
        if self.read_mask() & other.read_mask() != 0 {
            return Err(RobpError::VariableOverlap);
        }
        let mut widths = self.widths.clone();
        widths.extend_from_slice(&other.widths[1..]);
        let mut trans = self.trans.clone();
        trans.extend_from_slice(&other.trans);
        let reads: Vec<usize> = self.reads().into_iter().chain(other.reads()).collect();
        let n_new = reads.len();
        let perm = if reads.iter().enumerate().all(|(a, &b)| a == b) && n_new <= self.ambient_n {
            None
        } else {
            Some(reads)
        };
        Robp::new(
            widths,
            trans,
            self.start,
            other.accept.clone(),
            self.ambient_n,
            perm,
        )
    }
}
