use std::sync::Arc;

use robp_core::{Dyadic, Robp};

use crate::generator::GenError;

/// Weighted sum of products of programs on pairwise-disjoint variables.
#[derive(Clone, Debug)]
pub struct LinearCombination {
    terms: Vec<(Dyadic, Vec<Arc<Robp>>)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Dyadic, Vec<Arc<Robp>>)>) -> LinearCombination {
        LinearCombination { terms }
    }

    pub fn terms(&self) -> &[(Dyadic, Vec<Arc<Robp>>)] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn l1(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (c, _) in &self.terms {
            acc += c.abs();
        }
        acc
    }

    /// Factors within each term must read pairwise-disjoint variables.
    pub fn factors_disjoint(&self) -> bool {
        self.terms.iter().all(|(_, fs)| {
            let mut seen = 0u64;
            for f in fs {
                let m = f.read_mask();
                if seen & m != 0 {
                    return false;
                }
                seen |= m;
            }
            true
        })
    }

    /// Exact value on one input mask.
    pub fn evaluate_mask(&self, x: u64) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (c, fs) in &self.terms {
            let mut prod = 1i64;
            for f in fs {
                prod *= f.evaluate_mask(x) as i64;
            }
            if prod == 1 {
                acc += c.clone();
            } else {
                acc = &acc - c;
            }
        }
        acc
    }
}

// entry-pinned block as a ±1 function of the block's variables:
// interior blocks report which boundary vertex they exit at (vertex 1 maps
// to -1), the last block reports acceptance
fn pinned_block(p: &Robp, from: usize, to: usize, entry: u8) -> Result<Arc<Robp>, GenError> {
    let accept = if to == p.n() {
        None
    } else if p.widths()[to] == 2 {
        Some(vec![1])
    } else {
        Some(vec![])
    };
    Ok(Arc::new(p.subprogram(from, to, Some(entry), accept)?))
}

/// Rewrite a program as a weighted sum of products of entry-pinned blocks.
///
/// Every interior vertex layer of width <= 2 is a cut; crossing block `i`
/// updates the ±1-encoded cut state via `s_i = A_i(x) + B_i(x) * s_{i-1}`
/// where `A = (P+M)/2`, `B = (P-M)/2`, and `P`/`M` are the block pinned at
/// entry vertex 0 / 1. Telescoping and expanding `A`/`B` yields products of
/// pinned blocks with dyadic coefficients whose total mass is at most the
/// block count plus one; the value agrees with the program pointwise.
pub fn chain_decompose(p: &Robp) -> Result<LinearCombination, GenError> {
    let n = p.n();
    if n == 0 {
        let v = Dyadic::from_int(p.evaluate_mask(0) as i64);
        return Ok(LinearCombination::new(vec![(v, Vec::new())]));
    }
    let d = p.decompose_blocks();
    if d.m > 20 {
        return Err(GenError::ExpansionTooLarge { m: d.m });
    }
    let mut bounds = Vec::with_capacity(d.m + 1);
    bounds.push(0usize);
    bounds.extend_from_slice(&d.cuts);
    bounds.push(n);

    let half = Dyadic::ratio_pow2(1, 1);
    let neg_half = -half.clone();

    // expand right to left: `suffix` holds the expansion of prod_{i>j} B_i
    let mut terms: Vec<(Dyadic, Vec<Arc<Robp>>)> = Vec::new();
    let mut suffix: Vec<(Dyadic, Vec<Arc<Robp>>)> = vec![(Dyadic::one(), Vec::new())];
    for j in (0..d.m).rev() {
        let (from, to) = (bounds[j], bounds[j + 1]);
        let two_entries = j > 0 && p.widths()[from] == 2;
        let (a_parts, b_parts): (Vec<(Dyadic, Arc<Robp>)>, Vec<(Dyadic, Arc<Robp>)>) =
            if two_entries {
                let pl = pinned_block(p, from, to, 0)?;
                let mi = pinned_block(p, from, to, 1)?;
                (
                    vec![(half.clone(), pl.clone()), (half.clone(), mi.clone())],
                    vec![(half.clone(), pl), (neg_half.clone(), mi)],
                )
            } else {
                let entry = if j == 0 { p.start() } else { 0 };
                let only = pinned_block(p, from, to, entry)?;
                (vec![(Dyadic::one(), only)], Vec::new())
            };
        for (c, blk) in &a_parts {
            for (sc, sf) in &suffix {
                let mut fs = Vec::with_capacity(sf.len() + 1);
                fs.push(blk.clone());
                fs.extend(sf.iter().cloned());
                terms.push((c * sc, fs));
            }
        }
        let mut next_suffix = Vec::with_capacity(2 * suffix.len());
        for (c, blk) in &b_parts {
            for (sc, sf) in &suffix {
                let mut fs = Vec::with_capacity(sf.len() + 1);
                fs.push(blk.clone());
                fs.extend(sf.iter().cloned());
                next_suffix.push((c * sc, fs));
            }
        }
        suffix = next_suffix;
        if suffix.is_empty() {
            // a single-entry block resets the chain; earlier blocks cannot
            // influence the value through it
            break;
        }
        if terms.len() + suffix.len() > 1 << 21 {
            return Err(GenError::ExpansionTooLarge { m: d.m });
        }
    }
    Ok(LinearCombination::new(terms))
}
