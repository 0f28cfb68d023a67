use std::sync::Arc;

use robp_core::{Dyadic, Robp, RobpError};

use crate::chain::LinearCombination;
use crate::generator::GenError;

/// Suffix approximation of a narrow program.
///
/// `bprime` evaluates to the last `target` collision-carrying segments of
/// the program entered at an averaged boundary state (so its value lies in
/// {-1, 0, +1}); the discarded error is dominated pointwise by the event
/// that none of the `fcols` programs accept. When `exact` is set the error
/// is identically zero and `fcols` is empty.
#[derive(Clone, Debug)]
pub struct StructuralDecomposition {
    pub exact: bool,
    /// Vertex layer where the kept suffix starts.
    pub suffix_from: usize,
    pub bprime: LinearCombination,
    /// One first-collision program per kept segment, disjoint variables.
    pub fcols: Vec<Robp>,
    /// Max colliding layers in any segment.
    pub ell: usize,
    /// Segment count after merging collision-free blocks into neighbors.
    pub m: usize,
    /// Kept-suffix segment budget c^ell.
    pub target: u128,
}

fn whole(p: &Robp, ell: usize, m: usize, target: u128) -> StructuralDecomposition {
    StructuralDecomposition {
        exact: true,
        suffix_from: 0,
        bprime: LinearCombination::new(vec![(Dyadic::one(), vec![Arc::new(p.clone())])]),
        fcols: Vec::new(),
        ell,
        m,
        target,
    }
}

/// Split a width <= 3 program at its narrow cuts and keep only the last
/// c^ell collision-carrying segments, entered at an averaged cut state.
///
/// The program is first trimmed to remove unreachable and behaviorally
/// duplicate vertices; on such programs every segment with a colliding
/// layer admits an input colliding the two paths from its in-cut, so the
/// per-segment first-collision programs are non-zero events. Blocks with
/// no colliding layer carry no collision event and ride along with the
/// nearest collision-carrying block. Pointwise, |p(x) - bprime(x)| is at
/// most the 0/1 indicator that every fcol rejects x; a width-1 cut in the
/// kept range pins the walk and makes the suffix exact instead.
pub fn structural_decompose(p: &Robp, c: u32) -> Result<StructuralDecomposition, GenError> {
    assert!(c >= 2, "segment budget base must be at least 2");
    if p.width() > 3 {
        return Err(GenError::Program(RobpError::TooWide { max: 3 }));
    }
    if p.n() == 0 {
        return Ok(whole(p, 0, 1, 1));
    }
    let q = p.normalize(false);
    let n = q.n();
    let d = q.decompose_blocks();
    let coll: Vec<usize> = d.blocks.iter().map(|b| b.colliding_layers().len()).collect();
    let cores: Vec<usize> = (0..d.m).filter(|&i| coll[i] > 0).collect();
    if cores.is_empty() {
        return Ok(whole(p, 0, 1, 1));
    }
    let ell = cores.iter().map(|&i| coll[i]).max().unwrap();
    let m = cores.len();
    // segment boundaries: one segment per core block, leading and trailing
    // collision-free blocks absorbed by their nearest core
    let mut bounds = Vec::with_capacity(m + 1);
    bounds.push(0usize);
    for &core in &cores[1..] {
        bounds.push(d.cuts[core - 1]);
    }
    bounds.push(n);
    let target = match (c as u128).checked_pow(ell as u32) {
        Some(t) if (m as u128) > t => t as usize,
        Some(t) => return Ok(whole(p, ell, m, t)),
        None => return Ok(whole(p, ell, m, u128::MAX)),
    };
    let j = m - target;
    let suffix_from = bounds[j];
    // a one-vertex boundary pins the walk; everything before it is
    // irrelevant and the suffix from the last such layer is exact
    if let Some(&pin) = bounds[j..m].iter().rev().find(|&&b| q.widths()[b] == 1) {
        let suf = q.subprogram(pin, n, Some(0), None)?;
        return Ok(StructuralDecomposition {
            exact: true,
            suffix_from: pin,
            bprime: LinearCombination::new(vec![(Dyadic::one(), vec![Arc::new(suf)])]),
            fcols: Vec::new(),
            ell,
            m,
            target: target as u128,
        });
    }
    let half = Dyadic::ratio_pow2(1, 1);
    let suf0 = q.subprogram(suffix_from, n, Some(0), None)?;
    let suf1 = q.subprogram(suffix_from, n, Some(1), None)?;
    let bprime = LinearCombination::new(vec![
        (half.clone(), vec![Arc::new(suf0)]),
        (half, vec![Arc::new(suf1)]),
    ]);
    let mut fcols = Vec::with_capacity(target);
    for k in j..m {
        let seg = q.subprogram(bounds[k], bounds[k + 1], Some(0), Some(Vec::new()))?;
        let (fc, _, _) = seg.first_collision_program().map_err(|e| match e {
            RobpError::NoCollision => GenError::NoCollisionBlock { block: k },
            other => GenError::Program(other),
        })?;
        fcols.push(fc);
    }
    Ok(StructuralDecomposition {
        exact: false,
        suffix_from,
        bprime,
        fcols,
        ell,
        m,
        target: target as u128,
    })
}
