use std::fmt;

use crate::dyadic::Dyadic;

/// Hard cap on layer width, program-wide.
pub const MAX_WIDTH: usize = 8;
/// Hard cap on ambient arity (inputs are carried as u64 sign masks).
pub const MAX_AMBIENT: usize = 64;

/// Read-once branching program over `{-1,+1}` labeled edges.
///
/// Vertex layers are `0..=n`, edge layer `i` reads one variable and maps
/// layer `i` to layer `i+1`. The program outputs `-1` iff the walk ends in
/// an accept vertex. `perm` gives the ambient variable read at each step;
/// `None` means step `i` reads ambient variable `i`.
///
/// Sign masks: bit `j` of an input mask set means ambient variable `j`
/// carries `-1`; clear means `+1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Robp {
    pub(crate) widths: Vec<u8>,
    /// `trans[i][v] = [target on -1, target on +1]`
    pub(crate) trans: Vec<Vec<[u8; 2]>>,
    pub(crate) start: u8,
    pub(crate) accept: Vec<u8>,
    pub(crate) ambient_n: usize,
    pub(crate) perm: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobpError {
    WidthOutOfRange { layer: usize, width: usize },
    ShapeMismatch,
    BadTransition { layer: usize, vertex: usize },
    BadStart,
    BadAccept,
    BadPerm,
    BadAmbient,
    AmbientMismatch,
    VariableOverlap,
    WidthMismatch,
    NotTwoStart,
    TooWide { max: usize },
    NoCollision,
    DeltaTooLarge,
    BadSlice,
    BoundaryTooWide,
    Parse { line: usize, msg: String },
}

impl fmt::Display for RobpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RobpError::WidthOutOfRange { layer, width } => {
                write!(f, "layer {layer} has width {width}, allowed 1..={MAX_WIDTH}")
            }
            RobpError::ShapeMismatch => write!(f, "transition table shape does not match widths"),
            RobpError::BadTransition { layer, vertex } => {
                write!(f, "transition out of range at layer {layer}, vertex {vertex}")
            }
            RobpError::BadStart => write!(f, "start vertex out of range"),
            RobpError::BadAccept => write!(f, "accept set not sorted/unique/in range"),
            RobpError::BadPerm => write!(f, "perm is not an injective in-range read list"),
            RobpError::BadAmbient => write!(f, "ambient arity out of range"),
            RobpError::AmbientMismatch => write!(f, "programs have different ambient arity"),
            RobpError::VariableOverlap => write!(f, "programs read overlapping variables"),
            RobpError::WidthMismatch => write!(f, "boundary layer widths differ"),
            RobpError::NotTwoStart => write!(f, "operation needs a first layer of width 2"),
            RobpError::TooWide { max } => write!(f, "operation needs width at most {max}"),
            RobpError::NoCollision => write!(f, "no input collides the two paths"),
            RobpError::DeltaTooLarge => write!(f, "threshold exceeds 2^-(w-1)"),
            RobpError::BadSlice => write!(f, "slice bounds out of range"),
            RobpError::BoundaryTooWide => write!(f, "block boundary has more than 2 vertices"),
            RobpError::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for RobpError {}

/// Classification of one edge layer.
///
/// Precedence: a layer with any label mapping two vertices together is
/// `Colliding`; otherwise if both label maps are equal the layer is
/// `Identity` (the read variable is irrelevant); otherwise `Permutation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerClass {
    Colliding,
    Identity,
    Permutation,
}

/// Reach probabilities from the start and acceptance probabilities to the
/// end, per vertex layer. All exact under the uniform distribution.
#[derive(Clone, Debug)]
pub struct ReachStats {
    /// `reach[i][v]` = Pr over uniform input of passing through vertex `v`
    /// in layer `i`.
    pub reach: Vec<Vec<Dyadic>>,
    /// `accept_prob[i][v]` = Pr of accepting when started at `(i, v)`.
    pub accept_prob: Vec<Vec<Dyadic>>,
}

impl Robp {
    pub fn new(
        widths: Vec<u8>,
        trans: Vec<Vec<[u8; 2]>>,
        start: u8,
        accept: Vec<u8>,
        ambient_n: usize,
        perm: Option<Vec<usize>>,
    ) -> Result<Robp, RobpError> {
        if widths.is_empty() {
            return Err(RobpError::ShapeMismatch);
        }
        for (i, &w) in widths.iter().enumerate() {
            if w == 0 || w as usize > MAX_WIDTH {
                return Err(RobpError::WidthOutOfRange {
                    layer: i,
                    width: w as usize,
                });
            }
        }
        let n = widths.len() - 1;
        if ambient_n > MAX_AMBIENT || n > ambient_n {
            return Err(RobpError::BadAmbient);
        }
        if trans.len() != n {
            return Err(RobpError::ShapeMismatch);
        }
        for i in 0..n {
            if trans[i].len() != widths[i] as usize {
                return Err(RobpError::ShapeMismatch);
            }
            for (v, t) in trans[i].iter().enumerate() {
                if t[0] >= widths[i + 1] || t[1] >= widths[i + 1] {
                    return Err(RobpError::BadTransition { layer: i, vertex: v });
                }
            }
        }
        if start >= widths[0] {
            return Err(RobpError::BadStart);
        }
        let last = *widths.last().unwrap();
        if accept.windows(2).any(|w| w[0] >= w[1]) || accept.iter().any(|&v| v >= last) {
            return Err(RobpError::BadAccept);
        }
        if let Some(p) = &perm {
            if p.len() != n {
                return Err(RobpError::BadPerm);
            }
            let mut seen = 0u64;
            for &j in p {
                if j >= ambient_n || seen >> j & 1 == 1 {
                    return Err(RobpError::BadPerm);
                }
                seen |= 1 << j;
            }
        }
        Ok(Robp {
            widths,
            trans,
            start,
            accept,
            ambient_n,
            perm,
        })
    }

    pub fn n(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    pub fn width(&self) -> usize {
        *self.widths.iter().max().unwrap() as usize
    }

    pub fn widths(&self) -> &[u8] {
        &self.widths
    }

    pub fn start(&self) -> u8 {
        self.start
    }

    pub fn accept(&self) -> &[u8] {
        &self.accept
    }

    pub fn is_accept(&self, v: u8) -> bool {
        self.accept.binary_search(&v).is_ok()
    }

    pub fn perm(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    /// Ambient variable read at step `i`.
    pub fn read_at(&self, i: usize) -> usize {
        match &self.perm {
            Some(p) => p[i],
            None => i,
        }
    }

    pub fn reads(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.read_at(i)).collect()
    }

    /// Bitmask over ambient variables actually read.
    pub fn read_mask(&self) -> u64 {
        let mut m = 0u64;
        for i in 0..self.n() {
            m |= 1 << self.read_at(i);
        }
        m
    }

    pub fn transition(&self, layer: usize, v: u8, sign: i8) -> u8 {
        let lab = if sign < 0 { 0 } else { 1 };
        self.trans[layer][v as usize][lab]
    }

    #[inline]
    pub fn step_mask(&self, layer: usize, v: u8, x: u64) -> u8 {
        // mask bit set = -1 = label index 0
        let bit = (x >> self.read_at(layer)) & 1;
        self.trans[layer][v as usize][(1 - bit) as usize]
    }

    /// Final vertex of the walk from `(layer, v)` on sign mask `x`.
    pub fn walk_from(&self, layer: usize, v: u8, x: u64) -> u8 {
        let mut cur = v;
        for i in layer..self.n() {
            cur = self.step_mask(i, cur, x);
        }
        cur
    }

    /// `-1` iff accepted; input as sign mask over ambient variables.
    pub fn evaluate_mask(&self, x: u64) -> i8 {
        let end = self.walk_from(0, self.start, x);
        if self.is_accept(end) {
            -1
        } else {
            1
        }
    }

    pub fn evaluate_from_vertex(&self, v: u8, x: u64) -> i8 {
        let end = self.walk_from(0, v, x);
        if self.is_accept(end) {
            -1
        } else {
            1
        }
    }

    /// `1` iff accepted.
    pub fn accept_indicator_mask(&self, x: u64) -> u8 {
        (self.evaluate_mask(x) < 0) as u8
    }

    pub fn evaluate_signs(&self, x: &[i8]) -> i8 {
        assert_eq!(x.len(), self.ambient_n);
        let mut mask = 0u64;
        for (j, &s) in x.iter().enumerate() {
            debug_assert!(s == 1 || s == -1);
            if s < 0 {
                mask |= 1 << j;
            }
        }
        self.evaluate_mask(mask)
    }

    /// Exact reach and acceptance probabilities under uniform input.
    pub fn reach_stats(&self) -> ReachStats {
        let n = self.n();
        let mut reach: Vec<Vec<Dyadic>> = self
            .widths
            .iter()
            .map(|&w| vec![Dyadic::zero(); w as usize])
            .collect();
        reach[0][self.start as usize] = Dyadic::one();
        for i in 0..n {
            for v in 0..self.widths[i] as usize {
                if reach[i][v].is_zero() {
                    continue;
                }
                let half = reach[i][v].div_pow2(1);
                for lab in 0..2 {
                    let t = self.trans[i][v][lab] as usize;
                    let cur = &reach[i + 1][t] + &half;
                    reach[i + 1][t] = cur;
                }
            }
        }
        let mut accept_prob: Vec<Vec<Dyadic>> = self
            .widths
            .iter()
            .map(|&w| vec![Dyadic::zero(); w as usize])
            .collect();
        for v in 0..*self.widths.last().unwrap() as usize {
            if self.is_accept(v as u8) {
                accept_prob[n][v] = Dyadic::one();
            }
        }
        for i in (0..n).rev() {
            for v in 0..self.widths[i] as usize {
                let a = accept_prob[i + 1][self.trans[i][v][0] as usize].clone();
                let b = accept_prob[i + 1][self.trans[i][v][1] as usize].clone();
                accept_prob[i][v] = (&a + &b).div_pow2(1);
            }
        }
        ReachStats { reach, accept_prob }
    }

    /// Acceptance probability under uniform input, exact.
    pub fn acceptance(&self) -> Dyadic {
        let stats = self.reach_stats();
        stats.accept_prob[0][self.start as usize].clone()
    }

    /// `E[f]` with f the ±1 output, exact: `1 - 2*acceptance`.
    pub fn expectation(&self) -> Dyadic {
        &Dyadic::one() - &self.acceptance().mul_pow2(1)
    }

    pub fn classify_layer(&self, i: usize) -> LayerClass {
        let w_next = self.widths[i + 1] as usize;
        for lab in 0..2 {
            let mut seen = vec![false; w_next];
            for v in 0..self.widths[i] as usize {
                let t = self.trans[i][v][lab] as usize;
                if seen[t] {
                    return LayerClass::Colliding;
                }
                seen[t] = true;
            }
        }
        if self.trans[i].iter().all(|t| t[0] == t[1]) {
            LayerClass::Identity
        } else {
            LayerClass::Permutation
        }
    }

    pub fn colliding_layers(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.classify_layer(i) == LayerClass::Colliding)
            .collect()
    }
}

impl fmt::Debug for Robp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Robp(n={}, ambient={}, widths={:?})",
            self.n(),
            self.ambient_n,
            self.widths
        )
    }
}
