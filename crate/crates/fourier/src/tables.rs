use std::fmt;

use robp_core::{Dyadic, Robp};

/// Truth tables are materialized per ambient point; keep them desk-sized.
pub const MAX_TABLE_ARITY: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableError {
    TooWide { n: usize },
    ArityMismatch,
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::TooWide { n } => {
                write!(f, "arity {n} exceeds table cap {MAX_TABLE_ARITY}")
            }
            TableError::ArityMismatch => write!(f, "tables have different arity"),
        }
    }
}

impl std::error::Error for TableError {}

/// Real-valued function on the cube, one exact value per sign mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    values: Vec<Dyadic>,
}

/// Fourier coefficients, one exact value per subset mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    n: usize,
    coeffs: Vec<Dyadic>,
}

impl TruthTable {
    pub fn new(n: usize, values: Vec<Dyadic>) -> Result<Self, TableError> {
        if n > MAX_TABLE_ARITY {
            return Err(TableError::TooWide { n });
        }
        assert_eq!(values.len(), 1 << n);
        Ok(TruthTable { n, values })
    }

    /// ±1 table of a program over its ambient variables.
    pub fn from_robp(p: &Robp) -> Result<Self, TableError> {
        let n = p.ambient_n();
        if n > MAX_TABLE_ARITY {
            return Err(TableError::TooWide { n });
        }
        let values = (0..1u64 << n)
            .map(|x| Dyadic::from_int(p.evaluate_mask(x) as i64))
            .collect();
        Ok(TruthTable { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, x: u64) -> &Dyadic {
        &self.values[x as usize]
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    /// `f_hat(S) = 2^-n sum_x f(x) chi_S(x)`, exact.
    pub fn transform(&self) -> FourierTable {
        let mut c = self.values.clone();
        butterfly(&mut c, self.n);
        let coeffs = c.into_iter().map(|v| v.div_pow2(self.n as u32)).collect();
        FourierTable { n: self.n, coeffs }
    }

    /// Replace the function by its average over the variables outside
    /// `alive_mask`. The result depends only on alive coordinates (values
    /// are duplicated across dead ones).
    ///
    /// Computed by repeated conditional averaging, not via the transform,
    /// so the subset-support identity stays an independent check.
    pub fn bias_function(&self, alive_mask: u64) -> TruthTable {
        let mut values = self.values.clone();
        for d in 0..self.n {
            if alive_mask >> d & 1 == 1 {
                continue;
            }
            let bit = 1usize << d;
            for x in 0..values.len() {
                if x & bit == 0 {
                    let avg = (&values[x] + &values[x | bit]).div_pow2(1);
                    values[x] = avg.clone();
                    values[x | bit] = avg;
                }
            }
        }
        TruthTable { n: self.n, values }
    }
}

impl FourierTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, s: u64) -> &Dyadic {
        &self.coeffs[s as usize]
    }

    pub fn coeffs(&self) -> &[Dyadic] {
        &self.coeffs
    }

    pub fn inverse(&self) -> TruthTable {
        let mut v = self.coeffs.clone();
        butterfly(&mut v, self.n);
        TruthTable {
            n: self.n,
            values: v,
        }
    }

    /// Total and per-degree sums of |f_hat(S)|.
    pub fn spectral_norms(&self) -> (Dyadic, Vec<Dyadic>) {
        let mut by_level = vec![Dyadic::zero(); self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            let k = (s as u64).count_ones() as usize;
            by_level[k] = &by_level[k] + &c.abs();
        }
        let mut total = Dyadic::zero();
        for l in &by_level {
            total += l.clone();
        }
        (total, by_level)
    }

    /// `sum_{S != empty} f_hat(S)^2`, exact.
    pub fn variance(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for (s, c) in self.coeffs.iter().enumerate() {
            if s != 0 {
                acc += c * c;
            }
        }
        acc
    }

    /// `sum_{S != empty} p^{|S|} f_hat(S)^2`, exact. This is the expected
    /// variance of the bias function under independent alive-marginals `p`.
    pub fn restricted_variance_moment(&self, p: &Dyadic) -> Dyadic {
        let mut pow = vec![Dyadic::one(); self.n + 1];
        for k in 1..=self.n {
            pow[k] = &pow[k - 1] * p;
        }
        let mut acc = Dyadic::zero();
        for (s, c) in self.coeffs.iter().enumerate() {
            if s != 0 {
                let k = (s as u64).count_ones() as usize;
                acc += &pow[k] * &(c * c);
            }
        }
        acc
    }
}

fn butterfly(v: &mut [Dyadic], n: usize) {
    for b in 0..n {
        let bit = 1usize << b;
        for x in 0..v.len() {
            if x & bit == 0 {
                let a = v[x].clone();
                let c = v[x | bit].clone();
                v[x] = &a + &c;
                v[x | bit] = &a - &c;
            }
        }
    }
}

/// ±1 expectation of a program with the variables in `average_mask` drawn
/// uniformly and the rest pinned to the signs in `fixed`. Exact dynamic
/// program over the layers; no table is materialized, so any ambient arity
/// the program supports is fine.
pub fn mixed_expectation(p: &Robp, average_mask: u64, fixed: u64) -> Dyadic {
    let n = p.n();
    let widths = p.widths();
    let mut dist = vec![Dyadic::zero(); widths[0] as usize];
    dist[p.start() as usize] = Dyadic::one();
    for i in 0..n {
        let var = p.read_at(i);
        let mut next = vec![Dyadic::zero(); widths[i + 1] as usize];
        if average_mask >> var & 1 == 1 {
            for (v, mass) in dist.iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                let half = mass.div_pow2(1);
                for sign in [-1i8, 1] {
                    let t = p.transition(i, v as u8, sign) as usize;
                    next[t] = &next[t] + &half;
                }
            }
        } else {
            let sign = if fixed >> var & 1 == 1 { -1i8 } else { 1 };
            for (v, mass) in dist.iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                let t = p.transition(i, v as u8, sign) as usize;
                next[t] = &next[t] + mass;
            }
        }
        dist = next;
    }
    let mut acc = Dyadic::zero();
    for (v, mass) in dist.iter().enumerate() {
        if p.is_accept(v as u8) {
            acc += mass.clone();
        }
    }
    // E[f] = Pr[+1] - Pr[-1] = 1 - 2 Pr[accept]
    &Dyadic::one() - &acc.mul_pow2(1)
}

/// Coefficient dump: `mask,numerator,exponent` per line, mask ascending.
pub fn coeffs_csv(ft: &FourierTable) -> String {
    let mut out = String::from("mask,numerator,exponent\n");
    for (s, c) in ft.coeffs().iter().enumerate() {
        out.push_str(&format!("{s},{},{}\n", c.numerator(), c.exponent()));
    }
    out
}
