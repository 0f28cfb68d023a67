use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact dyadic rational `num / 2^exp`.
///
/// Canonical form: `num` is odd or zero; if zero, `exp` is zero. Every
/// probability and expectation the oracles report is one of these, so
/// comparisons against bounds are exact.
#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigInt, exp: u32) -> Self {
        Self::reduce(num, exp)
    }

    fn reduce(num: BigInt, exp: u32) -> Self {
        if num.is_zero() {
            return Dyadic { num, exp: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        Dyadic {
            num: num >> tz,
            exp: exp - tz,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::reduce(BigInt::from(v), 0)
    }

    /// `v / 2^exp`
    pub fn ratio_pow2(v: i64, exp: u32) -> Self {
        Self::reduce(BigInt::from(v), exp)
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Multiply by `2^t`.
    pub fn mul_pow2(&self, t: u32) -> Self {
        if self.num.is_zero() {
            return Dyadic::zero();
        }
        if self.exp >= t {
            Dyadic {
                num: self.num.clone(),
                exp: self.exp - t,
            }
        } else {
            Dyadic {
                num: &self.num << (t - self.exp) as u64,
                exp: 0,
            }
        }
    }

    /// Divide by `2^t`.
    pub fn div_pow2(&self, t: u32) -> Self {
        // numerator may be even when exp == 0 (plain integers), so reduce
        Self::reduce(self.num.clone(), self.exp + t)
    }

    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Dyadic::one();
        }
        Dyadic {
            num: self.num.pow(k),
            exp: self
                .exp
                .checked_mul(k)
                .expect("dyadic exponent overflow in pow"),
        }
    }

    /// Exact comparison against the rational `p/q`, `q > 0`.
    pub fn cmp_ratio(&self, p: i64, q: i64) -> Ordering {
        assert!(q > 0);
        let lhs = &self.num * q;
        let rhs = BigInt::from(p) << self.exp as u64;
        lhs.cmp(&rhs)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        n * (-(self.exp as f64)).exp2()
    }

    /// Mean of a slice; exact, so summation order is immaterial here.
    pub fn mean(values: &[Dyadic]) -> Dyadic {
        assert!(!values.is_empty());
        let mut acc = Dyadic::zero();
        for v in values {
            acc += v.clone();
        }
        let k = values.len();
        if k.is_power_of_two() {
            acc.div_pow2(k.trailing_zeros())
        } else {
            panic!("mean over non-power-of-two count is not dyadic")
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp) as u64;
        let b = &rhs.num << (e - rhs.exp) as u64;
        Dyadic::reduce(a + b, e)
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exp.max(rhs.exp);
        let a = &self.num << (e - self.exp) as u64;
        let b = &rhs.num << (e - rhs.exp) as u64;
        Dyadic::reduce(a - b, e)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.num.is_zero() || rhs.num.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            num: &self.num * &rhs.num,
            exp: self
                .exp
                .checked_add(rhs.exp)
                .expect("dyadic exponent overflow in mul"),
        }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp) as u64;
        let b = &other.num << (e - other.exp) as u64;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
