/// GF(2^k) arithmetic, k <= 32. Elements are bit masks of polynomials over
/// GF(2); the modulus includes its leading bit `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf2k {
    k: u32,
    modulus: u64,
}

/// Lowest (as an integer) irreducible polynomial of each degree 1..=32.
/// Re-derived and cross-checked by the unit tests below.
pub const IRREDUCIBLE: [u64; 32] = [
    0x3,        // 1: x + 1
    0x7,        // 2: x^2 + x + 1
    0xb,        // 3: x^3 + x + 1
    0x13,       // 4: x^4 + x + 1
    0x25,       // 5: x^5 + x^2 + 1
    0x43,       // 6: x^6 + x + 1
    0x83,       // 7: x^7 + x + 1
    0x11b,      // 8: x^8 + x^4 + x^3 + x + 1
    0x203,      // 9
    0x409,      // 10
    0x805,      // 11
    0x1009,     // 12
    0x201b,     // 13
    0x4021,     // 14
    0x8003,     // 15
    0x1002b,    // 16
    0x20009,    // 17
    0x40009,    // 18
    0x80027,    // 19
    0x100009,   // 20
    0x200005,   // 21
    0x400003,   // 22
    0x800021,   // 23
    0x100001b,  // 24
    0x2000009,  // 25
    0x400001b,  // 26
    0x8000027,  // 27
    0x10000003, // 28
    0x20000005, // 29
    0x40000003, // 30
    0x80000009, // 31
    0x10000008d, // 32
];

impl Gf2k {
    pub fn new(k: u32) -> Gf2k {
        assert!((1..=32).contains(&k), "field degree out of range");
        Gf2k {
            k,
            modulus: IRREDUCIBLE[k as usize - 1],
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn order_log2(&self) -> u32 {
        self.k
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        a ^ b
    }

    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        debug_assert!(a < 1 << self.k && b < 1 << self.k);
        let mut res = 0u64;
        while b != 0 {
            if b & 1 == 1 {
                res ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.k & 1 == 1 {
                a ^= self.modulus;
            }
        }
        res
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Parity of `<a, b>` over GF(2) coordinates.
    pub fn dot(&self, a: u64, b: u64) -> u64 {
        ((a & b).count_ones() & 1) as u64
    }
}

#[cfg(test)]
fn poly_degree(f: u64) -> i32 {
    63 - f.leading_zeros() as i32
}

#[cfg(test)]
fn poly_rem(mut a: u64, f: u64) -> u64 {
    let df = poly_degree(f);
    while poly_degree(a) >= df && a != 0 {
        a ^= f << (poly_degree(a) - df);
    }
    a
}

#[cfg(test)]
fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
/// Multiplication mod `f` without assuming `f` is in the table.
fn modmul(mut a: u64, mut b: u64, f: u64, k: u32) -> u64 {
    let mut res = 0u64;
    while b != 0 {
        if b & 1 == 1 {
            res ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> k & 1 == 1 {
            a ^= f;
        }
    }
    res
}

#[cfg(test)]
/// `x^(2^j) mod f` by repeated squaring.
fn frobenius_power(j: u32, f: u64, k: u32) -> u64 {
    let mut cur = poly_rem(0b10, f); // x, reduced (matters only for k = 1)
    for _ in 0..j {
        cur = modmul(cur, cur, f, k);
    }
    cur
}

#[cfg(test)]
/// Rabin's test: `f` of degree `k` is irreducible over GF(2) iff
/// `x^(2^k) = x (mod f)` and for every prime divisor `p` of `k`,
/// `gcd(x^(2^(k/p)) - x, f) = 1`.
pub fn is_irreducible(f: u64, k: u32) -> bool {
    if k == 0 || f >> k != 1 {
        return false;
    }
    let x_mod = poly_rem(0b10, f);
    if frobenius_power(k, f, k) != x_mod {
        return false;
    }
    let mut rem = k;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= rem {
        if rem % d == 0 {
            primes.push(d);
            while rem % d == 0 {
                rem /= d;
            }
        }
        d += 1;
    }
    if rem > 1 {
        primes.push(rem);
    }
    for p in primes {
        let h = frobenius_power(k / p, f, k) ^ x_mod;
        if poly_gcd(h, f) != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
/// Smallest irreducible polynomial of degree `k`, by integer value.
pub fn smallest_irreducible(k: u32) -> u64 {
    let mut f = (1u64 << k) | 1;
    loop {
        if is_irreducible(f, k) {
            return f;
        }
        f += 2;
    }
}
