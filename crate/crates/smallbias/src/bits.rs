/// Fixed-length bit string; seeds and emissions move through these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Bits {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Low `len` bits of `value`, `len <= 64`.
    pub fn from_u64(value: u64, len: usize) -> Bits {
        assert!(len <= 64);
        let masked = if len == 64 {
            value
        } else {
            value & ((1u64 << len) - 1)
        };
        Bits {
            words: if len == 0 { vec![] } else { vec![masked] },
            len,
        }
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Bits {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.set(i, true);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len);
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }
}

/// Sequential reader over a seed. Generators consume their bits through
/// this so tests can assert that declared and consumed counts agree.
pub struct SeedStream<'a> {
    bits: &'a Bits,
    pos: usize,
}

impl<'a> SeedStream<'a> {
    pub fn new(bits: &'a Bits) -> SeedStream<'a> {
        SeedStream { bits, pos: 0 }
    }

    pub fn take_bit(&mut self) -> u64 {
        assert!(self.pos < self.bits.len(), "seed exhausted");
        let b = self.bits.get(self.pos) as u64;
        self.pos += 1;
        b
    }

    /// Next `k` bits, little-endian, `k <= 64`.
    pub fn take(&mut self, k: u32) -> u64 {
        let mut v = 0u64;
        for j in 0..k {
            v |= self.take_bit() << j;
        }
        v
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_reads_in_order() {
        let b = Bits::from_u64(0b1011, 4);
        let mut s = SeedStream::new(&b);
        assert_eq!(s.take_bit(), 1);
        assert_eq!(s.take(3), 0b101);
        assert_eq!(s.consumed(), 4);
        assert_eq!(s.remaining(), 0);
    }

    #[test]
    fn long_bits() {
        let b = Bits::from_fn(130, |i| i % 7 == 0);
        assert!(b.get(0) && b.get(126) && !b.get(127));
        assert_eq!(b.len(), 130);
    }
}
