use robp_core::Dyadic;

#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 10;

/// Pairwise summation over a fixed balanced tree. The tree shape depends
/// only on the slice length, so the result is bit-identical whether the
/// halves run in parallel or not, and intermediate numerators stay small.
pub fn sum_tree(values: &[Dyadic]) -> Dyadic {
    match values.len() {
        0 => Dyadic::zero(),
        1 => values[0].clone(),
        len => {
            let (a, b) = values.split_at(len / 2);
            #[cfg(feature = "parallel")]
            if len >= PAR_THRESHOLD {
                let (x, y) = rayon::join(|| sum_tree(a), || sum_tree(b));
                return &x + &y;
            }
            &sum_tree(a) + &sum_tree(b)
        }
    }
}

/// Exact mean of 2^k values laid out in a slice.
pub fn mean_pow2(values: &[Dyadic], k: u32) -> Dyadic {
    debug_assert_eq!(values.len() as u64, 1u64 << k);
    sum_tree(values).div_pow2(k)
}
