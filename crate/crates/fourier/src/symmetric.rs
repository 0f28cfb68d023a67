/// Elementary symmetric polynomials `e_0..=e_m` of the weights, f64.
pub fn elementary_symmetric(ys: &[f64], m: usize) -> Vec<f64> {
    let mut e = vec![0.0; m + 1];
    e[0] = 1.0;
    for &y in ys {
        for k in (1..=m).rev() {
            e[k] += y * e[k - 1];
        }
    }
    e
}

/// Outcome of the symmetric-tail implication check on one weight vector.
///
/// Hypothesis: `|e_l| <= t^l / sqrt(l!)` and `|e_{l+1}| <= t^{l+1} /
/// sqrt((l+1)!)`. Conclusion: for all `k >= l`, `|e_k| <= (6 e t)^k *
/// (l/k)^{k/2}`; additionally, when `6 e t <= 1/2`, `sum_{k >= l} |e_k| <=
/// 2 (6 e t)^l`. Comparisons carry the given additive tolerance.
#[derive(Debug, Clone)]
pub struct TailReport {
    pub hypothesis: bool,
    pub per_degree: bool,
    pub tail_sum: Option<bool>,
    pub worst_margin: f64,
}

pub fn symmetric_tail_check(ys: &[f64], t: f64, ell: usize, tol: f64) -> TailReport {
    assert!(ell >= 1);
    let n = ys.len();
    let e = elementary_symmetric(ys, n);
    let fact_sqrt = |k: usize| -> f64 { (1..=k).map(|i| i as f64).product::<f64>().sqrt() };
    let hyp_l = ell > n || e[ell].abs() <= t.powi(ell as i32) / fact_sqrt(ell) + tol;
    let hyp_l1 = ell + 1 > n || e[ell + 1].abs() <= t.powi(ell as i32 + 1) / fact_sqrt(ell + 1) + tol;
    let hypothesis = hyp_l && hyp_l1;
    let base = 6.0 * std::f64::consts::E * t;
    let mut per_degree = true;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut tail = 0.0;
    for k in ell..=n {
        let bound = base.powi(k as i32) * (ell as f64 / k as f64).powf(k as f64 / 2.0);
        let margin = e[k].abs() - bound;
        worst_margin = worst_margin.max(margin);
        if margin > tol {
            per_degree = false;
        }
        tail += e[k].abs();
    }
    let tail_sum = if base <= 0.5 {
        Some(tail <= 2.0 * base.powi(ell as i32) + tol)
    } else {
        None
    };
    TailReport {
        hypothesis,
        per_degree,
        tail_sum,
        worst_margin,
    }
}
