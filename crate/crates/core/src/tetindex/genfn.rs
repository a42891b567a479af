use crate::error::Result;
use crate::qlaurent::{q_factorial, Order, QuarterExp, QuarterSeries, ZLaurentWindow};

/// Coefficients of `zeta^e`, e in `[lo, hi]`, in
/// `(q^(1-m/2) zeta^-1; q)_inf / (q^(-m/2) zeta; q)_inf`,
/// which reproduce I(m,e).
///
/// The numerator is `E_q(-q^(1-m/2)/zeta) = sum_j (-1)^j q^(C(j,2) + j(1-m/2)) zeta^-j / (q)_j`
/// and the reciprocal denominator is `e_q(q^(-m/2) zeta) = sum_k q^(-mk/2) zeta^k / (q)_k`.
/// The pair (j, k = e + j) contributes from `q^(j(j+1)/2 - jm - me/2)` on, so
/// beyond the last j below trunc (and past j = m) the numerator can be cut:
/// those terms only reach the window at order >= trunc.
pub fn generating_function_window(m: i64, lo: i64, hi: i64, trunc: QuarterExp) -> Result<ZLaurentWindow> {
    let t = trunc.0;
    let pair = |j: i64, e: i64| 2 * j * (j + 1) - 4 * j * m - 2 * m * e;
    let mut big_j = (-lo).max(0).max(m);
    for e in lo..=hi {
        let mut j = (-e).max(0);
        while j < m || pair(j, e) < t {
            j += 1;
        }
        big_j = big_j.max(j);
    }
    let big_k = hi + big_j;
    let va = |j: i64| 2 * j * (j + 1) - 2 * j * m;
    let vb = |k: i64| -2 * m * k;
    let min_a = (0..=big_j).map(va).min().unwrap();
    let min_b = (0..=big_k).map(vb).min().unwrap();

    let a_trunc = QuarterExp(t - min_b);
    let numer: Vec<QuarterSeries> = (0..=big_j)
        .rev()
        .map(|j| {
            let rel = QuarterExp((a_trunc.0 - va(j)).max(1));
            let inv = q_factorial(Order::Finite(j as u64), rel).inverse().expect("unit");
            inv.mul_monomial(if j % 2 == 0 { 1 } else { -1 }, QuarterExp(va(j))).truncated(a_trunc)
        })
        .collect();
    let b_trunc = QuarterExp(t - min_a);
    let denom: Vec<QuarterSeries> = (0..=big_k)
        .map(|k| {
            let rel = QuarterExp((b_trunc.0 - vb(k)).max(1));
            let inv = q_factorial(Order::Finite(k as u64), rel).inverse().expect("unit");
            inv.shift(QuarterExp(vb(k))).truncated(b_trunc)
        })
        .collect();
    let a = ZLaurentWindow::with_tails(-big_j, numer, true, true);
    let b = ZLaurentWindow::with_tails(0, denom, true, false);
    let prod = a.mul(&b)?.restrict(lo, hi)?;
    Ok(prod.map(|c| c.truncated(trunc)))
}
