use std::collections::BTreeMap;

use super::table::IndexTable;
use super::trig::trig_terms;
use crate::error::{Error, Result};
use crate::qlaurent::{pochhammer, Monomial, Order, QuarterExp, QuarterSeries, ZLaurentWindow};

/// The diagonal generating function `phi_r(z) = sum_e I(e - r, e) z^e`,
/// restricted to a window of z-exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSeries {
    pub r: i64,
    pub window: ZLaurentWindow,
}

/// `prod_{i<n} (1 + z^s q^((k + 4i)/4))` for s = ±1 as an exact polynomial in z.
fn shifted_product(s: i64, k: i64, n: u64) -> ZLaurentWindow {
    let mut acc = ZLaurentWindow::polynomial(0, vec![QuarterSeries::exact_monomial(1, QuarterExp(0))]);
    for i in 0..n as i64 {
        let one = QuarterSeries::exact_monomial(1, QuarterExp(0));
        let term = QuarterSeries::exact_monomial(1, QuarterExp(k + 4 * i));
        let factor = if s > 0 {
            ZLaurentWindow::polynomial(0, vec![one, term])
        } else {
            ZLaurentWindow::polynomial(-1, vec![term, one])
        };
        acc = acc.mul(&factor).expect("polynomials multiply exactly");
    }
    acc
}

/// `phi_r` through its `3phi3` expression.
///
/// Even r: `(-z q^(-1/2))^(r/2) 3phi3[-z^-1 q^(1/2), -z q^(1/2), 0; -q, q^(1/2), -q^(1/2); q, q^(1-r/2)]`.
/// Odd r: `(-z)^((r-1)/2) q^((1-r)/2) (1+z)/(1-q) 3phi3[-z^-1 q, -z q, 0; -q, q^(3/2), -q^(3/2); q, q^((3-r)/2)]`.
///
/// Every summand is a Laurent polynomial in z, so the result is exact in z.
pub fn phi_r_hypergeometric(r: i64, lo: i64, hi: i64, trunc: QuarterExp) -> Result<PhiSeries> {
    let even = r.rem_euclid(2) == 0;
    // (parameter exponent, lower exponents, argument exponent, prefactor q-shift), in quarters
    let (k, lower_half, arg, shift) = if even { (2, 2, 4 - 2 * r, -r) } else { (4, 6, 6 - 2 * r, 2 - 2 * r) };
    let t1 = trunc.0 - shift;
    let lower = [Monomial::new(-1, QuarterExp(4)), Monomial::q_pow(QuarterExp(lower_half)), Monomial::new(-1, QuarterExp(lower_half))];

    let mut sum: Option<ZLaurentWindow> = None;
    let mut n = 0u64;
    loop {
        let nn = n as i64;
        // valuation of the n-th summand's z^0 coefficient: 4 C(n,2) + n * arg
        let v = 2 * nn * (nn - 1) + nn * arg;
        let v_next = 2 * (nn + 1) * nn + (nn + 1) * arg;
        if v_next > v && v >= t1 {
            break;
        }
        if t1 - v > 0 {
            let mut denom = pochhammer(Monomial::q_pow(QuarterExp(4)), Order::Finite(n), QuarterExp(t1 - v))?;
            for l in lower {
                denom = &denom * &pochhammer(l, Order::Finite(n), QuarterExp(t1 - v))?;
            }
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            let scalar = denom.inverse()?.mul_monomial(sign, QuarterExp(v));
            let poly = shifted_product(-1, k, n).mul(&shifted_product(1, k, n))?;
            let term = poly.scale(&scalar);
            sum = Some(match sum {
                Some(s) => s.add(&term)?,
                None => term,
            });
        }
        n += 1;
    }
    let sum = sum.unwrap_or_else(|| ZLaurentWindow::polynomial(0, vec![QuarterSeries::zero(QuarterExp(t1))]));
    let full = if even {
        let sign = if (r / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        sum.shift_z(r / 2).map(|c| c.mul_monomial(sign, QuarterExp(shift)))
    } else {
        let h = (r - 1) / 2;
        let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
        let geo_len = (t1.max(0) + 3) / 4;
        let geo = QuarterSeries::from_terms((0..geo_len).map(|i| (QuarterExp::whole(i), 1)), QuarterExp(t1));
        let one_plus_z = ZLaurentWindow::polynomial(0, vec![QuarterSeries::exact_monomial(1, QuarterExp(0)); 2]);
        sum.mul(&one_plus_z)?.scale(&geo).shift_z(h).map(|c| c.mul_monomial(sign, QuarterExp(shift)))
    };
    Ok(PhiSeries { r, window: full.restrict(lo, hi)? })
}

/// `phi_r` assembled coefficient by coefficient from the index table.
pub fn phi_r_diagonal_sum(r: i64, lo: i64, hi: i64, trunc: QuarterExp, table: &IndexTable) -> PhiSeries {
    let coeffs = (lo..=hi).map(|e| table.get(e - r, e, trunc)).collect();
    PhiSeries { r, window: ZLaurentWindow::new(lo, coeffs) }
}

/// `phi_r` from the q-sine/q-cosine factorization, expanded in `w = z^(1/2)`.
///
/// Even r: `(-z q^(-1/2))^(r/2) [C(w x) C(-x/w) + q^(1/2) S(w x) S(-x/w)]`.
/// Odd r: `(-1)^((r-1)/2) q^((1-r)/4) z^(r/2) [S(w x) C(-x/w) - C(w x) S(-x/w)]`,
/// with `x = q^((1-r)/4)`. Odd powers of w must cancel.
pub fn phi_r_trig_product(r: i64, lo: i64, hi: i64, trunc: QuarterExp) -> Result<PhiSeries> {
    let even = r.rem_euclid(2) == 0;
    let x = 1 - r;
    let shift = if even { -r } else { 1 - r };
    let t1 = QuarterExp(trunc.0 - shift);
    let min_val = |terms: &[(i64, QuarterSeries)]| terms.iter().map(|(_, c)| c.valuation_or_trunc().0).min().unwrap_or(t1.0);
    // Each factor to the precision its partner's lowest term demands.
    let probe = |odd| trig_terms(odd, x, t1);
    let m = min_val(&probe(true)).min(min_val(&probe(false))).min(0);
    let prec = QuarterExp(t1.0 - m + 2);
    let sin = trig_terms(true, x, prec);
    let cos = trig_terms(false, x, prec);

    // f(w) g(-1/w) as a map from w-power to coefficient.
    let pair = |f: &[(i64, QuarterSeries)], g: &[(i64, QuarterSeries)], out: &mut BTreeMap<i64, QuarterSeries>, sign: i64, qs: i64| {
        for (a, ca) in f {
            for (b, cb) in g {
                let s = if b % 2 == 0 { sign } else { -sign };
                let prod = (ca * cb).mul_monomial(s, QuarterExp(qs)).truncated(t1);
                let slot = out.entry(a - b).or_insert_with(|| QuarterSeries::zero(t1));
                *slot += &prod;
            }
        }
    };
    let mut bracket = BTreeMap::new();
    if even {
        pair(&cos, &cos, &mut bracket, 1, 0);
        pair(&sin, &sin, &mut bracket, 1, 2);
    } else {
        pair(&sin, &cos, &mut bracket, 1, 0);
        pair(&cos, &sin, &mut bracket, -1, 0);
    }
    let prefactor_sign = if even {
        if (r / 2).rem_euclid(2) == 0 { 1 } else { -1 }
    } else if ((r - 1) / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    };
    let mut by_z: BTreeMap<i64, QuarterSeries> = BTreeMap::new();
    for (wpow, c) in bracket {
        let total = wpow + r;
        if c.is_zero() {
            continue;
        }
        if total.rem_euclid(2) != 0 {
            return Err(Error::HalfPowerSurvived(total));
        }
        by_z.insert(total / 2, c.mul_monomial(prefactor_sign, QuarterExp(shift)));
    }
    let coeffs = (lo..=hi)
        .map(|e| by_z.get(&e).cloned().unwrap_or_else(|| QuarterSeries::zero(trunc)).truncated(trunc))
        .collect();
    Ok(PhiSeries { r, window: ZLaurentWindow::new(lo, coeffs) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_and_odd_examples() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(10);
        let p0 = phi_r_hypergeometric(0, -3, 3, t).unwrap();
        assert_eq!(p0.window.coeff_of(0).unwrap(), &table.get(0, 0, t));
        let p2 = phi_r_hypergeometric(2, -3, 3, t).unwrap();
        for e in -3..=3 {
            assert_eq!(p2.window.coeff_of(e).unwrap(), &table.get(e - 2, e, t), "e={e}");
        }
        let p1 = phi_r_hypergeometric(1, -3, 3, t).unwrap();
        assert_eq!(p1.window.coeff_of(1).unwrap(), &table.get(0, 1, t));
    }

    #[test]
    fn three_routes_agree() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(8);
        for r in -3..=3 {
            let d = phi_r_diagonal_sum(r, -3, 3, t, &table);
            let h = phi_r_hypergeometric(r, -3, 3, t).unwrap();
            let g = phi_r_trig_product(r, -3, 3, t).unwrap();
            assert_eq!(d, h, "r={r} hypergeometric");
            assert_eq!(d, g, "r={r} trig");
        }
    }
}
