use super::direct::tet_index;
use crate::error::{Error, Result};
use crate::qlaurent::{phi, pochhammer, q_factorial, Monomial, Order, QuarterExp, QuarterSeries};

/// I(m,e) through its q-Bessel form.
///
/// For e >= 0: `q^(-me/2) / (q)_e * 1phi1[0; q^(e+1); q, q^(1-m)]`.
/// For e < 0:  `q^(me/2) / (q^e; q)_(-e) * 1phi1[0; q^(1-e); q, q^(1-e-m)]`.
pub fn tet_index_via_bessel(m: i64, e: i64, trunc: QuarterExp) -> Result<QuarterSeries> {
    let q = QuarterExp::whole;
    if e >= 0 {
        let shift = QuarterExp(-2 * m * e);
        let t1 = trunc - shift;
        let arg = Monomial::q_pow(q(1 - m)).to_series();
        let s = phi(&[Monomial::ZERO], &[Monomial::q_pow(q(e + 1))], q(1), &arg, t1)?;
        let v = s.valuation_or_trunc();
        let inv = q_factorial(Order::Finite(e as u64), QuarterExp((t1 - v).0.max(1))).inverse()?;
        Ok((&s * &inv).shift(shift))
    } else {
        let shift = QuarterExp(2 * m * e);
        let t1 = trunc - shift;
        let big_e = -e;
        // (q^e; q)_(-e) has valuation -E(E+1)/2, so its reciprocal starts at +E(E+1)/2.
        let w = QuarterExp(2 * big_e * (big_e + 1));
        let arg = Monomial::q_pow(q(1 - e - m)).to_series();
        let s = phi(&[Monomial::ZERO], &[Monomial::q_pow(q(1 - e))], q(1), &arg, t1 - w)?;
        if s.is_zero() {
            return Ok(QuarterSeries::zero(trunc));
        }
        let v = s.valuation_or_trunc();
        let x = t1 - v;
        let poly = pochhammer(Monomial::q_pow(q(e)), Order::Finite(big_e as u64), x - w * 2)?;
        let inv = poly.inverse()?;
        Ok((&s * &inv).truncated(t1).shift(shift))
    }
}

/// Residual of `J_nu(z) = (-sqrt q)^(-nu) J_(-nu)(q^(-nu/2) z)` at `z = q^(-m/2)`,
/// i.e. `I(m, nu) - (-1)^nu q^(-nu/2) I(m + nu, -nu)`.
pub fn bessel_negative_order_check(nu: i64, m: i64, trunc: QuarterExp) -> Result<QuarterSeries> {
    if nu > 0 {
        return Err(Error::BadParameter(format!("order {nu} must be non-positive")));
    }
    let lhs = tet_index(m, nu, trunc);
    let shift = QuarterExp(-2 * nu);
    let sign = if nu % 2 == 0 { 1 } else { -1 };
    let rhs = tet_index(m + nu, -nu, trunc - shift).mul_monomial(sign, shift);
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_branches_match_direct_sum() {
        let t = QuarterExp::whole(12);
        for (m, e) in [(0, 0), (2, 3), (-1, -2), (5, -4), (-6, 7), (8, 8), (-8, -8)] {
            let b = tet_index_via_bessel(m, e, t).unwrap();
            assert_eq!(b, tet_index(m, e, t), "({m},{e})");
        }
    }

    #[test]
    fn negative_order_examples() {
        let t = QuarterExp::whole(10);
        for (nu, m) in [(0, 4), (-1, 0), (-3, 2)] {
            assert!(bessel_negative_order_check(nu, m, t).unwrap().is_zero());
        }
    }
}
