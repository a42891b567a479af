use num_bigint::BigInt;

use crate::error::Result;
use crate::qlaurent::{phi, q_factorial, Monomial, Order, QuarterExp, QuarterSeries};

/// Which formula evaluates the q-sine and q-cosine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigRoute {
    /// The defining power series in z.
    Direct,
    /// `1phi1` in base q^2.
    BaseQSquared,
    /// `2phi3` in base q.
    BaseQ,
}

impl TrigRoute {
    pub const ALL: [TrigRoute; 3] = [TrigRoute::Direct, TrigRoute::BaseQSquared, TrigRoute::BaseQ];
}

/// Terms `(j, (-1)^n q^(...) / (q)_j)` of the q-sine (`odd`) or q-cosine at
/// `z = w q^(x/4)`, as coefficients of `w^j`, each known below `trunc`.
///
/// Sine: `sum (-1)^n q^(n(n+1)) z^(2n+1) / (q)_(2n+1)`.
/// Cosine: `sum (-1)^n q^(n^2) z^(2n) / (q)_(2n)`.
pub(crate) fn trig_terms(odd: bool, x: i64, trunc: QuarterExp) -> Vec<(i64, QuarterSeries)> {
    let exponent = |n: i64| {
        if odd {
            4 * n * (n + 1) + (2 * n + 1) * x
        } else {
            4 * n * n + 2 * n * x
        }
    };
    let mut out = Vec::new();
    let mut n = 0i64;
    loop {
        let e = exponent(n);
        let rising = exponent(n + 1) > e;
        if rising && e >= trunc.0 {
            break;
        }
        let j = if odd { 2 * n + 1 } else { 2 * n };
        let rel = trunc.0 - e;
        let coeff = if rel > 0 {
            let inv = q_factorial(Order::Finite(j as u64), QuarterExp(rel))
                .inverse()
                .expect("(q)_j has unit leading coefficient");
            inv.mul_monomial(if n % 2 == 0 { 1 } else { -1 }, QuarterExp(e))
        } else {
            QuarterSeries::zero(trunc)
        };
        out.push((j, coeff));
        n += 1;
    }
    out
}

fn direct(odd: bool, arg: Monomial, trunc: QuarterExp) -> QuarterSeries {
    let mut sum = QuarterSeries::zero(trunc);
    if arg.coeff == 0 {
        return if odd { sum } else { QuarterSeries::one(trunc) };
    }
    let c = BigInt::from(arg.coeff);
    for (j, term) in trig_terms(odd, arg.exp.0, trunc) {
        sum += &term.scale(&num_traits::pow(c.clone(), j as usize));
    }
    sum
}

/// `1/(1-q)` known below `trunc`.
fn one_minus_q_inverse(trunc: QuarterExp) -> QuarterSeries {
    let k = (trunc.0.max(0) + 3) / 4;
    QuarterSeries::from_terms((0..k).map(|i| (QuarterExp::whole(i), 1)), trunc)
}

fn via_phi(odd: bool, arg: Monomial, route: TrigRoute, trunc: QuarterExp) -> Result<QuarterSeries> {
    let q = QuarterExp;
    let c2 = arg.coeff * arg.coeff;
    let k = arg.exp.0;
    let body = match (route, odd) {
        (TrigRoute::BaseQSquared, true) => {
            let z2 = QuarterSeries::exact_monomial(c2, q(8 + 2 * k));
            phi(&[Monomial::ZERO], &[Monomial::q_pow(q(12))], q(8), &z2, trunc - q(k))?
        }
        (TrigRoute::BaseQSquared, false) => {
            let z2 = QuarterSeries::exact_monomial(c2, q(4 + 2 * k));
            return phi(&[Monomial::ZERO], &[Monomial::q_pow(q(4))], q(8), &z2, trunc);
        }
        (TrigRoute::BaseQ, true) => {
            let z2 = QuarterSeries::exact_monomial(-c2, q(8 + 2 * k));
            let lower = [Monomial::new(-1, q(4)), Monomial::q_pow(q(6)), Monomial::new(-1, q(6))];
            phi(&[Monomial::ZERO, Monomial::ZERO], &lower, q(4), &z2, trunc - q(k))?
        }
        (TrigRoute::BaseQ, false) => {
            let z2 = QuarterSeries::exact_monomial(-c2, q(4 + 2 * k));
            let lower = [Monomial::new(-1, q(4)), Monomial::q_pow(q(2)), Monomial::new(-1, q(2))];
            return phi(&[Monomial::ZERO, Monomial::ZERO], &lower, q(4), &z2, trunc);
        }
        (TrigRoute::Direct, _) => unreachable!(),
    };
    // z / (1 - q) prefactor of the sine
    let scaled = &body * &one_minus_q_inverse(trunc - q(k));
    Ok(scaled.mul_monomial(arg.coeff, q(k)))
}

/// The q-sine at a monomial argument.
pub fn q_sin(arg: Monomial, trunc: QuarterExp) -> Result<QuarterSeries> {
    q_sin_via(arg, TrigRoute::Direct, trunc)
}

/// The q-cosine at a monomial argument.
pub fn q_cos(arg: Monomial, trunc: QuarterExp) -> Result<QuarterSeries> {
    q_cos_via(arg, TrigRoute::Direct, trunc)
}

pub fn q_sin_via(arg: Monomial, route: TrigRoute, trunc: QuarterExp) -> Result<QuarterSeries> {
    match route {
        TrigRoute::Direct => Ok(direct(true, arg, trunc)),
        _ if arg.coeff == 0 => Ok(QuarterSeries::zero(trunc)),
        _ => via_phi(true, arg, route, trunc),
    }
}

pub fn q_cos_via(arg: Monomial, route: TrigRoute, trunc: QuarterExp) -> Result<QuarterSeries> {
    match route {
        TrigRoute::Direct => Ok(direct(false, arg, trunc)),
        _ => via_phi(false, arg, route, trunc),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_at_zero_is_one() {
        let t = QuarterExp::whole(10);
        for route in TrigRoute::ALL {
            assert_eq!(q_cos_via(Monomial::ZERO, route, t).unwrap(), QuarterSeries::one(t));
        }
    }

    #[test]
    fn sine_leading_term() {
        // q^(1/2)/(1-q) + O(q^(5/2)): the n=1 term starts at q^(2 + 3/2)
        let t = QuarterExp::whole(10);
        let s = q_sin(Monomial::q_pow(QuarterExp::halves(1)), t).unwrap();
        for k in 0..3 {
            assert_eq!(s.coeff(QuarterExp(2 + 4 * k)), BigInt::from(1));
        }
    }

    #[test]
    fn routes_agree() {
        let t = QuarterExp::whole(12);
        for arg in [
            Monomial::q_pow(QuarterExp::halves(1)),
            Monomial::new(-1, QuarterExp(1)),
            Monomial::new(2, QuarterExp(-1)),
            Monomial::q_pow(QuarterExp::whole(1)),
        ] {
            let s = q_sin(arg, t).unwrap();
            let c = q_cos(arg, t).unwrap();
            for route in TrigRoute::ALL {
                assert_eq!(q_sin_via(arg, route, t).unwrap(), s, "sin {arg:?} {route:?}");
                assert_eq!(q_cos_via(arg, route, t).unwrap(), c, "cos {arg:?} {route:?}");
            }
        }
    }
}
