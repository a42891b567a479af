//! Identities inherited from the Hahn-Exton q-Bessel function, written in
//! terms of tetrahedral indices.

use super::sum::{index_product, inv_q_factorial, parity, product_bound, q_binomial, shell_sum, Domain, Residual};
use super::{params, ResidualReport};
use crate::error::{Error, Result};
use crate::qlaurent::{phi, pochhammer, q_factorial, Monomial, Order, QuarterExp, QuarterSeries};
use crate::tetindex::{valuation_bound, IndexTable};

fn q(k: i64) -> Monomial {
    Monomial::q_pow(QuarterExp::whole(k))
}

/// `(q^a; q)_inf / (q)_inf` known below `trunc`, for a >= 1.
fn tail_ratio(a: i64, trunc: QuarterExp) -> Result<QuarterSeries> {
    let t = QuarterExp(trunc.0.max(1));
    let num = pochhammer(q(a), Order::Infinite, t)?;
    let den = q_factorial(Order::Infinite, t).inverse()?;
    Ok((&num * &den).truncated(trunc))
}

/// `q^(shift/4) I(m,e) * u` where `u` has valuation 0 and is produced to a
/// requested precision by `unit`.
fn index_times_unit(table: &IndexTable, m: i64, e: i64, shift: i64, trunc: QuarterExp, unit: impl Fn(QuarterExp) -> QuarterSeries) -> QuarterSeries {
    let t1 = QuarterExp(trunc.0 - shift);
    let v = valuation_bound(m, e).0;
    if v >= t1.0 {
        return QuarterSeries::zero(trunc);
    }
    let i = table.get(m, e, t1);
    (&i * &unit(QuarterExp(t1.0 - v))).shift(QuarterExp(shift)).truncated(trunc)
}

/// `sum_(n>=0) q^((e/2+1)n) / (q)_n I(m-n,e) = q^(-me/2) (q^(1-m))_inf / (q)_inf`,
/// which is 0 for m > 0, 1 for m = 0 and `q^(-me/2) / (q)_(-m)` for m < 0.
pub fn check_groenevelt_special(m: i64, e: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    if e < 0 {
        return Err(Error::BadParameter(format!("e={e} must be non-negative")));
    }
    let mut r = Residual::new(trunc, perturb);
    let step = 2 * e + 4;
    shell_sum(
        Domain::Naturals,
        &mut r,
        |[n, _]| step * n + valuation_bound(m - n, e).0,
        |[n, _]| Ok(index_times_unit(table, m - n, e, step * n, trunc, |t| inv_q_factorial(n, t))),
    )?;
    if m <= 0 {
        let shift = QuarterExp(-2 * m * e);
        r.sub(inv_q_factorial(-m, trunc - shift).shift(shift));
    }
    Ok(r.report("groenevelt_special", params(&[("m", m), ("e", e)])))
}

/// The t-expansion of
/// `sum_n I(m-n,e) (t q^(-e/2))^n / (q)_n
///  = q^(-me/2) (q^(e+1))_inf / ((q)_inf (t)_inf) 1phi1[t; q^(e+1); q, q^(1-m)]`,
/// one report per power of t below `t_trunc`.
pub fn check_groenevelt_general(m: i64, e: i64, t_trunc: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<Vec<ResidualReport>> {
    if e < 0 {
        return Err(Error::BadParameter(format!("e={e} must be non-negative")));
    }
    let t2 = QuarterExp(trunc.0 + 2 * m * e);
    let bound = |n: i64| 2 * n * (n - 1) + 4 * (1 - m) * n;
    let low = (0..=m.max(0) + 1).map(bound).min().unwrap();
    let pre = tail_ratio(e + 1, QuarterExp(t2.0 - low))?;
    let mut out = Vec::new();
    for d in 0..t_trunc {
        let mut r = Residual::new(trunc, perturb);
        r.add(index_times_unit(table, m - d, e, -2 * e * d, trunc, |t| inv_q_factorial(d, t)));

        // [t^d] of (t)_inf^-1 1phi1[t; q^(e+1); q, q^(1-m)], with
        // (t)_inf^-1 = sum_i t^i / (q)_i and (t)_n = sum_j [n,j] (-1)^j q^C(j,2) t^j.
        let mut inner = Residual::new(t2, false);
        shell_sum(
            Domain::Naturals,
            &mut inner,
            |[n, _]| bound(n),
            |[n, _]| {
                let rel = QuarterExp(t2.0 - bound(n));
                let den = &pochhammer(q(e + 1), Order::Finite(n as u64), rel)? * &q_factorial(Order::Finite(n as u64), rel);
                let mut poly = QuarterSeries::zero(rel);
                for j in 0..=n.min(d) {
                    let c = (&q_binomial(n, j, rel) * &inv_q_factorial(d - j, rel)).mul_monomial(parity(j), QuarterExp(2 * j * (j - 1)));
                    poly += &c.truncated(rel);
                }
                Ok((&den.inverse()? * &poly).mul_monomial(parity(n), QuarterExp(bound(n))))
            },
        )?;
        let rhs = (&pre * &inner.into_sum()).shift(QuarterExp(-2 * m * e));
        r.sub(rhs);
        out.push(r.report("groenevelt_general", params(&[("m", m), ("e", e), ("t_degree", d)])));
    }
    Ok(out)
}

/// `I(m1,e1) I(m2,e2) = q^(-(m1 e1 + m2 e2)/2) (q^(e1+1))_inf (q^(e2+1))_inf / (q)_inf^2
///   sum_n (-1)^n q^(n(n+1)/2 - m2 n) / ((q^(e2+1))_n (q)_n)
///   2phi1[q^-n, q^(-n-e2); q^(e1+1); q, q^(n-m1+m2+e2+1)]`.
pub fn check_product_formula(m1: i64, m2: i64, e1: i64, e2: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    if e1 < 0 || e2 < 0 {
        return Err(Error::BadParameter(format!("e1={e1}, e2={e2} must be non-negative")));
    }
    let mut r = Residual::new(trunc, perturb);
    r.add(index_product(table, &[(m1, e1), (m2, e2)], 1, 0, trunc));

    let t2 = QuarterExp(trunc.0 + 2 * (m1 * e1 + m2 * e2));
    let c = m1 - m2;
    let outer = |n: i64| 2 * n * (n + 1) - 4 * m2 * n;
    // the k-th inner term has valuation k(k - n - c)
    let inner_min = |n: i64| (0..=n).map(|k| 4 * k * (k - n - c)).min().unwrap();
    let bound = |n: i64| outer(n) + inner_min(n);
    let mut sum = Residual::new(t2, false);
    shell_sum(
        Domain::Naturals,
        &mut sum,
        |[n, _]| bound(n),
        |[n, _]| {
            let rel = QuarterExp(t2.0 - outer(n));
            let arg = QuarterSeries::exact_monomial(1, QuarterExp::whole(n - m1 + m2 + e2 + 1));
            let inner = phi(&[q(-n), q(-n - e2)], &[q(e1 + 1)], QuarterExp::whole(1), &arg, rel)?;
            let dt = QuarterExp(rel.0 - inner_min(n));
            let den = &pochhammer(q(e2 + 1), Order::Finite(n as u64), dt)? * &q_factorial(Order::Finite(n as u64), dt);
            Ok((&den.inverse()? * &inner).mul_monomial(parity(n), QuarterExp(outer(n))))
        },
    )?;
    let low = (0..=(2 * c.abs() + 4 * m2.abs() + 4)).map(bound).min().unwrap().min(0);
    let pt = QuarterExp(t2.0 - low);
    let pre = &tail_ratio(e1 + 1, pt)? * &tail_ratio(e2 + 1, pt)?;
    r.sub((&pre * &sum.into_sum()).shift(QuarterExp(-2 * (m1 * e1 + m2 * e2))));
    Ok(r.report("product_formula", params(&[("m1", m1), ("m2", m2), ("e1", e1), ("e2", e2)])))
}

/// `I(k,0) = sum_(n>=0) q^(-(n+k)/2) I(k+n,1)`.
pub fn check_koelink_sum(k: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let mut r = Residual::new(trunc, perturb);
    r.add(table.get(k, 0, trunc));
    shell_sum(
        Domain::Naturals,
        &mut r,
        |[n, _]| product_bound(&[(k + n, 1)], -2 * (n + k)),
        |[n, _]| Ok(index_product(table, &[(k + n, 1)], -1, -2 * (n + k), trunc)),
    )?;
    Ok(r.report("koelink_sum", params(&[("k", k)])))
}

/// `q^(k/2) I(k,k) = sum_(n>=0) (-q^(-k))^n I(k-n-1,k+n)`.
pub fn check_koelink_diagonal(k: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let mut r = Residual::new(trunc, perturb);
    r.add(index_product(table, &[(k, k)], 1, 2 * k, trunc));
    shell_sum(
        Domain::Naturals,
        &mut r,
        |[n, _]| product_bound(&[(k - n - 1, k + n)], -4 * k * n),
        |[n, _]| Ok(index_product(table, &[(k - n - 1, k + n)], -parity(n), -4 * k * n, trunc)),
    )?;
    Ok(r.report("koelink_diagonal", params(&[("k", k)])))
}

/// `I(m-2 lambda, e) = q^(lambda e) sum_(k>=0) q^((1-m/2)k) (q^(2 lambda))_k / (q)_k I(m,e+k)`
/// for m < 1.
pub fn check_multiplication(m: i64, e: i64, lambda: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    if m >= 1 {
        return Err(Error::BadParameter(format!("m={m} must be below 1")));
    }
    if lambda < 1 {
        return Err(Error::BadParameter(format!("lambda={lambda} must be positive")));
    }
    let mut r = Residual::new(trunc, perturb);
    r.add(table.get(m - 2 * lambda, e, trunc));
    let shift = |k: i64| 4 * lambda * e + (4 - 2 * m) * k;
    // (q^(2 lambda))_k / (q)_k is the polynomial [k + 2 lambda - 1, k]
    shell_sum(
        Domain::Naturals,
        &mut r,
        |[k, _]| shift(k) + valuation_bound(m, e + k).0,
        |[k, _]| Ok(-index_times_unit(table, m, e + k, shift(k), trunc, |t| q_binomial(k + 2 * lambda - 1, k, t))),
    )?;
    Ok(r.report("multiplication", params(&[("m", m), ("e", e), ("lambda", lambda)])))
}

/// `q^((m1-m2)e/2) I(m1+m2,e)
///  = q^(-e) sum_(k,l) q^(((2+m1)l + (2-m2)k)/2) I(m1,l) I(m2,k) I(0,k+l-e)` for m1 + m2 != 0.
pub fn check_toeplitz(m1: i64, m2: i64, e: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    if m1 + m2 == 0 {
        return Err(Error::BadParameter("m1 + m2 must be nonzero".into()));
    }
    let mut r = Residual::new(trunc, perturb);
    r.add(index_product(table, &[(m1 + m2, e)], 1, 2 * (m1 - m2) * e, trunc));
    let factors = |k: i64, l: i64| [(m1, l), (m2, k), (0, k + l - e)];
    let shift = |k: i64, l: i64| -4 * e + 2 * ((2 + m1) * l + (2 - m2) * k);
    shell_sum(
        Domain::Plane,
        &mut r,
        |[k, l]| product_bound(&factors(k, l), shift(k, l)),
        |[k, l]| Ok(index_product(table, &factors(k, l), -1, shift(k, l), trunc)),
    )?;
    Ok(r.report("toeplitz", params(&[("m1", m1), ("m2", m2), ("e", e)])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_grids() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(10);
        for (m, e) in [(1, 0), (0, 2), (-2, 1)] {
            assert!(check_groenevelt_special(m, e, t, &table, false).unwrap().pass, "({m},{e})");
        }
        for (m, e) in [(1, 1), (-1, 0)] {
            for rep in check_groenevelt_general(m, e, 4, t, &table, false).unwrap() {
                assert!(rep.pass, "{rep:?}");
            }
        }
        for (m1, m2, e1, e2) in [(0, 0, 0, 0), (1, 0, 2, 1), (-1, 2, 0, 3)] {
            assert!(check_product_formula(m1, m2, e1, e2, t, &table, false).unwrap().pass);
        }
        for k in [0, 3, -2] {
            assert!(check_koelink_sum(k, t, &table, false).unwrap().pass, "{k}");
        }
        for k in [0, 1, 4] {
            assert!(check_koelink_diagonal(k, t, &table, false).unwrap().pass, "{k}");
        }
        for (m, l, e) in [(0, 1, 0), (-1, 2, 3), (-3, 1, -2)] {
            assert!(check_multiplication(m, e, l, t, &table, false).unwrap().pass);
        }
        for (m1, m2, e) in [(1, 1, 0), (2, -1, 1), (0, 3, -2)] {
            assert!(check_toeplitz(m1, m2, e, t, &table, false).unwrap().pass);
        }
    }
}
