//! Checks on the diagonal generating functions and the q-trigonometric functions.

use std::collections::BTreeMap;

use super::sum::{index_product, parity, product_bound, shell_sum, Domain, Residual};
use super::{params, ResidualReport};
use crate::error::Result;
use crate::qlaurent::{Monomial, QuarterExp, QuarterSeries, ZLaurentWindow};
use crate::tetindex::{
    generating_function_window, phi_r_diagonal_sum, phi_r_hypergeometric, phi_r_trig_product, q_cos_via, q_sin_via, tet_index, IndexTable, TrigRoute,
};

/// Compares two z-windows coefficientwise. The report carries the first
/// nonzero coefficient residual and its z-exponent.
fn window_report(id: &str, mut p: BTreeMap<String, i64>, lhs: &ZLaurentWindow, rhs: &ZLaurentWindow, trunc: QuarterExp, perturb: bool) -> ResidualReport {
    let mut pending = perturb;
    let mut first: Option<(i64, QuarterSeries)> = None;
    let mut terms = 0;
    for (e, a) in lhs.iter() {
        let b = rhs.coeff_of(e).expect("windows cover the same range");
        let mut r = Residual::new(trunc, pending);
        r.add(a.truncated_to(trunc));
        r.sub(b.truncated_to(trunc));
        pending = r.pending();
        terms += 1;
        let s = r.into_sum();
        if first.is_none() && !s.is_zero() {
            first = Some((e, s));
        }
    }
    let residual = match first {
        Some((e, s)) => {
            p.insert("z_exp".into(), e);
            s
        }
        None => QuarterSeries::zero(trunc),
    };
    ResidualReport::new(id, p, residual, terms)
}

/// `phi_r` from its `3phi3` form against the diagonal sum of indices.
pub fn check_phi_hypergeometric(r: i64, lo: i64, hi: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let d = phi_r_diagonal_sum(r, lo, hi, trunc, table);
    let h = phi_r_hypergeometric(r, lo, hi, trunc)?;
    Ok(window_report("phi_hypergeometric", params(&[("r", r), ("lo", lo), ("hi", hi)]), &d.window, &h.window, trunc, perturb))
}

/// `phi_r` from the q-sine/q-cosine products against the diagonal sum of indices.
pub fn check_phi_factorization(r: i64, lo: i64, hi: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let d = phi_r_diagonal_sum(r, lo, hi, trunc, table);
    let g = phi_r_trig_product(r, lo, hi, trunc)?;
    Ok(window_report("phi_factorization", params(&[("r", r), ("lo", lo), ("hi", hi)]), &d.window, &g.window, trunc, perturb))
}

/// The coefficients of the infinite-product generating function against I(m,e).
pub fn check_generating_function(m: i64, lo: i64, hi: i64, trunc: QuarterExp, perturb: bool) -> Result<ResidualReport> {
    let w = generating_function_window(m, lo, hi, trunc)?;
    let direct = ZLaurentWindow::new(lo, (lo..=hi).map(|e| tet_index(m, e, trunc)).collect());
    Ok(window_report("generating_function", params(&[("m", m), ("lo", lo), ("hi", hi)]), &direct, &w, trunc, perturb))
}

/// Sums of `I(nu-r, nu)` weighted by `(-sqrt q)^(±nu)` (r even) or `(-q)^(±nu)`
/// (r odd). The plus-sum is 1; the minus-sum is `q^(-r/2)` for even r and
/// `-q^(-r)` for odd r.
pub fn check_sum_identities(r: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<Vec<ResidualReport>> {
    let even = r.rem_euclid(2) == 0;
    let step = if even { 2 } else { 4 };
    let minus_rhs = if even {
        QuarterSeries::monomial(1, QuarterExp(-2 * r), trunc)
    } else {
        QuarterSeries::monomial(-1, QuarterExp(-4 * r), trunc)
    };
    let mut out = Vec::new();
    for (id, dir, rhs) in [("sum_identity_plus", 1, QuarterSeries::one(trunc)), ("sum_identity_minus", -1, minus_rhs)] {
        let mut acc = Residual::new(trunc, perturb);
        shell_sum(
            Domain::Integers,
            &mut acc,
            |[nu, _]| product_bound(&[(nu - r, nu)], dir * step * nu),
            |[nu, _]| Ok(index_product(table, &[(nu - r, nu)], parity(nu), dir * step * nu, trunc)),
        )?;
        acc.sub(rhs);
        out.push(acc.report(id, params(&[("r", r)])));
    }
    Ok(out)
}

/// The `1phi1` and `2phi3` forms of the q-sine and q-cosine against their
/// defining series, at `coeff * q^(exp/4)`.
pub fn check_trig_routes(coeff: i64, exp: i64, trunc: QuarterExp, perturb: bool) -> Result<Vec<ResidualReport>> {
    let arg = Monomial::new(coeff, QuarterExp(exp));
    let mut out = Vec::new();
    for (route, code) in [(TrigRoute::BaseQSquared, 1), (TrigRoute::BaseQ, 2)] {
        for (id, f) in [("trig_sine", q_sin_via as fn(Monomial, TrigRoute, QuarterExp) -> Result<QuarterSeries>), ("trig_cosine", q_cos_via)] {
            let mut r = Residual::new(trunc, perturb);
            r.add(f(arg, TrigRoute::Direct, trunc)?);
            r.sub(f(arg, route, trunc)?);
            out.push(r.report(id, params(&[("coeff", coeff), ("exp", exp), ("route", code)])));
        }
    }
    Ok(out)
}
