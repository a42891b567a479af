use super::sum::{index_product, parity, product_bound, shell_sum, Domain, Residual};
use super::{params, ResidualReport};
use crate::error::{Error, Result};
use crate::qlaurent::{QuarterExp, QuarterSeries};
use crate::tetindex::{orbit, tet_index, tet_index_via_bessel, IndexTable};

/// Which pair of three-term relations to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeTermFamily {
    /// Neighbours in one index: (m, e±1) or (m±1, e).
    Consecutive,
    /// Mixed neighbours (m±1, e) and (m, e±1).
    Adjacent,
}

/// `I(m,e)` against each of its five symmetry images, all from the defining sum.
pub fn check_symmetry(m: i64, e: i64, trunc: QuarterExp, perturb: bool) -> Vec<ResidualReport> {
    orbit(m, e)[1..]
        .iter()
        .enumerate()
        .map(|(i, img)| {
            let mut r = Residual::new(trunc, perturb);
            r.add(tet_index(m, e, trunc));
            r.sub(tet_index(img.m, img.e, trunc - img.shift).mul_monomial(img.sign, img.shift));
            r.report("symmetry", params(&[("m", m), ("e", e), ("image", i as i64 + 1)]))
        })
        .collect()
}

/// `c q^(k/4) I(m,e)` summed over `(c, k)`, as one term.
fn poly_times(table: &IndexTable, m: i64, e: i64, poly: &[(i64, i64)], trunc: QuarterExp) -> QuarterSeries {
    let mut s = QuarterSeries::zero(trunc);
    for &(c, k) in poly {
        s += &index_product(table, &[(m, e)], c, k, trunc);
    }
    s
}

/// Both rows of the chosen three-term family at (m,e).
///
/// Consecutive: `I(m,e+1) + (q^(e+m/2) - q^(-m/2) - q^(m/2)) I(m,e) + I(m,e-1) = 0`
/// and `I(m+1,e) + (q^(-m-e/2) - q^(-e/2) - q^(e/2)) I(m,e) + I(m-1,e) = 0`.
/// Adjacent: `q^(e/2) I(m±1,e) + q^(-m/2) I(m,e±1) - I(m,e) = 0`.
pub fn check_three_term(m: i64, e: i64, family: ThreeTermFamily, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Vec<ResidualReport> {
    let t = trunc;
    let rows: Vec<(&str, Vec<QuarterSeries>)> = match family {
        ThreeTermFamily::Consecutive => vec![
            (
                "three_term_consecutive_1",
                vec![
                    table.get(m, e + 1, t),
                    poly_times(table, m, e, &[(1, 4 * e + 2 * m), (-1, -2 * m), (-1, 2 * m)], t),
                    table.get(m, e - 1, t),
                ],
            ),
            (
                "three_term_consecutive_2",
                vec![
                    table.get(m + 1, e, t),
                    poly_times(table, m, e, &[(1, -4 * m - 2 * e), (-1, -2 * e), (-1, 2 * e)], t),
                    table.get(m - 1, e, t),
                ],
            ),
        ],
        ThreeTermFamily::Adjacent => [1, -1]
            .iter()
            .map(|&d| {
                let id = if d > 0 { "three_term_adjacent_1" } else { "three_term_adjacent_2" };
                let terms = vec![
                    index_product(table, &[(m + d, e)], 1, 2 * e, t),
                    index_product(table, &[(m, e + d)], 1, -2 * m, t),
                    -table.get(m, e, t),
                ];
                (id, terms)
            })
            .collect(),
    };
    rows.into_iter()
        .map(|(id, terms)| {
            let mut r = Residual::new(trunc, perturb);
            for x in terms {
                r.add(x);
            }
            r.report(id, params(&[("m", m), ("e", e)]))
        })
        .collect()
}

/// `sum_e q^e I(m,e) I(m,e+c) = delta_(c,0)`.
pub fn check_quadratic(m: i64, c: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let mut r = Residual::new(trunc, perturb);
    shell_sum(
        Domain::Integers,
        &mut r,
        |[e, _]| product_bound(&[(m, e), (m, e + c)], 4 * e),
        |[e, _]| Ok(index_product(table, &[(m, e), (m, e + c)], 1, 4 * e, trunc)),
    )?;
    if c == 0 {
        r.sub(QuarterSeries::one(trunc));
    }
    Ok(r.report("quadratic", params(&[("m", m), ("c", c)])))
}

/// `sum_e q^e I(m1,e+x1) I(m2,e+x2) I(m1+m2,e+x3)
///  = q^(-x3) I(m1-x2+x3, x1-x3) I(m2-x1+x3, x2-x3)`.
#[allow(clippy::too_many_arguments)]
pub fn check_pentagon(m1: i64, m2: i64, x1: i64, x2: i64, x3: i64, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<ResidualReport> {
    let mut r = Residual::new(trunc, perturb);
    let factors = |e: i64| [(m1, e + x1), (m2, e + x2), (m1 + m2, e + x3)];
    shell_sum(
        Domain::Integers,
        &mut r,
        |[e, _]| product_bound(&factors(e), 4 * e),
        |[e, _]| Ok(index_product(table, &factors(e), 1, 4 * e, trunc)),
    )?;
    r.sub(index_product(table, &[(m1 - x2 + x3, x1 - x3), (m2 - x1 + x3, x2 - x3)], 1, -4 * x3, trunc));
    Ok(r.report("pentagon", params(&[("m1", m1), ("m2", m2), ("x1", x1), ("x2", x2), ("x3", x3)])))
}

/// The defining sum against the q-Bessel form.
pub fn check_bessel_bridge(m: i64, e: i64, trunc: QuarterExp, perturb: bool) -> Result<ResidualReport> {
    let mut r = Residual::new(trunc, perturb);
    r.add(tet_index(m, e, trunc));
    r.sub(tet_index_via_bessel(m, e, trunc)?);
    Ok(r.report("bessel_bridge", params(&[("m", m), ("e", e)])))
}

/// Negative-order relation `I(m,nu) = (-1)^nu q^(-nu/2) I(m+nu,-nu)` for nu <= 0,
/// both sides from the defining sum.
pub fn check_bessel_negative_order(nu: i64, m: i64, trunc: QuarterExp, perturb: bool) -> Result<ResidualReport> {
    if nu > 0 {
        return Err(Error::BadParameter(format!("order nu={nu} must be non-positive")));
    }
    let mut r = Residual::new(trunc, perturb);
    r.add(tet_index(m, nu, trunc));
    let shift = QuarterExp(-2 * nu);
    r.sub(tet_index(m + nu, -nu, trunc - shift).mul_monomial(parity(nu), shift));
    Ok(r.report("bessel_negative_order", params(&[("nu", nu), ("m", m)])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(10);
        for rep in check_three_term(0, 0, ThreeTermFamily::Consecutive, t, &table, false) {
            assert!(rep.pass, "{rep:?}");
        }
        for rep in check_three_term(3, -2, ThreeTermFamily::Adjacent, t, &table, false) {
            assert!(rep.pass, "{rep:?}");
        }
        for (m, c) in [(0, 0), (2, 3), (-4, -1)] {
            assert!(check_quadratic(m, c, t, &table, false).unwrap().pass);
        }
        for p in [(0, 0, 0, 0, 0), (1, -1, 0, 1, 0), (2, 1, -1, 0, 1)] {
            assert!(check_pentagon(p.0, p.1, p.2, p.3, p.4, t, &table, false).unwrap().pass);
        }
    }

    #[test]
    fn perturbed_rows_fail() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(10);
        for rep in check_three_term(0, 0, ThreeTermFamily::Consecutive, t, &table, true) {
            assert!(!rep.pass);
        }
        assert!(!check_quadratic(2, 3, t, &table, true).unwrap().pass);
        assert!(check_symmetry(1, -2, t, true).iter().all(|r| !r.pass));
    }
}
