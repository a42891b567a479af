use std::collections::BTreeMap;

use rayon::prelude::*;

use super::ResidualReport;
use crate::error::{Error, Result};
use crate::qlaurent::{q_factorial, Order, QuarterExp, QuarterSeries};
use crate::tetindex::{valuation_bound, IndexTable};

/// Shells past this many without a certificate give up.
const MAX_SHELLS: i64 = 4096;

/// Running `LHS - RHS` of an identity, truncated at a fixed order.
///
/// When perturbed, the first nonzero term that arrives enters with the wrong
/// sign, which must make a correct checker fail.
pub(crate) struct Residual {
    sum: QuarterSeries,
    perturb: bool,
    terms: u64,
}

impl Residual {
    pub(crate) fn new(trunc: QuarterExp, perturb: bool) -> Self {
        Residual { sum: QuarterSeries::zero(trunc), perturb, terms: 0 }
    }

    pub(crate) fn trunc(&self) -> QuarterExp {
        self.sum.trunc()
    }

    pub(crate) fn add(&mut self, term: QuarterSeries) {
        debug_assert!(term.trunc() >= self.sum.trunc(), "term known to {:?} < {:?}", term.trunc(), self.sum.trunc());
        let term = term.truncated(self.sum.trunc());
        self.terms += 1;
        if self.perturb && !term.is_zero() {
            self.perturb = false;
            self.sum -= &term;
        } else {
            self.sum += &term;
        }
    }

    pub(crate) fn sub(&mut self, term: QuarterSeries) {
        self.add(-term);
    }

    /// True while the perturbation has not yet been applied.
    pub(crate) fn pending(&self) -> bool {
        self.perturb
    }

    pub(crate) fn into_sum(self) -> QuarterSeries {
        self.sum
    }

    pub(crate) fn report(self, id: &str, parameters: BTreeMap<String, i64>) -> ResidualReport {
        ResidualReport::new(id, parameters, self.sum, self.terms)
    }
}

/// Summation domains enumerated in sup-norm shells around the origin.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Domain {
    /// n = 0, 1, 2, ...
    Naturals,
    /// e = 0, ±1, ±2, ...
    Integers,
    /// (k, l) in Z^2
    Plane,
}

fn shell(domain: Domain, s: i64) -> Vec<[i64; 2]> {
    match domain {
        Domain::Naturals => vec![[s, 0]],
        Domain::Integers if s == 0 => vec![[0, 0]],
        Domain::Integers => vec![[-s, 0], [s, 0]],
        Domain::Plane if s == 0 => vec![[0, 0]],
        Domain::Plane => {
            let mut pts = Vec::with_capacity(8 * s as usize);
            for k in -s..=s {
                pts.push([k, -s]);
                pts.push([k, s]);
            }
            for l in 1 - s..s {
                pts.push([-s, l]);
                pts.push([s, l]);
            }
            pts
        }
    }
}

/// Adds `term(p)` to `acc` for every lattice point p of `domain` whose
/// valuation lower bound `bound(p)` lies below the accumulator's truncation.
///
/// Enumeration stops after two consecutive shells that are entirely
/// excluded by the bound while the shell minimum of the bound keeps
/// increasing. All bounds used here are quadratic with positive leading
/// part, so such shells close the tail.
pub(crate) fn shell_sum<B, F>(domain: Domain, acc: &mut Residual, bound: B, term: F) -> Result<()>
where
    B: Fn([i64; 2]) -> i64 + Sync,
    F: Fn([i64; 2]) -> Result<QuarterSeries> + Sync,
{
    let t = acc.trunc().0;
    let mut prev_min = i64::MIN;
    let mut quiet = 0;
    for s in 0..MAX_SHELLS {
        let pts = shell(domain, s);
        let bounds: Vec<i64> = pts.iter().map(|&p| bound(p)).collect();
        let live: Vec<[i64; 2]> = pts.iter().zip(&bounds).filter(|(_, &b)| b < t).map(|(&p, _)| p).collect();
        let terms: Vec<QuarterSeries> = live.par_iter().map(|&p| term(p)).collect::<Result<_>>()?;
        for x in terms {
            acc.add(x);
        }
        let shell_min = *bounds.iter().min().unwrap();
        if live.is_empty() && shell_min > prev_min {
            quiet += 1;
            if quiet == 2 {
                return Ok(());
            }
        } else {
            quiet = 0;
        }
        prev_min = shell_min;
    }
    Err(Error::RangeNotCertified { terms: acc.terms as usize })
}

/// Lower bound on the valuation of `q^shift * prod I(m_i, e_i)`.
pub(crate) fn product_bound(factors: &[(i64, i64)], shift: i64) -> i64 {
    shift + factors.iter().map(|&(m, e)| valuation_bound(m, e).0).sum::<i64>()
}

/// `sign * q^(shift/4) * prod I(m_i, e_i)` known below `trunc`; each factor is
/// computed only as far as its partners' valuation bounds require.
pub(crate) fn index_product(table: &IndexTable, factors: &[(i64, i64)], sign: i64, shift: i64, trunc: QuarterExp) -> QuarterSeries {
    let total = product_bound(factors, shift);
    if total >= trunc.0 {
        return QuarterSeries::zero(trunc);
    }
    let mut acc: Option<QuarterSeries> = None;
    for &(m, e) in factors {
        let own = valuation_bound(m, e).0;
        let need = QuarterExp(trunc.0 - total + own);
        let s = table.get(m, e, need);
        acc = Some(match acc {
            Some(a) => &a * &s,
            None => s,
        });
    }
    let p = acc.unwrap_or_else(|| QuarterSeries::exact_monomial(1, QuarterExp(0)).truncated(QuarterExp(trunc.0 - shift)));
    let p = p.mul_monomial(sign, QuarterExp(shift));
    debug_assert!(p.trunc() >= trunc);
    p.truncated(trunc)
}

/// The q-binomial coefficient `[n, k]_q` known below `trunc`.
pub(crate) fn q_binomial(n: i64, k: i64, trunc: QuarterExp) -> QuarterSeries {
    if k < 0 || k > n {
        return QuarterSeries::zero(trunc);
    }
    let rel = QuarterExp(trunc.0.max(1));
    let fact = |j: i64| q_factorial(Order::Finite(j as u64), rel);
    let den = (&fact(k) * &fact(n - k)).inverse().expect("(q)_k has unit constant term");
    (&fact(n) * &den).truncated(trunc)
}

/// `1 / (q)_n` known below `trunc`.
pub(crate) fn inv_q_factorial(n: i64, trunc: QuarterExp) -> QuarterSeries {
    q_factorial(Order::Finite(n as u64), QuarterExp(trunc.0.max(1)))
        .inverse()
        .expect("(q)_n has unit constant term")
        .truncated(trunc)
}

/// `sign` as +1 for even `k`, -1 for odd.
pub(crate) fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shells_cover_each_point_once() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..5 {
            for p in shell(Domain::Plane, s) {
                assert!(seen.insert(p));
                assert_eq!(p[0].abs().max(p[1].abs()), s);
            }
        }
        assert_eq!(seen.len(), 81);
    }

    #[test]
    fn q_binomial_small() {
        // [4,2] = 1 + q + 2q^2 + q^3 + q^4
        let b = q_binomial(4, 2, QuarterExp::whole(10));
        let expect = QuarterSeries::from_terms([0, 1, 2, 3, 4].map(|k| (QuarterExp::whole(k), if k == 2 { 2 } else { 1 })), QuarterExp::whole(10));
        assert_eq!(b, expect);
    }

    #[test]
    fn perturbation_hits_first_nonzero_term() {
        let t = QuarterExp::whole(3);
        let mut r = Residual::new(t, true);
        r.add(QuarterSeries::zero(t));
        r.add(QuarterSeries::one(t));
        r.add(QuarterSeries::one(t));
        assert!(r.into_sum().is_zero());
    }

    #[test]
    fn index_product_matches_plain_product() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(8);
        let direct = (&table.get(1, 0, QuarterExp::whole(20)) * &table.get(-2, 1, QuarterExp::whole(20))).mul_monomial(-1, QuarterExp(-3));
        assert_eq!(index_product(&table, &[(1, 0), (-2, 1)], -1, -3, t), direct.truncated(t));
    }
}
