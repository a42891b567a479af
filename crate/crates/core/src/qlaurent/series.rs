use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of q measured in quarters: `QuarterExp(k)` stands for `q^(k/4)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuarterExp(pub i64);

impl QuarterExp {
    pub const ZERO: QuarterExp = QuarterExp(0);

    /// `q^n` for a whole number n.
    pub const fn whole(n: i64) -> Self {
        QuarterExp(4 * n)
    }

    /// `q^(n/2)`.
    pub const fn halves(n: i64) -> Self {
        QuarterExp(2 * n)
    }

    pub const fn quarters(self) -> i64 {
        self.0
    }

    pub fn is_whole(self) -> bool {
        self.0 % 4 == 0
    }
}

impl Add for QuarterExp {
    type Output = QuarterExp;
    fn add(self, rhs: QuarterExp) -> QuarterExp {
        QuarterExp(self.0 + rhs.0)
    }
}

impl Sub for QuarterExp {
    type Output = QuarterExp;
    fn sub(self, rhs: QuarterExp) -> QuarterExp {
        QuarterExp(self.0 - rhs.0)
    }
}

impl Neg for QuarterExp {
    type Output = QuarterExp;
    fn neg(self) -> QuarterExp {
        QuarterExp(-self.0)
    }
}

impl Mul<i64> for QuarterExp {
    type Output = QuarterExp;
    fn mul(self, rhs: i64) -> QuarterExp {
        QuarterExp(self.0 * rhs)
    }
}

/// Offset used for values that are exact to all orders (monomials, polynomials).
/// Large enough to never limit a real computation, small enough that sums of a
/// handful of such truncations stay far from overflow.
pub(crate) const EXACT: i64 = 1 << 40;

/// A truncated Laurent series in `q^(1/4)` with integer coefficients.
///
/// Every exponent below `trunc` is known exactly; nothing is known at or above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarterSeries {
    terms: BTreeMap<i64, BigInt>,
    trunc: i64,
}

impl QuarterSeries {
    pub fn zero(trunc: QuarterExp) -> Self {
        QuarterSeries { terms: BTreeMap::new(), trunc: trunc.0 }
    }

    pub fn one(trunc: QuarterExp) -> Self {
        Self::monomial(1, QuarterExp::ZERO, trunc)
    }

    /// `c q^(k/4) + O(q^(trunc/4))`.
    pub fn monomial(c: impl Into<BigInt>, k: QuarterExp, trunc: QuarterExp) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if k.0 < trunc.0 && !c.is_zero() {
            terms.insert(k.0, c);
        }
        QuarterSeries { terms, trunc: trunc.0 }
    }

    /// A monomial known to all practical orders.
    pub fn exact_monomial(c: impl Into<BigInt>, k: QuarterExp) -> Self {
        Self::monomial(c, k, QuarterExp(k.0 + EXACT))
    }

    /// Builds a series from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I, trunc: QuarterExp) -> Self
    where
        I: IntoIterator<Item = (QuarterExp, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (k, c) in terms {
            if k.0 < trunc.0 {
                *map.entry(k.0).or_default() += c.into();
            }
        }
        map.retain(|_, c| !c.is_zero());
        QuarterSeries { terms: map, trunc: trunc.0 }
    }

    /// Dense coefficients `coeffs[i]` at exponent `base + step * i`.
    pub(crate) fn from_dense(base: i64, step: i64, coeffs: Vec<BigInt>, trunc: i64) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            let k = base + step * i as i64;
            if k >= trunc {
                break;
            }
            if !c.is_zero() {
                terms.insert(k, c);
            }
        }
        QuarterSeries { terms, trunc }
    }

    pub fn trunc(&self) -> QuarterExp {
        QuarterExp(self.trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<QuarterExp> {
        self.terms.keys().next().map(|&k| QuarterExp(k))
    }

    /// Valuation, or the truncation order for a series with no known terms.
    /// This is the quantity that governs products.
    pub fn valuation_or_trunc(&self) -> QuarterExp {
        self.valuation().unwrap_or(QuarterExp(self.trunc))
    }

    pub fn coeff(&self, k: QuarterExp) -> BigInt {
        self.terms.get(&k.0).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (QuarterExp, &BigInt)> + '_ {
        self.terms.iter().map(|(&k, c)| (QuarterExp(k), c))
    }

    /// Lowers the truncation order to `min(self.trunc, t)`.
    pub fn truncated(mut self, t: QuarterExp) -> Self {
        if t.0 < self.trunc {
            self.trunc = t.0;
            self.terms.split_off(&t.0);
        }
        self
    }

    /// A copy truncated at `min(self.trunc, t)`.
    pub fn truncated_to(&self, t: QuarterExp) -> Self {
        let trunc = self.trunc.min(t.0);
        QuarterSeries {
            terms: self.terms.range(..trunc).map(|(&k, c)| (k, c.clone())).collect(),
            trunc,
        }
    }

    /// Multiplies by `q^(k/4)`.
    pub fn shift(self, k: QuarterExp) -> Self {
        if k.0 == 0 {
            return self;
        }
        QuarterSeries {
            terms: self.terms.into_iter().map(|(e, c)| (e + k.0, c)).collect(),
            trunc: self.trunc + k.0,
        }
    }

    pub fn scale(mut self, c: &BigInt) -> Self {
        if c.is_zero() {
            self.terms.clear();
            return self;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
        self
    }

    pub fn scale_i64(self, c: i64) -> Self {
        match c {
            1 => self,
            -1 => -self,
            _ => self.scale(&BigInt::from(c)),
        }
    }

    /// `c q^(k/4) * self`, keeping the shifted truncation.
    pub fn mul_monomial(self, c: i64, k: QuarterExp) -> Self {
        self.scale_i64(c).shift(k)
    }

    /// True when the coefficients are equal on every exponent below both truncations.
    pub fn agrees_with(&self, other: &QuarterSeries) -> bool {
        let t = self.trunc.min(other.trunc);
        self.terms.range(..t).eq(other.terms.range(..t))
    }

    /// Only whole powers of q occur.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|k| k % 4 == 0)
    }

    pub fn pow(&self, n: u32) -> QuarterSeries {
        let mut acc = QuarterSeries::one(QuarterExp(EXACT));
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `1 / self`, for a series whose leading coefficient is ±1.
    ///
    /// With valuation v and truncation t the reciprocal is known below `t - 2v`.
    pub fn inverse(&self) -> Result<QuarterSeries> {
        let (&v, lead) = match self.terms.iter().next() {
            Some(x) => x,
            None => return Err(Error::NonUnitFactor("0".into())),
        };
        if !lead.abs().is_one() {
            return Err(Error::NonUnitFactor(lead.to_string()));
        }
        let lead_sign = lead.signum();
        let rel = self.trunc - v;
        let out_trunc = self.trunc - 2 * v;
        // Work with u = self / (lead q^v) = 1 + higher terms, known below rel.
        let unit: Vec<(i64, BigInt)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(&k, c)| (k - v, c * &lead_sign))
            .collect();
        let len = rel.max(0) as usize;
        let mut inv: Vec<BigInt> = vec![BigInt::zero(); len];
        if len > 0 {
            inv[0] = BigInt::one();
        }
        for i in 1..len {
            let mut acc = BigInt::zero();
            for (k, c) in &unit {
                let k = *k as usize;
                if k > i {
                    break;
                }
                acc -= c * &inv[i - k];
            }
            inv[i] = acc;
        }
        let out = QuarterSeries::from_dense(-v, 1, inv, out_trunc);
        Ok(out.scale(&lead_sign))
    }

    fn add_impl(&self, other: &QuarterSeries, negate: bool) -> QuarterSeries {
        let trunc = self.trunc.min(other.trunc);
        let mut terms: BTreeMap<i64, BigInt> =
            self.terms.range(..trunc).map(|(&k, c)| (k, c.clone())).collect();
        for (&k, c) in other.terms.range(..trunc) {
            let entry = terms.entry(k).or_default();
            if negate {
                *entry -= c;
            } else {
                *entry += c;
            }
            if entry.is_zero() {
                terms.remove(&k);
            }
        }
        QuarterSeries { terms, trunc }
    }

    fn mul_impl(&self, other: &QuarterSeries) -> QuarterSeries {
        let va = self.valuation_or_trunc().0;
        let vb = other.valuation_or_trunc().0;
        let trunc = (self.trunc + vb).min(other.trunc + va);
        if self.is_zero() || other.is_zero() {
            return QuarterSeries::zero(QuarterExp(trunc));
        }
        let a: Vec<(i64, &BigInt)> = self.terms.range(..trunc - vb).map(|(&k, c)| (k, c)).collect();
        let b: Vec<(i64, &BigInt)> = other.terms.range(..trunc - va).map(|(&k, c)| (k, c)).collect();
        let base = va + vb;
        let span = trunc - base;
        if span <= 0 {
            return QuarterSeries::zero(QuarterExp(trunc));
        }
        let pairs = a.len().saturating_mul(b.len());
        if let Some(out) = mul_small(&a, &b, base, span, trunc, pairs) {
            return out;
        }
        if (span as usize) > 4 * pairs + 64 {
            let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
            for &(ka, ca) in &a {
                for &(kb, cb) in &b {
                    if ka + kb >= trunc {
                        break;
                    }
                    *terms.entry(ka + kb).or_default() += ca * cb;
                }
            }
            terms.retain(|_, c| !c.is_zero());
            return QuarterSeries { terms, trunc };
        }
        let mut acc = vec![BigInt::zero(); span as usize];
        for &(ka, ca) in &a {
            for &(kb, cb) in &b {
                let k = ka + kb;
                if k >= trunc {
                    break;
                }
                acc[(k - base) as usize] += ca * cb;
            }
        }
        QuarterSeries::from_dense(base, 1, acc, trunc)
    }
}

/// Product with i128 accumulators when no coefficient can overflow.
fn mul_small(
    a: &[(i64, &BigInt)],
    b: &[(i64, &BigInt)],
    base: i64,
    span: i64,
    trunc: i64,
    pairs: usize,
) -> Option<QuarterSeries> {
    let bits = |xs: &[(i64, &BigInt)]| xs.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
    let budget = 126u64.checked_sub(64 - (pairs.max(1) as u64).leading_zeros() as u64)?;
    let (ba, bb) = (bits(a), bits(b));
    if ba + bb >= budget || ba > 63 || bb > 63 {
        return None;
    }
    let a: Vec<(i64, i128)> = a.iter().map(|(k, c)| (*k, c.to_i128().unwrap())).collect();
    let b: Vec<(i64, i128)> = b.iter().map(|(k, c)| (*k, c.to_i128().unwrap())).collect();
    if (span as usize) > 4 * pairs + 64 {
        let mut terms: BTreeMap<i64, i128> = BTreeMap::new();
        for &(ka, ca) in &a {
            for &(kb, cb) in &b {
                if ka + kb >= trunc {
                    break;
                }
                *terms.entry(ka + kb).or_default() += ca * cb;
            }
        }
        let terms = terms
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (k, BigInt::from(c)))
            .collect();
        return Some(QuarterSeries { terms, trunc });
    }
    let mut acc = vec![0i128; span as usize];
    for &(ka, ca) in &a {
        for &(kb, cb) in &b {
            let k = ka + kb;
            if k >= trunc {
                break;
            }
            acc[(k - base) as usize] += ca * cb;
        }
    }
    let terms = acc
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(i, c)| (base + i as i64, BigInt::from(c)))
        .collect();
    Some(QuarterSeries { terms, trunc })
}

impl Add for &QuarterSeries {
    type Output = QuarterSeries;
    fn add(self, rhs: &QuarterSeries) -> QuarterSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &QuarterSeries {
    type Output = QuarterSeries;
    fn sub(self, rhs: &QuarterSeries) -> QuarterSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &QuarterSeries {
    type Output = QuarterSeries;
    fn mul(self, rhs: &QuarterSeries) -> QuarterSeries {
        self.mul_impl(rhs)
    }
}

impl Add for QuarterSeries {
    type Output = QuarterSeries;
    fn add(self, rhs: QuarterSeries) -> QuarterSeries {
        &self + &rhs
    }
}

impl Sub for QuarterSeries {
    type Output = QuarterSeries;
    fn sub(self, rhs: QuarterSeries) -> QuarterSeries {
        &self - &rhs
    }
}

impl Mul for QuarterSeries {
    type Output = QuarterSeries;
    fn mul(self, rhs: QuarterSeries) -> QuarterSeries {
        &self * &rhs
    }
}

impl AddAssign<&QuarterSeries> for QuarterSeries {
    fn add_assign(&mut self, rhs: &QuarterSeries) {
        if rhs.trunc < self.trunc {
            self.trunc = rhs.trunc;
            self.terms.split_off(&rhs.trunc);
        }
        for (&k, c) in rhs.terms.range(..self.trunc) {
            let entry = self.terms.entry(k).or_default();
            *entry += c;
            if entry.is_zero() {
                self.terms.remove(&k);
            }
        }
    }
}

impl SubAssign<&QuarterSeries> for QuarterSeries {
    fn sub_assign(&mut self, rhs: &QuarterSeries) {
        *self += &(-rhs.clone());
    }
}

impl Neg for QuarterSeries {
    type Output = QuarterSeries;
    fn neg(mut self) -> QuarterSeries {
        for v in self.terms.values_mut() {
            *v = -std::mem::take(v);
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64], trunc: i64) -> QuarterSeries {
        QuarterSeries::from_terms(
            cs.iter().enumerate().map(|(i, &c)| (QuarterExp::whole(i as i64), c)),
            QuarterExp::whole(trunc),
        )
    }

    #[test]
    fn monomial_truncation() {
        let one = QuarterSeries::monomial(1, QuarterExp(0), QuarterExp(40));
        assert_eq!(one.coeff(QuarterExp(0)), BigInt::from(1));
        assert_eq!(one.len(), 1);
        let m = QuarterSeries::monomial(-2, QuarterExp(6), QuarterExp(40));
        assert_eq!(m.valuation(), Some(QuarterExp(6)));
        let above = QuarterSeries::monomial(1, QuarterExp(41), QuarterExp(40));
        assert!(above.is_zero());
        assert_eq!(above.trunc(), QuarterExp(40));
    }

    #[test]
    fn add_inverse_is_zero() {
        let a = QuarterSeries::one(QuarterExp(40));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn geometric_series() {
        let one_minus_q = poly(&[1, -1], 100);
        let geo = poly(&[1; 10], 10);
        let p = &one_minus_q * &geo;
        assert_eq!(p, QuarterSeries::one(QuarterExp::whole(10)));
    }

    #[test]
    fn mul_truncation_accounts_for_valuation() {
        // q^2 (1 + O(q^3)) * q^(-1) (1 + O(q^5)) is known below q^4.
        let a = QuarterSeries::monomial(1, QuarterExp::whole(2), QuarterExp::whole(5));
        let b = QuarterSeries::monomial(1, QuarterExp::whole(-1), QuarterExp::whole(4));
        let p = &a * &b;
        assert_eq!(p.trunc(), QuarterExp::whole(4));
        assert_eq!(p.coeff(QuarterExp::whole(1)), BigInt::from(1));
    }

    #[test]
    fn inverse_of_laurent_polynomial() {
        // 1/(1 - q^-1) = -q (1/(1 - q)) = -q - q^2 - ...
        let p = QuarterSeries::from_terms(
            [(QuarterExp::whole(-1), -1), (QuarterExp::ZERO, 1)],
            QuarterExp::whole(20),
        );
        let inv = p.inverse().unwrap();
        assert_eq!(inv.trunc(), QuarterExp::whole(22));
        for k in 1..22 {
            assert_eq!(inv.coeff(QuarterExp::whole(k)), BigInt::from(-1));
        }
        assert!((&p * &inv).agrees_with(&QuarterSeries::one(QuarterExp::whole(20))));
    }

    #[test]
    fn non_unit_inverse_fails() {
        let p = poly(&[2, 1], 10);
        assert!(matches!(p.inverse(), Err(Error::NonUnitFactor(_))));
    }

    #[test]
    fn big_coefficients_take_the_bigint_path() {
        let big = BigInt::from(1u64 << 62) * BigInt::from(1u64 << 62);
        let a = QuarterSeries::from_terms([(QuarterExp(0), big.clone()), (QuarterExp(4), BigInt::from(1))], QuarterExp(40));
        let sq = &a * &a;
        assert_eq!(sq.coeff(QuarterExp(0)), &big * &big);
        assert_eq!(sq.coeff(QuarterExp(4)), &big * 2);
    }

    #[test]
    fn sparse_exact_monomials() {
        let a = QuarterSeries::exact_monomial(3, QuarterExp(5));
        let b = QuarterSeries::exact_monomial(-1, QuarterExp(-2));
        let p = &a * &b;
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(QuarterExp(3)), BigInt::from(-3));
    }
}
