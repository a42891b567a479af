use num_bigint::BigInt;
use num_traits::Zero;

use super::series::{QuarterExp, QuarterSeries};
use crate::error::{Error, Result};

/// A parameter `c q^(k/4)` of a Pochhammer symbol or hypergeometric series.
/// `c = 0` is the zero parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: i64,
    pub exp: QuarterExp,
}

impl Monomial {
    pub const ZERO: Monomial = Monomial { coeff: 0, exp: QuarterExp(0) };

    pub const fn new(coeff: i64, exp: QuarterExp) -> Self {
        Monomial { coeff, exp }
    }

    /// `q^(k/4)`.
    pub const fn q_pow(exp: QuarterExp) -> Self {
        Monomial { coeff: 1, exp }
    }

    pub fn to_series(self) -> QuarterSeries {
        QuarterSeries::exact_monomial(self.coeff, self.exp)
    }

    /// Index i at which the factor `1 - self * q^(i b/4)` vanishes.
    fn vanishing_index(self, b: i64) -> Option<u64> {
        (self.coeff == 1 && self.exp.0 <= 0 && self.exp.0 % b == 0).then(|| (-self.exp.0 / b) as u64)
    }

    /// Valuation of `1 - self * q^(i b/4)`; `None` when the factor is zero.
    fn factor_valuation(self, i: u64, b: i64) -> Option<i64> {
        if self.coeff == 0 {
            return Some(0);
        }
        let x = self.exp.0 + i as i64 * b;
        match x {
            x if x < 0 => Some(x),
            0 if self.coeff == 1 => None,
            _ => Some(0),
        }
    }

    /// First index from which every factor exponent is non-negative.
    fn settles_at(self, b: i64) -> u64 {
        if self.coeff == 0 || self.exp.0 >= 0 {
            0
        } else {
            ((-self.exp.0 + b - 1) / b) as u64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

/// `1 - c q^(x/4)` known to `rel` quarters above its valuation.
fn binomial(c: i64, x: i64, rel: i64) -> QuarterSeries {
    let v = x.min(0);
    QuarterSeries::from_terms([(QuarterExp(0), 1), (QuarterExp(x), -c)], QuarterExp(v + rel))
}

/// `1 / (1 - c q^(x/4))` known to `rel` quarters above its valuation.
fn inverse_binomial(c: i64, x: i64, rel: i64) -> Result<QuarterSeries> {
    if c == 0 {
        return Ok(QuarterSeries::one(QuarterExp(rel)));
    }
    match x {
        0 => match 1 - c {
            1 => Ok(QuarterSeries::one(QuarterExp(rel))),
            -1 => Ok(QuarterSeries::monomial(-1, QuarterExp(0), QuarterExp(rel))),
            d => Err(Error::NonUnitFactor(d.to_string())),
        },
        x if x > 0 => {
            // sum_j c^j q^(j x)
            let terms = (0..).map(|j| j * x).take_while(|&e| e < rel).enumerate().map(|(j, e)| {
                (QuarterExp(e), num_traits::pow(BigInt::from(c), j))
            });
            Ok(QuarterSeries::from_terms(terms, QuarterExp(rel)))
        }
        x => {
            if c.abs() != 1 {
                return Err(Error::NonUnitFactor(c.to_string()));
            }
            // 1/(1 - c q^x) = -c q^(-x) / (1 - c q^(-x)) for c = ±1
            let y = -x;
            let terms = (0..).map(|j| y + j * y).take_while(|&e| e < y + rel).enumerate().map(|(j, e)| {
                (QuarterExp(e), -num_traits::pow(BigInt::from(c), j + 1))
            });
            Ok(QuarterSeries::from_terms(terms, QuarterExp(y + rel)))
        }
    }
}

/// Dense product of binomials `1 - c q^(x/4)`, truncated at `trunc`.
fn binomial_product(factors: &[(i64, i64)], trunc: i64) -> QuarterSeries {
    let factors: Vec<(i64, i64)> = factors.iter().copied().filter(|&(c, _)| c != 0).collect();
    let mut neg_left: i64 = factors.iter().map(|&(_, x)| (-x).max(0)).sum();
    let mut lo = 0i64;
    let mut coeffs = vec![BigInt::from(1)];
    for &(c, x) in &factors {
        neg_left -= (-x).max(0);
        let cap = trunc + neg_left;
        let new_lo = lo + x.min(0);
        let new_hi = (lo + coeffs.len() as i64 + x.max(0)).min(cap);
        if new_hi <= new_lo {
            return QuarterSeries::zero(QuarterExp(trunc));
        }
        let c = BigInt::from(c);
        let mut next = vec![BigInt::zero(); (new_hi - new_lo) as usize];
        for (i, a) in coeffs.iter().enumerate() {
            let e = lo + i as i64;
            if e < new_hi {
                next[(e - new_lo) as usize] += a;
            }
            if e + x < new_hi {
                next[(e + x - new_lo) as usize] -= &c * a;
            }
        }
        lo = new_lo;
        coeffs = next;
    }
    QuarterSeries::from_dense(lo, 1, coeffs, trunc)
}

/// `(a; q)_n` in base q.
pub fn pochhammer(a: Monomial, n: Order, trunc: QuarterExp) -> Result<QuarterSeries> {
    pochhammer_base(a, QuarterExp::whole(1), n, trunc)
}

/// `(a; q^(b/4))_n = prod_{i<n} (1 - a q^(i b/4))`.
pub fn pochhammer_base(a: Monomial, base: QuarterExp, n: Order, trunc: QuarterExp) -> Result<QuarterSeries> {
    let b = base.0;
    match n {
        Order::Finite(n) => {
            let factors: Vec<(i64, i64)> = (0..n as i64).map(|i| (a.coeff, a.exp.0 + i * b)).collect();
            Ok(binomial_product(&factors, trunc.0))
        }
        Order::Infinite => {
            if a.coeff == 0 {
                return Ok(QuarterSeries::one(trunc));
            }
            if a.exp.0 <= 0 || b <= 0 {
                return Err(Error::InfiniteProductNonConvergent { valuation: a.exp.0.min(b) });
            }
            let factors: Vec<(i64, i64)> =
                (0..).map(|i| a.exp.0 + i * b).take_while(|&x| x < trunc.0).map(|x| (a.coeff, x)).collect();
            Ok(binomial_product(&factors, trunc.0))
        }
    }
}

/// `(q; q)_n`, the most common special case.
pub fn q_factorial(n: Order, trunc: QuarterExp) -> QuarterSeries {
    pochhammer(Monomial::q_pow(QuarterExp::whole(1)), n, trunc).expect("(q;q)_n always converges")
}

/// Upper bound on the number of terms a non-terminating series may need.
const MAX_TERMS: u64 = 1 << 20;

/// The basic hypergeometric series
/// `r phi s [a; b; p, z] = sum_n (a)_n / ((b)_n (p;p)_n) ((-1)^n p^C(n,2))^(1+s-r) z^n`
/// with base `p = q^(base/4)`, truncated at `trunc`.
pub fn phi(
    upper: &[Monomial],
    lower: &[Monomial],
    base: QuarterExp,
    arg: &QuarterSeries,
    trunc: QuarterExp,
) -> Result<QuarterSeries> {
    let b = base.0;
    if b <= 0 {
        return Err(Error::NonTruncatingSum(format!("base q^({b}/4) has non-positive valuation")));
    }
    let t = trunc.0;
    let p = 1 + lower.len() as i64 - upper.len() as i64;
    let va = arg.valuation_or_trunc().0;

    // The last index with a possibly nonzero term, when an upper parameter is q^(-N b).
    let limit = upper.iter().filter_map(|a| a.vanishing_index(b)).min();
    for l in lower {
        if let Some(j) = l.vanishing_index(b) {
            if limit.is_none_or(|n| n > j) {
                return Err(Error::PoleInLowerParameter { index: j });
            }
        }
    }
    if limit.is_none() && (p < 0 || (p == 0 && va <= 0)) {
        return Err(Error::NonTruncatingSum(format!(
            "exponent growth {p}*C(n,2) with argument valuation {va} quarters"
        )));
    }
    let settled = upper.iter().chain(lower).map(|a| a.settles_at(b)).max().unwrap_or(0);

    // Exact valuations v[n] of the terms, and the index of the last term needed.
    let mut v = vec![0i64];
    let last = loop {
        let n = (v.len() - 1) as u64;
        if limit == Some(n) {
            break n;
        }
        let mut delta = p * b * n as i64 + va;
        let mut vanishes = false;
        for a in upper {
            match a.factor_valuation(n, b) {
                Some(x) => delta += x,
                None => vanishes = true,
            }
        }
        for l in lower {
            delta -= l.factor_valuation(n, b).expect("poles were excluded above");
        }
        let vn = v[n as usize];
        if vanishes {
            break n;
        }
        if p >= 0 && n >= settled && delta > 0 && vn >= t {
            if n == 0 {
                return Ok(QuarterSeries::zero(trunc));
            }
            break n - 1;
        }
        if n > MAX_TERMS {
            return Err(Error::NonTruncatingSum(format!("no certificate after {MAX_TERMS} terms")));
        }
        v.push(vn + delta);
    };
    let vmin = v[..=last as usize].iter().copied().min().unwrap_or(0);
    let rel = t - vmin;
    if rel <= 0 {
        return Ok(QuarterSeries::zero(trunc));
    }

    let sign = if p % 2 == 0 { 1 } else { -1 };
    let mut sum = QuarterSeries::zero(trunc);
    let mut term = QuarterSeries::one(QuarterExp(rel));
    for n in 0..=last {
        sum += &term;
        if n == last {
            break;
        }
        let mut next = term;
        for a in upper {
            next = &next * &binomial(a.coeff, a.exp.0 + n as i64 * b, rel);
        }
        for l in lower {
            next = &next * &inverse_binomial(l.coeff, l.exp.0 + n as i64 * b, rel)?;
        }
        next = &next * &inverse_binomial(1, (n as i64 + 1) * b, rel)?;
        next = &next.mul_monomial(sign, QuarterExp(p * b * n as i64)) * arg;
        term = next.truncated(QuarterExp(v[n as usize + 1] + rel));
    }
    Ok(sum)
}

/// `e_q(z) = sum z^n/(q)_n = 1/(z;q)_inf`.
pub fn q_exp_small(z: &QuarterSeries, trunc: QuarterExp) -> Result<QuarterSeries> {
    let v = z.valuation_or_trunc().0;
    if v <= 0 {
        return Err(Error::InfiniteProductNonConvergent { valuation: v });
    }
    phi(&[Monomial::ZERO], &[], QuarterExp::whole(1), z, trunc)
}

/// `E_q(z) = sum q^C(n,2) z^n/(q)_n = (-z;q)_inf`.
pub fn q_exp_big(z: &QuarterSeries, trunc: QuarterExp) -> Result<QuarterSeries> {
    phi(&[], &[], QuarterExp::whole(1), &(-z.clone()), trunc)
}
