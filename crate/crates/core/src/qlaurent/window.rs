use super::series::{QuarterExp, QuarterSeries};
use crate::error::{Error, Result};

/// A Laurent series in z whose coefficients are q-series, known on `[lo, hi]`.
///
/// Outside the window coefficients are unknown unless the matching
/// `zero_below` / `zero_above` flag records that they vanish (polynomials in z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZLaurentWindow {
    lo: i64,
    hi: i64,
    coeffs: Vec<QuarterSeries>,
    zero_below: bool,
    zero_above: bool,
}

impl ZLaurentWindow {
    /// A window with unknown tails. `coeffs[i]` is the coefficient of `z^(lo+i)`.
    pub fn new(lo: i64, coeffs: Vec<QuarterSeries>) -> Self {
        assert!(!coeffs.is_empty(), "empty z-window");
        let hi = lo + coeffs.len() as i64 - 1;
        ZLaurentWindow { lo, hi, coeffs, zero_below: false, zero_above: false }
    }

    /// A Laurent polynomial in z: everything outside `[lo, hi]` is zero.
    pub fn polynomial(lo: i64, coeffs: Vec<QuarterSeries>) -> Self {
        ZLaurentWindow { zero_below: true, zero_above: true, ..Self::new(lo, coeffs) }
    }

    /// A window whose tails are declared zero according to the flags.
    pub fn with_tails(lo: i64, coeffs: Vec<QuarterSeries>, zero_below: bool, zero_above: bool) -> Self {
        ZLaurentWindow { zero_below, zero_above, ..Self::new(lo, coeffs) }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn zero_below(&self) -> bool {
        self.zero_below
    }

    pub fn zero_above(&self) -> bool {
        self.zero_above
    }

    /// Coefficient of `z^e`, or `None` if it is unknown.
    pub fn coeff_of(&self, e: i64) -> Option<&QuarterSeries> {
        if (self.lo..=self.hi).contains(&e) {
            Some(&self.coeffs[(e - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &QuarterSeries)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, c)| (self.lo + i as i64, c))
    }

    /// Smallest truncation order over the window.
    pub fn trunc(&self) -> QuarterExp {
        self.coeffs.iter().map(|c| c.trunc()).min().expect("window is nonempty")
    }

    /// Restricts to `[lo, hi]`; fails if part of it is unknown.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<ZLaurentWindow> {
        let zero = QuarterSeries::zero(self.trunc());
        let mut coeffs = Vec::new();
        for e in lo..=hi {
            match self.coeff_of(e) {
                Some(c) => coeffs.push(c.clone()),
                None if (e < self.lo && self.zero_below) || (e > self.hi && self.zero_above) => {
                    coeffs.push(zero.clone())
                }
                None => return Err(Error::WindowExhausted { lo, hi }),
            }
        }
        Ok(ZLaurentWindow::new(lo, coeffs))
    }

    /// Multiplies by `z^k`.
    pub fn shift_z(mut self, k: i64) -> Self {
        self.lo += k;
        self.hi += k;
        self
    }

    /// Applies `f` to every known coefficient.
    pub fn map(self, f: impl Fn(QuarterSeries) -> QuarterSeries) -> Self {
        ZLaurentWindow { coeffs: self.coeffs.into_iter().map(f).collect(), ..self }
    }

    /// `S = (start, end)` of indices where a coefficient may be nonzero or unknown.
    fn support(&self) -> (Option<i64>, Option<i64>) {
        (self.zero_below.then_some(self.lo), self.zero_above.then_some(self.hi))
    }

    fn add_impl(&self, other: &ZLaurentWindow, negate: bool) -> Result<ZLaurentWindow> {
        let lo = if self.zero_below && other.zero_below { self.lo.min(other.lo) } else { self.lo.max(other.lo) };
        let hi = if self.zero_above && other.zero_above { self.hi.max(other.hi) } else { self.hi.min(other.hi) };
        let a = self.restrict(lo, hi)?;
        let b = other.restrict(lo, hi)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| if negate { x - y } else { x + y })
            .collect();
        Ok(ZLaurentWindow {
            lo,
            hi,
            coeffs,
            zero_below: self.zero_below && other.zero_below,
            zero_above: self.zero_above && other.zero_above,
        })
    }

    pub fn add(&self, other: &ZLaurentWindow) -> Result<ZLaurentWindow> {
        self.add_impl(other, false)
    }

    pub fn sub(&self, other: &ZLaurentWindow) -> Result<ZLaurentWindow> {
        self.add_impl(other, true)
    }

    /// Product of two windows.
    ///
    /// The coefficient of `z^e` is exact when every index pair (i, e-i) that may
    /// carry a nonzero or unknown value lies inside both windows. The result
    /// window is the set of such e; `WindowExhausted` if it is empty.
    pub fn mul(&self, other: &ZLaurentWindow) -> Result<ZLaurentWindow> {
        let (a1, a2) = self.support();
        let (b1, b2) = other.support();
        let exact_at = |e: i64| -> bool {
            // pairs: i in S_a and e - i in S_b
            let lo = match (a1, b2) {
                (Some(x), Some(y)) => Some(x.max(e - y)),
                (Some(x), None) => Some(x),
                (None, Some(y)) => Some(e - y),
                (None, None) => None,
            };
            let hi = match (a2, b1) {
                (Some(x), Some(y)) => Some(x.min(e - y)),
                (Some(x), None) => Some(x),
                (None, Some(y)) => Some(e - y),
                (None, None) => None,
            };
            match (lo, hi) {
                (Some(l), Some(h)) if l > h => true,
                (Some(l), Some(h)) => {
                    l >= self.lo && h <= self.hi && e - h >= other.lo && e - l <= other.hi
                }
                _ => false,
            }
        };
        let range: Vec<i64> = (self.lo + other.lo..=self.hi + other.hi).filter(|&e| exact_at(e)).collect();
        let (Some(&lo), Some(&hi)) = (range.first(), range.last()) else {
            return Err(Error::WindowExhausted { lo: self.lo + other.lo, hi: self.hi + other.hi });
        };
        debug_assert_eq!(range.len() as i64, hi - lo + 1, "exact region is an interval");
        let trunc = self.trunc().min(other.trunc());
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for e in lo..=hi {
            let mut acc: Option<QuarterSeries> = None;
            for (i, x) in self.iter() {
                if let Some(y) = other.coeff_of(e - i) {
                    let prod = x * y;
                    acc = Some(match acc {
                        Some(a) => a + prod,
                        None => prod,
                    });
                }
            }
            let acc = acc.unwrap_or_else(|| QuarterSeries::zero(trunc));
            coeffs.push(acc);
        }
        let zero_below = self.zero_below && other.zero_below && lo == self.lo + other.lo;
        let zero_above = self.zero_above && other.zero_above && hi == self.hi + other.hi;
        Ok(ZLaurentWindow { lo, hi, coeffs, zero_below, zero_above })
    }

    /// Multiplies every coefficient by a q-series.
    pub fn scale(self, s: &QuarterSeries) -> Self {
        self.map(|c| &c * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> QuarterSeries {
        QuarterSeries::monomial(n, QuarterExp(0), QuarterExp(40))
    }

    #[test]
    fn polynomial_product_is_exact_everywhere() {
        // (1 + z)(1 - z) = 1 - z^2
        let a = ZLaurentWindow::polynomial(0, vec![c(1), c(1)]);
        let b = ZLaurentWindow::polynomial(0, vec![c(1), c(-1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!((p.lo(), p.hi()), (0, 2));
        assert!(p.zero_below() && p.zero_above());
        assert!(p.coeff_of(1).unwrap().is_zero());
        assert_eq!(p.coeff_of(2).unwrap(), &c(-1));
        assert!(p.restrict(-3, 5).is_ok());
    }

    #[test]
    fn unknown_tails_shrink_the_window() {
        // power series known on [0, 5] times a polynomial on [-2, 0]
        let a = ZLaurentWindow::with_tails(0, (0..6).map(c).collect(), true, false);
        let b = ZLaurentWindow::polynomial(-2, vec![c(1), c(0), c(1)]);
        let p = a.mul(&b).unwrap();
        assert_eq!((p.lo(), p.hi()), (-2, 3));
        assert!(p.zero_below() && !p.zero_above());
        // coefficient of z^1: a_3 + a_1
        assert_eq!(p.coeff_of(1).unwrap(), &c(4));
        assert!(matches!(p.restrict(-2, 4), Err(Error::WindowExhausted { .. })));
    }

    #[test]
    fn unknown_on_both_sides_exhausts() {
        let a = ZLaurentWindow::new(0, vec![c(1)]);
        assert!(matches!(a.mul(&a), Err(Error::WindowExhausted { .. })));
    }
}
