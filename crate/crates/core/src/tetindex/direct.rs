use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::qlaurent::{QuarterExp, QuarterSeries};

/// Exponent of the n-th summand of I(m,e), in quarters:
/// `4 * (n(n+1)/2 - (n + e/2) m)`.
fn summand_exponent(n: i64, m: i64, e: i64) -> i64 {
    2 * n * (n + 1) - 4 * n * m - 2 * e * m
}

/// Divides the dense power series `c` (in integer powers of q) by `1 - q^j`.
fn divide_by_one_minus(c: &mut [BigInt], j: usize) {
    for k in j..c.len() {
        let (lo, hi) = c.split_at_mut(k);
        hi[0] += &lo[k - j];
    }
}

/// The tetrahedral index
/// `I(m,e) = sum_{n >= e_+} (-1)^n q^(n(n+1)/2 - (n+e/2) m) / ((q)_n (q)_{n+e})`
/// truncated at `trunc`.
pub fn tet_index(m: i64, e: i64, trunc: QuarterExp) -> QuarterSeries {
    let t = trunc.0;
    let start = (-e).max(0);
    // Past max(start, m) the summand exponent is strictly increasing, so the
    // first index there at or above trunc closes the sum.
    let mut stop = start;
    while stop < m || summand_exponent(stop, m, e) < t {
        stop += 1;
    }
    debug_assert!(summand_exponent(stop + 1, m, e) >= t && summand_exponent(stop + 2, m, e) >= t);
    if stop == start {
        return QuarterSeries::zero(trunc);
    }
    let f_min = (start..stop).map(|n| summand_exponent(n, m, e)).min().unwrap();
    let degrees = (t - f_min + 3) / 4;
    if degrees <= 0 {
        return QuarterSeries::zero(trunc);
    }
    let d = degrees as usize;

    // s = 1 / ((q)_n (q)_{n+e}) as a dense series in q.
    let mut s = vec![BigInt::zero(); d];
    s[0] = BigInt::one();
    for j in 1..=start {
        divide_by_one_minus(&mut s, j as usize);
    }
    for j in 1..=start + e {
        divide_by_one_minus(&mut s, j as usize);
    }
    let mut acc = vec![BigInt::zero(); d];
    for n in start..stop {
        let offset = ((summand_exponent(n, m, e) - f_min) / 4) as usize;
        if offset < d {
            let negative = n % 2 != 0;
            for (k, c) in s[..d - offset].iter().enumerate() {
                if negative {
                    acc[offset + k] -= c;
                } else {
                    acc[offset + k] += c;
                }
            }
        }
        divide_by_one_minus(&mut s, (n + 1) as usize);
        if n + 1 + e > 0 {
            divide_by_one_minus(&mut s, (n + 1 + e) as usize);
        }
    }
    QuarterSeries::from_dense(f_min, 4, acc, t)
}

/// One image of (m,e) under the symmetry group of the index:
/// `I(m,e) = sign * q^(shift/4) * I(m', e')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitElement {
    pub m: i64,
    pub e: i64,
    pub shift: QuarterExp,
    pub sign: i64,
}

fn parity_sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The six-element orbit of (m,e), starting with (m,e) itself.
pub fn orbit(m: i64, e: i64) -> [OrbitElement; 6] {
    let el = |m, e, shift, sign| OrbitElement { m, e, shift: QuarterExp(shift), sign };
    [
        el(m, e, 0, 1),
        el(-e, -m, 0, 1),
        el(e, -e - m, -2 * e, parity_sign(e)),
        el(e + m, -e, -2 * e, parity_sign(e)),
        el(-e - m, m, 2 * m, parity_sign(m)),
        el(-m, e + m, 2 * m, parity_sign(m)),
    ]
}

/// Lowest summand exponent of the defining sum; a lower bound on the valuation.
pub(crate) fn raw_bound(m: i64, e: i64) -> i64 {
    let start = (-e).max(0);
    summand_exponent(start.max(m), m, e)
}

/// The orbit element whose defining sum starts highest, i.e. the cheapest and
/// best-bounded way to compute I(m,e). Ties go to the smallest (m', e').
pub fn normalize(m: i64, e: i64) -> OrbitElement {
    *orbit(m, e)
        .iter()
        .max_by(|a, b| {
            let ka = a.shift.0 + raw_bound(a.m, a.e);
            let kb = b.shift.0 + raw_bound(b.m, b.e);
            ka.cmp(&kb).then((b.m, b.e).cmp(&(a.m, a.e)))
        })
        .unwrap()
}

/// Certified lower bound on the q-valuation of I(m,e).
///
/// Each orbit element gives the bound `shift + min_n exponent(n)`; the
/// maximum over the orbit grows quadratically in every direction.
pub fn valuation_bound(m: i64, e: i64) -> QuarterExp {
    let rep = normalize(m, e);
    QuarterExp(rep.shift.0 + raw_bound(rep.m, rep.e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64) -> QuarterExp {
        QuarterExp::whole(n)
    }

    #[test]
    fn origin_has_constant_term_one() {
        let s = tet_index(0, 0, w(10));
        assert_eq!(s.valuation(), Some(QuarterExp(0)));
        assert_eq!(s.coeff(QuarterExp(0)), BigInt::one());
    }

    #[test]
    fn first_symmetry_example() {
        assert_eq!(tet_index(1, 0, w(10)), tet_index(0, -1, w(10)));
    }

    #[test]
    fn orbit_is_closed() {
        for (m, e) in [(3, -2), (0, 0), (-4, 7)] {
            let o = orbit(m, e);
            for x in o {
                let mut a: Vec<_> = orbit(x.m, x.e).iter().map(|y| (y.m, y.e)).collect();
                let mut b: Vec<_> = o.iter().map(|y| (y.m, y.e)).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn symmetry_images_agree() {
        let t = w(12);
        for (m, e) in [(2, 3), (-3, 1), (4, -2), (-1, -5)] {
            let base = tet_index(m, e, t);
            for x in orbit(m, e) {
                let other = tet_index(x.m, x.e, t - x.shift).shift(x.shift).scale_i64(x.sign);
                assert!(base.agrees_with(&other), "({m},{e}) vs ({},{})", x.m, x.e);
            }
        }
    }

    #[test]
    fn bound_is_below_valuation_on_a_grid() {
        for m in -6..=6 {
            for e in -6..=6 {
                let b = valuation_bound(m, e);
                let s = tet_index(m, e, QuarterExp(b.0 + 40));
                assert!(s.valuation_or_trunc() >= b, "({m},{e})");
            }
        }
    }
}
