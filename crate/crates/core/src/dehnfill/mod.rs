//! Dehn filling of a one-cusped triangulation along a slope `p mu + q lambda`.
//!
//! The filled index is half of a bracket summed over boundary classes `gamma`
//! in K with pairing `gamma . alpha` in `{0, +2, -2}`:
//!
//! ```text
//! sum_{gamma.alpha = 0}  (-1)^|gamma| (q^(|gamma|/2) + q^(-|gamma|/2)) I^gamma
//! - sum_{gamma.alpha = ±2} (-1)^|gamma| I^gamma
//! ```
//!
//! where `|gamma|` is the gcd of the coefficients of `gamma`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlaurent::{QuarterExp, QuarterSeries};
use crate::tetindex::IndexTable;
use crate::triangulation::{
    index, lattice_basis, persistent, unfinished_status, without, BoundaryClass, GluingData, LatticeSumResult, SumStatus, DEFAULT_SHELL_BUDGET,
    DIVERGENCE_WINDOW,
};

pub const DEFAULT_GAMMA_BUDGET: u64 = 20;

/// A primitive slope `p mu + q lambda`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p.gcd(&q) != 1 {
            return Err(Error::SlopeNotPrimitive { p, q });
        }
        Ok(Slope { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn neg(&self) -> Slope {
        Slope { p: -self.p, q: -self.q }
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameter(format!("slope {s:?}: expected p/q"));
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        Slope::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?)
    }
}

/// Algebraic intersection of the class `[a, b]` (meaning `a mu + b lambda`) with a slope.
pub fn intersection(coeffs: &[i64], alpha: Slope) -> i64 {
    coeffs[0] * alpha.q - coeffs[1] * alpha.p
}

/// Number of parallel copies in the multicurve of a class: the gcd of its
/// coefficients, zero for the zero class.
pub fn component_count(coeffs: &[i64]) -> i64 {
    coeffs.iter().fold(0, |g, &c| g.gcd(&c))
}

/// Sign convention on the pairing-±2 sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FillConvention {
    /// `(-1)^|gamma|` on both sums. Reproduces the figure-eight filling table.
    #[default]
    Corrected,
    /// No sign on the pairing-±2 sum.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FillOptions {
    pub trunc: QuarterExp,
    pub gamma_budget: u64,
    pub shell_budget: u64,
    pub convention: FillConvention,
}

impl FillOptions {
    pub fn new(trunc: QuarterExp) -> Self {
        FillOptions { trunc, gamma_budget: DEFAULT_GAMMA_BUDGET, shell_budget: DEFAULT_SHELL_BUDGET, convention: FillConvention::default() }
    }
}

/// The classes summed over: `step` is the pairing-0 generator, `offset` a
/// pairing-(+2) class of minimal norm, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Families {
    pub step: Vec<i64>,
    pub offset: Option<Vec<i64>>,
}

fn combo(u: i64, a: &[i64], v: i64, b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| u * x + v * y).collect()
}

fn l1(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).sum()
}

pub fn families(g: &GluingData, alpha: Slope) -> Result<Families> {
    if g.peripheral().len() != 2 {
        return Err(Error::BadParameter(format!("filling needs one cusp, found {} peripheral rows", g.peripheral().len())));
    }
    let basis = lattice_basis(g.k_generators());
    if basis.len() != 2 {
        return Err(Error::BadParameter(format!("K has rank {}, expected 2", basis.len())));
    }
    let (h1, h2) = (&basis[0], &basis[1]);
    let (f1, f2) = (intersection(h1, alpha), intersection(h2, alpha));
    let eg = f1.extended_gcd(&f2);
    let d = eg.gcd;
    let step = combo(f2 / d, h1, -f1 / d, h2);
    let offset = (2 % d == 0).then(|| {
        let base = combo(2 / d * eg.x, h1, 2 / d * eg.y, h2);
        let at = |t: i64| l1(&combo(1, &base, t, &step));
        // l1 is convex along the line; walk to its leftmost minimum.
        let mut t = 0;
        while at(t - 1) <= at(t) {
            t -= 1;
        }
        while at(t + 1) < at(t) {
            t += 1;
        }
        combo(1, &base, t, &step)
    });
    Ok(Families { step, offset })
}

/// Classes visited at round `t`: the zero class and the two offsets at `t = 0`,
/// then each of them moved by `±t` steps.
fn round(f: &Families, t: i64) -> Vec<Vec<i64>> {
    let zero = vec![0; f.step.len()];
    let mut bases = vec![zero];
    if let Some(o) = &f.offset {
        bases.push(o.clone());
        bases.push(o.iter().map(|x| -x).collect());
    }
    if t == 0 {
        return bases;
    }
    bases.iter().flat_map(|b| [combo(1, b, t, &f.step), combo(1, b, -t, &f.step)]).collect()
}

/// One bracket term and the sub-index status it came from.
fn bracket_term(g: &GluingData, alpha: Slope, gamma: &[i64], opts: &FillOptions, table: &IndexTable) -> Result<(QuarterSeries, SumStatus)> {
    let c = component_count(gamma);
    let sign = if c.is_odd() { -1 } else { 1 };
    let omega = BoundaryClass::new(g, gamma.to_vec())?;
    let t = opts.trunc;
    match intersection(gamma, alpha) {
        0 => {
            let r = index(g, &omega, QuarterExp(t.0 + 2 * c), opts.shell_budget, table)?;
            let up = r.series.clone().shift(QuarterExp(2 * c));
            let down = r.series.shift(QuarterExp(-2 * c));
            let mut s = up.truncated(t);
            s += &down.truncated(t);
            Ok((s.scale_i64(sign), r.status))
        }
        2 | -2 => {
            let r = index(g, &omega, t, opts.shell_budget, table)?;
            let sign = match opts.convention {
                FillConvention::Corrected => -sign,
                FillConvention::AsPrinted => -1,
            };
            Ok((r.series.scale_i64(sign), r.status))
        }
        other => Err(Error::InvariantViolation { location: format!("class {gamma:?}"), msg: format!("pairing {other} outside the filling families") }),
    }
}

/// The filled index along `alpha`, below `opts.trunc`.
///
/// Rounds move outward along the pairing-0 generator. The sum is converged
/// once `DIVERGENCE_WINDOW` consecutive rounds add nothing below the
/// truncation. Otherwise coefficients touched in each of the last
/// `DIVERGENCE_WINDOW` rounds are reported as divergent and left out.
pub fn filled_index(g: &GluingData, alpha: Slope, opts: &FillOptions, table: &IndexTable) -> Result<LatticeSumResult> {
    let fam = families(g, alpha)?;
    let mut notes = Vec::new();
    if fam.offset.is_none() {
        notes.push("no class pairs to ±2 with the slope".to_string());
    }
    let mut bracket = QuarterSeries::zero(opts.trunc);
    let mut terms_included = 0;
    let mut quiet = 0;
    let mut recent: VecDeque<BTreeSet<i64>> = VecDeque::new();
    let mut converged_at = None;
    for t in 0..opts.gamma_budget {
        let classes = round(&fam, t as i64);
        let terms: Vec<(QuarterSeries, SumStatus)> = classes.par_iter().map(|gamma| bracket_term(g, alpha, gamma, opts, table)).collect::<Result<_>>()?;
        let mut hits = BTreeSet::new();
        for ((s, status), gamma) in terms.iter().zip(&classes) {
            if *status != SumStatus::Converged {
                notes.push(format!("index of {gamma:?} did not converge: {status:?}"));
            }
            if !s.is_zero() {
                terms_included += 1;
            }
            hits.extend(s.iter().map(|(k, _)| k.0));
            bracket += s;
        }
        recent.push_back(hits.clone());
        if recent.len() > DIVERGENCE_WINDOW {
            recent.pop_front();
        }
        quiet = if hits.is_empty() { quiet + 1 } else { 0 };
        if quiet >= DIVERGENCE_WINDOW {
            converged_at = Some(t + 1);
            break;
        }
    }
    let (status, divergent, rounds) = match converged_at {
        Some(n) => (SumStatus::Converged, vec![], n),
        None => {
            let d = persistent(&recent);
            (unfinished_status(&d), d, opts.gamma_budget)
        }
    };
    let bracket = without(&bracket, &divergent);
    let two = BigInt::from(2);
    let mut halves = Vec::new();
    for (k, c) in bracket.iter() {
        let (h, r) = c.div_rem(&two);
        if !r.is_zero() {
            return Err(Error::OddCoefficient { exp: k.0 });
        }
        halves.push((k, h));
    }
    let status = if status == SumStatus::Converged && notes.iter().any(|n| n.contains("did not converge")) { SumStatus::BudgetExhausted } else { status };
    Ok(LatticeSumResult { series: QuarterSeries::from_terms(halves, opts.trunc), status, shells_enumerated: rounds, terms_included, divergent, notes })
}

/// Filled indices for several slopes with a shared table.
pub fn fill_many(g: &GluingData, slopes: &[Slope], opts: &FillOptions, table: &IndexTable) -> Vec<(Slope, Result<LatticeSumResult>)> {
    slopes.iter().map(|&a| (a, filled_index(g, a, opts, table))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::figure_eight;

    #[test]
    fn slopes() {
        assert!(matches!(Slope::new(2, 4), Err(Error::SlopeNotPrimitive { .. })));
        assert!(Slope::new(1, 0).is_ok());
        assert!(Slope::new(0, 0).is_err());
        assert_eq!("-3/1".parse::<Slope>().unwrap(), Slope::new(-3, 1).unwrap());
        assert!("3".parse::<Slope>().is_err());
    }

    #[test]
    fn counts_and_pairings() {
        assert_eq!(component_count(&[0, 0]), 0);
        assert_eq!(component_count(&[4, -6]), 2);
        let a = Slope::new(5, 1).unwrap();
        assert_eq!(intersection(&[2, 0], a), 2);
        assert_eq!(intersection(&[0, 1], a), -5);
    }

    #[test]
    fn figure_eight_families() {
        let g = figure_eight();
        for (p, q) in [(1, 0), (0, 1), (5, 1), (4, 1), (-3, 2)] {
            let a = Slope::new(p, q).unwrap();
            let f = families(&g, a).unwrap();
            assert_eq!(intersection(&f.step, a), 0);
            assert!(g.in_k(&f.step));
            // gcd(2q, p) divides 2 for every primitive slope.
            let o = f.offset.unwrap();
            assert_eq!(intersection(&o, a), 2);
            assert!(g.in_k(&o));
        }
    }

    #[test]
    fn small_fillings() {
        let g = figure_eight();
        let table = IndexTable::new();
        let opts = FillOptions::new(QuarterExp::whole(4));
        let one = QuarterSeries::one(opts.trunc);
        for (p, q) in [(0, 1), (1, 1), (-1, 1)] {
            let r = filled_index(&g, Slope::new(p, q).unwrap(), &opts, &table).unwrap();
            assert!(r.is_converged(), "{p}/{q}: {r:?}");
            assert_eq!(r.series, one, "{p}/{q}");
        }
        let r = filled_index(&g, Slope::new(1, 0).unwrap(), &opts, &table).unwrap();
        assert!(r.is_converged());
        assert!(r.series.is_zero());
    }

    #[test]
    fn orientation_of_slope_does_not_matter() {
        let g = figure_eight();
        let table = IndexTable::new();
        let opts = FillOptions::new(QuarterExp::whole(3));
        let a = Slope::new(5, 1).unwrap();
        let x = filled_index(&g, a, &opts, &table).unwrap();
        let y = filled_index(&g, a.neg(), &opts, &table).unwrap();
        assert_eq!(x.series, y.series);
    }
}
