use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gluing::{GluingData, Triple};
use crate::error::{Error, Result};
use crate::qlaurent::{QuarterExp, QuarterSeries};
use crate::relations::sum::{index_product, parity, product_bound, shell_sum, Domain, Residual};
use crate::tetindex::IndexTable;

/// Empty shells needed, on top of a growing bound, before a sum is called converged.
const MARGIN: u32 = 2;
/// Consecutive shells that must all touch a coefficient for it to count as divergent.
pub const DIVERGENCE_WINDOW: usize = 4;
pub const DEFAULT_SHELL_BUDGET: u64 = 64;

/// A peripheral class, as coefficients on the peripheral curves, known to lie in K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundaryClass {
    coeffs: Vec<i64>,
}

impl BoundaryClass {
    pub fn new(g: &GluingData, coeffs: Vec<i64>) -> Result<Self> {
        if !g.in_k(&coeffs) {
            return Err(Error::OmegaOutsideK(coeffs));
        }
        Ok(BoundaryClass { coeffs })
    }

    pub fn zero(g: &GluingData) -> Self {
        BoundaryClass { coeffs: vec![0; g.peripheral().len()] }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &BoundaryClass) -> BoundaryClass {
        BoundaryClass { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumStatus {
    Converged,
    /// The lowest coefficient that kept receiving contributions.
    DivergentAt(QuarterExp),
    BudgetExhausted,
}

/// A lattice sum with its convergence diagnostics. Coefficients judged
/// divergent are left out of `series` and listed in `divergent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSumResult {
    pub series: QuarterSeries,
    pub status: SumStatus,
    pub shells_enumerated: u64,
    pub terms_included: u64,
    #[serde(default)]
    pub divergent: Vec<QuarterExp>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LatticeSumResult {
    pub fn is_converged(&self) -> bool {
        self.status == SumStatus::Converged
    }
}

/// Quad weights `(a_j, b_j, c_j)` for edge weights `k` (one per edge, zero on
/// excluded edges) and boundary class `omega`.
pub fn quad_weights(g: &GluingData, k: &[i64], omega: &BoundaryClass) -> Result<Vec<Triple>> {
    if k.len() != g.edges().len() {
        return Err(Error::BadParameter(format!("{} edge weights for {} edges", k.len(), g.edges().len())));
    }
    for (i, &w) in k.iter().enumerate() {
        if w != 0 && g.is_excluded(i) {
            return Err(Error::ExcludedEdgeNonzero(g.edges()[i].id.clone()));
        }
    }
    let mut acc = vec![[Ratio::from_integer(0i64); 3]; g.n_tet()];
    for (row, &w) in g.edges().iter().zip(k) {
        for (slot, t) in acc.iter_mut().zip(&row.triples) {
            for c in 0..3 {
                slot[c] += Ratio::from_integer(w * t[c]);
            }
        }
    }
    for (row, &w) in g.peripheral().iter().zip(omega.coeffs()) {
        for (slot, t) in acc.iter_mut().zip(&row.triples) {
            for c in 0..3 {
                slot[c] += row.scale * w * t[c];
            }
        }
    }
    acc.iter()
        .enumerate()
        .map(|(j, r)| {
            let mut out = [0; 3];
            for c in 0..3 {
                if !r[c].is_integer() {
                    return Err(Error::InvariantViolation {
                        location: format!("tetrahedron {} quad {}", j + 1, ["a", "b", "c"][c]),
                        msg: format!("non-integer weight {}", r[c]),
                    });
                }
                out[c] = r[c].to_integer();
            }
            Ok(out)
        })
        .collect()
}

/// Lattice points of Z^d with sup-norm exactly s, in lexicographic order.
fn cube_shell(d: usize, s: i64) -> Vec<Vec<i64>> {
    if d == 0 {
        return if s == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut p = vec![-s; d];
    loop {
        if p.iter().any(|x| x.abs() == s) {
            out.push(p.clone());
        }
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if p[i] < s {
                p[i] += 1;
                break;
            }
            p[i] = -s;
        }
    }
}

/// Index factors `(m, e)`, sign and shift in quarters.
type Summand = (Vec<(i64, i64)>, i64, i64);

/// One summand: `(factors, sign, shift)` for
/// `q^(sum k) prod_j (-q^(1/2))^(-b_j) I(b_j - c_j, a_j - b_j)`.
fn summand(g: &GluingData, k: &[i64], omega: &BoundaryClass) -> Result<Summand> {
    let w = quad_weights(g, k, omega)?;
    let factors = w.iter().map(|&[a, b, c]| (b - c, a - b)).collect();
    let bsum: i64 = w.iter().map(|t| t[1]).sum();
    Ok((factors, parity(bsum), 4 * k.iter().sum::<i64>() - 2 * bsum))
}

/// The 3D index `I^omega` below `trunc`, summed over edge weights in sup-norm
/// shells of the non-excluded edges.
///
/// A summand is skipped when its valuation bound clears `trunc`. Once the
/// shell minimum of the bound rises, coefficients below it are declared final
/// and any later change to them is an error. The sum is converged after
/// `MARGIN` consecutive empty shells with rising bound.
pub fn index(g: &GluingData, omega: &BoundaryClass, trunc: QuarterExp, shell_budget: u64, table: &IndexTable) -> Result<LatticeSumResult> {
    if !g.in_k(omega.coeffs()) {
        return Err(Error::OmegaOutsideK(omega.coeffs().to_vec()));
    }
    let free: Vec<usize> = (0..g.edges().len()).filter(|&i| !g.is_excluded(i)).collect();
    let embed = |p: &[i64]| {
        let mut k = vec![0; g.edges().len()];
        for (&i, &x) in free.iter().zip(p) {
            k[i] = x;
        }
        k
    };
    let t = trunc.0;
    let mut series = QuarterSeries::zero(trunc);
    let mut terms_included = 0;
    let mut final_below = i64::MIN;
    let mut prev_min = i64::MIN;
    let mut quiet = 0;
    let mut recent: VecDeque<BTreeSet<i64>> = VecDeque::new();
    for s in 0..shell_budget {
        let shell: Vec<Vec<i64>> = cube_shell(free.len(), s as i64);
        let data: Vec<(Summand, i64)> = shell
            .iter()
            .map(|p| {
                let s = summand(g, &embed(p), omega)?;
                let b = product_bound(&s.0, s.2);
                Ok((s, b))
            })
            .collect::<Result<_>>()?;
        let shell_min = data.iter().map(|d| d.1).min().unwrap_or(i64::MAX);
        let terms: Vec<QuarterSeries> = data
            .par_iter()
            .filter(|d| d.1 < t)
            .map(|((f, sign, shift), _)| index_product(table, f, *sign, *shift, trunc))
            .collect();
        let mut hits = BTreeSet::new();
        for x in &terms {
            if let Some(v) = x.valuation() {
                if v.0 < final_below {
                    return Err(Error::ShellMonotonicity { shell: s, exp: v.0 });
                }
            }
            hits.extend(x.iter().map(|(k, _)| k.0));
            series += x;
        }
        terms_included += terms.len() as u64;
        recent.push_back(hits);
        if recent.len() > DIVERGENCE_WINDOW {
            recent.pop_front();
        }
        let rising = s > 0 && shell_min > prev_min;
        if rising {
            final_below = final_below.max(shell_min.min(t));
        }
        if terms.is_empty() && rising {
            quiet += 1;
            if quiet >= MARGIN {
                return Ok(LatticeSumResult { series, status: SumStatus::Converged, shells_enumerated: s + 1, terms_included, divergent: vec![], notes: vec![] });
            }
        } else {
            quiet = 0;
        }
        prev_min = shell_min;
    }
    let divergent = persistent(&recent);
    let status = unfinished_status(&divergent);
    let series = without(&series, &divergent);
    Ok(LatticeSumResult { series, status, shells_enumerated: shell_budget, terms_included, divergent, notes: vec![] })
}

/// Exponents touched in every one of the last `DIVERGENCE_WINDOW` rounds.
pub(crate) fn persistent(recent: &VecDeque<BTreeSet<i64>>) -> Vec<QuarterExp> {
    if recent.len() < DIVERGENCE_WINDOW {
        return vec![];
    }
    let mut common = recent[0].clone();
    for h in recent.iter().skip(1) {
        common = common.intersection(h).copied().collect();
    }
    common.into_iter().map(QuarterExp).collect()
}

pub(crate) fn unfinished_status(divergent: &[QuarterExp]) -> SumStatus {
    match divergent.first() {
        Some(&e) => SumStatus::DivergentAt(e),
        None => SumStatus::BudgetExhausted,
    }
}

pub(crate) fn without(series: &QuarterSeries, drop: &[QuarterExp]) -> QuarterSeries {
    QuarterSeries::from_terms(series.iter().filter(|(k, _)| !drop.contains(k)).map(|(k, c)| (k, c.clone())), series.trunc())
}

/// The figure-eight index `sum_k I(k-x, k) I(k+y, k-x+y)` for the boundary
/// class `2x mu + y lambda`, as a one-dimensional sum.
pub fn fig8_closed_form(x: i64, y: i64, trunc: QuarterExp, table: &IndexTable) -> Result<QuarterSeries> {
    let mut acc = Residual::new(trunc, false);
    let factors = |k: i64| [(k - x, k), (k + y, k - x + y)];
    shell_sum(Domain::Integers, &mut acc, |[k, _]| product_bound(&factors(k), 0), |[k, _]| Ok(index_product(table, &factors(k), 1, 0, trunc)))?;
    Ok(acc.into_sum())
}

#[cfg(test)]
mod tests {
    use super::super::figure_eight;
    use super::*;

    #[test]
    fn cube_shells() {
        assert_eq!(cube_shell(1, 0), vec![vec![0]]);
        assert_eq!(cube_shell(1, 2), vec![vec![-2], vec![2]]);
        assert_eq!(cube_shell(2, 1).len(), 8);
        assert_eq!(cube_shell(3, 2).len(), 125 - 27);
    }

    #[test]
    fn figure_eight_weights() {
        let g = figure_eight();
        let zero = BoundaryClass::zero(&g);
        assert_eq!(quad_weights(&g, &[0, 0], &zero).unwrap(), vec![[0, 0, 0]; 2]);
        assert_eq!(quad_weights(&g, &[3, 0], &zero).unwrap()[0], [6, 3, 0]);
        let two_mu = BoundaryClass::new(&g, vec![2, 0]).unwrap();
        assert_eq!(quad_weights(&g, &[0, 0], &two_mu).unwrap()[1], [-1, 0, 0]);
        assert!(matches!(quad_weights(&g, &[0, 1], &zero), Err(Error::ExcludedEdgeNonzero(_))));
        assert!(matches!(BoundaryClass::new(&g, vec![1, 0]), Err(Error::OmegaOutsideK(_))));
    }

    #[test]
    fn closed_form_matches_lattice_sum() {
        let g = figure_eight();
        let table = IndexTable::new();
        let t = QuarterExp::whole(6);
        for (x, y) in [(0, 0), (1, 0), (0, 1), (-1, 2)] {
            let omega = BoundaryClass::new(&g, vec![2 * x, y]).unwrap();
            let r = index(&g, &omega, t, DEFAULT_SHELL_BUDGET, &table).unwrap();
            assert!(r.is_converged());
            assert_eq!(r.series, fig8_closed_form(x, y, t, &table).unwrap(), "({x},{y})");
        }
    }
}
