//! Executable identities for the tetrahedral index. Every check returns the
//! residual `LHS - RHS` below the requested truncation, and every infinite
//! sum is cut where the index valuation bound closes the tail.

mod diagonal;
mod hahn_exton;
mod index;
pub(crate) mod sum;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use diagonal::{check_generating_function, check_phi_factorization, check_phi_hypergeometric, check_sum_identities, check_trig_routes};
pub use hahn_exton::{
    check_groenevelt_general, check_groenevelt_special, check_koelink_diagonal, check_koelink_sum, check_multiplication, check_product_formula,
    check_toeplitz,
};
pub use index::{check_bessel_bridge, check_bessel_negative_order, check_pentagon, check_quadratic, check_symmetry, check_three_term, ThreeTermFamily};

use crate::error::{Error, Result};
use crate::qlaurent::{QuarterExp, QuarterSeries};
use crate::tetindex::IndexTable;

/// Integer parameters of one identity instance, by name.
pub type Params = BTreeMap<String, i64>;

pub(crate) fn params(kv: &[(&str, i64)]) -> Params {
    kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity_id: String,
    pub parameters: Params,
    pub residual: QuarterSeries,
    pub terms_summed: u64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn new(id: &str, parameters: Params, residual: QuarterSeries, terms_summed: u64) -> Self {
        let pass = residual.is_zero();
        ResidualReport { identity_id: id.to_string(), parameters, residual, terms_summed, pass }
    }
}

/// The identities the checker knows, addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    Symmetry,
    ThreeTermConsecutive,
    ThreeTermAdjacent,
    Quadratic,
    Pentagon,
    BesselBridge,
    BesselNegativeOrder,
    GroeneveltSpecial,
    GroeneveltGeneral,
    ProductFormula,
    KoelinkSum,
    KoelinkDiagonal,
    Multiplication,
    Toeplitz,
    PhiHypergeometric,
    PhiFactorization,
    SumIdentities,
    GeneratingFunction,
    TrigRoutes,
}

impl Identity {
    pub const ALL: [Identity; 19] = [
        Identity::Symmetry,
        Identity::ThreeTermConsecutive,
        Identity::ThreeTermAdjacent,
        Identity::Quadratic,
        Identity::Pentagon,
        Identity::BesselBridge,
        Identity::BesselNegativeOrder,
        Identity::GroeneveltSpecial,
        Identity::GroeneveltGeneral,
        Identity::ProductFormula,
        Identity::KoelinkSum,
        Identity::KoelinkDiagonal,
        Identity::Multiplication,
        Identity::Toeplitz,
        Identity::PhiHypergeometric,
        Identity::PhiFactorization,
        Identity::SumIdentities,
        Identity::GeneratingFunction,
        Identity::TrigRoutes,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Identity::Symmetry => "symmetry",
            Identity::ThreeTermConsecutive => "three_term_consecutive",
            Identity::ThreeTermAdjacent => "three_term_adjacent",
            Identity::Quadratic => "quadratic",
            Identity::Pentagon => "pentagon",
            Identity::BesselBridge => "bessel_bridge",
            Identity::BesselNegativeOrder => "bessel_negative_order",
            Identity::GroeneveltSpecial => "groenevelt_special",
            Identity::GroeneveltGeneral => "groenevelt_general",
            Identity::ProductFormula => "product_formula",
            Identity::KoelinkSum => "koelink_sum",
            Identity::KoelinkDiagonal => "koelink_diagonal",
            Identity::Multiplication => "multiplication",
            Identity::Toeplitz => "toeplitz",
            Identity::PhiHypergeometric => "phi_hypergeometric",
            Identity::PhiFactorization => "phi_factorization",
            Identity::SumIdentities => "sum_identities",
            Identity::GeneratingFunction => "generating_function",
            Identity::TrigRoutes => "trig_routes",
        }
    }

    /// Parameter names, with defaults for the optional ones.
    pub fn parameters(self) -> &'static [(&'static str, Option<i64>)] {
        const WINDOW: [(&str, Option<i64>); 2] = [("lo", Some(-4)), ("hi", Some(4))];
        match self {
            Identity::Symmetry | Identity::ThreeTermConsecutive | Identity::ThreeTermAdjacent | Identity::BesselBridge => &[("m", None), ("e", None)],
            Identity::Quadratic => &[("m", None), ("c", None)],
            Identity::Pentagon => &[("m1", None), ("m2", None), ("x1", None), ("x2", None), ("x3", None)],
            Identity::BesselNegativeOrder => &[("nu", None), ("m", None)],
            Identity::GroeneveltSpecial => &[("m", None), ("e", None)],
            Identity::GroeneveltGeneral => &[("m", None), ("e", None), ("t_trunc", Some(4))],
            Identity::ProductFormula => &[("m1", None), ("m2", None), ("e1", None), ("e2", None)],
            Identity::KoelinkSum | Identity::KoelinkDiagonal => &[("k", None)],
            Identity::Multiplication => &[("m", None), ("e", None), ("lambda", None)],
            Identity::Toeplitz => &[("m1", None), ("m2", None), ("e", None)],
            Identity::PhiHypergeometric | Identity::PhiFactorization => &[("r", None), WINDOW[0], WINDOW[1]],
            Identity::SumIdentities => &[("r", None)],
            Identity::GeneratingFunction => &[("m", None), WINDOW[0], WINDOW[1]],
            Identity::TrigRoutes => &[("coeff", None), ("exp", None)],
        }
    }

    /// Fills defaults and rejects unknown or missing parameters.
    fn resolve(self, given: &Params) -> Result<Vec<i64>> {
        let spec = self.parameters();
        if let Some(bad) = given.keys().find(|k| !spec.iter().any(|(n, _)| n == k)) {
            return Err(Error::BadParameter(format!("{} takes no parameter {bad}", self.id())));
        }
        spec.iter()
            .map(|&(name, default)| {
                given
                    .get(name)
                    .copied()
                    .or(default)
                    .ok_or_else(|| Error::BadParameter(format!("{} needs parameter {name}", self.id())))
            })
            .collect()
    }

    /// Runs the check; with `perturb` one term enters with the wrong sign.
    pub fn run(self, given: &Params, trunc: QuarterExp, table: &IndexTable, perturb: bool) -> Result<Vec<ResidualReport>> {
        let p = self.resolve(given)?;
        let t = trunc;
        let one = |r: Result<ResidualReport>| r.map(|x| vec![x]);
        match self {
            Identity::Symmetry => Ok(check_symmetry(p[0], p[1], t, perturb)),
            Identity::ThreeTermConsecutive => Ok(check_three_term(p[0], p[1], ThreeTermFamily::Consecutive, t, table, perturb)),
            Identity::ThreeTermAdjacent => Ok(check_three_term(p[0], p[1], ThreeTermFamily::Adjacent, t, table, perturb)),
            Identity::Quadratic => one(check_quadratic(p[0], p[1], t, table, perturb)),
            Identity::Pentagon => one(check_pentagon(p[0], p[1], p[2], p[3], p[4], t, table, perturb)),
            Identity::BesselBridge => one(check_bessel_bridge(p[0], p[1], t, perturb)),
            Identity::BesselNegativeOrder => one(check_bessel_negative_order(p[0], p[1], t, perturb)),
            Identity::GroeneveltSpecial => one(check_groenevelt_special(p[0], p[1], t, table, perturb)),
            Identity::GroeneveltGeneral => check_groenevelt_general(p[0], p[1], p[2], t, table, perturb),
            Identity::ProductFormula => one(check_product_formula(p[0], p[1], p[2], p[3], t, table, perturb)),
            Identity::KoelinkSum => one(check_koelink_sum(p[0], t, table, perturb)),
            Identity::KoelinkDiagonal => one(check_koelink_diagonal(p[0], t, table, perturb)),
            Identity::Multiplication => one(check_multiplication(p[0], p[1], p[2], t, table, perturb)),
            Identity::Toeplitz => one(check_toeplitz(p[0], p[1], p[2], t, table, perturb)),
            Identity::PhiHypergeometric => one(check_phi_hypergeometric(p[0], p[1], p[2], t, table, perturb)),
            Identity::PhiFactorization => one(check_phi_factorization(p[0], p[1], p[2], t, table, perturb)),
            Identity::SumIdentities => check_sum_identities(p[0], t, table, perturb),
            Identity::GeneratingFunction => one(check_generating_function(p[0], p[1], p[2], t, perturb)),
            Identity::TrigRoutes => check_trig_routes(p[0], p[1], t, perturb),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL.iter().copied().find(|i| i.id() == s).ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// One identity instance of a suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub identity: Identity,
    pub params: Params,
    pub trunc: QuarterExp,
}

impl Case {
    pub fn new(identity: Identity, kv: &[(&str, i64)], trunc: QuarterExp) -> Self {
        Case { identity, params: params(kv), trunc }
    }

    pub fn run(&self, table: &IndexTable, perturb: bool) -> Result<Vec<ResidualReport>> {
        self.identity.run(&self.params, self.trunc, table, perturb)
    }
}

/// A fixed suite touching every identity on small parameter grids, at `O(q^10)`.
pub fn default_suite() -> Vec<Case> {
    use Identity::*;
    let t = QuarterExp::whole(10);
    let mut cases = Vec::new();
    for m in -3..=3 {
        for e in -3..=3 {
            for id in [Symmetry, ThreeTermConsecutive, ThreeTermAdjacent, BesselBridge] {
                cases.push(Case::new(id, &[("m", m), ("e", e)], t));
            }
        }
    }
    for m in -2..=2 {
        for c in -2..=2 {
            cases.push(Case::new(Quadratic, &[("m", m), ("c", c)], t));
        }
    }
    for x in [[0, 0, 0, 0, 0], [1, -1, 0, 1, 0], [2, 1, -1, 0, 1], [-2, 1, 2, -1, 0]] {
        cases.push(Case::new(Pentagon, &[("m1", x[0]), ("m2", x[1]), ("x1", x[2]), ("x2", x[3]), ("x3", x[4])], t));
    }
    for (nu, m) in [(0, 4), (-1, 0), (-3, 2), (-2, -5)] {
        cases.push(Case::new(BesselNegativeOrder, &[("nu", nu), ("m", m)], t));
    }
    for (m, e) in [(1, 0), (2, 1), (3, 2), (0, 0), (0, 2), (0, 3), (-2, 1), (-1, 0), (-3, 2)] {
        cases.push(Case::new(GroeneveltSpecial, &[("m", m), ("e", e)], t));
    }
    for (m, e) in [(1, 1), (-1, 0)] {
        cases.push(Case::new(GroeneveltGeneral, &[("m", m), ("e", e), ("t_trunc", 4)], t));
    }
    for x in [[0, 0, 0, 0], [1, 0, 2, 1], [-1, 2, 0, 3]] {
        cases.push(Case::new(ProductFormula, &[("m1", x[0]), ("m2", x[1]), ("e1", x[2]), ("e2", x[3])], t));
    }
    for k in [0, 3, -2] {
        cases.push(Case::new(KoelinkSum, &[("k", k)], t));
    }
    for k in [0, 1, 4] {
        cases.push(Case::new(KoelinkDiagonal, &[("k", k)], t));
    }
    for (m, l, e) in [(0, 1, 0), (-1, 2, 3), (-3, 1, -2)] {
        cases.push(Case::new(Multiplication, &[("m", m), ("e", e), ("lambda", l)], t));
    }
    for (m1, m2, e) in [(1, 1, 0), (2, -1, 1), (0, 3, -2)] {
        cases.push(Case::new(Toeplitz, &[("m1", m1), ("m2", m2), ("e", e)], t));
    }
    for r in -4..=4 {
        cases.push(Case::new(PhiHypergeometric, &[("r", r)], t));
        cases.push(Case::new(PhiFactorization, &[("r", r)], t));
    }
    for r in -3..=4 {
        cases.push(Case::new(SumIdentities, &[("r", r)], t));
    }
    for m in [-2, 0, 3] {
        cases.push(Case::new(GeneratingFunction, &[("m", m)], t));
    }
    for (c, k) in [(1, 2), (-1, 1), (2, -1), (1, 4)] {
        cases.push(Case::new(TrigRoutes, &[("coeff", c), ("exp", k)], t));
    }
    cases
}

/// Runs cases in parallel; results keep the order of `cases`.
pub fn run_suite(cases: &[Case], table: &IndexTable, perturb: bool) -> Vec<Result<Vec<ResidualReport>>> {
    cases.par_iter().map(|c| c.run(table, perturb)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.id().parse::<Identity>().unwrap(), id);
        }
        assert!(matches!("nope".parse::<Identity>(), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn parameters_are_validated() {
        let table = IndexTable::new();
        let t = QuarterExp::whole(4);
        let missing = Identity::Quadratic.run(&params(&[("m", 0)]), t, &table, false);
        assert!(matches!(missing, Err(Error::BadParameter(_))));
        let extra = Identity::KoelinkSum.run(&params(&[("k", 0), ("z", 1)]), t, &table, false);
        assert!(matches!(extra, Err(Error::BadParameter(_))));
    }

    #[test]
    fn report_json_round_trip() {
        let table = IndexTable::new();
        let rep = check_quadratic(0, 0, QuarterExp::whole(6), &table, true).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(serde_json::from_str::<ResidualReport>(&text).unwrap(), rep);
    }
}
