//! Coefficients frozen from an independent brute-force evaluation of the
//! defining sums (dense power series, no symmetry reduction).

use tet_index_core::tetindex::{tet_index, tet_index_via_bessel};
use tet_index_core::triangulation::{fig8_closed_form, figure_eight, index, BoundaryClass, DEFAULT_SHELL_BUDGET};
use tet_index_core::{IndexTable, QuarterExp, QuarterSeries};

type Frozen = &'static [(i64, i64, &'static [(i64, i64)])];

/// I(m, e) below q^10, exponents in quarters.
const TET: Frozen = &[
    (0, 0, &[(0, 1), (4, -1), (8, -2), (12, -2), (16, -2), (24, 1), (28, 5), (32, 7), (36, 11)]),
    (1, 0, &[(4, -1), (8, -1), (16, 1), (20, 3), (24, 4), (28, 6), (32, 6), (36, 6)]),
    (0, 1, &[(0, 1), (8, -1), (12, -2), (16, -3), (20, -3), (24, -3), (28, -1), (32, 1), (36, 5)]),
    (-1, 0, &[(0, 1), (8, -1), (12, -2), (16, -3), (20, -3), (24, -3), (28, -1), (32, 1), (36, 5)]),
    (0, -1, &[(4, -1), (8, -1), (16, 1), (20, 3), (24, 4), (28, 6), (32, 6), (36, 6)]),
    (2, -1, &[(8, 1), (12, 1), (16, 1), (24, -1), (28, -3), (32, -5), (36, -7)]),
    (-2, 3, &[(12, 1), (16, 1), (20, 2), (24, 2), (28, 2), (32, 1)]),
    (3, -2, &[(12, -1), (16, -1), (20, -1), (24, -1), (32, 1), (36, 3)]),
    (1, 2, &[(8, -1), (12, -1), (16, -1), (20, -1), (28, 1), (32, 3), (36, 5)]),
    (-3, -1, &[(10, -1), (14, -1), (18, -1), (22, -1), (26, -1), (34, 1), (38, 3)]),
    (4, 0, &[]),
    (0, 4, &[(0, 1), (20, -1), (24, -2), (28, -3), (32, -4), (36, -5)]),
    (-4, 2, &[(16, 1), (20, 1), (24, 2), (28, 2), (32, 3), (36, 2)]),
    (5, -3, &[(30, -1), (34, -1), (38, -2)]),
];

/// Figure-eight index at `2x mu + y lambda` below q^9.
const FIG8: Frozen = &[
    (1, 1, &[(4, -1), (8, -1), (12, 2), (16, 7), (20, 11), (24, 11), (28, 3), (32, -17)]),
    (-1, 2, &[(12, 1), (16, 3), (20, 3), (24, 2), (28, -5), (32, -16)]),
    (2, -1, &[(2, -1), (10, 1), (14, 4), (18, 7), (22, 7), (26, 3), (30, -12), (34, -31)]),
    (0, 2, &[(12, 1), (16, 2), (20, 5), (24, 2), (28, -3), (32, -16)]),
    (-2, -2, &[(12, 2), (16, 2), (20, 2), (24, -2), (28, -7), (32, -18)]),
];

fn series(terms: &[(i64, i64)], trunc: QuarterExp) -> QuarterSeries {
    QuarterSeries::from_terms(terms.iter().map(|&(k, c)| (QuarterExp(k), c)), trunc)
}

#[test]
fn tetrahedral_index_matches_brute_force() {
    let t = QuarterExp::whole(10);
    let table = IndexTable::new();
    for &(m, e, terms) in TET {
        let want = series(terms, t);
        assert_eq!(tet_index(m, e, t), want, "I({m},{e})");
        assert_eq!(table.get(m, e, t), want, "table I({m},{e})");
        assert_eq!(tet_index_via_bessel(m, e, t).unwrap(), want, "bessel I({m},{e})");
    }
}

#[test]
fn figure_eight_matches_brute_force() {
    let t = QuarterExp::whole(9);
    let g = figure_eight();
    let table = IndexTable::new();
    for &(x, y, terms) in FIG8 {
        let want = series(terms, t);
        assert_eq!(fig8_closed_form(x, y, t, &table).unwrap(), want, "closed form ({x},{y})");
        let omega = BoundaryClass::new(&g, vec![2 * x, y]).unwrap();
        let r = index(&g, &omega, t, DEFAULT_SHELL_BUDGET, &table).unwrap();
        assert!(r.is_converged());
        assert_eq!(r.series, want, "lattice sum ({x},{y})");
    }
}
