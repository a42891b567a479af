use proptest::prelude::*;

use tet_index_core::relations::ResidualReport;
use tet_index_core::tetindex::{orbit, tet_index, valuation_bound};
use tet_index_core::triangulation::{figure_eight, quad_weights, BoundaryClass, GluingData, GluingMatrix};
use tet_index_core::{IndexTable, QuarterExp, QuarterSeries};

fn arb_series() -> impl Strategy<Value = QuarterSeries> {
    (prop::collection::vec((-12i64..40, -6i64..6), 0..8), 0i64..48)
        .prop_map(|(terms, t)| QuarterSeries::from_terms(terms.into_iter().map(|(k, c)| (QuarterExp(k), c)), QuarterExp(t)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_series(), b in arb_series(), c in arb_series()) {
        prop_assert!((&a + &b).agrees_with(&(&b + &a)));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
        prop_assert!((&a * &QuarterSeries::one(QuarterExp(200))).agrees_with(&a));
    }

    #[test]
    fn products_never_claim_more_than_they_know(a in arb_series(), b in arb_series()) {
        let p = &a * &b;
        let va = a.valuation_or_trunc().0;
        let vb = b.valuation_or_trunc().0;
        prop_assert!(p.trunc().0 <= (a.trunc().0 + vb).min(b.trunc().0 + va));
    }

    #[test]
    fn truncation_is_monotone(m in -6i64..6, e in -6i64..6, t1 in 0i64..40, dt in 0i64..16) {
        let hi = tet_index(m, e, QuarterExp(t1 + dt));
        let lo = tet_index(m, e, QuarterExp(t1));
        prop_assert_eq!(hi.truncated(QuarterExp(t1)), lo);
    }

    #[test]
    fn orbit_symmetries(m in -7i64..7, e in -7i64..7) {
        let t = QuarterExp::whole(8);
        let base = tet_index(m, e, t);
        for o in orbit(m, e) {
            let image = tet_index(o.m, o.e, QuarterExp(t.0 - o.shift.0)).shift(o.shift).scale_i64(o.sign);
            prop_assert!(image.agrees_with(&base), "({}, {}) -> ({}, {})", m, e, o.m, o.e);
        }
    }

    #[test]
    fn valuation_bound_holds(m in -9i64..9, e in -9i64..9) {
        let t = QuarterExp::whole(14);
        let s = tet_index(m, e, t);
        prop_assert!(s.valuation_or_trunc() >= valuation_bound(m, e).min(t));
    }

    #[test]
    fn table_agrees_with_direct(m in -6i64..6, e in -6i64..6, t in 0i64..40) {
        let table = IndexTable::new();
        prop_assert_eq!(table.get(m, e, QuarterExp(t)), tet_index(m, e, QuarterExp(t)));
    }

    #[test]
    fn quad_weights_are_affine_in_omega(k in -5i64..5, x1 in -4i64..4, y1 in -4i64..4, x2 in -4i64..4, y2 in -4i64..4) {
        let g = figure_eight();
        let w1 = BoundaryClass::new(&g, vec![2 * x1, y1]).unwrap();
        let w2 = BoundaryClass::new(&g, vec![2 * x2, y2]).unwrap();
        let zero = BoundaryClass::zero(&g);
        let kk = [k, 0];
        let a = quad_weights(&g, &kk, &w1.add(&w2)).unwrap();
        let b = quad_weights(&g, &kk, &w1).unwrap();
        let c = quad_weights(&g, &kk, &w2).unwrap();
        let z = quad_weights(&g, &kk, &zero).unwrap();
        for j in 0..a.len() {
            for i in 0..3 {
                prop_assert_eq!(a[j][i], b[j][i] + c[j][i] - z[j][i]);
            }
        }
    }

    #[test]
    fn series_json_round_trip(a in arb_series()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: QuarterSeries = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn report_json_round_trip(a in arb_series(), m in -5i64..5) {
        let r = ResidualReport::new("quadratic", [("m".to_string(), m)].into_iter().collect(), a, 3);
        let back: ResidualReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}

#[test]
fn fixtures_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");
    let json = std::fs::read_to_string(format!("{dir}/fig8.json")).unwrap();
    let g = GluingData::parse_json(&json).unwrap();
    assert_eq!(g, figure_eight());
    assert_eq!(GluingData::parse_json(&g.render_json()).unwrap(), g);

    let text = std::fs::read_to_string(format!("{dir}/fig8.snappy.txt")).unwrap();
    let m = GluingMatrix::parse_text(&text).unwrap();
    assert_eq!(m, g.matrix());
    assert_eq!(GluingMatrix::parse_text(&m.render_text()).unwrap(), m);
}
