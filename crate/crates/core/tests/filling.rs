use tet_index_core::dehnfill::{families, filled_index, intersection, FillConvention, FillOptions, Slope};
use tet_index_core::triangulation::{figure_eight, EdgeRow, GluingData, PeripheralRow, SumStatus};
use tet_index_core::{Error, IndexTable, QuarterExp, QuarterSeries};

#[test]
fn zero_slope_fills_to_one_at_high_order() {
    let g = figure_eight();
    let table = IndexTable::new();
    let opts = FillOptions::new(QuarterExp::whole(20));
    let r = filled_index(&g, Slope::new(0, 1).unwrap(), &opts, &table).unwrap();
    assert!(r.is_converged());
    assert_eq!(r.series, QuarterSeries::one(opts.trunc));
}

#[test]
fn printed_sign_breaks_the_table() {
    let g = figure_eight();
    let table = IndexTable::new();
    let mut opts = FillOptions::new(QuarterExp::whole(6));
    opts.convention = FillConvention::AsPrinted;
    let one = QuarterSeries::one(opts.trunc);
    let differs = [(0, 1), (2, 1)].iter().any(|&(p, q)| match filled_index(&g, Slope::new(p, q).unwrap(), &opts, &table) {
        Ok(r) => r.series != one,
        Err(Error::OddCoefficient { .. }) => true,
        Err(e) => panic!("{e}"),
    });
    assert!(differs);
}

#[test]
fn short_budget_is_reported() {
    let g = figure_eight();
    let table = IndexTable::new();
    let mut opts = FillOptions::new(QuarterExp::whole(10));
    opts.gamma_budget = 2;
    let r = filled_index(&g, Slope::new(5, 1).unwrap(), &opts, &table).unwrap();
    assert!(!r.is_converged());
    assert_eq!(r.shells_enumerated, 2);
}

#[test]
fn divergent_slope_keeps_going_at_larger_budget() {
    let g = figure_eight();
    let table = IndexTable::new();
    let mut opts = FillOptions::new(QuarterExp::whole(6));
    for budget in [12, 30] {
        opts.gamma_budget = budget;
        let r = filled_index(&g, Slope::new(4, 1).unwrap(), &opts, &table).unwrap();
        assert_eq!(r.status, SumStatus::DivergentAt(QuarterExp(0)));
        assert_eq!(r.series.coeff(QuarterExp(0)), 0.into());
    }
}

#[test]
fn families_pair_as_required() {
    let g = figure_eight();
    for p in -12..=12 {
        for q in 0..=5 {
            let Ok(a) = Slope::new(p, q) else { continue };
            let f = families(&g, a).unwrap();
            assert_eq!(intersection(&f.step, a), 0);
            assert_ne!(f.step, vec![0, 0]);
            assert_eq!(intersection(f.offset.as_ref().unwrap(), a), 2);
        }
    }
}

#[test]
fn two_cusps_are_rejected() {
    let row = |l: &str| PeripheralRow { label: l.into(), scale: 1.into(), triples: vec![[0, 0, 0], [0, 0, 0]] };
    let edge = |id: &str| EdgeRow { id: id.into(), triples: vec![[1, 1, 1], [1, 1, 1]] };
    let g = GluingData::new(
        2,
        vec![edge("e1"), edge("e2")],
        vec![row("mu1"), row("lambda1"), row("mu2"), row("lambda2")],
        vec!["e1".into(), "e2".into()],
        vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
    )
    .unwrap();
    let r = filled_index(&g, Slope::new(1, 0).unwrap(), &FillOptions::new(QuarterExp::whole(2)), &IndexTable::new());
    assert!(matches!(r, Err(Error::BadParameter(_))));
}
