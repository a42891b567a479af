//! Gluing data of ideal triangulations and the 3D index as a lattice sum of
//! tetrahedral indices.

mod gluing;
mod index;

use num_rational::Ratio;

pub use gluing::{EdgeRow, GluingData, GluingMatrix, PeripheralRow, Triple};
pub(crate) use gluing::lattice_basis;
pub(crate) use index::{persistent, unfinished_status, without};
pub use index::{fig8_closed_form, index, quad_weights, BoundaryClass, LatticeSumResult, SumStatus, DEFAULT_SHELL_BUDGET, DIVERGENCE_WINDOW};

/// The two-tetrahedron triangulation of the figure-eight knot complement.
///
/// The peripheral rows are those of `2 mu` and `2 lambda`, each with scale
/// 1/2, so the class `a mu + b lambda` is written `[a, b]` and K is spanned
/// by `2 mu` and `lambda`. Edge `e2` carries weight zero.
pub fn figure_eight() -> GluingData {
    let half = Ratio::new(1, 2);
    GluingData::new(
        2,
        vec![
            EdgeRow { id: "e1".into(), triples: vec![[2, 1, 0], [2, 1, 0]] },
            EdgeRow { id: "e2".into(), triples: vec![[0, 1, 2], [0, 1, 2]] },
        ],
        vec![
            PeripheralRow { label: "mu".into(), scale: half, triples: vec![[0, 0, 1], [-1, 0, 0]] },
            PeripheralRow { label: "lambda".into(), scale: half, triples: vec![[0, 0, 0], [2, 0, -2]] },
        ],
        vec!["e2".into()],
        vec![vec![2, 0], vec![0, 1]],
    )
    .expect("figure-eight data is valid")
}
