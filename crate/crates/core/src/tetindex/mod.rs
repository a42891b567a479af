//! The tetrahedral index I(m,e), its q-Bessel form, q-trigonometric functions
//! and the diagonal generating functions phi_r.

mod bessel;
mod direct;
mod genfn;
mod phi_r;
mod table;
mod trig;

pub use bessel::{bessel_negative_order_check, tet_index_via_bessel};
pub use direct::{normalize, orbit, tet_index, valuation_bound, OrbitElement};
pub use genfn::generating_function_window;
pub use phi_r::{phi_r_diagonal_sum, phi_r_hypergeometric, phi_r_trig_product, PhiSeries};
pub use table::IndexTable;
pub use trig::{q_cos, q_cos_via, q_sin, q_sin_via, TrigRoute};
