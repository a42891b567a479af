//! Truncated Laurent series in `q^(1/4)`, q-Pochhammer symbols and basic
//! hypergeometric series.

mod format;
mod hyper;
mod series;
mod window;

pub use hyper::{phi, pochhammer, pochhammer_base, q_exp_big, q_exp_small, q_factorial, Monomial, Order};
pub use series::{QuarterExp, QuarterSeries};
pub use window::ZLaurentWindow;

