//! Operators as exact corners of banded operators, defect forms `β_m`, and
//! classification.

mod beta;
mod classify;
mod corner;
mod rule;

pub use beta::{beta_form, beta_on_window, beta_recurrence};
pub use classify::{classify, Classification, Predicate};
pub use corner::{power_window, ExactWindow, OperatorCorner};
pub use rule::WeightRule;

pub(crate) use beta::{binomial, sign};
