//! Runs the code listings of the guide in `book/src` as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/forms.md")]
pub mod forms {}

#[doc = include_str!("../../../book/src/stein.md")]
pub mod stein {}

#[doc = include_str!("../../../book/src/construction.md")]
pub mod construction {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/two-dilations.md")]
pub mod two_dilations {}

#[doc = include_str!("../../../book/src/specs.md")]
pub mod specs {}
