//! Compiles and runs the guide's code blocks as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/models.md")]
pub mod chapter1 {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod chapter2 {}
#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod chapter3 {}
#[doc = include_str!("../../../book/src/oracles.md")]
pub mod chapter4 {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod chapter5 {}
