//! Compiles every Rust listing of the guide in `book/` as a doctest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/curves.md")]
pub mod curves {}
#[doc = include_str!("../../../book/src/polarizations.md")]
pub mod polarizations {}
#[doc = include_str!("../../../book/src/stability.md")]
pub mod stability {}
#[doc = include_str!("../../../book/src/class-group.md")]
pub mod class_group {}
#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}
#[doc = include_str!("../../../book/src/abel.md")]
pub mod abel {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
