//! Compiles every Rust listing of the guide in `book/` as a doc-test, one
//! module per chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/activations.md")]
pub mod activations {}
#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}
#[doc = include_str!("../../../book/src/energy.md")]
pub mod energy {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
