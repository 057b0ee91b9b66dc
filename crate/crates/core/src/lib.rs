//! Exact computation with finitely generated abelian groups and decision
//! procedures for the freeness of groups of invertible and divisorial
//! ideals of symbolically described domains.

pub mod abelian;
pub mod cert;
pub mod matrix;
pub mod noeth;
pub mod prufer;
pub mod scattered;
pub mod valgroup;

pub use cert::{Certificate, Step, Verdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/abelian.md")]
    mod abelian {}
    #[doc = include_str!("../../../book/src/valgroup.md")]
    mod valgroup {}
    #[doc = include_str!("../../../book/src/prufer.md")]
    mod prufer {}
    #[doc = include_str!("../../../book/src/noeth.md")]
    mod noeth {}
    #[doc = include_str!("../../../book/src/scattered.md")]
    mod scattered {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
