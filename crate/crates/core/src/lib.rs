#![doc = include_str!("../README.md")]

pub mod figures;
pub mod monodromy;
pub mod paths;
pub mod perm;
pub mod radical;
pub mod report;
pub mod solvers;
pub mod witness;

mod error;
mod tolerances;

pub use error::Error;
pub use num_complex::Complex64 as C64;
pub use tolerances::Tolerances;

/// Book chapters, compiled as doc-tests so the guide never drifts from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/permutations.md")]
    mod permutations {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/monodromy.md")]
    mod monodromy {}
    #[doc = include_str!("../../../book/src/radicals.md")]
    mod radicals {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
