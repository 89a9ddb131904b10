//! Shift transformations for two-dimensional Gibbsian particle systems with
//! hard cores, together with samplers, an edge process and verification
//! tooling. The guide in `book/` walks through each module.

pub mod config;
pub mod potential;
pub mod gibbs;
pub mod transform;
pub mod harness;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/configurations.md")]
    pub mod configurations {}
    #[doc = include_str!("../../../book/src/decomposition.md")]
    pub mod decomposition {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    pub mod sampling {}
    #[doc = include_str!("../../../book/src/transform.md")]
    pub mod transform {}
    #[doc = include_str!("../../../book/src/inverse-jacobian.md")]
    pub mod inverse_jacobian {}
    #[doc = include_str!("../../../book/src/goodness.md")]
    pub mod goodness {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    pub mod experiments {}
}
