//! Decision procedures and verification harnesses for membership of
//! hyperbolic pseudoconvex Reinhardt domains in C² in the Serre class.

pub mod autgroup;
pub mod coeureloeb;
pub mod convexlog;
pub mod intmat;
pub mod models;
pub mod rat;
pub mod serreclass;
pub mod stehle;

/// Seed used by every sampled check unless another is given.
pub const DEFAULT_SEED: u64 = 0xC0EFFEE;
