//! Numerical laboratory for James-type function spaces `JF_X((0,1)^d)` and
//! spaces of bounded X-variation, where X is `ℓ_p` or a Lorentz sequence space.
//!
//! * [`symnorm`]: symmetric sequence norms, fundamental functions, `ℓ_p` duality.
//! * [`funcspace`]: exact step functions, boxes, Haar and Rademacher systems.
//! * [`jfnorm`]: JF norms with certificates (exact in 1-D, grid search for `d ≥ 2`).
//! * [`variation`]: X-variation norms, the Volterra map, moduli and splitting.
//! * [`ccp`]: convex-combination experiments and Rademacher sums.
//! * [`suites`]: seeded property suites behind `jfx verify`.

pub mod ccp;
pub mod error;
pub mod funcspace;
pub mod io;
pub mod jfnorm;
pub mod rational;
pub mod suites;
pub mod symnorm;
pub mod variation;

pub use error::{Error, Result};
pub use funcspace::{Cuboid, GridFunction, Integrable, PairSystem, Partition1D, StepFunction1D};
pub use jfnorm::{DualFunctional, Family, Mode, NormCertificate, SearchConfig, SearchStats};
pub use rational::Rational;
pub use symnorm::{CoeffVector, SymmetricSpace, WeightRule};
pub use variation::SampledPath;
