//! Ising model diagnostics on finite balls of transitive graph families.
//!
//! The crate is organized bottom-up:
//!
//! - [`graphs`]: finite pieces of the graph families (torus, box, regular
//!   tree, lamplighter Cayley graph) with distance/boundary/growth tools;
//! - [`model`]: couplings, Gibbs parameters, spin configurations, energies;
//! - [`exact`]: exact finite-volume expectations by configuration
//!   enumeration, plus closed forms on trees;
//! - [`mc`]: Wolff/Metropolis/FK cluster Monte Carlo with reproducible
//!   streams and autocorrelation-aware error bars;
//! - [`paperchecks`]: the quantities the library exists to compute --
//!   minimal two-point functions, growth bounds, averaged pair
//!   correlations, and critical-point estimates;
//! - [`cli`]: config-driven front end over all of the above.
//!
//! The `examples/` directory walks through each capability end to end.
pub mod cli;
pub mod exact;
pub mod graphs;
pub mod mc;
pub mod model;
pub mod paperchecks;

pub use graphs::{Graph, VertexSet};
pub use model::{BoundaryCondition, Couplings, GibbsParams, SpinConfiguration};
