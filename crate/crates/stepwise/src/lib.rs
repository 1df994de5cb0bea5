//! Computational structure theory of parabolic nilradicals in the classical
//! restricted root systems: strongly orthogonal cascades, layer partitions,
//! stepwise decompositions of the nilradical, exact Pfaffian Plancherel
//! densities, direct-limit propagation, and numerical Fourier-inversion
//! checks on low-dimensional Heisenberg-type groups.

pub mod cascade;
pub mod chevalley;
pub mod density;
pub mod heisenberg;
pub mod limits;
pub mod parabolic;
pub mod poly;
pub mod roots;
pub mod sweep;
