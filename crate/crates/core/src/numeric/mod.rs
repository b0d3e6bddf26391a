//! Numerics on a concrete congruence group: q-expansions, quadrature,
//! iterated integrals, modular symbols and period polynomials.

pub mod approx;
pub mod checks;
pub mod eval;
pub mod group;
pub mod iterated;
pub mod quad;
pub mod qseries;
pub mod symbols;
