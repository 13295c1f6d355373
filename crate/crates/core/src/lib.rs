//! Exact computations on nilpotent Lie algebras: the Q_n and V_n filiform
//! families, Casimir polynomials of the Lie–Poisson structure, coadjoint
//! orbits, left-invariant forms, Hamiltonian flows and the BCH group law.

pub mod coadjoint;
pub mod exactmath;
pub mod flows;
pub mod forms;
pub mod group;
pub mod liealg;
