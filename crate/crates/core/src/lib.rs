//! Computational toolkit for finitely presented groups: SL₂(ℂ) character
//! varieties through trace identities, low-index subgroup census, substitution
//! dynamics, and Weyl-Heisenberg MIC-POVMs built from coset-table
//! permutation representations.

pub mod census;
pub mod charvar;
pub mod fp;
pub mod mic;
pub mod poly;
pub mod reproduce;
pub mod substitution;
pub mod surface;
pub mod trace;
