//! Flag-transitive symmetric designs with socle `PSU_4(q)`.
//!
//! * [`exactmath`]: big-integer factorization, divisors, prime powers.
//! * [`catalog`]: the sixteen maximal-subgroup lines and their orders.
//! * [`sieve`]: the arithmetic feasibility sieve and table recomputation.
//! * [`geometry`]: prime-field projective and orthogonal geometry.
//! * [`designs`]: incidence structures, the four constructions, isomorphism.
//! * [`permgroup`]: permutation groups, Schreier-Sims, primitivity, rank.
//! * [`cli`]: the `psu4d` command line.

pub mod catalog;
pub mod cli;
pub mod designs;
pub mod geometry;
pub mod permgroup;
pub mod exactmath;
pub mod sieve;
