//! Exact computational models of finite 2-groups and their representations
//! on the 2-category of 2-matrices.
//!
//! All arithmetic is exact: scalars live in cyclotomic fields `Q(zeta_N)`
//! represented by polynomials modulo the `N`-th cyclotomic polynomial, and
//! every equality reported by this crate is an equality of exact values,
//! never a floating point comparison.
//!
//! The crate is organised bottom up:
//!
//! * [`cyclo`]: exact cyclotomic numbers, roots of unity and matrices.
//! * [`group`]: finite groups by multiplication table, permutations,
//!   finite modules with a group action, and enumeration of morphisms.
//! * [`cochain`]: normalized group cochains in low degree, coboundaries,
//!   and exact linear solving over products of cyclic groups.
//! * [`twogroup`]: categorical groups presented by classifying data
//!   `(G, M, alpha)`, crossed modules, and monoidal morphisms.
//! * [`twomat`]: the 2-category of 2-matrices: rank matrices with gauge
//!   data, 2-cells, the four composition laws and the automorphism
//!   crossed module of an object.
//! * [`rep`]: representations as quadruples `(n, rho, beta, c)`,
//!   realization as pseudofunctors, enumeration and equivalence.
//! * [`intertwiner`]: 1- and 2-intertwiners, their compositions, induced
//!   cocycles, hom category reports, endomorphism characters and the
//!   embedding of finite group actions.
//! * [`selftest`]: seeded randomized checks of the structural axioms,
//!   shared by the CLI, the benchmarks and the acceptance suite.
//!
//! With the default `parallel` feature the heavier sweeps use rayon data
//! parallelism; disabling it falls back to equivalent sequential loops
//! with identical (deterministic) results.

pub mod cochain;
pub mod cyclo;
pub mod exec;
pub mod group;
pub mod intertwiner;
pub mod rep;
pub mod selftest;
pub mod twogroup;
pub mod twomat;
