//! Exact arithmetic in cyclotomic fields.
//!
//! A value of [`Cyclotomic`] is an element of `Q(zeta_N)` stored as a
//! polynomial in `zeta_N` reduced modulo the `N`-th cyclotomic polynomial,
//! so equality of values is equality of coefficient vectors once orders are
//! unified. [`RootOfUnity`] is the multiplicative group of roots of unity
//! in canonical lowest-terms form, and [`CycloMatrix`] provides the exact
//! matrix algebra (including legal empty matrices) that the 2-matrix layer
//! builds on.

mod matrix;
mod number;
mod root;

pub use matrix::CycloMatrix;
pub use number::Cyclotomic;
pub use root::RootOfUnity;

use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Errors raised by exact scalar and matrix arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    /// Inversion of the zero scalar.
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
    /// Shapes do not allow the requested matrix operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Matrix inversion of a non-invertible square matrix.
    #[error("matrix is singular")]
    SingularMatrix,
}

static CYCLO_POLY_CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term
/// first. Computed by exact division of `x^n - 1` by all lower cyclotomic
/// polynomials and memoized process-wide.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic polynomial order must be positive");
    let cache = CYCLO_POLY_CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some(hit) = guard.get(&n) {
            return hit.clone();
        }
    }
    // x^n - 1, then strip off the factors Phi_d for proper divisors d.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let q = cyclotomic_polynomial(d);
            poly = poly_div_exact(&poly, &q);
        }
    }
    let arc = Arc::new(poly);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Degree of the `n`-th cyclotomic polynomial (Euler phi of `n`).
pub fn cyclotomic_degree(n: u64) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Exact division of integer polynomials; the divisor must be monic and the
/// remainder must vanish. Coefficients are constant term first.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            for (k, dk) in den.iter().enumerate() {
                let prod = &c * dk;
                rem[i + k] -= prod;
            }
            quot[i] = c;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}
