//! Elements of cyclotomic fields.

use super::{cyclotomic_degree, cyclotomic_polynomial, CycloError};
use num::{BigInt, BigRational, Integer, One, Zero};
use std::fmt;

/// An element of `Q(zeta_N)`, stored as a polynomial in `zeta_N` of degree
/// below `phi(N)` (reduction modulo the `N`-th cyclotomic polynomial is a
/// construction invariant).
///
/// Values of different orders compare and combine by embedding into the
/// field of order `lcm`; the stored order is never reduced, so a value keeps
/// the order it was built with.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    /// The zero of `Q(zeta_order)`.
    pub fn zero(order: u64) -> Self {
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); cyclotomic_degree(order)],
        }
    }

    /// The one of `Q(zeta_1) = Q`.
    pub fn one() -> Self {
        Cyclotomic::from_int(1)
    }

    /// A rational number as an order-1 value.
    pub fn from_int(n: i64) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::from(BigInt::from(n))],
        }
    }

    /// The fraction `num/den` as an order-1 value.
    pub fn rational(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::new(BigInt::from(num), BigInt::from(den))],
        }
    }

    /// `zeta_order^exp` as an element of `Q(zeta_order)`.
    pub fn root_of_unity(order: u64, exp: u64) -> Self {
        assert!(order >= 1);
        let e = (exp % order) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Cyclotomic {
            order,
            coeffs: reduce_mod_cyclotomic(poly, order),
        }
    }

    fn from_coeffs(order: u64, poly: Vec<BigRational>) -> Self {
        Cyclotomic {
            order,
            coeffs: reduce_mod_cyclotomic(poly, order),
        }
    }

    /// Order `N` of the ambient field `Q(zeta_N)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients over the power basis `1, zeta, ..., zeta^{phi(N)-1}`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Includes this value into `Q(zeta_m)`; `m` must be a multiple of the
    /// current order. The inclusion sends `zeta_N` to `zeta_m^{m/N}`.
    pub fn embed(&self, m: u64) -> Self {
        if m == self.order {
            return self.clone();
        }
        assert!(
            m % self.order == 0,
            "embedding target {m} is not a multiple of order {}",
            self.order
        );
        let k = (m / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * k] = c.clone();
        }
        Cyclotomic::from_coeffs(m, poly)
    }

    fn unified(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            (self.clone(), other.clone())
        } else {
            let l = self.order.lcm(&other.order);
            (self.embed(l), other.embed(l))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut a, b) = self.unified(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut a, b) = self.unified(other);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Self {
        let mut a = self.clone();
        for x in a.coeffs.iter_mut() {
            *x = -x.clone();
        }
        a
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.unified(other);
        let mut poly = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Cyclotomic::from_coeffs(a.order, poly)
    }

    /// Multiplicative inverse, by the extended Euclidean algorithm against
    /// the cyclotomic polynomial of this value's order.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        // Invariant: r_k = s_k * self (mod Phi_N). Phi_N is irreducible, so
        // the loop terminates with a nonzero constant remainder.
        let mut r0 = trim(modulus);
        let mut s0 = vec![];
        let mut r1 = trim(self.coeffs.clone());
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r2) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            s0 = s1;
            r1 = trim(r2);
            s1 = s2;
        }
        assert!(
            !r1.is_empty() && !r1[0].is_zero(),
            "nonzero value shares a factor with an irreducible modulus"
        );
        let c = r1[0].clone();
        let inv_coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(Cyclotomic::from_coeffs(self.order, inv_coeffs))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Cyclotomic::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Galois twist `zeta_N -> zeta_N^k` for `k` coprime to the order.
    pub fn galois(&self, k: u64) -> Self {
        if self.order == 1 {
            return self.clone();
        }
        assert!(
            self.order.gcd(&k) == 1,
            "galois exponent must be coprime to the order"
        );
        // zeta^order = 1 lets exponents reduce mod the order up front.
        let n = self.order as usize;
        let mut poly = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(i * k as usize) % n] += c;
            }
        }
        Cyclotomic::from_coeffs(self.order, poly)
    }

    /// Complex conjugate (the Galois twist by `N - 1`).
    pub fn conjugate(&self) -> Self {
        if self.order == 1 {
            self.clone()
        } else {
            self.galois(self.order - 1)
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.unified(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let basis = match i {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, i),
            };
            let term = if basis.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                basis
            } else if (-c).is_one() {
                format!("-{basis}")
            } else {
                format!("{c}*{basis}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Division with remainder of rational polynomials, `a = q*b + r`.
fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = &b[db];
    assert!(!lead.is_zero());
    let mut rem = a.to_vec();
    if a.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] / lead;
        if !c.is_zero() {
            for (k, bk) in b.iter().enumerate() {
                let prod = &c * bk;
                rem[i + k] -= prod;
            }
            quot[i] = c;
        }
    }
    (quot, rem)
}

/// Reduces a polynomial in `zeta_order` modulo the cyclotomic polynomial,
/// returning exactly `phi(order)` coefficients.
fn reduce_mod_cyclotomic(mut p: Vec<BigRational>, order: u64) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    while p.len() > deg {
        let top = p.pop().unwrap();
        if !top.is_zero() {
            let shift = p.len() - deg;
            for k in 0..deg {
                let sub = &top * BigRational::from(phi[k].clone());
                p[shift + k] -= sub;
            }
        }
    }
    p.resize(deg, BigRational::zero());
    p
}
