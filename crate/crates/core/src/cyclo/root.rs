//! Roots of unity in lowest terms.

use super::Cyclotomic;
use num::Integer;
use std::fmt;

/// The root of unity `zeta_order^exp`, kept in lowest terms: the stored
/// order is the actual multiplicative order of the value, so two equal
/// roots always have identical representations and `Eq`/`Ord`/`Hash` agree
/// with mathematical equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    /// `zeta_order^exp`, canonicalized.
    pub fn new(order: u64, exp: u64) -> Self {
        assert!(order >= 1, "order must be positive");
        let e = exp % order;
        if e == 0 {
            return RootOfUnity { order: 1, exp: 0 };
        }
        let d = e.gcd(&order);
        RootOfUnity {
            order: order / d,
            exp: e / d,
        }
    }

    /// The identity `1`.
    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    /// Multiplicative order of the value itself.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exponent over the canonical order; coprime to it unless the value is 1.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = self.order.lcm(&other.order);
        let e = (self.exp * (l / self.order) + other.exp * (l / other.order)) % l;
        RootOfUnity::new(l, e)
    }

    pub fn inv(&self) -> Self {
        RootOfUnity::new(self.order, self.order - self.exp)
    }

    pub fn pow(&self, e: i64) -> Self {
        let r = e.rem_euclid(self.order as i64) as u64;
        RootOfUnity::new(self.order, self.exp * r)
    }

    /// The same value as a cyclotomic field element.
    pub fn to_cyclo(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exp)
    }

    /// `zeta_n^r` for a residue `r` mod `n` given as a signed integer.
    pub fn from_residue(n: u64, r: i64) -> Self {
        RootOfUnity::new(n, r.rem_euclid(n as i64) as u64)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, 1) => write!(f, "z{n}"),
            (n, e) => write!(f, "z{n}^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_in_lowest_terms() {
        assert_eq!(RootOfUnity::new(12, 8), RootOfUnity::new(3, 2));
        assert_eq!(RootOfUnity::new(6, 6), RootOfUnity::one());
        assert_eq!(RootOfUnity::new(4, 2), RootOfUnity::new(2, 1));
    }

    #[test]
    fn group_law_matches_field_arithmetic() {
        let a = RootOfUnity::new(4, 1);
        let b = RootOfUnity::new(6, 1);
        assert_eq!(a.mul(&b).to_cyclo(), a.to_cyclo().mul(&b.to_cyclo()));
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(a.pow(-1), a.inv());
        assert_eq!(a.pow(3), a.mul(&a).mul(&a));
    }

    #[test]
    fn display_forms() {
        assert_eq!(RootOfUnity::one().to_string(), "1");
        assert_eq!(RootOfUnity::new(2, 1).to_string(), "-1");
        assert_eq!(RootOfUnity::new(8, 1).to_string(), "z8");
        assert_eq!(RootOfUnity::new(8, 3).to_string(), "z8^3");
        assert_eq!(RootOfUnity::new(8, 6).to_string(), "z4^3");
    }
}
