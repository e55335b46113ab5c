//! The crossed module of self-equivalences of an object `n`: invertible
//! 1-morphisms `n -> n` in coordinate form, the loops (2-isomorphisms out
//! of the identity) they act on, and the realization functor into the
//! 2-matrix calculus.
//!
//! An automorphism is a pair `(sigma, A)` of a permutation and a field of
//! invertible matrices indexed by `(row, point)` with `A_i(b)` of size
//! `b_i`; its realization is the 1-morphism with rank `P(sigma)` and gauge
//! `s_i(a) = A_i(sigma . a)`. A loop is a pair `(lambda, A)` of invertible
//! scalars and a field; it realizes as the 2-morphism `1 => (I, A)` with
//! diagonal blocks `lambda_i`.

use super::{
    points_with_sum_at_most, Gauge, OneMorphism, RankMatrix, TwoMatError, TwoMorphism,
};
use crate::cyclo::{CycloMatrix, Cyclotomic};
use crate::group::Perm;
use std::collections::BTreeMap;

/// An invertible 1-morphism `n -> n` in coordinates: a permutation and a
/// matrix field over the identity rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutData {
    sigma: Perm,
    field: Gauge,
}

/// A loop in coordinates: invertible scalars `lambda_i` together with a
/// matrix field over the identity rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopData {
    lambda: Vec<Cyclotomic>,
    field: Gauge,
}

fn check_field(n: usize, field: &Gauge) -> Result<(), TwoMatError> {
    if field.rank() != &RankMatrix::identity(n) {
        return Err(TwoMatError::InvalidGauge(
            "a matrix field must live over the identity rank".into(),
        ));
    }
    if !field.is_table() {
        return Err(TwoMatError::InvalidGauge(
            "a matrix field must be a finite table".into(),
        ));
    }
    Ok(())
}

impl AutData {
    pub fn new(sigma: Perm, field: Gauge) -> Result<Self, TwoMatError> {
        check_field(sigma.degree(), &field)?;
        Ok(AutData { sigma, field })
    }

    pub fn identity(n: usize) -> Self {
        AutData {
            sigma: Perm::identity(n),
            field: Gauge::identity(RankMatrix::identity(n)),
        }
    }

    pub fn degree(&self) -> usize {
        self.sigma.degree()
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn field(&self) -> &Gauge {
        &self.field
    }
}

impl LoopData {
    pub fn new(lambda: Vec<Cyclotomic>, field: Gauge) -> Result<Self, TwoMatError> {
        check_field(lambda.len(), &field)?;
        if lambda.iter().any(Cyclotomic::is_zero) {
            return Err(TwoMatError::InvalidGauge(
                "loop scalars must be invertible".into(),
            ));
        }
        Ok(LoopData { lambda, field })
    }

    pub fn identity(n: usize) -> Self {
        LoopData {
            lambda: vec![Cyclotomic::one(); n],
            field: Gauge::identity(RankMatrix::identity(n)),
        }
    }

    pub fn degree(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Cyclotomic] {
        &self.lambda
    }

    pub fn field(&self) -> &Gauge {
        &self.field
    }
}

/// The coordinate permutation action on points: `(sigma . a)_i =
/// a_{sigma^{-1}(i)}`.
pub fn point_act(sigma: &Perm, a: &[u64]) -> Vec<u64> {
    assert_eq!(sigma.degree(), a.len(), "point has wrong dimension");
    let mut out = vec![0; a.len()];
    for (j, &x) in a.iter().enumerate() {
        out[sigma.apply(j)] = x;
    }
    out
}

fn field_table(field: &Gauge) -> &BTreeMap<(usize, Vec<u64>), CycloMatrix> {
    field
        .table_entries()
        .expect("matrix fields are validated to be tables")
}

fn table_to_field(n: usize, table: BTreeMap<(usize, Vec<u64>), CycloMatrix>) -> Gauge {
    Gauge::from_table(RankMatrix::identity(n), table)
        .expect("transformed field entries stay valid")
}

/// Pointwise product of matrix fields.
pub fn field_mul(a: &Gauge, b: &Gauge) -> Gauge {
    assert_eq!(a.rank(), b.rank(), "fields must share a degree");
    let n = a.rank().cols();
    let keys: std::collections::BTreeSet<_> = field_table(a)
        .keys()
        .chain(field_table(b).keys())
        .cloned()
        .collect();
    let table = keys
        .into_iter()
        .map(|(i, pt)| {
            let prod = a
                .eval(i, &pt)
                .mul(&b.eval(i, &pt))
                .expect("field values at a shared point have one size");
            ((i, pt), prod)
        })
        .collect();
    table_to_field(n, table)
}

/// Pointwise inverse of a matrix field.
pub fn field_inv(a: &Gauge) -> Gauge {
    let n = a.rank().cols();
    let table = field_table(a)
        .iter()
        .map(|((i, pt), m)| {
            let inv = m.inverse().expect("field values are invertible");
            ((*i, pt.clone()), inv)
        })
        .collect();
    table_to_field(n, table)
}

/// The permutation action on fields: `(sigma |> A)_i(a) =
/// A_{sigma^{-1}(i)}(sigma^{-1} . a)`.
pub fn perm_act_field(sigma: &Perm, a: &Gauge) -> Gauge {
    let n = a.rank().cols();
    assert_eq!(sigma.degree(), n, "permutation degree must match the field");
    let table = field_table(a)
        .iter()
        .map(|((i, pt), m)| ((sigma.apply(*i), point_act(sigma, pt)), m.clone()))
        .collect();
    table_to_field(n, table)
}

/// Realizes an automorphism as a 1-morphism: rank `P(sigma)` and gauge
/// `s_i(a) = A_i(sigma . a)`.
pub fn phi(x: &AutData) -> OneMorphism {
    let sigma_inv = x.sigma.inv();
    let rank = RankMatrix::from_perm(&x.sigma);
    let table = field_table(&x.field)
        .iter()
        .map(|((i, pt), m)| ((*i, point_act(&sigma_inv, pt)), m.clone()))
        .collect();
    let gauge = Gauge::from_table(rank.clone(), table)
        .expect("a field transported along a permutation is a valid gauge");
    OneMorphism::new(rank, gauge).expect("rank and gauge were built together")
}

/// Reads an invertible table-gauge 1-morphism back into coordinates;
/// inverse to [`phi`].
pub fn psi(f: &OneMorphism) -> Result<AutData, TwoMatError> {
    let sigma = f.rank().to_perm().ok_or(TwoMatError::NotAPermutation)?;
    let entries = f.gauge().table_entries().ok_or_else(|| {
        TwoMatError::InvalidGauge("coordinates need a finite gauge table".into())
    })?;
    let table = entries
        .iter()
        .map(|((i, pt), m)| ((*i, point_act(&sigma, pt)), m.clone()))
        .collect();
    Ok(AutData {
        field: table_to_field(f.source(), table),
        sigma,
    })
}

/// The group law on automorphisms: `(sigma, A)(sigma', A') = (sigma
/// sigma', A . (sigma |> A'))`.
pub fn mul_aut(x: &AutData, y: &AutData) -> AutData {
    AutData {
        sigma: x.sigma.compose(&y.sigma),
        field: field_mul(&x.field, &perm_act_field(&x.sigma, &y.field)),
    }
}

/// The inverse automorphism: `(sigma^{-1}, sigma^{-1} |> A^{-1})`.
pub fn inverse_aut(x: &AutData) -> AutData {
    let sigma_inv = x.sigma.inv();
    AutData {
        field: perm_act_field(&sigma_inv, &field_inv(&x.field)),
        sigma: sigma_inv,
    }
}

/// The boundary of a loop: the automorphism with trivial permutation part
/// carrying the same field.
pub fn boundary(l: &LoopData) -> AutData {
    AutData {
        sigma: Perm::identity(l.degree()),
        field: l.field.clone(),
    }
}

/// The action of automorphisms on loops: scalars move along the
/// permutation while the field is conjugated, `(sigma . lambda, A (sigma
/// |> A') A^{-1})`.
pub fn act(x: &AutData, l: &LoopData) -> LoopData {
    let mut lambda = vec![Cyclotomic::zero(1); l.degree()];
    for (i, v) in l.lambda.iter().enumerate() {
        lambda[x.sigma.apply(i)] = v.clone();
    }
    LoopData {
        lambda,
        field: field_mul(
            &field_mul(&x.field, &perm_act_field(&x.sigma, &l.field)),
            &field_inv(&x.field),
        ),
    }
}

/// The group law on loops: componentwise scalars, pointwise fields.
pub fn mul_loop(l1: &LoopData, l2: &LoopData) -> LoopData {
    assert_eq!(l1.degree(), l2.degree(), "loops must share a degree");
    LoopData {
        lambda: l1
            .lambda
            .iter()
            .zip(&l2.lambda)
            .map(|(a, b)| a.mul(b))
            .collect(),
        field: field_mul(&l1.field, &l2.field),
    }
}

/// The inverse loop.
pub fn inv_loop(l: &LoopData) -> LoopData {
    LoopData {
        lambda: l
            .lambda
            .iter()
            .map(|v| v.inv().expect("loop scalars are invertible"))
            .collect(),
        field: field_inv(&l.field),
    }
}

/// The inverse of an invertible table-gauge 1-morphism: rank
/// `P(sigma^{-1})` with gauge `s^{-1}_i(a) = s_{sigma(i)}(sigma^{-1} .
/// a)^{-1}`.
pub fn inverse_automorphism(f: &OneMorphism) -> Result<OneMorphism, TwoMatError> {
    let sigma = f.rank().to_perm().ok_or(TwoMatError::NotAPermutation)?;
    let entries = f.gauge().table_entries().ok_or_else(|| {
        TwoMatError::InvalidGauge("inversion needs a finite gauge table".into())
    })?;
    let sigma_inv = sigma.inv();
    let rank = RankMatrix::from_perm(&sigma_inv);
    let table = entries
        .iter()
        .map(|((r, c), m)| {
            let inv = m.inverse().expect("gauge values are invertible");
            ((sigma_inv.apply(*r), point_act(&sigma, c)), inv)
        })
        .collect();
    let gauge = Gauge::from_table(rank.clone(), table)
        .expect("an inverted gauge table stays valid");
    Ok(OneMorphism::new(rank, gauge).expect("rank and gauge were built together"))
}

/// Realizes a loop as the 2-morphism from the identity 1-morphism to `(I,
/// A)` whose diagonal blocks are the scalars `lambda_i`.
pub fn loop_to_2morphism(l: &LoopData) -> TwoMorphism {
    let n = l.degree();
    let source = OneMorphism::identity(n);
    let target = OneMorphism::new(RankMatrix::identity(n), l.field.clone())
        .expect("a field is a gauge over the identity rank");
    let blocks = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        CycloMatrix::from_rows(vec![vec![l.lambda[i].clone()]])
                    } else {
                        CycloMatrix::zero(0, 0)
                    }
                })
                .collect()
        })
        .collect();
    TwoMorphism::new(source, target, blocks).expect("diagonal scalar blocks match identity ranks")
}

/// Extensional equality of matrix fields on the probe box of the given
/// bound.
pub fn fields_agree_on_box(a: &Gauge, b: &Gauge, bound: u64) -> bool {
    if a.rank() != b.rank() {
        return false;
    }
    let n = a.rank().cols();
    points_with_sum_at_most(n, bound)
        .iter()
        .all(|pt| (0..n).all(|i| a.eval(i, pt) == b.eval(i, pt)))
}
