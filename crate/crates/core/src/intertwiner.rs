//! Morphisms between representation quadruples: the orbit decomposition of
//! the index grid with its difference cocycles, 1-intertwiners (an invariant
//! rank matrix, a gauge, and a family of matrices weakening the translation
//! squares), 2-intertwiners between parallel 1-intertwiners, their three
//! compositions, induction from projective stabilizer data, hom-category
//! summaries, and the functor from finite group actions.
//!
//! A 1-intertwiner from `(n, rho, beta, c)` to `(n', rho', beta', c')` is a
//! triple `(R, s, S)`: a rank matrix `R` constant on the orbits of the pair
//! action and supported on aligned scalar parts, a gauge `s` over `R`, and
//! for each supported pair `(i', i)` a map `S` from group elements to
//! invertible matrices of size `R[i', i]` that is the identity at the group
//! unit and satisfies the twisted multiplication law
//! `S[i',i](g1 g2) = w^(c(g1,g2)_i - c'(g1,g2)_i') *
//! S[i',i](g1) * S[p.g1](g2)` where `p.g1` translates the pair and `w` is
//! the primitive scalar root of unity.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cochain::{solve_coboundary, Cochain};
use crate::cyclo::{CycloMatrix, Cyclotomic};
use crate::exec;
use crate::group::{pair_orbits, FinGroup, FinModule, PairOrbit, Perm};
use crate::rep::{validate_quadruple, RepError, RepQuadruple};
use crate::twogroup::SpecialTwoGroup;
use crate::twomat::{
    compose1, hcompose2, shuffle_perm, Gauge, OneMorphism, RankMatrix, TwoMatError, TwoMorphism,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntwError {
    /// The representations at the shared endpoint differ.
    #[error("the representations at the shared endpoint differ")]
    RepMismatch,
    /// The two cells do not share the required boundary.
    #[error("the two cells do not share the required boundary")]
    NotComposable,
    /// The underlying map of finite actions fails equivariance.
    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),
    /// The stabilizer data is not a projective representation with the
    /// multiplier prescribed by the orbit cocycle.
    #[error("invalid stabilizer data: {0}")]
    InvalidStabilizerRep(String),
    /// Validation found concrete broken invariants.
    #[error("invalid intertwiner: {}", format_violations(.0))]
    Invalid(Vec<IntwViolation>),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    TwoMat(#[from] TwoMatError),
}

fn format_violations(vs: &[IntwViolation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A concrete broken invariant found by a validator, named by the axiom it
/// falsifies.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntwViolation {
    #[error("rank matrix is not invariant: {0}")]
    RankNotInvariant(String),
    #[error("support pair has mismatched scalar parts: {0}")]
    SupportNotAligned(String),
    #[error("weakening data is malformed: {0}")]
    WeakeningMalformed(String),
    #[error("weakening is not normalized at the unit: {0}")]
    WeakeningNotNormalized(String),
    #[error("twisted multiplication law fails: {0}")]
    TwistedLawFails(String),
    #[error("blocks are malformed: {0}")]
    BlocksMalformed(String),
    #[error("block equivariance fails: {0}")]
    BlockEquivarianceFails(String),
    #[error("endpoint data does not match: {0}")]
    EndpointMismatch(String),
}

impl IntwViolation {
    /// Stable name of the violated axiom, for reporting and tests.
    pub fn axiom(&self) -> &'static str {
        match self {
            IntwViolation::RankNotInvariant(_) => "rank-invariance",
            IntwViolation::SupportNotAligned(_) => "support-alignment",
            IntwViolation::WeakeningMalformed(_) => "weakening-shape",
            IntwViolation::WeakeningNotNormalized(_) => "weakening-normalization",
            IntwViolation::TwistedLawFails(_) => "twisted-cocycle-law",
            IntwViolation::BlocksMalformed(_) => "block-shape",
            IntwViolation::BlockEquivarianceFails(_) => "block-equivariance",
            IntwViolation::EndpointMismatch(_) => "endpoints",
        }
    }
}

fn us(x: u64) -> usize {
    usize::try_from(x).expect("rank entry fits in usize")
}

fn root(order: u64, exp: u64) -> Cyclotomic {
    Cyclotomic::root_of_unity(order, exp % order)
}

fn scale(m: &CycloMatrix, s: &Cyclotomic) -> CycloMatrix {
    CycloMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).mul(s))
}

/// Pairs `(i', i)` carrying a positive rank entry, in row-major order.
fn support(rank: &RankMatrix) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i_p in 0..rank.rows() {
        for i in 0..rank.cols() {
            if rank.get(i_p, i) > 0 {
                out.push((i_p, i));
            }
        }
    }
    out
}

/// Column `i` of a rank matrix as a point, i.e. the image of the `i`-th
/// standard basis point.
fn column(rank: &RankMatrix, i: usize) -> Vec<u64> {
    (0..rank.rows()).map(|r| rank.get(r, i)).collect()
}

/// Whether the scalar parts of the two quadruples agree at the grid pair
/// `(i', i)`: every generator image of the target at `i'` equals the one of
/// the source at `i`.
fn aligned(source: &RepQuadruple, target: &RepQuadruple, i_p: usize, i: usize) -> bool {
    source
        .beta
        .iter()
        .zip(target.beta.iter())
        .all(|(b, bp)| bp[i_p] == b[i])
}

/// Right action of a group element on a grid pair.
fn pair_act(
    source: &RepQuadruple,
    target: &RepQuadruple,
    p: (usize, usize),
    g: usize,
) -> (usize, usize) {
    (target.rho[g].inv().apply(p.0), source.rho[g].inv().apply(p.1))
}

/// The orbit decomposition of the index grid between two representation
/// quadruples, with the alignment flag and the difference cocycle of every
/// aligned orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerSpace {
    group: FinGroup,
    scalar_order: u64,
    source: RepQuadruple,
    target: RepQuadruple,
    orbits: Vec<PairOrbit>,
    intertwining: Vec<bool>,
    cocycles: Vec<Option<Cochain>>,
}

/// Decomposes the grid `{0..n'} x {0..n}` under the pair action and, for
/// every orbit whose scalar parts align, records the degree-2 difference
/// cocycle `z(g1,g2)(i',i) = c'(g1,g2)_i' - c(g1,g2)_i` with coefficients in
/// the permutation module on the orbit's points.  Both quadruples are
/// validated first.
pub fn build_space(
    twogroup: &SpecialTwoGroup,
    source: &RepQuadruple,
    target: &RepQuadruple,
) -> Result<IntertwinerSpace, IntwError> {
    for q in [source, target] {
        let v = validate_quadruple(q, twogroup);
        if !v.is_empty() {
            return Err(IntwError::Rep(RepError::Invalid(v)));
        }
    }
    if source.scalar_order != target.scalar_order {
        return Err(IntwError::RepMismatch);
    }
    let group = twogroup.group().clone();
    let order = source.scalar_order;
    let orbits = pair_orbits(&group, &target.rho, &source.rho);
    let mut intertwining = Vec::with_capacity(orbits.len());
    let mut cocycles = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        // Alignment is constant on orbits because both scalar parts are
        // equivariant, so checking every point is a consistency sweep.
        let flags: Vec<bool> = orbit
            .points
            .iter()
            .map(|&(i_p, i)| aligned(source, target, i_p, i))
            .collect();
        debug_assert!(flags.iter().all(|&f| f == flags[0]));
        let is_intw = flags.iter().all(|&f| f);
        intertwining.push(is_intw);
        if !is_intw {
            cocycles.push(None);
            continue;
        }
        let index: BTreeMap<(usize, usize), usize> = orbit
            .points
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, k))
            .collect();
        // Module action permuting point coordinates; the images send the
        // index of `p . g` to the index of `p`, so that acting on a value
        // vector reads it off along the translated point.
        let perms: Vec<Perm> = group
            .elements()
            .map(|g| {
                let g_inv = group.inv(g);
                Perm::new(
                    orbit
                        .points
                        .iter()
                        .map(|&p| index[&pair_act(source, target, p, g_inv)])
                        .collect(),
                )
            })
            .collect();
        let module = FinModule::scalar_power(group.clone(), orbit.points.len(), order, &perms);
        let z = Cochain::from_fn(module, 2, |t| {
            let c_vals = source.c.get(t);
            let cp_vals = target.c.get(t);
            orbit
                .points
                .iter()
                .map(|&(i_p, i)| (cp_vals[i_p] + order - c_vals[i]) % order)
                .collect()
        });
        assert!(
            z.is_cocycle(),
            "the orbit difference cochain must be closed"
        );
        cocycles.push(Some(z));
    }
    Ok(IntertwinerSpace {
        group,
        scalar_order: order,
        source: source.clone(),
        target: target.clone(),
        orbits,
        intertwining,
        cocycles,
    })
}

impl IntertwinerSpace {
    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn scalar_order(&self) -> u64 {
        self.scalar_order
    }

    pub fn source(&self) -> &RepQuadruple {
        &self.source
    }

    pub fn target(&self) -> &RepQuadruple {
        &self.target
    }

    pub fn orbits(&self) -> &[PairOrbit] {
        &self.orbits
    }

    pub fn is_intertwining(&self, orbit: usize) -> bool {
        self.intertwining[orbit]
    }

    /// The difference cocycle of an aligned orbit.
    pub fn cocycle(&self, orbit: usize) -> Option<&Cochain> {
        self.cocycles[orbit].as_ref()
    }

    /// Whether no orbit is aligned, so the only morphism is the empty one
    /// and the hom-category collapses to a single object.
    pub fn is_terminal(&self) -> bool {
        self.intertwining.iter().all(|&f| !f)
    }
}

/// A morphism of representation quadruples: an invariant rank matrix, a
/// gauge over it, and for every supported pair the family of matrices
/// weakening the translation squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneIntertwiner {
    group: FinGroup,
    source: RepQuadruple,
    target: RepQuadruple,
    rank: RankMatrix,
    gauge: Gauge,
    weakening: BTreeMap<(usize, usize), Vec<CycloMatrix>>,
}

impl OneIntertwiner {
    /// Builds and fully validates an intertwiner against a space.
    pub fn new(
        space: &IntertwinerSpace,
        rank: RankMatrix,
        gauge: Gauge,
        weakening: BTreeMap<(usize, usize), Vec<CycloMatrix>>,
    ) -> Result<Self, IntwError> {
        let xi = OneIntertwiner {
            group: space.group.clone(),
            source: space.source.clone(),
            target: space.target.clone(),
            rank,
            gauge,
            weakening,
        };
        let v = validate_parts(&xi);
        if v.is_empty() {
            Ok(xi)
        } else {
            Err(IntwError::Invalid(v))
        }
    }

    /// Assembles the parts without validation, for perturbation experiments
    /// and internal construction.
    pub fn from_parts(
        group: FinGroup,
        source: RepQuadruple,
        target: RepQuadruple,
        rank: RankMatrix,
        gauge: Gauge,
        weakening: BTreeMap<(usize, usize), Vec<CycloMatrix>>,
    ) -> Self {
        OneIntertwiner {
            group,
            source,
            target,
            rank,
            gauge,
            weakening,
        }
    }

    /// The identity intertwiner of a quadruple.
    pub fn identity(group: &FinGroup, q: &RepQuadruple) -> Self {
        let rank = RankMatrix::identity(q.n);
        let weakening = (0..q.n)
            .map(|i| ((i, i), vec![CycloMatrix::identity(1); group.order()]))
            .collect();
        OneIntertwiner {
            group: group.clone(),
            source: q.clone(),
            target: q.clone(),
            gauge: Gauge::identity(rank.clone()),
            rank,
            weakening,
        }
    }

    /// The empty intertwiner: zero rank, no weakening data.
    pub fn zero(group: &FinGroup, source: &RepQuadruple, target: &RepQuadruple) -> Self {
        let rank = RankMatrix::zeros(target.n, source.n);
        OneIntertwiner {
            group: group.clone(),
            source: source.clone(),
            target: target.clone(),
            gauge: Gauge::identity(rank.clone()),
            rank,
            weakening: BTreeMap::new(),
        }
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn source_rep(&self) -> &RepQuadruple {
        &self.source
    }

    pub fn target_rep(&self) -> &RepQuadruple {
        &self.target
    }

    pub fn rank(&self) -> &RankMatrix {
        &self.rank
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn weakening(&self) -> &BTreeMap<(usize, usize), Vec<CycloMatrix>> {
        &self.weakening
    }

    /// The weakening matrix at a supported pair and group element.
    pub fn weakening_at(&self, pair: (usize, usize), g: usize) -> Option<&CycloMatrix> {
        self.weakening.get(&pair).map(|v| &v[g])
    }

    /// The underlying 1-morphism of the 2-matrix calculus.
    pub fn morphism(&self) -> OneMorphism {
        OneMorphism::new(self.rank.clone(), self.gauge.clone())
            .expect("intertwiner gauge is kept over its own rank")
    }
}

/// Validates the intertwiner's own invariants: rank invariance, support
/// alignment, the shape and normalization of the weakening, and the twisted
/// multiplication law.  The law sweep runs data-parallel over the
/// `(pair, g1, g2)` grid; counterexample messages are recovered by a
/// deterministic sequential rescan.
fn validate_parts(xi: &OneIntertwiner) -> Vec<IntwViolation> {
    let mut out = Vec::new();
    let q = &xi.source;
    let qp = &xi.target;
    let order = xi.group.order();
    let n_order = q.scalar_order;
    if qp.scalar_order != n_order {
        out.push(IntwViolation::EndpointMismatch(format!(
            "scalar orders {} and {} differ",
            n_order, qp.scalar_order
        )));
        return out;
    }
    if xi.rank.rows() != qp.n || xi.rank.cols() != q.n {
        out.push(IntwViolation::EndpointMismatch(format!(
            "rank is {} x {} but the quadruples have dimensions {} and {}",
            xi.rank.rows(),
            xi.rank.cols(),
            qp.n,
            q.n
        )));
        return out;
    }
    if xi.gauge.rank() != &xi.rank {
        out.push(IntwViolation::WeakeningMalformed(
            "gauge is kept over a different rank matrix".into(),
        ));
        return out;
    }

    let rho_inv: Vec<Perm> = q.rho.iter().map(Perm::inv).collect();
    let rhop_inv: Vec<Perm> = qp.rho.iter().map(Perm::inv).collect();
    let sup = support(&xi.rank);

    let mut invariant = true;
    'inv: for g in 0..order {
        for i_p in 0..qp.n {
            for i in 0..q.n {
                let moved = xi.rank.get(qp.rho[g].apply(i_p), q.rho[g].apply(i));
                if moved != xi.rank.get(i_p, i) {
                    out.push(IntwViolation::RankNotInvariant(format!(
                        "entries at ({i_p}, {i}) and its translate by {g} differ"
                    )));
                    invariant = false;
                    break 'inv;
                }
            }
        }
    }

    for &(i_p, i) in &sup {
        if !aligned(q, qp, i_p, i) {
            out.push(IntwViolation::SupportNotAligned(format!(
                "pair ({i_p}, {i}) is supported but the scalar parts differ"
            )));
            break;
        }
    }

    let mut shapes_ok = true;
    for (&(i_p, i), mats) in &xi.weakening {
        if i_p >= qp.n || i >= q.n || xi.rank.get(i_p, i) == 0 {
            out.push(IntwViolation::WeakeningMalformed(format!(
                "pair ({i_p}, {i}) carries weakening data but no rank"
            )));
            shapes_ok = false;
            break;
        }
        if mats.len() != order {
            out.push(IntwViolation::WeakeningMalformed(format!(
                "pair ({i_p}, {i}) has {} matrices for a group of order {order}",
                mats.len()
            )));
            shapes_ok = false;
            break;
        }
        let size = us(xi.rank.get(i_p, i));
        if let Some(m) = mats
            .iter()
            .find(|m| m.rows() != size || m.cols() != size || !m.is_invertible())
        {
            out.push(IntwViolation::WeakeningMalformed(format!(
                "pair ({i_p}, {i}) has a {} x {} or singular matrix where an invertible {size} x {size} one is required",
                m.rows(),
                m.cols()
            )));
            shapes_ok = false;
            break;
        }
    }
    if shapes_ok {
        if let Some(&(i_p, i)) = sup.iter().find(|p| !xi.weakening.contains_key(p)) {
            out.push(IntwViolation::WeakeningMalformed(format!(
                "supported pair ({i_p}, {i}) has no weakening data"
            )));
            shapes_ok = false;
        }
    }
    if !(invariant && shapes_ok) {
        return out;
    }

    let e = xi.group.identity();
    for (&(i_p, i), mats) in &xi.weakening {
        if !mats[e].is_identity() {
            out.push(IntwViolation::WeakeningNotNormalized(format!(
                "pair ({i_p}, {i}) is not the identity at the group unit"
            )));
            break;
        }
    }

    let law = |&(pair, g1, g2): &((usize, usize), usize, usize)| -> bool {
        let (i_p, i) = pair;
        let g12 = xi.group.mul(g1, g2);
        let c_vals = q.c.get(&[g1, g2]);
        let cp_vals = qp.c.get(&[g1, g2]);
        let factor = root(n_order, (c_vals[i] + n_order - cp_vals[i_p]) % n_order);
        let moved = (rhop_inv[g1].apply(i_p), rho_inv[g1].apply(i));
        let lhs = &xi.weakening[&pair][g12];
        let rhs = scale(
            &xi.weakening[&pair][g1]
                .mul(&xi.weakening[&moved][g2])
                .expect("weakening sizes agree along an orbit"),
            &factor,
        );
        *lhs == rhs
    };
    let mut grid = Vec::with_capacity(sup.len() * order * order);
    for &pair in &sup {
        for g1 in 0..order {
            for g2 in 0..order {
                grid.push((pair, g1, g2));
            }
        }
    }
    if !exec::all(&grid, law) {
        let (pair, g1, g2) = *grid
            .iter()
            .find(|item| !law(item))
            .expect("a failing item exists when the sweep fails");
        out.push(IntwViolation::TwistedLawFails(format!(
            "at pair {pair:?} and elements ({g1}, {g2})"
        )));
    }
    out
}

/// Validates an intertwiner against its space: endpoint agreement plus all
/// structural invariants.
pub fn validate_1intertwiner(xi: &OneIntertwiner, space: &IntertwinerSpace) -> Vec<IntwViolation> {
    let mut out = Vec::new();
    if xi.group != space.group {
        out.push(IntwViolation::EndpointMismatch(
            "the group differs from the space's group".into(),
        ));
    }
    if xi.source != space.source || xi.target != space.target {
        out.push(IntwViolation::EndpointMismatch(
            "the endpoint quadruples differ from the space's".into(),
        ));
    }
    if !out.is_empty() {
        return out;
    }
    validate_parts(xi)
}

/// The intertwiner carried by an equivalence witness `(sigma, x)` between
/// quadruples: the permutation rank matrix of `sigma` with plain gauge and
/// scalar weakening read off the degree-1 cochain `x`.
pub fn equivalence_intertwiner(
    group: &FinGroup,
    source: &RepQuadruple,
    target: &RepQuadruple,
    sigma: &Perm,
    x: &Cochain,
) -> OneIntertwiner {
    let order = source.scalar_order;
    let rank = RankMatrix::from_perm(sigma);
    let weakening = (0..source.n)
        .map(|j| {
            let i_p = sigma.apply(j);
            let mats = group
                .elements()
                .map(|g| {
                    CycloMatrix::from_fn(1, 1, |_, _| root(order, x.get(&[g])[i_p]))
                })
                .collect();
            ((i_p, j), mats)
        })
        .collect();
    OneIntertwiner {
        group: group.clone(),
        source: source.clone(),
        target: target.clone(),
        gauge: Gauge::identity(rank.clone()),
        rank,
        weakening,
    }
}

/// Composes two intertwiners.  The rank is the product, the gauge is the
/// lazy composite of the underlying 1-morphisms, and the weakening is the
/// blockwise pasting of the two translation squares: a gauge value, the
/// direct sum of inner weakenings, the reordering permutation, the direct
/// sum of outer weakenings along the translated index, and an inverse gauge
/// value at the translated row.  The output is validated.
pub fn compose_1intertwiners(
    outer: &OneIntertwiner,
    inner: &OneIntertwiner,
) -> Result<OneIntertwiner, IntwError> {
    if outer.group != inner.group || outer.source != inner.target {
        return Err(IntwError::RepMismatch);
    }
    let composite = compose1(&outer.morphism(), &inner.morphism())?;
    let group = &inner.group;
    let n_mid = inner.target.n;
    let rho = &inner.source.rho;
    let mid_rho = &inner.target.rho;
    let out_rho = &outer.target.rho;
    let rank_hat = composite.rank().clone();

    let mut weakening = BTreeMap::new();
    for (i_pp, i) in support(&rank_hat) {
        let mats: Vec<CycloMatrix> = group
            .elements()
            .map(|g| {
                let j = rho[g].inv().apply(i);
                let col_i = column(&inner.rank, i);
                let col_j = column(&inner.rank, j);
                let f1 = outer.gauge.eval(i_pp, &col_i);
                let inner_sum: Vec<CycloMatrix> = (0..n_mid)
                    .map(|i_p| {
                        let block = match inner.weakening.get(&(i_p, i)) {
                            Some(mats) => mats[g].clone(),
                            None => CycloMatrix::identity(0),
                        };
                        CycloMatrix::identity(us(outer.rank.get(i_pp, i_p))).kronecker(&block)
                    })
                    .collect();
                let f2 = CycloMatrix::direct_sum_all(&inner_sum);
                let f3 = shuffle_perm(
                    outer.rank.row(i_pp),
                    &RankMatrix::from_perm(&mid_rho[g]),
                    &col_j,
                );
                let outer_sum: Vec<CycloMatrix> = (0..n_mid)
                    .map(|i_p| {
                        let moved = mid_rho[g].apply(i_p);
                        let block = match outer.weakening.get(&(i_pp, moved)) {
                            Some(mats) => mats[g].clone(),
                            None => CycloMatrix::identity(0),
                        };
                        block.kronecker(&CycloMatrix::identity(us(inner.rank.get(i_p, j))))
                    })
                    .collect();
                let f4 = CycloMatrix::direct_sum_all(&outer_sum);
                let f5 = outer
                    .gauge
                    .eval(out_rho[g].inv().apply(i_pp), &col_j)
                    .inverse()
                    .expect("gauge values are invertible");
                f1.mul(&f2)
                    .and_then(|m| m.mul(&f3))
                    .and_then(|m| m.mul(&f4))
                    .and_then(|m| m.mul(&f5))
                    .expect("pasting factors have matching sizes")
            })
            .collect();
        weakening.insert((i_pp, i), mats);
    }

    let xi = OneIntertwiner {
        group: group.clone(),
        source: inner.source.clone(),
        target: outer.target.clone(),
        rank: rank_hat,
        gauge: composite.gauge().clone(),
        weakening,
    };
    let v = validate_parts(&xi);
    if v.is_empty() {
        Ok(xi)
    } else {
        Err(IntwError::Invalid(v))
    }
}

/// A 2-cell between parallel intertwiners: one matrix block per pair
/// supported on both sides, commuting with the two weakenings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoIntertwiner {
    source: OneIntertwiner,
    target: OneIntertwiner,
    blocks: BTreeMap<(usize, usize), CycloMatrix>,
}

impl TwoIntertwiner {
    /// Builds a 2-cell, checking that the endpoints are parallel and that
    /// the blocks sit exactly on the common support with the right shapes.
    pub fn new(
        source: OneIntertwiner,
        target: OneIntertwiner,
        blocks: BTreeMap<(usize, usize), CycloMatrix>,
    ) -> Result<Self, IntwError> {
        if source.group != target.group
            || source.source != target.source
            || source.target != target.target
        {
            return Err(IntwError::RepMismatch);
        }
        let common: Vec<(usize, usize)> = support(&source.rank)
            .into_iter()
            .filter(|&(i_p, i)| target.rank.get(i_p, i) > 0)
            .collect();
        for &pair in &common {
            let rows = us(target.rank.get(pair.0, pair.1));
            let cols = us(source.rank.get(pair.0, pair.1));
            match blocks.get(&pair) {
                None => {
                    return Err(IntwError::Invalid(vec![IntwViolation::BlocksMalformed(
                        format!("pair {pair:?} on the common support has no block"),
                    )]))
                }
                Some(b) if b.rows() != rows || b.cols() != cols => {
                    return Err(IntwError::Invalid(vec![IntwViolation::BlocksMalformed(
                        format!("block at {pair:?} must be {rows} x {cols}"),
                    )]))
                }
                Some(_) => {}
            }
        }
        if blocks.len() != common.len() {
            return Err(IntwError::Invalid(vec![IntwViolation::BlocksMalformed(
                "blocks outside the common support".into(),
            )]));
        }
        Ok(TwoIntertwiner {
            source,
            target,
            blocks,
        })
    }

    /// The zero 2-cell between two parallel intertwiners.
    pub fn zero(source: &OneIntertwiner, target: &OneIntertwiner) -> Result<Self, IntwError> {
        let blocks = support(&source.rank)
            .into_iter()
            .filter(|&(i_p, i)| target.rank.get(i_p, i) > 0)
            .map(|pair| {
                let rows = us(target.rank.get(pair.0, pair.1));
                let cols = us(source.rank.get(pair.0, pair.1));
                (pair, CycloMatrix::zero(rows, cols))
            })
            .collect();
        TwoIntertwiner::new(source.clone(), target.clone(), blocks)
    }

    /// The identity 2-cell on an intertwiner.
    pub fn identity(xi: &OneIntertwiner) -> Self {
        let blocks = support(&xi.rank)
            .into_iter()
            .map(|pair| (pair, CycloMatrix::identity(us(xi.rank.get(pair.0, pair.1)))))
            .collect();
        TwoIntertwiner {
            source: xi.clone(),
            target: xi.clone(),
            blocks,
        }
    }

    pub fn source(&self) -> &OneIntertwiner {
        &self.source
    }

    pub fn target(&self) -> &OneIntertwiner {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), CycloMatrix> {
        &self.blocks
    }

    pub fn block(&self, pair: (usize, usize)) -> Option<&CycloMatrix> {
        self.blocks.get(&pair)
    }

    /// Whether every block is square and invertible.
    pub fn is_iso(&self) -> bool {
        self.source.rank == self.target.rank
            && self.blocks.values().all(CycloMatrix::is_invertible)
    }

    /// The underlying 2-morphism on the full grid, with zero blocks away
    /// from the common support.
    pub fn morphism(&self) -> TwoMorphism {
        let src = self.source.morphism();
        let tgt = self.target.morphism();
        let grid: Vec<Vec<CycloMatrix>> = (0..self.target.rank.rows())
            .map(|i_p| {
                (0..self.target.rank.cols())
                    .map(|i| match self.blocks.get(&(i_p, i)) {
                        Some(b) => b.clone(),
                        None => CycloMatrix::zero(
                            us(self.target.rank.get(i_p, i)),
                            us(self.source.rank.get(i_p, i)),
                        ),
                    })
                    .collect()
            })
            .collect();
        TwoMorphism::new(src, tgt, grid).expect("stored blocks have the grid shapes")
    }
}

/// Validates a 2-cell between the two given intertwiners: endpoint
/// agreement, block shapes, and equivariance against both weakenings.  The
/// equivariance sweep runs data-parallel over the `(pair, g)` grid.
pub fn validate_2intertwiner(
    t: &TwoIntertwiner,
    xi: &OneIntertwiner,
    xibar: &OneIntertwiner,
) -> Vec<IntwViolation> {
    let mut out = Vec::new();
    if t.source != *xi || t.target != *xibar {
        out.push(IntwViolation::EndpointMismatch(
            "the cell's endpoints are not the given intertwiners".into(),
        ));
        return out;
    }
    let q = &xi.source;
    let qp = &xi.target;
    let rho_inv: Vec<Perm> = q.rho.iter().map(Perm::inv).collect();
    let rhop_inv: Vec<Perm> = qp.rho.iter().map(Perm::inv).collect();
    let pairs: Vec<(usize, usize)> = t.blocks.keys().copied().collect();
    let zero_block = |pair: (usize, usize)| {
        CycloMatrix::zero(
            us(xibar.rank.get(pair.0, pair.1)),
            us(xi.rank.get(pair.0, pair.1)),
        )
    };
    let check = |&(pair, g): &((usize, usize), usize)| -> bool {
        let (i_p, i) = pair;
        let moved = (rhop_inv[g].apply(i_p), rho_inv[g].apply(i));
        let t_moved = t
            .blocks
            .get(&moved)
            .cloned()
            .unwrap_or_else(|| zero_block(moved));
        let lhs = t.blocks[&pair]
            .mul(&xi.weakening[&pair][g])
            .expect("block and weakening sizes agree");
        let rhs = xibar.weakening[&pair][g]
            .mul(&t_moved)
            .expect("weakening and translated block sizes agree");
        lhs == rhs
    };
    let mut grid = Vec::with_capacity(pairs.len() * xi.group.order());
    for &pair in &pairs {
        for g in xi.group.elements() {
            grid.push((pair, g));
        }
    }
    if !exec::all(&grid, check) {
        let (pair, g) = *grid
            .iter()
            .find(|item| !check(item))
            .expect("a failing item exists when the sweep fails");
        out.push(IntwViolation::BlockEquivarianceFails(format!(
            "at pair {pair:?} and element {g}"
        )));
    }
    out
}

/// Vertical (blockwise) composition of 2-cells.
pub fn vcompose_2intertwiners(
    t2: &TwoIntertwiner,
    t1: &TwoIntertwiner,
) -> Result<TwoIntertwiner, IntwError> {
    if t1.target != t2.source {
        return Err(IntwError::NotComposable);
    }
    let src = &t1.source;
    let tgt = &t2.target;
    let blocks = support(&src.rank)
        .into_iter()
        .filter(|&(i_p, i)| tgt.rank.get(i_p, i) > 0)
        .map(|pair| {
            let rows = us(tgt.rank.get(pair.0, pair.1));
            let cols = us(src.rank.get(pair.0, pair.1));
            let value = match (t2.blocks.get(&pair), t1.blocks.get(&pair)) {
                (Some(b2), Some(b1)) => b2.mul(b1).expect("middle block sizes agree"),
                // The middle rank vanishes there, so the composite block is
                // the zero map of the outer shapes.
                _ => CycloMatrix::zero(rows, cols),
            };
            (pair, value)
        })
        .collect();
    let out = TwoIntertwiner::new(src.clone(), tgt.clone(), blocks)?;
    let v = validate_2intertwiner(&out, &out.source.clone(), &out.target.clone());
    if v.is_empty() {
        Ok(out)
    } else {
        Err(IntwError::Invalid(v))
    }
}

/// Horizontal composition of 2-cells along composable intertwiners, through
/// the gauge-corrected block formula of the underlying 2-morphisms.
pub fn hcompose_2intertwiners(
    outer: &TwoIntertwiner,
    inner: &TwoIntertwiner,
) -> Result<TwoIntertwiner, IntwError> {
    if outer.source.source != inner.source.target || outer.source.group != inner.source.group {
        return Err(IntwError::NotComposable);
    }
    let new_source = compose_1intertwiners(&outer.source, &inner.source)?;
    let new_target = compose_1intertwiners(&outer.target, &inner.target)?;
    let pasted = hcompose2(&outer.morphism(), &inner.morphism())?;
    let blocks = support(&new_source.rank)
        .into_iter()
        .filter(|&(i_pp, i)| new_target.rank.get(i_pp, i) > 0)
        .map(|pair| (pair, pasted.block(pair.0, pair.1).clone()))
        .collect();
    let out = TwoIntertwiner::new(new_source, new_target, blocks)?;
    let v = validate_2intertwiner(&out, &out.source.clone(), &out.target.clone());
    if v.is_empty() {
        Ok(out)
    } else {
        Err(IntwError::Invalid(v))
    }
}

/// Induces an intertwiner supported on a single aligned orbit from a
/// projective representation of the base point's stabilizer whose
/// multiplier is the restricted orbit cocycle.  The rank is constant on the
/// orbit, the gauge is plain, and the weakening translates the stabilizer
/// data along the transversal, normalized to the identity on transversal
/// elements.  The output is validated.
pub fn induce_intertwiner(
    space: &IntertwinerSpace,
    orbit: usize,
    dim: usize,
    pi: &BTreeMap<usize, CycloMatrix>,
) -> Result<OneIntertwiner, IntwError> {
    let orb = &space.orbits[orbit];
    let z = space.cocycles[orbit].as_ref().ok_or_else(|| {
        IntwError::InvalidStabilizerRep("the selected orbit is not aligned".into())
    })?;
    let group = &space.group;
    let n_order = space.scalar_order;
    let e = group.identity();

    let stab: Vec<usize> = orb.stabilizer.clone();
    if pi.keys().copied().collect::<Vec<_>>() != stab {
        return Err(IntwError::InvalidStabilizerRep(
            "the data must be keyed exactly by the stabilizer elements".into(),
        ));
    }
    for (h, m) in pi {
        if m.rows() != dim || m.cols() != dim || !m.is_invertible() {
            return Err(IntwError::InvalidStabilizerRep(format!(
                "value at {h} must be an invertible {dim} x {dim} matrix"
            )));
        }
    }
    if !pi[&e].is_identity() {
        return Err(IntwError::InvalidStabilizerRep(
            "the value at the unit must be the identity".into(),
        ));
    }
    for &h1 in &stab {
        for &h2 in &stab {
            let h12 = group.mul(h1, h2);
            let mult = root(n_order, (n_order - z.get(&[h1, h2])[0]) % n_order);
            let rhs = scale(
                &pi[&h1].mul(&pi[&h2]).expect("stabilizer values are square"),
                &mult,
            );
            if pi[&h12] != rhs {
                return Err(IntwError::InvalidStabilizerRep(format!(
                    "the twisted product law fails at ({h1}, {h2})"
                )));
            }
        }
    }

    let index: BTreeMap<(usize, usize), usize> = orb
        .points
        .iter()
        .enumerate()
        .map(|(k, &p)| (p, k))
        .collect();
    let mut entries = vec![vec![0u64; space.source.n]; space.target.n];
    for &(i_p, i) in &orb.points {
        entries[i_p][i] = dim as u64;
    }
    let rank = RankMatrix::from_rows(entries);
    let mut weakening = BTreeMap::new();
    for (pos, &p) in orb.points.iter().enumerate() {
        let t_p = orb.transversal[pos];
        let mats: Vec<CycloMatrix> = group
            .elements()
            .map(|g| {
                let q_pos = index[&pair_act(&space.source, &space.target, p, g)];
                let t_q = orb.transversal[q_pos];
                let gamma = group.mul(group.mul(t_p, g), group.inv(t_q));
                debug_assert!(stab.binary_search(&gamma).is_ok());
                let exp = (z.get(&[t_p, g])[0] + n_order - z.get(&[gamma, t_q])[0]) % n_order;
                scale(&pi[&gamma], &root(n_order, exp))
            })
            .collect();
        weakening.insert(p, mats);
    }

    let xi = OneIntertwiner {
        group: group.clone(),
        source: space.source.clone(),
        target: space.target.clone(),
        gauge: Gauge::identity(rank.clone()),
        rank,
        weakening,
    };
    let v = validate_parts(&xi);
    if v.is_empty() {
        Ok(xi)
    } else {
        Err(IntwError::Invalid(v))
    }
}

/// Per-orbit datum of a hom-category summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub points: Vec<(usize, usize)>,
    pub stabilizer: Vec<usize>,
    pub intertwining: bool,
    /// The difference cocycle of an aligned orbit.
    pub cocycle: Option<Cochain>,
    /// Whether the cocycle is a coboundary, i.e. whether the projective
    /// stabilizer data over this orbit untwists to plain representations.
    pub cocycle_class_trivial: Option<bool>,
}

/// The character case: both quadruples are 1-dimensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterReport {
    /// Whether the scalar parts agree, so the single orbit carries
    /// intertwiners at all.
    pub aligned: bool,
    /// Whether the difference cocycle of the two cochains is a coboundary.
    pub cocycle_class_trivial: bool,
    /// Aligned with a trivial class: the hom-category is then equivalent to
    /// plain matrix representations of the object group.
    pub equivalent_to_matrix_reps: bool,
}

/// A finite description of the category of intertwiners between two
/// quadruples: one report per orbit, the terminality flag, and the
/// classification statement for the character case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCategorySummary {
    pub terminal: bool,
    pub orbits: Vec<OrbitReport>,
    pub character: Option<CharacterReport>,
}

/// Summarizes the hom-category between two quadruples from the orbit
/// decomposition: aligned orbits with their cocycles and triviality of the
/// cocycle classes, terminality when nothing aligns, and the projective
/// classification statement when both sides are characters.
pub fn hom_category_summary(
    twogroup: &SpecialTwoGroup,
    source: &RepQuadruple,
    target: &RepQuadruple,
) -> Result<HomCategorySummary, IntwError> {
    let space = build_space(twogroup, source, target)?;
    let orbits: Vec<OrbitReport> = space
        .orbits
        .iter()
        .enumerate()
        .map(|(k, orb)| {
            let cocycle = space.cocycles[k].clone();
            let trivial = cocycle.as_ref().map(|z| solve_coboundary(z).is_some());
            OrbitReport {
                points: orb.points.clone(),
                stabilizer: orb.stabilizer.clone(),
                intertwining: space.intertwining[k],
                cocycle,
                cocycle_class_trivial: trivial,
            }
        })
        .collect();
    let character = (source.n == 1 && target.n == 1).then(|| {
        let aligned = space.intertwining[0];
        let trivial = orbits[0].cocycle_class_trivial.unwrap_or(false);
        CharacterReport {
            aligned,
            cocycle_class_trivial: trivial,
            equivalent_to_matrix_reps: aligned && trivial,
        }
    });
    Ok(HomCategorySummary {
        terminal: space.is_terminal(),
        orbits,
        character,
    })
}

/// Checks, on concrete endomorphism samples of a fixed character, that
/// composition of intertwiners matches the tensor product of the underlying
/// group representations up to the gauge-value structure map: the composite
/// weakening is the conjugated Kronecker product, the structure maps
/// satisfy the unit and associativity coherences exactly, and horizontal
/// composition of 2-cells is the conjugated Kronecker product of blocks.
pub fn check_monoidal_equivalence_end_trivial(
    twogroup: &SpecialTwoGroup,
    samples: &[OneIntertwiner],
) -> Result<bool, IntwError> {
    let Some(first) = samples.first() else {
        return Ok(true);
    };
    let q = first.source_rep().clone();
    if q.n != 1 {
        return Err(IntwError::RepMismatch);
    }
    for xi in samples {
        if xi.source != q || xi.target != q || xi.group != *twogroup.group() {
            return Err(IntwError::RepMismatch);
        }
        let v = validate_parts(xi);
        if !v.is_empty() {
            return Err(IntwError::Invalid(v));
        }
    }
    let group = twogroup.group();
    let n_order = q.scalar_order;
    let dim = |xi: &OneIntertwiner| xi.rank().get(0, 0);
    // Structure map: the gauge value of the outer object at the rank point
    // of the inner one.
    let structure = |a: &OneIntertwiner, r_inner: u64| a.gauge.eval(0, &[r_inner]);
    let ident = OneIntertwiner::identity(group, &q);

    let mut ok = true;
    for a in samples {
        // Unit coherences: composing with the identity object changes
        // nothing, and the structure maps against it are plain.
        let left = compose_1intertwiners(&ident, a)?;
        let right = compose_1intertwiners(a, &ident)?;
        ok &= left.rank == a.rank && right.rank == a.rank;
        ok &= left.weakening == a.weakening && right.weakening == a.weakening;
        ok &= structure(a, 1).is_identity() && structure(&ident, dim(a)).is_identity();
    }
    for a in samples {
        for b in samples {
            let ab = compose_1intertwiners(a, b)?;
            let f = structure(a, dim(b));
            let f_inv = f.inverse().expect("gauge values are invertible");
            for g in group.elements() {
                // The composite weakening is the conjugated Kronecker
                // product of the two underlying representations.
                let kron = a.weakening[&(0, 0)][g].kronecker(&b.weakening[&(0, 0)][g]);
                let expected = f
                    .mul(&kron)
                    .and_then(|m| m.mul(&f_inv))
                    .expect("sizes agree");
                ok &= ab.weakening[&(0, 0)][g] == expected;
            }
            // Naturality against scalar 2-cells.
            let spin = root(n_order, 1);
            let cell = |xi: &OneIntertwiner| {
                let mut blocks = BTreeMap::new();
                blocks.insert(
                    (0, 0),
                    scale(&CycloMatrix::identity(us(dim(xi))), &spin),
                );
                TwoIntertwiner::new(xi.clone(), xi.clone(), blocks)
                    .expect("scalar cells have the right shape")
            };
            let pasted = hcompose_2intertwiners(&cell(a), &cell(b))?;
            let block = cell(a).blocks[&(0, 0)].kronecker(&cell(b).blocks[&(0, 0)]);
            let expected = f
                .mul(&block)
                .and_then(|m| m.mul(&f_inv))
                .expect("sizes agree");
            ok &= pasted.blocks[&(0, 0)] == expected;
        }
    }
    for a in samples {
        for b in samples {
            for c in samples {
                // Associativity coherence of the structure maps.
                let ab = compose_1intertwiners(a, b)?;
                let bc = compose_1intertwiners(b, c)?;
                let lhs = structure(&ab, dim(c))
                    .mul(&structure(a, dim(b)).kronecker(&CycloMatrix::identity(us(dim(c)))))
                    .expect("sizes agree");
                let rhs = structure(a, dim(&bc))
                    .mul(&CycloMatrix::identity(us(dim(a))).kronecker(&structure(b, dim(c))))
                    .expect("sizes agree");
                ok &= lhs == rhs;
            }
        }
    }
    Ok(ok)
}

/// The permutational quadruple of a finite group action.
pub fn finset_rep(
    twogroup: &SpecialTwoGroup,
    scalar_order: u64,
    rho: Vec<Perm>,
) -> Result<RepQuadruple, RepError> {
    RepQuadruple::permutational(twogroup, scalar_order, rho)
}

/// The intertwiner of an equivariant map of finite actions: the 0/1 rank
/// matrix of the map's graph with plain gauge and identity weakening.
pub fn finset_map(
    group: &FinGroup,
    source: &RepQuadruple,
    target: &RepQuadruple,
    f: &[usize],
) -> Result<OneIntertwiner, IntwError> {
    if f.len() != source.n || f.iter().any(|&v| v >= target.n) {
        return Err(IntwError::NotEquivariant(format!(
            "the map must send {} points into {} points",
            source.n, target.n
        )));
    }
    for g in group.elements() {
        for i in 0..source.n {
            if target.rho[g].apply(f[i]) != f[source.rho[g].apply(i)] {
                return Err(IntwError::NotEquivariant(format!(
                    "element {g} moves point {i} incompatibly"
                )));
            }
        }
    }
    let mut entries = vec![vec![0u64; source.n]; target.n];
    for (i, &fi) in f.iter().enumerate() {
        entries[fi][i] = 1;
    }
    let rank = RankMatrix::from_rows(entries);
    let weakening = f
        .iter()
        .enumerate()
        .map(|(i, &fi)| ((fi, i), vec![CycloMatrix::identity(1); group.order()]))
        .collect();
    let xi = OneIntertwiner {
        group: group.clone(),
        source: source.clone(),
        target: target.clone(),
        gauge: Gauge::identity(rank.clone()),
        rank,
        weakening,
    };
    let v = validate_parts(&xi);
    if v.is_empty() {
        Ok(xi)
    } else {
        Err(IntwError::Invalid(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::cohomologous_witness;
    use crate::rep::{equivalent_quadruples, RepQuadruple};
    use crate::twomat::agree_on_box;
    use proptest::prelude::*;

    fn c2() -> FinGroup {
        FinGroup::cyclic(2)
    }

    fn scalar_module(group: &FinGroup, order: u64) -> FinModule {
        FinModule::scalar_power(
            group.clone(),
            1,
            order,
            &vec![Perm::identity(1); group.order()],
        )
    }

    /// Split 2-group over `Z/2` with scalar loops of order 4 and trivial
    /// action.
    fn flat4() -> SpecialTwoGroup {
        let g = c2();
        let m = scalar_module(&g, 4);
        SpecialTwoGroup::split(g, m).expect("split data is coherent")
    }

    /// A character quadruple over [`flat4`]: scalar part `b` on the
    /// generator and cochain value `v` at the pair `(1, 1)`.
    fn character(tg: &SpecialTwoGroup, b: u64, v: u64) -> RepQuadruple {
        let group = tg.group().clone();
        let module = FinModule::scalar_power(
            group.clone(),
            1,
            4,
            &vec![Perm::identity(1); group.order()],
        );
        let mut c = Cochain::zero(module, 2);
        if v % 4 != 0 {
            c.set(&[1, 1], vec![v % 4]);
        }
        RepQuadruple::new(tg, 1, 4, vec![Perm::identity(1); 2], vec![vec![b]], c)
            .expect("character data is valid")
    }

    /// The 2-point permutational quadruple of the swap action of `Z/2`.
    fn swap_rep(tg: &SpecialTwoGroup) -> RepQuadruple {
        RepQuadruple::permutational(
            tg,
            4,
            vec![Perm::identity(2), Perm::new(vec![1, 0])],
        )
        .expect("permutational data is valid")
    }

    /// An endomorphism object of the trivial character: rank `r`, a gauge
    /// value at the point `[r]`, and a plain representation of `Z/2` sending
    /// the generator to `gen` (so `gen * gen = 1` is required).
    fn end_object(
        tg: &SpecialTwoGroup,
        r: u64,
        gauge_value: Option<CycloMatrix>,
        gen: CycloMatrix,
    ) -> OneIntertwiner {
        let q = character(tg, 0, 0);
        let rank = RankMatrix::from_rows(vec![vec![r]]);
        let gauge = match gauge_value {
            Some(m) => Gauge::from_entries(rank.clone(), [(0, vec![r], m)])
                .expect("sample gauge value is invertible"),
            None => Gauge::identity(rank.clone()),
        };
        let mut weakening = BTreeMap::new();
        weakening.insert((0, 0), vec![CycloMatrix::identity(us(r)), gen]);
        OneIntertwiner::from_parts(
            tg.group().clone(),
            q.clone(),
            q,
            rank,
            gauge,
            weakening,
        )
    }

    fn mat2(a: i64, b: i64, c: i64, d: i64) -> CycloMatrix {
        CycloMatrix::from_rows(vec![
            vec![Cyclotomic::from_int(a), Cyclotomic::from_int(b)],
            vec![Cyclotomic::from_int(c), Cyclotomic::from_int(d)],
        ])
    }

    fn monomial4(images: &[usize], exps: &[u64]) -> CycloMatrix {
        let n = images.len();
        CycloMatrix::from_fn(n, n, |i, j| {
            if images[j] == i {
                root(4, exps[j])
            } else {
                Cyclotomic::zero(4)
            }
        })
    }

    #[test]
    fn spaces_distinguish_aligned_and_misaligned_characters() {
        let tg = flat4();
        let q = character(&tg, 0, 0);
        let misaligned = character(&tg, 2, 0);
        let shifted = character(&tg, 0, 2);

        let bad = build_space(&tg, &q, &misaligned).expect("space builds");
        assert_eq!(bad.orbits().len(), 1);
        assert!(!bad.is_intertwining(0));
        assert!(bad.is_terminal());
        assert!(bad.cocycle(0).is_none());

        let good = build_space(&tg, &q, &shifted).expect("space builds");
        assert!(good.is_intertwining(0));
        assert!(!good.is_terminal());
        let z = good.cocycle(0).expect("aligned orbit carries a cocycle");
        assert_eq!(z.get(&[1, 1]), vec![2]);
    }

    #[test]
    fn orbit_cocycles_are_closed_and_see_only_cohomology_classes() {
        let tg = flat4();
        let q = swap_rep(&tg);
        let space = build_space(&tg, &q, &q).expect("space builds");
        assert_eq!(space.orbits().len(), 2);
        for k in 0..2 {
            assert!(space.is_intertwining(k));
            assert!(space.cocycle(k).expect("aligned").is_cocycle());
        }

        // Shift the source cochain by a coboundary; the orbit classes must
        // not move.
        let module = q.c.module().clone();
        let mut x = Cochain::zero(module.clone(), 1);
        x.set(&[1], vec![1, 3]);
        let dx = x.coboundary();
        let shifted_c = Cochain::from_fn(module, 2, |t| {
            q.c.get(t)
                .iter()
                .zip(dx.get(t))
                .map(|(a, b)| (a + b) % 4)
                .collect()
        });
        let mut q2 = q.clone();
        q2.c = shifted_c;
        assert!(validate_quadruple(&q2, &tg).is_empty());
        let space2 = build_space(&tg, &q2, &q).expect("space builds");
        for k in 0..2 {
            let z1 = space.cocycle(k).expect("aligned");
            let z2 = space2.cocycle(k).expect("aligned");
            assert!(cohomologous_witness(z2, z1)
                .expect("comparable cochains")
                .is_some());
        }
    }

    #[test]
    fn identity_and_equivalence_witnesses_validate() {
        let tg = flat4();
        let q = swap_rep(&tg);
        let space = build_space(&tg, &q, &q).expect("space builds");
        let ident = OneIntertwiner::identity(tg.group(), &q);
        assert!(validate_1intertwiner(&ident, &space).is_empty());
        assert!(validate_1intertwiner(&OneIntertwiner::zero(tg.group(), &q, &q), &space).is_empty());

        // A pair of two-dimensional quadruples equivalent only through the
        // swap, with cochains differing by a genuine coboundary, so the
        // witness has both a nontrivial permutation and a nonzero scalar
        // part.
        let group = tg.group().clone();
        let module =
            FinModule::scalar_power(group.clone(), 2, 4, &vec![Perm::identity(2); 2]);
        let mut c1 = Cochain::zero(module.clone(), 2);
        c1.set(&[1, 1], vec![1, 3]);
        let a = RepQuadruple::new(
            &tg,
            2,
            4,
            vec![Perm::identity(2); 2],
            vec![vec![0, 2]],
            c1,
        )
        .expect("valid quadruple");
        // Swapped scalar part and swapped cochain shifted by the
        // coboundary of x(1) = (1, 1): the pair value moves by (2, 2).
        let mut c2 = Cochain::zero(module, 2);
        c2.set(&[1, 1], vec![(3 + 2) % 4, (1 + 2) % 4]);
        let b = RepQuadruple::new(
            &tg,
            2,
            4,
            vec![Perm::identity(2); 2],
            vec![vec![2, 0]],
            c2,
        )
        .expect("valid quadruple");
        let (sig, x) = equivalent_quadruples(&a, &b).expect("equivalent by the swap");
        assert_eq!(sig, Perm::new(vec![1, 0]));
        assert!(!x.is_zero());
        let xi = equivalence_intertwiner(&group, &a, &b, &sig, &x);
        let space_ab = build_space(&tg, &a, &b).expect("space builds");
        assert!(validate_1intertwiner(&xi, &space_ab).is_empty());
        assert_eq!(xi.rank(), &RankMatrix::from_perm(&sig));
    }

    #[test]
    fn violations_are_named_by_axiom() {
        let tg = flat4();
        let q = character(&tg, 0, 0);
        let group = tg.group().clone();

        // An endomorphism of the trivial character whose generator value
        // does not square to the identity breaks the twisted law.
        let xi = end_object(&tg, 1, None, CycloMatrix::from_fn(1, 1, |_, _| root(4, 1)));
        let v = validate_parts(&xi);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom(), "twisted-cocycle-law");

        // A rank that is not constant on the swap orbit.
        let qs = swap_rep(&tg);
        let rank = RankMatrix::from_rows(vec![vec![1, 0], vec![0, 0]]);
        let mut weakening = BTreeMap::new();
        weakening.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        let bad_rank = OneIntertwiner::from_parts(
            group.clone(),
            qs.clone(),
            qs.clone(),
            rank.clone(),
            Gauge::identity(rank),
            weakening,
        );
        assert_eq!(validate_parts(&bad_rank)[0].axiom(), "rank-invariance");

        // Support over mismatched scalar parts.
        let q2 = character(&tg, 2, 0);
        let rank = RankMatrix::from_rows(vec![vec![1]]);
        let mut weakening = BTreeMap::new();
        weakening.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        let bad_support = OneIntertwiner::from_parts(
            group.clone(),
            q.clone(),
            q2,
            rank.clone(),
            Gauge::identity(rank),
            weakening,
        );
        assert!(validate_parts(&bad_support)
            .iter()
            .any(|v| v.axiom() == "support-alignment"));

        // A weakening that is not the identity at the unit.
        let mut bad_unit = end_object(&tg, 1, None, CycloMatrix::identity(1));
        bad_unit.weakening.get_mut(&(0, 0)).expect("supported")[0] =
            CycloMatrix::from_fn(1, 1, |_, _| root(4, 2));
        assert!(validate_parts(&bad_unit)
            .iter()
            .any(|v| v.axiom() == "weakening-normalization"));

        // Missing weakening data.
        let mut bare = OneIntertwiner::identity(&group, &q);
        bare.weakening.clear();
        assert_eq!(validate_parts(&bare)[0].axiom(), "weakening-shape");
    }

    #[test]
    fn composition_respects_units_and_multiplies_ranks() {
        let tg = flat4();
        let q1 = character(&tg, 0, 0);
        let q2 = RepQuadruple::permutational(&tg, 4, vec![Perm::identity(2); 2])
            .expect("permutational data is valid");
        let group = tg.group().clone();

        // 1 -> 2: both columns filled; 2 -> 1: both rows filled.
        let up_rank = RankMatrix::from_rows(vec![vec![1], vec![1]]);
        let mut up_w = BTreeMap::new();
        up_w.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        up_w.insert((1, 0), vec![CycloMatrix::identity(1); 2]);
        let up = OneIntertwiner::from_parts(
            group.clone(),
            q1.clone(),
            q2.clone(),
            up_rank.clone(),
            Gauge::identity(up_rank),
            up_w,
        );
        assert!(validate_parts(&up).is_empty());

        let down_rank = RankMatrix::from_rows(vec![vec![1, 1]]);
        let mut down_w = BTreeMap::new();
        down_w.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        down_w.insert((0, 1), vec![CycloMatrix::identity(1); 2]);
        let down = OneIntertwiner::from_parts(
            group.clone(),
            q2.clone(),
            q1.clone(),
            down_rank.clone(),
            Gauge::identity(down_rank),
            down_w,
        );
        assert!(validate_parts(&down).is_empty());

        let through = compose_1intertwiners(&down, &up).expect("composable");
        assert_eq!(through.rank(), &RankMatrix::from_rows(vec![vec![2]]));
        assert!(through.weakening()[&(0, 0)].iter().all(CycloMatrix::is_identity));

        // Unit laws: ranks and weakenings agree exactly, gauges agree as
        // functions.
        let ident1 = OneIntertwiner::identity(&group, &q1);
        let ident2 = OneIntertwiner::identity(&group, &q2);
        let left = compose_1intertwiners(&ident2, &up).expect("composable");
        let right = compose_1intertwiners(&up, &ident1).expect("composable");
        for unit in [&left, &right] {
            assert_eq!(unit.rank(), up.rank());
            assert_eq!(unit.weakening(), up.weakening());
            assert!(agree_on_box(&unit.morphism(), &up.morphism(), 3));
        }

        assert_eq!(
            compose_1intertwiners(&up, &down).expect("composable").rank(),
            &RankMatrix::from_rows(vec![vec![1, 1], vec![1, 1]])
        );
        assert!(matches!(
            compose_1intertwiners(&up, &up),
            Err(IntwError::RepMismatch)
        ));
    }

    #[test]
    fn end_composites_conjugate_the_kronecker_product_by_the_gauge_value() {
        let tg = flat4();
        let j = monomial4(&[2, 0, 3, 1], &[0, 1, 2, 3]);
        let outer = end_object(&tg, 2, Some(j.clone()), mat2(0, 1, 1, 0));
        let inner = end_object(&tg, 2, None, mat2(1, 0, 0, -1));
        assert!(validate_parts(&outer).is_empty());
        assert!(validate_parts(&inner).is_empty());

        let through = compose_1intertwiners(&outer, &inner).expect("composable");
        let kron = mat2(0, 1, 1, 0).kronecker(&mat2(1, 0, 0, -1));
        let expected = j
            .mul(&kron)
            .and_then(|m| m.mul(&j.inverse().expect("invertible")))
            .expect("sizes agree");
        assert_eq!(through.weakening()[&(0, 0)][1], expected);
    }

    #[test]
    fn composition_is_associative_on_a_gauge_heavy_sample() {
        let tg = flat4();
        let group = tg.group().clone();
        let q1 = character(&tg, 0, 0);
        let q2 = RepQuadruple::permutational(&tg, 4, vec![Perm::identity(2); 2])
            .expect("permutational data is valid");

        // q1 -> q2 with a tabulated gauge on the rank column [1, 1].
        let a_rank = RankMatrix::from_rows(vec![vec![1], vec![1]]);
        let a_gauge = Gauge::from_entries(
            a_rank.clone(),
            [
                (0, vec![2], monomial4(&[1, 0], &[1, 0])),
                (1, vec![3], monomial4(&[2, 0, 1], &[0, 2, 3])),
            ],
        )
        .expect("gauge entries are invertible");
        let mut a_w = BTreeMap::new();
        a_w.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        a_w.insert(
            (1, 0),
            vec![CycloMatrix::identity(1), CycloMatrix::from_fn(1, 1, |_, _| root(4, 2))],
        );
        let a = OneIntertwiner::from_parts(
            group.clone(),
            q1.clone(),
            q2.clone(),
            a_rank.clone(),
            a_gauge,
            a_w,
        );
        assert!(validate_parts(&a).is_empty());

        // q2 -> q2 upper-triangular with gauge entries in both rows.
        let b_rank = RankMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]);
        let b_gauge = Gauge::from_entries(
            b_rank.clone(),
            [
                (0, vec![1, 1], mat2(1, 1, 0, 1)),
                (1, vec![1, 1], CycloMatrix::from_fn(1, 1, |_, _| root(4, 3))),
                (0, vec![2, 1], monomial4(&[1, 2, 0], &[1, 0, 2])),
            ],
        )
        .expect("gauge entries are invertible");
        let mut b_w = BTreeMap::new();
        for pair in [(0, 0), (0, 1), (1, 1)] {
            b_w.insert(
                pair,
                vec![
                    CycloMatrix::identity(1),
                    CycloMatrix::from_fn(1, 1, |_, _| Cyclotomic::from_int(-1)),
                ],
            );
        }
        let b = OneIntertwiner::from_parts(
            group.clone(),
            q2.clone(),
            q2.clone(),
            b_rank.clone(),
            b_gauge,
            b_w,
        );
        assert!(validate_parts(&b).is_empty());

        // q2 -> q1 with a size-2 weakening block.
        let c_rank = RankMatrix::from_rows(vec![vec![1, 2]]);
        let c_gauge = Gauge::from_entries(
            c_rank.clone(),
            [(0, vec![1, 1], monomial4(&[1, 0, 2], &[2, 1, 0]))],
        )
        .expect("gauge entries are invertible");
        let mut c_w = BTreeMap::new();
        c_w.insert((0, 0), vec![CycloMatrix::identity(1); 2]);
        c_w.insert((0, 1), vec![CycloMatrix::identity(2), mat2(0, 1, 1, 0)]);
        let c = OneIntertwiner::from_parts(
            group.clone(),
            q2.clone(),
            q1.clone(),
            c_rank.clone(),
            c_gauge,
            c_w,
        );
        assert!(validate_parts(&c).is_empty());

        let left = compose_1intertwiners(&compose_1intertwiners(&c, &b).expect("cb"), &a)
            .expect("(cb)a");
        let right = compose_1intertwiners(&c, &compose_1intertwiners(&b, &a).expect("ba"))
            .expect("c(ba)");
        assert_eq!(left.rank(), right.rank());
        assert_eq!(left.weakening(), right.weakening());
        assert!(agree_on_box(&left.morphism(), &right.morphism(), 4));
    }

    #[test]
    fn two_cells_compose_vertically_horizontally_and_interchange() {
        let tg = flat4();
        let swap = mat2(0, 1, 1, 0);
        let a = end_object(&tg, 2, Some(monomial4(&[3, 1, 0, 2], &[1, 0, 3, 0])), swap.clone());
        let b = end_object(&tg, 2, None, swap.clone());

        // Blocks commuting with the swap give valid endo-2-cells.
        let cell = |xi: &OneIntertwiner, m: CycloMatrix| {
            let mut blocks = BTreeMap::new();
            blocks.insert((0, 0), m);
            TwoIntertwiner::new(xi.clone(), xi.clone(), blocks).expect("shapes fit")
        };
        let t1 = cell(&a, mat2(1, 1, 1, 1));
        let t2 = cell(&a, mat2(2, 3, 3, 2));
        assert!(validate_2intertwiner(&t1, &a, &a).is_empty());
        assert!(validate_2intertwiner(&TwoIntertwiner::identity(&a), &a, &a).is_empty());
        assert!(validate_2intertwiner(&TwoIntertwiner::zero(&a, &a).expect("parallel"), &a, &a)
            .is_empty());

        // A block that does not commute with the swap is flagged.
        let bad = cell(&a, mat2(1, 0, 0, -1));
        assert_eq!(
            validate_2intertwiner(&bad, &a, &a)[0].axiom(),
            "block-equivariance"
        );

        let stacked = vcompose_2intertwiners(&t2, &t1).expect("parallel cells");
        assert_eq!(
            stacked.block((0, 0)).expect("supported"),
            &mat2(2, 3, 3, 2).mul(&mat2(1, 1, 1, 1)).expect("sizes agree")
        );

        let u1 = cell(&b, mat2(0, 2, 2, 0));
        let u2 = cell(&b, swap.clone());
        let side = hcompose_2intertwiners(&t1, &u1).expect("composable cells");
        assert!(validate_2intertwiner(&side, side.source(), side.target()).is_empty());

        // Interchange: stacking then pasting equals pasting then stacking.
        let pasted_then_stacked = vcompose_2intertwiners(
            &hcompose_2intertwiners(&t2, &u2).expect("cells"),
            &hcompose_2intertwiners(&t1, &u1).expect("cells"),
        )
        .expect("parallel");
        let stacked_then_pasted = hcompose_2intertwiners(
            &vcompose_2intertwiners(&t2, &t1).expect("parallel"),
            &vcompose_2intertwiners(&u2, &u1).expect("parallel"),
        )
        .expect("cells");
        assert_eq!(pasted_then_stacked.blocks(), stacked_then_pasted.blocks());
    }

    #[test]
    fn induction_from_stabilizer_data_validates() {
        let tg = flat4();

        // Free off-diagonal orbit of the swap action: the induced
        // intertwiner is the permutation line bundle.
        let qs = swap_rep(&tg);
        let space = build_space(&tg, &qs, &qs).expect("space builds");
        let off = (0..2)
            .find(|&k| space.orbits()[k].points.contains(&(0, 1)))
            .expect("the off-diagonal orbit exists");
        assert_eq!(space.orbits()[off].stabilizer, vec![0]);
        let mut pi = BTreeMap::new();
        pi.insert(0, CycloMatrix::identity(1));
        let line = induce_intertwiner(&space, off, 1, &pi).expect("free induction");
        assert_eq!(
            line.rank(),
            &RankMatrix::from_rows(vec![vec![0, 1], vec![1, 0]])
        );
        assert!(validate_1intertwiner(&line, &space).is_empty());

        // Full stabilizer on a fixed point: induction returns the
        // stabilizer representation itself.
        let q = character(&tg, 0, 0);
        let espace = build_space(&tg, &q, &q).expect("space builds");
        assert_eq!(espace.orbits()[0].stabilizer, vec![0, 1]);
        let mut pi = BTreeMap::new();
        pi.insert(0, CycloMatrix::identity(2));
        pi.insert(1, mat2(1, 0, 0, -1));
        let endo = induce_intertwiner(&espace, 0, 2, &pi).expect("full stabilizer");
        assert_eq!(endo.weakening_at((0, 0), 1).expect("supported"), &mat2(1, 0, 0, -1));

        // A twisted character pair needs a genuinely projective value.
        let shifted = character(&tg, 0, 2);
        let tspace = build_space(&tg, &q, &shifted).expect("space builds");
        let mut honest = BTreeMap::new();
        honest.insert(0, CycloMatrix::identity(1));
        honest.insert(1, CycloMatrix::identity(1));
        assert!(matches!(
            induce_intertwiner(&tspace, 0, 1, &honest),
            Err(IntwError::InvalidStabilizerRep(_))
        ));
        let mut projective = BTreeMap::new();
        projective.insert(0, CycloMatrix::identity(1));
        projective.insert(1, CycloMatrix::from_fn(1, 1, |_, _| root(4, 1)));
        let twisted = induce_intertwiner(&tspace, 0, 1, &projective).expect("projective induction");
        assert!(validate_1intertwiner(&twisted, &tspace).is_empty());
    }

    #[test]
    fn summaries_report_terminal_character_and_orbit_data() {
        let tg = flat4();
        let q = character(&tg, 0, 0);

        let terminal = hom_category_summary(&tg, &q, &character(&tg, 2, 0)).expect("summary");
        assert!(terminal.terminal);
        assert_eq!(
            terminal.character,
            Some(CharacterReport {
                aligned: false,
                cocycle_class_trivial: false,
                equivalent_to_matrix_reps: false,
            })
        );

        // Difference 2: a coboundary over the trivial action, so the class
        // is trivial.
        let even = hom_category_summary(&tg, &q, &character(&tg, 0, 2)).expect("summary");
        assert!(!even.terminal);
        assert_eq!(
            even.character,
            Some(CharacterReport {
                aligned: true,
                cocycle_class_trivial: true,
                equivalent_to_matrix_reps: true,
            })
        );

        // Difference 1 is not a coboundary: a genuinely projective case.
        let odd = hom_category_summary(&tg, &q, &character(&tg, 0, 1)).expect("summary");
        assert_eq!(
            odd.character,
            Some(CharacterReport {
                aligned: true,
                cocycle_class_trivial: false,
                equivalent_to_matrix_reps: false,
            })
        );

        // The swap action's self-hom category: two aligned orbits with
        // trivial classes.
        let qs = swap_rep(&tg);
        let swap_summary = hom_category_summary(&tg, &qs, &qs).expect("summary");
        assert!(!swap_summary.terminal);
        assert!(swap_summary.character.is_none());
        assert_eq!(swap_summary.orbits.len(), 2);
        for orbit in &swap_summary.orbits {
            assert!(orbit.intertwining);
            assert_eq!(orbit.cocycle_class_trivial, Some(true));
            assert_eq!(orbit.stabilizer, vec![0]);
        }
    }

    #[test]
    fn monoidal_equivalence_checks_pass_on_samples() {
        let tg = flat4();
        // The gauge value of a rank-2 endomorphism at the point [2] acts on
        // a 4-dimensional space.
        let unitriangular = CycloMatrix::from_fn(4, 4, |i, j| {
            Cyclotomic::from_int(i64::from(j >= i))
        });
        let samples = vec![
            end_object(&tg, 1, None, CycloMatrix::from_fn(1, 1, |_, _| Cyclotomic::from_int(-1))),
            end_object(&tg, 2, Some(unitriangular), mat2(0, 1, 1, 0)),
            end_object(
                &tg,
                2,
                Some(monomial4(&[1, 0, 3, 2], &[0, 3, 1, 2])),
                mat2(1, 0, 0, -1),
            ),
        ];
        assert!(check_monoidal_equivalence_end_trivial(&tg, &samples).expect("valid samples"));

        let broken = end_object(&tg, 1, None, CycloMatrix::from_fn(1, 1, |_, _| root(4, 1)));
        assert!(matches!(
            check_monoidal_equivalence_end_trivial(&tg, &[broken]),
            Err(IntwError::Invalid(_))
        ));
    }

    #[test]
    fn finset_maps_validate_compose_and_detect_non_equivariance() {
        let tg = flat4();
        let group = tg.group().clone();
        let swap2 = vec![Perm::identity(2), Perm::new(vec![1, 0])];
        let fix1 = vec![Perm::identity(1); 2];
        let qs = finset_rep(&tg, 4, swap2).expect("valid action");
        let q1 = finset_rep(&tg, 4, fix1).expect("valid action");

        // The fold 2 -> 1 is equivariant; a constant section 1 -> 2 is not.
        let fold = finset_map(&group, &qs, &q1, &[0, 0]).expect("equivariant");
        assert_eq!(fold.rank(), &RankMatrix::from_rows(vec![vec![1, 1]]));
        assert!(matches!(
            finset_map(&group, &q1, &qs, &[0]),
            Err(IntwError::NotEquivariant(_))
        ));
        let id_map = finset_map(&group, &qs, &qs, &[0, 1]).expect("equivariant");
        let swap_map = finset_map(&group, &qs, &qs, &[1, 0]).expect("equivariant");

        // Distinct maps give distinct ranks (exhaustively over small
        // trivial actions).
        for n in 1..=3usize {
            for np in 1..=3usize {
                let src = finset_rep(&tg, 4, vec![Perm::identity(n); 2]).expect("valid");
                let dst = finset_rep(&tg, 4, vec![Perm::identity(np); 2]).expect("valid");
                let mut seen = Vec::new();
                let total = np.pow(n as u32);
                for code in 0..total {
                    let mut f = Vec::with_capacity(n);
                    let mut rest = code;
                    for _ in 0..n {
                        f.push(rest % np);
                        rest /= np;
                    }
                    let xi = finset_map(&group, &src, &dst, &f).expect("equivariant");
                    assert!(!seen.contains(xi.rank()));
                    seen.push(xi.rank().clone());
                }
            }
        }

        // Functoriality: ranks and weakenings compose on the nose; the
        // gauge differs from the plain one only by the canonical summand
        // reordering, which is an invertible 2-cell.
        let composed = compose_1intertwiners(&fold, &swap_map).expect("composable");
        let direct = finset_map(&group, &qs, &q1, &[0, 0]).expect("equivariant");
        assert_eq!(composed.rank(), direct.rank());
        assert_eq!(composed.weakening(), direct.weakening());
        let iso = TwoIntertwiner::new(
            composed.clone(),
            direct.clone(),
            [((0, 0), CycloMatrix::identity(1)), ((0, 1), CycloMatrix::identity(1))]
                .into_iter()
                .collect(),
        )
        .expect("parallel endpoints");
        assert!(validate_2intertwiner(&iso, &composed, &direct).is_empty());
        assert!(iso.is_iso());

        // Identity map composes to the identity intertwiner on the nose.
        let both = compose_1intertwiners(&id_map, &id_map).expect("composable");
        assert_eq!(both.rank(), id_map.rank());
        assert_eq!(both.weakening(), id_map.weakening());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        /// The orbit cocycle classes between characters depend only on the
        /// cochain cohomology classes on either side.
        #[test]
        fn orbit_classes_are_cohomology_invariants(
            cv in 0u64..4,
            cpv in 0u64..4,
            xv in 0u64..4,
            yv in 0u64..4,
        ) {
            let tg = flat4();
            let q = character(&tg, 0, cv);
            let qp = character(&tg, 0, cpv);
            // Coboundaries over the trivial action shift the pair value by
            // twice the 1-cochain value.
            let q_shift = character(&tg, 0, (cv + 2 * xv) % 4);
            let qp_shift = character(&tg, 0, (cpv + 2 * yv) % 4);
            let z = build_space(&tg, &q, &qp).expect("space").cocycle(0).expect("aligned").clone();
            let z_shift = build_space(&tg, &q_shift, &qp_shift)
                .expect("space")
                .cocycle(0)
                .expect("aligned")
                .clone();
            prop_assert!(cohomologous_witness(&z_shift, &z).expect("comparable").is_some());
        }
    }
}
