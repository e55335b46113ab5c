//! Seeded self-test sweeps across the whole tower: the strict composition
//! laws of the 2-matrix calculus, the interchange law, the shuffle
//! normalizations, the pentagon/closedness dichotomy for associators, the
//! crossed-module axioms of the equivalence 2-group, representation and
//! coboundary roundtrips, and the intertwiner laws.
//!
//! Reports are deterministic functions of the seed and size: running twice
//! with the same options yields byte-identical text. An optional injected
//! fault corrupts one fixed instance mid-check, demonstrating that a broken
//! pipeline is caught with a concrete counterexample.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::{solve_coboundary, Cochain};
use crate::cyclo::{CycloMatrix, Cyclotomic};
use crate::group::{FinGroup, FinModule, Perm};
use crate::intertwiner::{
    build_space, compose_1intertwiners, equivalence_intertwiner, induce_intertwiner,
    validate_1intertwiner, IntwError, OneIntertwiner,
};
use crate::rep::{equivalent_quadruples, RepQuadruple};
use crate::twogroup::SpecialTwoGroup;
use crate::twomat::equiv::{
    act, boundary, inv_loop, inverse_aut, mul_aut, mul_loop, phi, psi, AutData, LoopData,
};
use crate::twomat::{
    agree_on_box, compose1, hcompose2, points_with_sum_at_most, shuffle_perm, vcompose2, Gauge,
    OneMorphism, RankMatrix, TwoMorphism,
};

/// Scalar order used for the random monomial data in the sweeps.
const ORDER: u64 = 12;

/// Knobs for a self-test run: the RNG seed, a multiplier for the number of
/// cases per section, and an optional injected fault that corrupts one
/// fixed instance so the report demonstrably can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub size: u32,
    pub inject_fault: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: 0,
            size: 1,
            inject_fault: false,
        }
    }
}

/// Outcome of one section: the number of planned cases and the first
/// counterexample, if any check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Outcome of a full run, printable as a fixed-format text report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub size: u32,
    pub sections: Vec<SectionReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(SectionReport::passed)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={} size={}", self.seed, self.size)?;
        for s in &self.sections {
            writeln!(
                f,
                "  {:<26} {:>5} cases  {}",
                s.name,
                s.cases,
                if s.passed() { "ok" } else { "FAIL" }
            )?;
            for msg in &s.failures {
                writeln!(f, "    counterexample: {msg}")?;
            }
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs every section with streams derived from the seed, so sections stay
/// independent of each other's draw counts.
pub fn run_selftest(options: &SelftestOptions) -> SelftestReport {
    let size = options.size.max(1);
    let cases = 24usize.saturating_mul(size as usize);
    let stream = |k: u64| options.seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let sections = vec![
        two_matrix_axioms(stream(1), cases, options.inject_fault),
        interchange_law(stream(2), cases),
        shuffle_normalizations(stream(3), cases),
        pentagon_closedness(stream(4), cases),
        crossed_module_axioms(stream(5), cases),
        representation_roundtrips(stream(6), cases),
        intertwiner_laws(stream(7), cases),
    ];
    SelftestReport {
        seed: options.seed,
        size,
        sections,
    }
}

fn us(x: u64) -> usize {
    usize::try_from(x).expect("value fits in usize")
}

fn rand_root(rng: &mut ChaCha8Rng) -> Cyclotomic {
    Cyclotomic::root_of_unity(ORDER, rng.gen_range(0..ORDER))
}

fn rand_perm(rng: &mut ChaCha8Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Perm::new(images)
}

/// An invertible monomial matrix: one root of unity per row and column.
fn rand_monomial(rng: &mut ChaCha8Rng, size: usize) -> CycloMatrix {
    let p = rand_perm(rng, size);
    let mut m = CycloMatrix::from_fn(size, size, |_, _| Cyclotomic::zero(ORDER));
    for j in 0..size {
        m.set(p.apply(j), j, rand_root(rng));
    }
    m
}

/// A small rank matrix with entries weighted towards 0 and 1.
fn rand_rank(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RankMatrix {
    let entries = (0..rows * cols)
        .map(|_| match rng.gen_range(0..8) {
            0..=2 => 0,
            3..=6 => 1,
            _ => 2,
        })
        .collect();
    RankMatrix::new(rows, cols, entries)
}

/// A random 1-morphism: a small rank with monomial gauge values at every
/// non-basis point of coordinate sum at most two.
fn rand_morphism(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> OneMorphism {
    let rank = rand_rank(rng, rows, cols);
    let mut entries = Vec::new();
    for i in 0..rows {
        for a in points_with_sum_at_most(cols, 2) {
            if a.iter().sum::<u64>() <= 1 {
                continue;
            }
            let size = us(rank.apply(&a)[i]);
            entries.push((i, a, rand_monomial(rng, size)));
        }
    }
    let gauge = Gauge::from_entries(rank.clone(), entries).expect("monomial values are invertible");
    OneMorphism::new(rank, gauge).expect("the gauge lives over the rank")
}

/// A random 2-morphism between parallel 1-morphisms, with sparse blocks.
fn rand_cell(rng: &mut ChaCha8Rng, src: &OneMorphism, tgt: &OneMorphism) -> TwoMorphism {
    let mut grid = Vec::new();
    for i in 0..src.target() {
        let mut row = Vec::new();
        for j in 0..src.source() {
            let rows = us(tgt.rank().get(i, j));
            let cols = us(src.rank().get(i, j));
            row.push(CycloMatrix::from_fn(rows, cols, |_, _| {
                match rng.gen_range(0..4) {
                    0 => Cyclotomic::zero(ORDER),
                    1 => Cyclotomic::one(),
                    2 => Cyclotomic::from_int(-1),
                    _ => rand_root(rng),
                }
            }));
        }
        grid.push(row);
    }
    TwoMorphism::new(src.clone(), tgt.clone(), grid).expect("block sizes match the ranks")
}

fn is_permutation_matrix(m: &CycloMatrix) -> bool {
    if m.rows() != m.cols() {
        return false;
    }
    let n = m.rows();
    let mut seen = vec![false; n];
    for i in 0..n {
        let mut hits = 0;
        for (j, seen_j) in seen.iter_mut().enumerate() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if *v != Cyclotomic::one() || *seen_j {
                return false;
            }
            *seen_j = true;
            hits += 1;
        }
        if hits != 1 {
            return false;
        }
    }
    true
}

/// Strict associativity and both unit laws for 1-composition, checked on a
/// probe box. The first case is a fixed unit-law probe; under an injected
/// fault its comparison copy is corrupted, so the checker must report a
/// counterexample.
fn two_matrix_axioms(seed: u64, cases: usize, inject_fault: bool) -> SectionReport {
    let name = "two-matrix-axioms";
    let mut failures = Vec::new();

    let rank = RankMatrix::new(1, 1, vec![2]);
    let probe = OneMorphism::new(rank.clone(), Gauge::identity(rank.clone()))
        .expect("the identity gauge lives over any rank");
    let observed = if inject_fault {
        let mut twisted = CycloMatrix::identity(4);
        twisted.set(0, 0, Cyclotomic::root_of_unity(ORDER, 1));
        let gauge = Gauge::from_entries(rank.clone(), [(0, vec![2], twisted)])
            .expect("the twisted value is invertible");
        OneMorphism::new(rank, gauge).expect("the gauge lives over the rank")
    } else {
        probe.clone()
    };
    let left_unit = compose1(&OneMorphism::identity(1), &probe).expect("objects agree");
    if !agree_on_box(&left_unit, &observed, 3) {
        failures.push(
            "fixed probe: the left unit law fails on the rank [2] endomorphism; \
             the gauges first differ at row 0, point [2]"
                .into(),
        );
    }

    if failures.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for case in 0..cases {
            let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=2)).collect();
            let f = rand_morphism(&mut rng, dims[1], dims[0]);
            let g = rand_morphism(&mut rng, dims[2], dims[1]);
            let h = rand_morphism(&mut rng, dims[3], dims[2]);
            let left =
                compose1(&compose1(&h, &g).expect("objects agree"), &f).expect("objects agree");
            let right =
                compose1(&h, &compose1(&g, &f).expect("objects agree")).expect("objects agree");
            if left.rank() != right.rank() || !agree_on_box(&left, &right, 3) {
                failures.push(format!(
                    "case {case}: associativity fails for ranks {:?}, {:?}, {:?}",
                    h.rank(),
                    g.rank(),
                    f.rank()
                ));
                break;
            }
            let lu = compose1(&OneMorphism::identity(dims[1]), &f).expect("objects agree");
            let ru = compose1(&f, &OneMorphism::identity(dims[0])).expect("objects agree");
            if !agree_on_box(&lu, &f, 3) || !agree_on_box(&ru, &f, 3) {
                failures.push(format!(
                    "case {case}: a unit law fails for rank {:?}",
                    f.rank()
                ));
                break;
            }
        }
    }
    SectionReport {
        name,
        cases: cases + 1,
        failures,
    }
}

/// The interchange law between vertical and horizontal 2-composition.
fn interchange_law(seed: u64, cases: usize) -> SectionReport {
    let name = "interchange";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let a = rng.gen_range(1..=2);
        let b = rng.gen_range(1..=2);
        let c = rng.gen_range(1..=2);
        let f0 = rand_morphism(&mut rng, b, a);
        let f1 = rand_morphism(&mut rng, b, a);
        let f2 = rand_morphism(&mut rng, b, a);
        let g0 = rand_morphism(&mut rng, c, b);
        let g1 = rand_morphism(&mut rng, c, b);
        let g2 = rand_morphism(&mut rng, c, b);
        let t1 = rand_cell(&mut rng, &f0, &f1);
        let t2 = rand_cell(&mut rng, &f1, &f2);
        let u1 = rand_cell(&mut rng, &g0, &g1);
        let u2 = rand_cell(&mut rng, &g1, &g2);
        let lhs = hcompose2(
            &vcompose2(&u2, &u1).expect("shared boundary"),
            &vcompose2(&t2, &t1).expect("shared boundary"),
        )
        .expect("composable objects");
        let rhs = vcompose2(
            &hcompose2(&u2, &t2).expect("composable objects"),
            &hcompose2(&u1, &t1).expect("composable objects"),
        )
        .expect("shared boundary");
        let m = lhs.source().target();
        let n = lhs.source().source();
        if (0..m).any(|i| (0..n).any(|j| lhs.block(i, j) != rhs.block(i, j))) {
            failures.push(format!(
                "case {case}: interchange fails over objects {a} -> {b} -> {c}"
            ));
            break;
        }
    }
    SectionReport {
        name,
        cases,
        failures,
    }
}

/// The shuffle matrix is a permutation matrix and collapses to the identity
/// at standard rows, standard points, and single-column ranks.
fn shuffle_normalizations(seed: u64, cases: usize) -> SectionReport {
    let name = "shuffle-normalizations";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let rank = rand_rank(&mut rng, m, n);
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let row: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        if !is_permutation_matrix(&shuffle_perm(&row, &rank, &a)) {
            failures.push(format!(
                "case {case}: the shuffle for row {row:?}, rank {rank:?}, point {a:?} \
                 is not a permutation matrix"
            ));
            break;
        }
        let mut e = vec![0u64; m];
        e[rng.gen_range(0..m)] = 1;
        if !shuffle_perm(&e, &rank, &a).is_identity() {
            failures.push(format!(
                "case {case}: the shuffle for the standard row {e:?} is not the identity"
            ));
            break;
        }
        let mut ea = vec![0u64; n];
        ea[rng.gen_range(0..n)] = 1;
        if !shuffle_perm(&row, &rank, &ea).is_identity() {
            failures.push(format!(
                "case {case}: the shuffle at the standard point {ea:?} is not the identity"
            ));
            break;
        }
        let col = rand_rank(&mut rng, m, 1);
        let b = vec![rng.gen_range(0..=2)];
        if !shuffle_perm(&row, &col, &b).is_identity() {
            failures.push(format!(
                "case {case}: the shuffle over a single-column rank is not the identity"
            ));
            break;
        }
    }
    SectionReport {
        name,
        cases,
        failures,
    }
}

/// The pentagon holds for an associator exactly when the associator is a
/// closed 3-cochain; coboundaries are thrown in so both branches fire.
fn pentagon_closedness(seed: u64, cases: usize) -> SectionReport {
    let name = "pentagon-closedness";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let ids = |count: usize| vec![Perm::identity(1); count];
    let pools: Vec<(FinGroup, FinModule, u64)> = {
        let c2 = FinGroup::cyclic(2);
        let c4 = FinGroup::cyclic(4);
        let v4 = FinGroup::direct_product(&FinGroup::cyclic(2), &FinGroup::cyclic(2));
        vec![
            (c2.clone(), FinModule::scalar_power(c2, 1, 4, &ids(2)), 4),
            (c4.clone(), FinModule::scalar_power(c4, 1, 2, &ids(4)), 2),
            (v4.clone(), FinModule::scalar_power(v4, 1, 2, &ids(4)), 2),
        ]
    };
    for case in 0..cases {
        let (group, module, order) = &pools[rng.gen_range(0..pools.len())];
        let alpha = if rng.gen_range(0..3) == 0 {
            Cochain::from_fn(module.clone(), 2, |_| vec![rng.gen_range(0..*order)]).coboundary()
        } else {
            Cochain::from_fn(module.clone(), 3, |_| vec![rng.gen_range(0..*order)])
        };
        let tg = SpecialTwoGroup::new_unchecked(group.clone(), module.clone(), alpha.clone())
            .expect("the associator lives over the module");
        if tg.pentagon_check() != alpha.is_cocycle() {
            failures.push(format!(
                "case {case}: the pentagon disagrees with closedness over a group of order {}",
                group.order()
            ));
            break;
        }
    }
    SectionReport {
        name,
        cases,
        failures,
    }
}

/// A matrix field over the identity rank with monomial values at points of
/// coordinate sum at most three.
fn rand_field(rng: &mut ChaCha8Rng, n: usize) -> Gauge {
    let rank = RankMatrix::identity(n);
    let mut entries = Vec::new();
    for a in points_with_sum_at_most(n, 3) {
        if a.iter().sum::<u64>() <= 1 {
            continue;
        }
        for i in 0..n {
            if rng.gen_range(0..2) == 0 {
                continue;
            }
            let size = us(a[i]);
            entries.push((i, a.clone(), rand_monomial(rng, size)));
        }
    }
    Gauge::from_entries(rank, entries).expect("monomial values are invertible")
}

fn rand_aut(rng: &mut ChaCha8Rng, n: usize) -> AutData {
    let sigma = rand_perm(rng, n);
    let field = rand_field(rng, n);
    AutData::new(sigma, field).expect("the field lives over the identity rank")
}

fn rand_loop(rng: &mut ChaCha8Rng, n: usize) -> LoopData {
    let lambda = (0..n).map(|_| rand_root(rng)).collect();
    let field = rand_field(rng, n);
    LoopData::new(lambda, field).expect("root-of-unity scalars are invertible")
}

/// The crossed-module axioms of the equivalence 2-group, plus the exact
/// roundtrip between its data and the realized 1-morphisms.
fn crossed_module_axioms(seed: u64, cases: usize) -> SectionReport {
    let name = "crossed-module-axioms";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let n = rng.gen_range(1..=3);
        let x = rand_aut(&mut rng, n);
        let l = rand_loop(&mut rng, n);
        let l2 = rand_loop(&mut rng, n);
        if boundary(&act(&x, &l)) != mul_aut(&mul_aut(&x, &boundary(&l)), &inverse_aut(&x)) {
            failures.push(format!(
                "case {case}: equivariance of the boundary fails at degree {n}"
            ));
            break;
        }
        if act(&boundary(&l), &l2) != mul_loop(&mul_loop(&l, &l2), &inv_loop(&l)) {
            failures.push(format!(
                "case {case}: the conjugation identity fails at degree {n}"
            ));
            break;
        }
        if psi(&phi(&x)).as_ref() != Ok(&x) {
            failures.push(format!(
                "case {case}: the realization roundtrip fails at degree {n}"
            ));
            break;
        }
    }
    SectionReport {
        name,
        cases,
        failures,
    }
}

/// Random valid quadruples built from coboundaries: validation accepts
/// them, the coboundary solver inverts them, and the self-equivalence
/// witness realizes as a valid intertwiner.
fn representation_roundtrips(seed: u64, cases: usize) -> SectionReport {
    let name = "representation-roundtrips";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let group = FinGroup::cyclic(2);
    let loops = FinModule::scalar_power(group.clone(), 1, 4, &[Perm::identity(1), Perm::identity(1)]);
    let tg = SpecialTwoGroup::split(group.clone(), loops).expect("the module lives over the group");

    // A fixed negative first: an odd scalar value is not a coboundary over
    // the trivially permuted line, so the solver must return nothing.
    let line = FinModule::scalar_power(group.clone(), 1, 4, &[Perm::identity(1), Perm::identity(1)]);
    let mut odd = Cochain::zero(line, 2);
    odd.set(&[1, 1], vec![1]);
    if solve_coboundary(&odd).is_some() {
        failures.push("fixed probe: the solver trivializes a non-trivial class".into());
    }

    if failures.is_empty() {
        for case in 0..cases {
            let swap = rng.gen_range(0..2) == 1;
            let rho = if swap {
                vec![Perm::identity(2), Perm::new(vec![1, 0])]
            } else {
                vec![Perm::identity(2), Perm::identity(2)]
            };
            let module = FinModule::scalar_power(group.clone(), 2, 4, &rho);
            let beta_row = if swap {
                let b = rng.gen_range(0..4);
                vec![b, b]
            } else {
                vec![rng.gen_range(0..4), rng.gen_range(0..4)]
            };
            let x = Cochain::from_fn(module.clone(), 1, |_| {
                vec![rng.gen_range(0..4), rng.gen_range(0..4)]
            });
            let c = x.coboundary();
            let q = match RepQuadruple::new(&tg, 2, 4, rho, vec![beta_row], c.clone()) {
                Ok(q) => q,
                Err(e) => {
                    failures.push(format!(
                        "case {case}: a coboundary quadruple fails validation: {e}"
                    ));
                    break;
                }
            };
            match solve_coboundary(&c) {
                None => {
                    failures.push(format!("case {case}: a known coboundary has no solution"));
                    break;
                }
                Some(w) => {
                    if w.coboundary() != c {
                        failures.push(format!(
                            "case {case}: the solver witness does not reproduce its target"
                        ));
                        break;
                    }
                }
            }
            let Some((sigma, witness)) = equivalent_quadruples(&q, &q) else {
                failures.push(format!("case {case}: a quadruple is not self-equivalent"));
                break;
            };
            let xi = equivalence_intertwiner(&group, &q, &q, &sigma, &witness);
            let space = match build_space(&tg, &q, &q) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("case {case}: the hom space fails to build: {e}"));
                    break;
                }
            };
            let viol = validate_1intertwiner(&xi, &space);
            if !viol.is_empty() {
                failures.push(format!(
                    "case {case}: the equivalence witness violates {}",
                    viol[0].axiom()
                ));
                break;
            }
        }
    }
    SectionReport {
        name,
        cases: cases + 1,
        failures,
    }
}

/// An involutive monomial matrix: a self-inverse permutation with exponents
/// cancelling along its 2-cycles.
fn rand_involution(rng: &mut ChaCha8Rng, size: usize) -> CycloMatrix {
    let mut images: Vec<usize> = (0..size).collect();
    let mut unpaired: Vec<usize> = (0..size).collect();
    while unpaired.len() >= 2 {
        let k = rng.gen_range(0..unpaired.len());
        if k == 0 {
            unpaired.remove(0);
            continue;
        }
        let i = unpaired[0];
        let j = unpaired[k];
        images[i] = j;
        images[j] = i;
        unpaired.remove(k);
        unpaired.remove(0);
    }
    let mut exps = vec![0u64; size];
    for i in 0..size {
        let j = images[i];
        if j > i {
            let e = rng.gen_range(0..ORDER);
            exps[i] = e;
            exps[j] = (ORDER - e) % ORDER;
        } else if j == i {
            exps[i] = if rng.gen_range(0..2) == 1 { ORDER / 2 } else { 0 };
        }
    }
    let mut m = CycloMatrix::from_fn(size, size, |_, _| Cyclotomic::zero(ORDER));
    for (j, &i) in images.iter().enumerate() {
        m.set(i, j, Cyclotomic::root_of_unity(ORDER, exps[j]));
    }
    m
}

/// Character hom spaces and endomorphisms: terminality tracks scalar-part
/// alignment, induction succeeds exactly when the stabilizer scalar cancels
/// the orbit cocycle, and monomial involution endomorphisms validate,
/// compose, and absorb the identity.
fn intertwiner_laws(seed: u64, cases: usize) -> SectionReport {
    let name = "intertwiner-laws";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let group = FinGroup::cyclic(2);
    let loops = FinModule::scalar_power(group.clone(), 1, 4, &[Perm::identity(1), Perm::identity(1)]);
    let tg = SpecialTwoGroup::split(group.clone(), loops).expect("the module lives over the group");
    let character = |b: u64, v: u64| -> RepQuadruple {
        let cmod =
            FinModule::scalar_power(group.clone(), 1, 4, &[Perm::identity(1), Perm::identity(1)]);
        let mut c = Cochain::zero(cmod, 2);
        c.set(&[1, 1], vec![v]);
        RepQuadruple::new(&tg, 1, 4, vec![Perm::identity(1), Perm::identity(1)], vec![vec![b]], c)
            .expect("characters are valid quadruples")
    };
    let trivial = character(0, 0);
    let espace = build_space(&tg, &trivial, &trivial).expect("the hom space builds");

    'outer: for case in 0..cases {
        let (b, v) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let (b2, v2) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let source = character(b, v);
        let target = character(b2, v2);
        let space = match build_space(&tg, &source, &target) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: the hom space fails to build: {e}"));
                break;
            }
        };
        if (b == b2) == space.is_terminal() {
            failures.push(format!(
                "case {case}: alignment of scalar parts {b} and {b2} disagrees with terminality"
            ));
            break;
        }
        if b == b2 {
            let d = space.cocycle(0).expect("the single orbit is aligned").get(&[1, 1])[0];
            for t in 0..4 {
                let mut scalar = CycloMatrix::identity(1);
                scalar.set(0, 0, Cyclotomic::root_of_unity(4, t));
                let pi: BTreeMap<usize, CycloMatrix> =
                    [(0, CycloMatrix::identity(1)), (1, scalar)].into();
                let expected = (2 * t) % 4 == d;
                match induce_intertwiner(&space, 0, 1, &pi) {
                    Ok(xi) => {
                        if !expected {
                            failures.push(format!(
                                "case {case}: induction accepted a stabilizer scalar \
                                 missing the orbit cocycle (exponent {t})"
                            ));
                            break 'outer;
                        }
                        let viol = validate_1intertwiner(&xi, &space);
                        if !viol.is_empty() {
                            failures.push(format!(
                                "case {case}: an induced intertwiner violates {}",
                                viol[0].axiom()
                            ));
                            break 'outer;
                        }
                    }
                    Err(IntwError::InvalidStabilizerRep(_)) => {
                        if expected {
                            failures.push(format!(
                                "case {case}: induction rejected a matching stabilizer \
                                 scalar (exponent {t})"
                            ));
                            break 'outer;
                        }
                    }
                    Err(e) => {
                        failures.push(format!("case {case}: induction failed unexpectedly: {e}"));
                        break 'outer;
                    }
                }
            }
        } else if induce_intertwiner(&space, 0, 1, &BTreeMap::new()).is_ok() {
            failures.push(format!(
                "case {case}: induction succeeded on a misaligned orbit"
            ));
            break;
        }

        let endo = |rng: &mut ChaCha8Rng| -> Result<OneIntertwiner, IntwError> {
            let r = rng.gen_range(1..=2usize);
            let rank = RankMatrix::new(1, 1, vec![r as u64]);
            let gauge = Gauge::from_entries(
                rank.clone(),
                [(0, vec![2], rand_monomial(rng, 2 * r))],
            )
            .expect("monomial values are invertible");
            let weakening: BTreeMap<(usize, usize), Vec<CycloMatrix>> = [(
                (0, 0),
                vec![CycloMatrix::identity(r), rand_involution(rng, r)],
            )]
            .into();
            OneIntertwiner::new(&espace, rank, gauge, weakening)
        };
        let xi = match endo(&mut rng) {
            Ok(xi) => xi,
            Err(e) => {
                failures.push(format!(
                    "case {case}: a monomial involution endomorphism fails validation: {e}"
                ));
                break;
            }
        };
        let xi2 = match endo(&mut rng) {
            Ok(xi) => xi,
            Err(e) => {
                failures.push(format!(
                    "case {case}: a monomial involution endomorphism fails validation: {e}"
                ));
                break;
            }
        };
        if let Err(e) = compose_1intertwiners(&xi2, &xi) {
            failures.push(format!(
                "case {case}: composing validated endomorphisms fails: {e}"
            ));
            break;
        }
        let absorbed = compose_1intertwiners(&OneIntertwiner::identity(&group, &trivial), &xi)
            .expect("endpoints agree");
        if absorbed.rank() != xi.rank() || absorbed.weakening() != xi.weakening() {
            failures.push(format!(
                "case {case}: composing with the identity changes the weakening"
            ));
            break;
        }
    }
    SectionReport {
        name,
        cases,
        failures,
    }
}
