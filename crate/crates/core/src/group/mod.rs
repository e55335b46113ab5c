//! Finite groups as explicit multiplication tables, with homomorphism
//! enumeration, quotients, orbits, and abelian structure.
//!
//! Everything here targets desk scale (orders in the tens), so closure and
//! verification are exhaustive rather than clever, and every enumeration
//! returns a deterministic, sorted result.

mod module;
mod perm;

pub use module::{enumerate_module_morphisms, FinModule, ModuleMorphism};
pub use perm::Perm;

use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invalid module action: {0}")]
    InvalidModule(String),
    #[error("invalid module morphism: {0}")]
    InvalidMorphism(String),
    #[error("quotient by a subset that is not a normal subgroup: {0}")]
    NotNormal(String),
}

/// A finite group given by its full multiplication table.
///
/// Elements are the indices `0..order`. A greedy generating set is computed
/// on construction and drives backtracking enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroup {
    size: usize,
    table: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    generators: Vec<usize>,
}

impl FinGroup {
    /// Validates a full multiplication table (associativity, two-sided
    /// identity, two-sided inverses) and builds the group.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::InvalidTable("entry out of range".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mul = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("{a} has no inverse")))?;
        }
        Ok(FinGroup::from_parts(n, table, identity))
    }

    /// Assembles a group from a table already known to satisfy the axioms.
    fn from_parts(size: usize, table: Vec<usize>, identity: usize) -> Self {
        let mul = |a: usize, b: usize| table[a * size + b];
        let mut inv = vec![0; size];
        for a in 0..size {
            inv[a] = (0..size).find(|&b| mul(a, b) == identity).unwrap();
        }
        let mut g = FinGroup {
            size,
            table,
            identity,
            inv,
            generators: vec![],
        };
        g.generators = g.greedy_generators();
        g
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = (a + b) % n;
            }
        }
        FinGroup::from_parts(n, table, 0)
    }

    /// The symmetric group on `n` points; element `i` is `Perm::all(n)[i]`.
    pub fn symmetric(n: usize) -> Self {
        FinGroup::symmetric_with_perms(n).0
    }

    /// The symmetric group together with the permutation each element
    /// stands for, in lexicographic order (the identity is element 0).
    pub fn symmetric_with_perms(n: usize) -> (Self, Vec<Perm>) {
        let perms = Perm::all(n);
        let index: BTreeMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images(), i))
            .collect();
        let size = perms.len();
        let mut table = vec![0; size * size];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                table[a * size + b] = index[pa.compose(pb).images()];
            }
        }
        (FinGroup::from_parts(size, table, 0), perms)
    }

    /// The dihedral group of order `2m`: elements `0..m` are the rotations
    /// `r^i`, elements `m..2m` are the reflections `r^i s`.
    pub fn dihedral(m: usize) -> Self {
        assert!(m >= 1);
        let n = 2 * m;
        let idx = |i: usize, j: usize| (j % 2) * m + (i % m);
        let mut table = vec![0; n * n];
        for j1 in 0..2 {
            for i1 in 0..m {
                for j2 in 0..2 {
                    for i2 in 0..m {
                        // (r^i1 s^j1)(r^i2 s^j2) = r^(i1 ± i2) s^(j1+j2)
                        let i = if j1 == 0 { i1 + i2 } else { m + i1 - i2 };
                        table[idx(i1, j1) * n + idx(i2, j2)] = idx(i % m, j1 + j2);
                    }
                }
            }
        }
        FinGroup::from_parts(n, table, 0)
    }

    /// Direct product; the pair `(a, b)` is the element `a * |H| + b`.
    pub fn direct_product(g: &FinGroup, h: &FinGroup) -> Self {
        let n = g.size * h.size;
        let mut table = vec![0; n * n];
        for a1 in 0..g.size {
            for b1 in 0..h.size {
                for a2 in 0..g.size {
                    for b2 in 0..h.size {
                        let x = a1 * h.size + b1;
                        let y = a2 * h.size + b2;
                        table[x * n + y] = g.mul(a1, a2) * h.size + h.mul(b1, b2);
                    }
                }
            }
        }
        FinGroup::from_parts(n, table, g.identity * h.size + h.identity)
    }

    pub fn order(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv[a] } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A generating set grown greedily: repeatedly adjoin the least element
    /// outside the closure so far.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = vec![];
        let mut closure = self.subgroup_closure(&gens);
        while closure.len() < self.size {
            let next = (0..self.size)
                .find(|x| closure.binary_search(x).is_err())
                .unwrap();
            gens.push(next);
            closure = self.subgroup_closure(&gens);
        }
        gens
    }

    /// The subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.size];
        in_set[self.identity] = true;
        let mut frontier = vec![self.identity];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                frontier.push(g);
            }
        }
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !in_set[y] {
                    in_set[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.size).filter(|&x| in_set[x]).collect()
    }

    /// Whether a sorted element list is closed under the group operations.
    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        elems.binary_search(&self.identity).is_ok()
            && elems.iter().all(|&a| {
                elems.binary_search(&self.inv[a]).is_ok()
                    && elems
                        .iter()
                        .all(|&b| elems.binary_search(&self.mul(a, b)).is_ok())
            })
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        self.is_subgroup(elems)
            && (0..self.size).all(|g| {
                elems
                    .iter()
                    .all(|&x| elems.binary_search(&self.mul(self.mul(g, x), self.inv[g])).is_ok())
            })
    }

    /// Quotient by a normal subgroup. Returns the quotient group, the
    /// projection (element index to coset index), and the chosen coset
    /// representatives (the least element of each coset; cosets are ordered
    /// by representative, so the identity coset is coset 0 whenever the
    /// group identity is element 0).
    pub fn quotient(&self, normal: &[usize]) -> Result<(FinGroup, Vec<usize>, Vec<usize>), GroupError> {
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal(format!("{normal:?}")));
        }
        let mut coset_of = vec![usize::MAX; self.size];
        let mut reps = vec![];
        for a in 0..self.size {
            if coset_of[a] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(a);
            for &x in normal {
                coset_of[self.mul(a, x)] = c;
            }
        }
        let q = reps.len();
        let mut table = vec![0; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = coset_of[self.mul(a, b)];
            }
        }
        Ok((
            FinGroup::from_parts(q, table, coset_of[self.identity]),
            coset_of,
            reps,
        ))
    }
}

/// Whether `images` (one target element per source element) is a group
/// homomorphism, checked exhaustively.
pub fn is_homomorphism(source: &FinGroup, target: &FinGroup, images: &[usize]) -> bool {
    images.len() == source.order()
        && source.elements().all(|a| {
            source
                .elements()
                .all(|b| images[source.mul(a, b)] == target.mul(images[a], images[b]))
        })
}

/// Kernel of a homomorphism, as a sorted element list.
pub fn hom_kernel(source: &FinGroup, target: &FinGroup, images: &[usize]) -> Vec<usize> {
    source
        .elements()
        .filter(|&a| images[a] == target.identity())
        .collect()
}

/// Image of a homomorphism, as a sorted element list.
pub fn hom_image(images: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = images.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

/// All homomorphisms from `source` to `target`, each given by its full
/// image vector, sorted lexicographically.
///
/// Backtracks over images of the greedy generators, closing the partial
/// map after every choice and pruning on conflicts; every surviving map is
/// re-verified exhaustively.
pub fn enumerate_homs(source: &FinGroup, target: &FinGroup) -> Vec<Vec<usize>> {
    let gens = source.generators().to_vec();
    let mut out = vec![];
    let mut partial: Vec<Option<usize>> = vec![None; source.order()];
    partial[source.identity()] = Some(target.identity());
    backtrack_homs(source, target, &gens, 0, &partial, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

fn backtrack_homs(
    source: &FinGroup,
    target: &FinGroup,
    gens: &[usize],
    depth: usize,
    partial: &[Option<usize>],
    out: &mut Vec<Vec<usize>>,
) {
    if depth == gens.len() {
        let images: Vec<usize> = partial.iter().map(|x| x.unwrap()).collect();
        assert!(
            is_homomorphism(source, target, &images),
            "closure produced a non-homomorphism"
        );
        out.push(images);
        return;
    }
    let g = gens[depth];
    let g_order = source.element_order(g);
    for h in target.elements() {
        if g_order % target.element_order(h) != 0 {
            continue;
        }
        let mut next = partial.to_vec();
        if next[g].is_some_and(|v| v != h) {
            continue;
        }
        next[g] = Some(h);
        if close_partial_hom(source, target, &mut next) {
            backtrack_homs(source, target, gens, depth + 1, &next, out);
        }
    }
}

/// Extends a partial map to products of already-defined elements until
/// stable; returns false on an inconsistency.
fn close_partial_hom(
    source: &FinGroup,
    target: &FinGroup,
    partial: &mut [Option<usize>],
) -> bool {
    loop {
        let mut changed = false;
        let defined: Vec<usize> = (0..partial.len()).filter(|&a| partial[a].is_some()).collect();
        for &a in &defined {
            for &b in &defined {
                let ab = source.mul(a, b);
                let img = target.mul(partial[a].unwrap(), partial[b].unwrap());
                match partial[ab] {
                    Some(v) if v != img => return false,
                    Some(_) => {}
                    None => {
                        partial[ab] = Some(img);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

/// All homomorphisms from `source` into the symmetric group on `n` points,
/// as one permutation per source element, in the deterministic order
/// induced by [`enumerate_homs`].
pub fn enumerate_perm_reps(source: &FinGroup, n: usize) -> Vec<Vec<Perm>> {
    let (sym, perms) = FinGroup::symmetric_with_perms(n);
    enumerate_homs(source, &sym)
        .into_iter()
        .map(|images| images.into_iter().map(|i| perms[i].clone()).collect())
        .collect()
}

/// One orbit of the right action of a group on the grid
/// `{0..n'} x {0..n}` by `(i', i) . g = (inv(rho'(g))(i'), inv(rho(g))(i))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairOrbit {
    /// Orbit points in lexicographic order; the first is the base point.
    pub points: Vec<(usize, usize)>,
    /// For each point, the least group element carrying the base point to it
    /// (the base point itself gets the identity).
    pub transversal: Vec<usize>,
    /// Sorted stabilizer subgroup of the base point.
    pub stabilizer: Vec<usize>,
}

/// Decomposes the grid `{0..n'} x {0..n}` into orbits of the right action
/// through the two permutation actions (one permutation per group element).
/// Orbits are ordered by their base point, which is the least point of the
/// orbit.
pub fn pair_orbits(group: &FinGroup, rho_prime: &[Perm], rho: &[Perm]) -> Vec<PairOrbit> {
    assert_eq!(rho_prime.len(), group.order());
    assert_eq!(rho.len(), group.order());
    let n_prime = rho_prime.first().map_or(0, Perm::degree);
    let n = rho.first().map_or(0, Perm::degree);
    let act = |p: (usize, usize), g: usize| {
        (
            rho_prime[g].inv().apply(p.0),
            rho[g].inv().apply(p.1),
        )
    };
    let mut seen = vec![vec![false; n]; n_prime];
    let mut orbits = vec![];
    for i_prime in 0..n_prime {
        for i in 0..n {
            if seen[i_prime][i] {
                continue;
            }
            let base = (i_prime, i);
            let mut reached: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            reached.insert(base, group.identity());
            let mut stabilizer = vec![];
            for g in group.elements() {
                let q = act(base, g);
                if q == base {
                    stabilizer.push(g);
                }
                reached.entry(q).or_insert(g);
            }
            let mut points = vec![];
            let mut transversal = vec![];
            for (p, t) in reached {
                seen[p.0][p.1] = true;
                points.push(p);
                transversal.push(t);
            }
            orbits.push(PairOrbit {
                points,
                transversal,
                stabilizer,
            });
        }
    }
    orbits
}

/// Decomposes an abelian subgroup (sorted element list) of `group` into a
/// direct product of primary cyclic factors.
///
/// Returns the factor orders (primes ascending, exponents descending within
/// a prime), one generating element per factor, and the coordinates of every
/// subgroup element over those generators.
pub fn decompose_abelian(
    group: &FinGroup,
    elems: &[usize],
) -> (Vec<u64>, Vec<usize>, BTreeMap<usize, Vec<u64>>) {
    assert!(group.is_subgroup(elems), "element list is not a subgroup");
    assert!(
        elems.iter().all(|&a| elems
            .iter()
            .all(|&b| group.mul(a, b) == group.mul(b, a))),
        "subgroup is not abelian"
    );
    let n = elems.len();
    let mut factors: Vec<u64> = vec![];
    let mut gens: Vec<usize> = vec![];
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            let (part_factors, part_gens) = primary_part_basis(group, elems, p);
            factors.extend(part_factors);
            gens.extend(part_gens);
        }
        p += 1;
    }
    // Coordinates by exhaustive enumeration of the box spanned by the
    // generators; bijectivity certifies the decomposition.
    let mut coords: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut tuple = vec![0u64; factors.len()];
    loop {
        let mut val = group.identity();
        for (i, &a) in tuple.iter().enumerate() {
            val = group.mul(val, group.pow(gens[i], a as i64));
        }
        let fresh = coords.insert(val, tuple.clone()).is_none();
        assert!(fresh, "generators do not span independently");
        if !increment_mixed_radix(&mut tuple, &factors) {
            break;
        }
    }
    assert_eq!(coords.len(), n, "generators do not span the subgroup");
    (factors, gens, coords)
}

/// Basis of the `p`-primary part of an abelian subgroup: factor orders
/// (descending powers of `p`) and a generator per factor, found by
/// deterministic backtracking with span-size pruning.
fn primary_part_basis(group: &FinGroup, elems: &[usize], p: usize) -> (Vec<u64>, Vec<usize>) {
    let part: Vec<usize> = elems
        .iter()
        .copied()
        .filter(|&a| {
            let mut o = group.element_order(a);
            while o % p == 0 {
                o /= p;
            }
            o == 1
        })
        .collect();
    // Shape of the part, from the counts of elements killed by p^j.
    let mut shape: Vec<u32> = vec![];
    let mut j = 1;
    let mut prev = 1usize;
    loop {
        let pj = p.pow(j);
        let count = part
            .iter()
            .filter(|&&a| pj % group.element_order(a) == 0)
            .count();
        if count == prev {
            break;
        }
        let parts_at_least_j = (count / prev).ilog(p);
        for i in 0..parts_at_least_j as usize {
            if shape.len() <= i {
                shape.push(0);
            }
            shape[i] = j;
        }
        prev = count;
        j += 1;
    }
    let targets: Vec<u64> = shape.iter().map(|&l| (p as u64).pow(l)).collect();
    let mut gens = vec![];
    assert!(
        basis_backtrack(group, &part, &targets, &mut gens),
        "no primary basis found"
    );
    (targets, gens)
}

fn basis_backtrack(
    group: &FinGroup,
    part: &[usize],
    targets: &[u64],
    gens: &mut Vec<usize>,
) -> bool {
    if gens.len() == targets.len() {
        return true;
    }
    let want = targets[gens.len()] as usize;
    let span_before = group.subgroup_closure(gens).len();
    for &cand in part {
        if group.element_order(cand) != want {
            continue;
        }
        gens.push(cand);
        let span = group.subgroup_closure(gens).len();
        if span == span_before * want && basis_backtrack(group, part, targets, gens) {
            return true;
        }
        gens.pop();
    }
    false
}

/// Advances a mixed-radix counter (most significant digit first); returns
/// false after the last tuple.
pub(crate) fn increment_mixed_radix(tuple: &mut [u64], radices: &[u64]) -> bool {
    for i in (0..tuple.len()).rev() {
        tuple[i] += 1;
        if tuple[i] < radices[i] {
            return true;
        }
        tuple[i] = 0;
    }
    false
}
