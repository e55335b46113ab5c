//! Normalized cochains on a finite group with coefficients in a finite
//! module, with coboundaries, cocycle tests, and witness solving.

mod snf;

use crate::group::{FinGroup, FinModule, ModuleMorphism};
use num::BigInt;
use std::collections::BTreeMap;
use thiserror::Error;

/// Highest degree a cochain itself may have; coboundaries of that degree
/// (one higher) are still representable so closedness can be tested.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CochainError {
    #[error("cochains live over different modules")]
    ModuleMismatch,
    #[error("cochains have different degrees")]
    DegreeMismatch,
    #[error("argument tuple contains the group identity")]
    IdentityArgument,
    #[error("solution family has {0} members, beyond the cap")]
    CapExceeded(u128),
}

/// A normalized cochain: a function from `degree`-tuples of group elements
/// to the module, vanishing whenever an argument is the identity. Only
/// nonzero values on identity-free tuples are stored, so equal cochains
/// have equal tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    module: FinModule,
    degree: usize,
    table: BTreeMap<Vec<usize>, Vec<u64>>,
}

/// All `k`-tuples of non-identity elements, lexicographically.
pub fn non_identity_tuples(group: &FinGroup, k: usize) -> Vec<Vec<usize>> {
    let choices: Vec<usize> = group.elements().filter(|&g| g != group.identity()).collect();
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                choices.iter().map(move |&g| {
                    let mut next = t.clone();
                    next.push(g);
                    next
                })
            })
            .collect();
    }
    out
}

impl Cochain {
    pub fn zero(module: FinModule, degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE + 1, "degree out of range");
        Cochain {
            module,
            degree,
            table: BTreeMap::new(),
        }
    }

    /// Builds a cochain from explicit values; keys containing the identity
    /// are rejected rather than silently dropped.
    pub fn from_table(
        module: FinModule,
        degree: usize,
        table: BTreeMap<Vec<usize>, Vec<u64>>,
    ) -> Result<Self, CochainError> {
        let mut c = Cochain::zero(module, degree);
        for (args, value) in table {
            if args.len() != degree {
                return Err(CochainError::DegreeMismatch);
            }
            if args.iter().any(|&g| g == c.module.group().identity()) {
                return Err(CochainError::IdentityArgument);
            }
            c.set(&args, value);
        }
        Ok(c)
    }

    /// Evaluates `f` on every identity-free tuple.
    pub fn from_fn(
        module: FinModule,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<u64>,
    ) -> Self {
        let tuples = non_identity_tuples(module.group(), degree);
        let mut c = Cochain::zero(module, degree);
        for t in tuples {
            let v = f(&t);
            c.set(&t, v);
        }
        c
    }

    pub fn module(&self) -> &FinModule {
        &self.module
    }

    pub fn group(&self) -> &FinGroup {
        self.module.group()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// The stored nonzero values.
    pub fn support(&self) -> &BTreeMap<Vec<usize>, Vec<u64>> {
        &self.table
    }

    pub fn get(&self, args: &[usize]) -> Vec<u64> {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        if args.iter().any(|&g| g == self.group().identity()) {
            return self.module.zero();
        }
        self.table
            .get(args)
            .cloned()
            .unwrap_or_else(|| self.module.zero())
    }

    /// Sets the value on an identity-free tuple (reduced mod the factor
    /// moduli; zero values are removed so tables stay canonical).
    pub fn set(&mut self, args: &[usize], value: Vec<u64>) {
        assert_eq!(args.len(), self.degree, "wrong number of arguments");
        assert!(
            args.iter().all(|&g| g != self.module.group().identity()),
            "cannot set a value on an identity-containing tuple"
        );
        let v = self.module.reduce(&value);
        if self.module.is_zero(&v) {
            self.table.remove(args);
        } else {
            self.table.insert(args.to_vec(), v);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), CochainError> {
        if self.module != other.module {
            return Err(CochainError::ModuleMismatch);
        }
        if self.degree != other.degree {
            return Err(CochainError::DegreeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, CochainError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (args, v) in &other.table {
            out.set(args, out.module.add(&out.get(args), v));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (args, v) in &self.table {
            out.set(args, out.module.neg(v));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CochainError> {
        self.add(&other.neg())
    }

    /// Pushes values through a module morphism (over the same group).
    pub fn map_values(&self, morphism: &ModuleMorphism) -> Self {
        assert_eq!(morphism.source(), &self.module, "morphism source mismatch");
        let mut out = Cochain::zero(morphism.target().clone(), self.degree);
        for (args, v) in &self.table {
            out.set(args, morphism.apply(v));
        }
        out
    }

    /// The coboundary, one degree up: the alternating sum of the action on
    /// the tail, the inner merges, and the dropped head.
    pub fn coboundary(&self) -> Cochain {
        let k = self.degree;
        assert!(k <= MAX_DEGREE, "coboundary output degree out of range");
        let group = self.group().clone();
        let module = self.module.clone();
        let mut out = Cochain::zero(self.module.clone(), k + 1);
        for t in non_identity_tuples(&group, k + 1) {
            let mut acc = module.act(t[0], &self.get(&t[1..]));
            for i in 1..=k {
                let mut merged = Vec::with_capacity(k);
                merged.extend_from_slice(&t[..i - 1]);
                merged.push(group.mul(t[i - 1], t[i]));
                merged.extend_from_slice(&t[i + 1..]);
                let v = self.get(&merged);
                acc = if i % 2 == 1 {
                    module.sub(&acc, &v)
                } else {
                    module.add(&acc, &v)
                };
            }
            let v = self.get(&t[..k]);
            acc = if (k + 1) % 2 == 1 {
                module.sub(&acc, &v)
            } else {
                module.add(&acc, &v)
            };
            out.set(&t, acc);
        }
        out
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }
}

/// The linear system expressing `coboundary(x) = target` for an unknown
/// cochain `x` one degree below the target: one equation per coordinate of
/// each identity-free tuple, rows scaled so every congruence is mod the
/// single modulus returned.
struct BoundarySystem {
    matrix: Vec<Vec<BigInt>>,
    rhs: Vec<BigInt>,
    modulus: u64,
    var_tuples: Vec<Vec<usize>>,
}

fn boundary_system(target: &Cochain) -> BoundarySystem {
    let k = target.degree();
    assert!(k >= 1, "target degree must be positive");
    let module = target.module();
    let group = target.group();
    let rank = module.rank();
    let modulus = module.factors().iter().fold(1u64, |acc, &m| {
        num::Integer::lcm(&acc, &m)
    });
    let var_tuples = non_identity_tuples(group, k - 1);
    let var_index: BTreeMap<&[usize], usize> = var_tuples
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let n_vars = var_tuples.len() * rank;
    let eq_tuples = non_identity_tuples(group, k);
    let mut matrix = vec![];
    let mut rhs = vec![];
    let identity = group.identity();
    for t in &eq_tuples {
        let value = target.get(t);
        for i in 0..rank {
            let scale = (modulus / module.factors()[i]) as i64;
            let mut row = vec![0i64; n_vars];
            // Head: the action of the first argument on x(tail).
            if let Some(&col) = var_index.get(&t[1..]) {
                for j in 0..rank {
                    row[col * rank + j] += scale * module.action_entry(t[0], i, j) as i64;
                }
            }
            // Inner merges, alternating signs.
            for pos in 1..k {
                let mut merged = Vec::with_capacity(k - 1);
                merged.extend_from_slice(&t[..pos - 1]);
                merged.push(group.mul(t[pos - 1], t[pos]));
                merged.extend_from_slice(&t[pos + 1..]);
                if merged.iter().all(|&g| g != identity) {
                    let col = var_index[merged.as_slice()];
                    let sign = if pos % 2 == 1 { -1 } else { 1 };
                    row[col * rank + i] += sign * scale;
                }
            }
            // Dropped head, sign of the top face.
            if let Some(&col) = var_index.get(&t[..k - 1]) {
                let sign = if k % 2 == 1 { -1 } else { 1 };
                row[col * rank + i] += sign * scale;
            }
            matrix.push(row.into_iter().map(BigInt::from).collect());
            rhs.push(BigInt::from(scale * value[i] as i64));
        }
    }
    BoundarySystem {
        matrix,
        rhs,
        modulus,
        var_tuples,
    }
}

fn cochain_from_flat(module: &FinModule, degree: usize, tuples: &[Vec<usize>], x: &[u64]) -> Cochain {
    let rank = module.rank();
    let mut out = Cochain::zero(module.clone(), degree);
    for (idx, t) in tuples.iter().enumerate() {
        let coords: Vec<u64> = (0..rank).map(|j| x[idx * rank + j]).collect();
        out.set(t, coords);
    }
    out
}

/// The canonical cochain `x` with `coboundary(x) = target`, if one exists.
/// Canonical means: free variables of the diagonalized system are zero, so
/// repeated calls return byte-identical results.
pub fn solve_coboundary(target: &Cochain) -> Option<Cochain> {
    if target.module().rank() == 0 {
        return Some(Cochain::zero(target.module().clone(), target.degree() - 1));
    }
    let system = boundary_system(target);
    let x = snf::solve_mod(system.matrix, system.rhs, system.modulus)?;
    let witness = cochain_from_flat(
        target.module(),
        target.degree() - 1,
        &system.var_tuples,
        &x,
    );
    debug_assert_eq!(&witness.coboundary(), target);
    Some(witness)
}

/// All cochains `x` with `coboundary(x) = target`, sorted deterministically.
/// Requires a module with uniform factor moduli (scalar powers qualify);
/// errs out with the true family size when it exceeds `cap`.
pub fn coboundary_solutions(target: &Cochain, cap: u64) -> Result<Vec<Cochain>, CochainError> {
    let module = target.module();
    if module.rank() == 0 {
        return Ok(vec![Cochain::zero(module.clone(), target.degree() - 1)]);
    }
    assert!(
        module.factors().windows(2).all(|w| w[0] == w[1]),
        "solution families need uniform moduli"
    );
    let system = boundary_system(target);
    let sols = snf::enumerate_mod(system.matrix, system.rhs, system.modulus, cap)
        .map_err(CochainError::CapExceeded)?;
    Ok(sols
        .iter()
        .map(|x| cochain_from_flat(module, target.degree() - 1, &system.var_tuples, x))
        .collect())
}

/// A cochain `x` with `coboundary(x) = c1 - c2`, if the two are
/// cohomologous; the zero witness whenever `c1 = c2`.
pub fn cohomologous_witness(c1: &Cochain, c2: &Cochain) -> Result<Option<Cochain>, CochainError> {
    c1.check_compatible(c2)?;
    Ok(solve_coboundary(&c1.sub(c2)?))
}
