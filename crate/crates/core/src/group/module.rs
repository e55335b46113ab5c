//! Finite abelian modules with a group action, and equivariant morphisms.

use super::{increment_mixed_radix, FinGroup, GroupError, Perm};
use num::Integer;

/// A finite abelian group `Z/m_1 x ... x Z/m_k` with an action of a finite
/// group by integer matrices (entry `[i][j]` taken mod `m_i`).
///
/// Scalar groups of roots of unity are carried additively: the exponent
/// vector stands for the root, so "multiplication of scalars" is addition
/// here and conversion to actual field elements happens at the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinModule {
    group: FinGroup,
    factors: Vec<u64>,
    action: Vec<Vec<Vec<u64>>>,
}

impl FinModule {
    /// Validates and builds a module. `action` holds one `k x k` integer
    /// matrix per group element; the checks are exhaustive: the matrices
    /// must be well defined on the factor moduli, send the identity to the
    /// identity matrix, and satisfy the action law over the whole table.
    pub fn new(
        group: FinGroup,
        factors: Vec<u64>,
        action: Vec<Vec<Vec<u64>>>,
    ) -> Result<Self, GroupError> {
        if factors.iter().any(|&m| m == 0) {
            return Err(GroupError::InvalidModule("zero modulus".into()));
        }
        let k = factors.len();
        if action.len() != group.order() {
            return Err(GroupError::InvalidModule(format!(
                "expected {} action matrices, got {}",
                group.order(),
                action.len()
            )));
        }
        let mut reduced = vec![];
        for mat in &action {
            if mat.len() != k || mat.iter().any(|row| row.len() != k) {
                return Err(GroupError::InvalidModule(format!(
                    "action matrix is not {k} x {k}"
                )));
            }
            let mut m = mat.clone();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, x) in row.iter_mut().enumerate() {
                    // Well-definedness: the matrix must kill the relation
                    // m_j * e_j = 0, i.e. m_i divides entry * m_j.
                    if (*x * factors[j]) % factors[i] != 0 {
                        return Err(GroupError::InvalidModule(format!(
                            "entry ({i}, {j}) is not well defined on the moduli"
                        )));
                    }
                    *x %= factors[i];
                }
            }
            reduced.push(m);
        }
        let module = FinModule {
            group,
            factors,
            action: reduced,
        };
        let e = module.group.identity();
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { 1 % module.factors[i] } else { 0 };
                if module.action[e][i][j] != want {
                    return Err(GroupError::InvalidModule(
                        "identity does not act as the identity matrix".into(),
                    ));
                }
            }
        }
        for a in module.group.elements() {
            for b in module.group.elements() {
                let ab = module.group.mul(a, b);
                for v in module.elements() {
                    if module.act(ab, &v) != module.act(a, &module.act(b, &v)) {
                        return Err(GroupError::InvalidModule(format!(
                            "action law fails at ({a}, {b})"
                        )));
                    }
                }
            }
        }
        Ok(module)
    }

    /// The module with trivial action.
    pub fn trivial(group: FinGroup, factors: Vec<u64>) -> Self {
        let k = factors.len();
        let id: Vec<Vec<u64>> = (0..k)
            .map(|i| (0..k).map(|j| u64::from(i == j) % factors[i]).collect())
            .collect();
        let order = group.order();
        FinModule {
            group,
            factors,
            action: vec![id; order],
        }
    }

    /// The `n`-fold power of the order-`scalar_order` scalar group, with the
    /// group permuting coordinates through `rho`: coordinate `i` of the
    /// acted vector is coordinate `inv(rho(g))(i)` of the original.
    pub fn scalar_power(
        group: FinGroup,
        n: usize,
        scalar_order: u64,
        rho: &[Perm],
    ) -> Self {
        assert_eq!(rho.len(), group.order());
        assert!(scalar_order >= 1);
        let action = rho
            .iter()
            .map(|p| {
                (0..n)
                    .map(|i| (0..n).map(|j| u64::from(p.apply(j) == i)).collect())
                    .collect()
            })
            .collect();
        FinModule {
            group,
            factors: vec![scalar_order; n],
            action,
        }
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn size(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.factors.len()]
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1 % self.factors[i];
        v
    }

    pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.factors).map(|(x, m)| x % m).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, m)| (m - x % m) % m)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(&self.factors)
            .map(|(x, m)| (k % m) * (x % m) % m)
            .collect()
    }

    /// Entry `(i, j)` of the action matrix of `g`, reduced mod `factors[i]`.
    pub fn action_entry(&self, g: usize, i: usize, j: usize) -> u64 {
        self.action[g][i][j]
    }

    pub fn act(&self, g: usize, a: &[u64]) -> Vec<u64> {
        let mat = &self.action[g];
        (0..self.factors.len())
            .map(|i| {
                let m = self.factors[i];
                mat[i]
                    .iter()
                    .zip(a)
                    .fold(0u64, |acc, (c, x)| (acc + (c % m) * (x % m)) % m)
            })
            .collect()
    }

    pub fn element_order(&self, a: &[u64]) -> u64 {
        a.iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (x, m)| acc.lcm(&(m / m.gcd(x).max(1))))
    }

    /// All elements in lexicographic order (first coordinate most
    /// significant); a rank-0 module has exactly the empty vector.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![];
        let mut tuple = self.zero();
        loop {
            out.push(tuple.clone());
            if !increment_mixed_radix(&mut tuple, &self.factors) {
                break;
            }
        }
        out
    }
}

/// A morphism of modules over the same group, stored by the images of the
/// standard generators `e_1, ..., e_k` of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    source: FinModule,
    target: FinModule,
    gen_images: Vec<Vec<u64>>,
}

impl ModuleMorphism {
    /// Validates generator orders and full equivariance.
    pub fn new(
        source: FinModule,
        target: FinModule,
        gen_images: Vec<Vec<u64>>,
    ) -> Result<Self, GroupError> {
        if source.group() != target.group() {
            return Err(GroupError::InvalidMorphism(
                "source and target live over different groups".into(),
            ));
        }
        if gen_images.len() != source.rank() {
            return Err(GroupError::InvalidMorphism(format!(
                "expected {} generator images, got {}",
                source.rank(),
                gen_images.len()
            )));
        }
        let gen_images: Vec<Vec<u64>> = gen_images.iter().map(|v| target.reduce(v)).collect();
        for (i, img) in gen_images.iter().enumerate() {
            if img.len() != target.rank() {
                return Err(GroupError::InvalidMorphism(format!(
                    "image {i} has wrong rank"
                )));
            }
            if !target.is_zero(&target.scalar_mul(source.factors()[i], img)) {
                return Err(GroupError::InvalidMorphism(format!(
                    "image of generator {i} does not respect its order"
                )));
            }
        }
        let morphism = ModuleMorphism {
            source,
            target,
            gen_images,
        };
        for g in morphism.source.group().elements() {
            for u in morphism.source.elements() {
                let lhs = morphism.apply(&morphism.source.act(g, &u));
                let rhs = morphism.target.act(g, &morphism.apply(&u));
                if lhs != rhs {
                    return Err(GroupError::InvalidMorphism(format!(
                        "not equivariant at group element {g}"
                    )));
                }
            }
        }
        Ok(morphism)
    }

    pub fn zero(source: FinModule, target: FinModule) -> Self {
        let z = target.zero();
        let k = source.rank();
        ModuleMorphism {
            source,
            target,
            gen_images: vec![z; k],
        }
    }

    pub fn source(&self) -> &FinModule {
        &self.source
    }

    pub fn target(&self) -> &FinModule {
        &self.target
    }

    pub fn gen_images(&self) -> &[Vec<u64>] {
        &self.gen_images
    }

    pub fn is_zero(&self) -> bool {
        self.gen_images.iter().all(|v| self.target.is_zero(v))
    }

    pub fn apply(&self, u: &[u64]) -> Vec<u64> {
        let mut acc = self.target.zero();
        for (x, img) in u.iter().zip(&self.gen_images) {
            acc = self.target.add(&acc, &self.target.scalar_mul(*x, img));
        }
        acc
    }
}

/// All equivariant morphisms from `source` into the permutation-acted
/// scalar power (see [`FinModule::scalar_power`]), ordered lexicographically
/// by generator images.
pub fn enumerate_module_morphisms(
    source: &FinModule,
    n: usize,
    scalar_order: u64,
    rho: &[Perm],
) -> Vec<ModuleMorphism> {
    let target = FinModule::scalar_power(source.group().clone(), n, scalar_order, rho);
    // Coordinates of the image of generator i must be killed by m_i, so
    // they range over the multiples of N/gcd(N, m_i).
    let per_gen: Vec<Vec<Vec<u64>>> = source
        .factors()
        .iter()
        .map(|&m| {
            let g = scalar_order.gcd(&m);
            let step = scalar_order / g;
            let choices: Vec<u64> = (0..g).map(|t| t * step).collect();
            let mut images = vec![];
            let mut idx = vec![0usize; n];
            loop {
                images.push(idx.iter().map(|&t| choices[t]).collect::<Vec<u64>>());
                if !increment_mixed_radix_usize(&mut idx, choices.len()) {
                    break;
                }
            }
            images
        })
        .collect();
    let mut out = vec![];
    let mut pick = vec![0usize; source.rank()];
    loop {
        let gen_images: Vec<Vec<u64>> = pick
            .iter()
            .enumerate()
            .map(|(i, &t)| per_gen[i][t].clone())
            .collect();
        if let Ok(m) = ModuleMorphism::new(source.clone(), target.clone(), gen_images) {
            out.push(m);
        }
        let radices: Vec<usize> = per_gen.iter().map(Vec::len).collect();
        if !increment_mixed_radix_vec(&mut pick, &radices) {
            break;
        }
    }
    out
}

fn increment_mixed_radix_usize(tuple: &mut [usize], radix: usize) -> bool {
    for x in tuple.iter_mut().rev() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

fn increment_mixed_radix_vec(tuple: &mut [usize], radices: &[usize]) -> bool {
    for i in (0..tuple.len()).rev() {
        tuple[i] += 1;
        if tuple[i] < radices[i] {
            return true;
        }
        tuple[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_perm_reps;
    use super::*;

    fn negation_module(m: u64) -> FinModule {
        let c2 = FinGroup::cyclic(2);
        FinModule::new(c2, vec![m], vec![vec![vec![1]], vec![vec![m - 1]]]).unwrap()
    }

    #[test]
    fn action_validation() {
        let c2 = FinGroup::cyclic(2);
        // Negation on Z/5 is a valid involution.
        assert!(FinModule::new(c2.clone(), vec![5], vec![vec![vec![1]], vec![vec![4]]]).is_ok());
        // Doubling on Z/5 squares to x4, not the identity: not an action of C2.
        assert!(matches!(
            FinModule::new(c2.clone(), vec![5], vec![vec![vec![1]], vec![vec![2]]]),
            Err(GroupError::InvalidModule(_))
        ));
        // Identity element must act as the identity.
        assert!(matches!(
            FinModule::new(c2, vec![5], vec![vec![vec![2]], vec![vec![3]]]),
            Err(GroupError::InvalidModule(_))
        ));
    }

    #[test]
    fn mixed_moduli_well_definedness() {
        let c2 = FinGroup::cyclic(2);
        let id = vec![vec![1, 0], vec![0, 1]];
        // Over factors (2, 4), an upper entry maps the order-4 generator
        // into the order-2 factor (2 divides 1*4) — fine, and the matrix
        // below is an involution mod the moduli.
        assert!(FinModule::new(
            c2.clone(),
            vec![2, 4],
            vec![id.clone(), vec![vec![1, 1], vec![0, 3]]]
        )
        .is_ok());
        // A lower entry would need 4 | entry*2: rejected.
        assert!(matches!(
            FinModule::new(c2, vec![2, 4], vec![id, vec![vec![1, 0], vec![1, 1]]]),
            Err(GroupError::InvalidModule(_))
        ));
    }

    #[test]
    fn module_arithmetic() {
        let m = negation_module(4);
        assert_eq!(m.size(), 4);
        assert_eq!(m.elements().len(), 4);
        assert_eq!(m.add(&[3], &[2]), vec![1]);
        assert_eq!(m.neg(&[1]), vec![3]);
        assert_eq!(m.act(1, &[1]), vec![3]);
        assert_eq!(m.element_order(&[2]), 2);
        assert_eq!(m.element_order(&[1]), 4);

        // Rank-0 module: one element, the empty vector.
        let t = FinModule::trivial(FinGroup::cyclic(3), vec![]);
        assert_eq!(t.elements(), vec![Vec::<u64>::new()]);
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn scalar_power_permutes_coordinates() {
        let c2 = FinGroup::cyclic(2);
        let rho = vec![Perm::identity(2), Perm::new(vec![1, 0])];
        let m = FinModule::scalar_power(c2, 2, 4, &rho);
        // Acting by the swap moves coordinate content across.
        assert_eq!(m.act(1, &[1, 3]), vec![3, 1]);
        assert_eq!(m.act(0, &[1, 3]), vec![1, 3]);
    }

    #[test]
    fn morphisms_from_odd_torsion_to_involution_targets_are_trivial() {
        // Source Z/3 with negation; target scalars of order 4, one
        // coordinate, trivial permutation action. Equivariance forces
        // beta(u) = beta(u)^(-1), and odd order forces beta = 0.
        let source = negation_module(3);
        let rho = vec![Perm::identity(1), Perm::identity(1)];
        let morphisms = enumerate_module_morphisms(&source, 1, 4, &rho);
        assert_eq!(morphisms.len(), 1);
        assert!(morphisms[0].is_zero());
    }

    #[test]
    fn morphisms_from_z4_negation() {
        let source = negation_module(4);
        let rho = vec![Perm::identity(1), Perm::identity(1)];
        let morphisms = enumerate_module_morphisms(&source, 1, 4, &rho);
        // Exactly the zero map and k -> 2k (additively): the square roots
        // of unity inside the order-4 scalars.
        assert_eq!(morphisms.len(), 2);
        assert!(morphisms[0].is_zero());
        assert_eq!(morphisms[1].gen_images(), &[vec![2]]);
    }

    #[test]
    fn trivial_source_gives_only_zero() {
        let c2 = FinGroup::cyclic(2);
        let source = FinModule::trivial(c2.clone(), vec![]);
        let rho = vec![Perm::identity(2), Perm::new(vec![1, 0])];
        let morphisms = enumerate_module_morphisms(&source, 2, 4, &rho);
        assert_eq!(morphisms.len(), 1);
        assert!(morphisms[0].is_zero());
    }

    #[test]
    fn equivariance_filter_with_permutation_target() {
        // Source Z/2 with trivial C2-action; target two order-2 scalar
        // coordinates swapped by the generator. Equivariant images of the
        // generator must be fixed by the swap: (0,0) or (1,1).
        let c2 = FinGroup::cyclic(2);
        let source = FinModule::trivial(c2.clone(), vec![2]);
        let rho = enumerate_perm_reps(&c2, 2);
        let swap_action = rho
            .iter()
            .find(|r| !r[1].is_identity())
            .unwrap();
        let morphisms = enumerate_module_morphisms(&source, 2, 2, swap_action);
        let images: Vec<&[Vec<u64>]> = morphisms.iter().map(ModuleMorphism::gen_images).collect();
        assert_eq!(images, vec![&[vec![0, 0]][..], &[vec![1, 1]][..]]);
    }

    #[test]
    fn morphism_application_is_linear_and_equivariant() {
        let source = negation_module(4);
        let rho = vec![Perm::identity(1), Perm::identity(1)];
        let m = enumerate_module_morphisms(&source, 1, 4, &rho)
            .pop()
            .unwrap();
        for u in source.elements() {
            for v in source.elements() {
                let sum = source.add(&u, &v);
                assert_eq!(
                    m.apply(&sum),
                    m.target().add(&m.apply(&u), &m.apply(&v))
                );
            }
            for g in source.group().elements() {
                assert_eq!(
                    m.apply(&source.act(g, &u)),
                    m.target().act(g, &m.apply(&u))
                );
            }
        }
    }
}
