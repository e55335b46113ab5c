//! 2-groups in two presentations — classifying triples (group, module,
//! associator 3-cochain) and crossed modules — with the arrow calculus,
//! pentagon checking, classification of crossed modules up to the triple
//! data, and morphisms of 2-groups as triples.

use crate::cochain::{cohomologous_witness, Cochain};
use crate::group::{
    decompose_abelian, hom_image, hom_kernel, is_homomorphism, FinGroup, FinModule, GroupError,
    ModuleMorphism,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwoGroupError {
    #[error("associator is not a 3-cocycle")]
    NotACocycle,
    #[error("arrows sit at different objects")]
    ObjectMismatch,
    #[error("arrows are not composable")]
    NotComposable,
    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("invalid morphism triple: {0}")]
    InvalidTriple(String),
    #[error("structure mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// An arrow of a special 2-group: the pair `(g, m)` is a morphism from the
/// object `g` to itself, with `m` in the loop module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub object: usize,
    pub value: Vec<u64>,
}

/// A 2-group whose objects form a group on the nose and whose arrows are
/// loops: determined by a group, a module over it, and an associator
/// 3-cochain. The unit constraints are identities; the associator at
/// `(g1, g2, g3)` is the loop `alpha(g1, g2, g3)` at `g1 g2 g3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialTwoGroup {
    group: FinGroup,
    module: FinModule,
    alpha: Cochain,
}

impl SpecialTwoGroup {
    pub fn new(group: FinGroup, module: FinModule, alpha: Cochain) -> Result<Self, TwoGroupError> {
        let g = SpecialTwoGroup::new_unchecked(group, module, alpha)?;
        if !g.alpha.is_cocycle() {
            return Err(TwoGroupError::NotACocycle);
        }
        Ok(g)
    }

    /// Builds the structure without the cocycle check, so that the pentagon
    /// test can be exercised on arbitrary 3-cochains.
    pub fn new_unchecked(
        group: FinGroup,
        module: FinModule,
        alpha: Cochain,
    ) -> Result<Self, TwoGroupError> {
        if module.group() != &group {
            return Err(TwoGroupError::Mismatch(
                "module does not live over the object group".into(),
            ));
        }
        if alpha.module() != &module || alpha.degree() != 3 {
            return Err(TwoGroupError::Mismatch(
                "associator must be a 3-cochain over the loop module".into(),
            ));
        }
        Ok(SpecialTwoGroup {
            group,
            module,
            alpha,
        })
    }

    /// The strict 2-group on a plain group: trivial loops, zero associator.
    pub fn discrete(group: FinGroup) -> Self {
        let module = FinModule::trivial(group.clone(), vec![]);
        let alpha = Cochain::zero(module.clone(), 3);
        SpecialTwoGroup {
            group,
            module,
            alpha,
        }
    }

    /// The split 2-group on a group and module: zero associator.
    pub fn split(group: FinGroup, module: FinModule) -> Result<Self, TwoGroupError> {
        let alpha = Cochain::zero(module.clone(), 3);
        SpecialTwoGroup::new(group, module, alpha)
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn module(&self) -> &FinModule {
        &self.module
    }

    pub fn alpha(&self) -> &Cochain {
        &self.alpha
    }

    pub fn arrow(&self, object: usize, value: Vec<u64>) -> Arrow {
        Arrow {
            object,
            value: self.module.reduce(&value),
        }
    }

    pub fn identity_arrow(&self, object: usize) -> Arrow {
        Arrow {
            object,
            value: self.module.zero(),
        }
    }

    pub fn associator(&self, g1: usize, g2: usize, g3: usize) -> Arrow {
        let object = self.group.mul(self.group.mul(g1, g2), g3);
        Arrow {
            object,
            value: self.alpha.get(&[g1, g2, g3]),
        }
    }

    /// Vertical composition of loops at a shared object.
    pub fn compose_arrows(&self, second: &Arrow, first: &Arrow) -> Result<Arrow, TwoGroupError> {
        if second.object != first.object {
            return Err(TwoGroupError::ObjectMismatch);
        }
        Ok(Arrow {
            object: first.object,
            value: self.module.add(&second.value, &first.value),
        })
    }

    /// Tensor of arrows: objects multiply, and the right loop is acted on
    /// by the left object before the loops add.
    pub fn tensor_arrows(&self, left: &Arrow, right: &Arrow) -> Arrow {
        Arrow {
            object: self.group.mul(left.object, right.object),
            value: self
                .module
                .add(&left.value, &self.module.act(left.object, &right.value)),
        }
    }

    /// The loop `(g, u)` at `g`.
    pub fn gamma(&self, g: usize, u: &[u64]) -> Arrow {
        self.arrow(g, u.to_vec())
    }

    /// The loop `(g, g . u)` at `g`; composing with the inverse of
    /// [`SpecialTwoGroup::gamma`] recovers the module action.
    pub fn delta(&self, g: usize, u: &[u64]) -> Arrow {
        self.arrow(g, self.module.act(g, u))
    }

    /// Inverse of `gamma` on loops at any object.
    pub fn gamma_inv(&self, arrow: &Arrow) -> Vec<u64> {
        arrow.value.clone()
    }

    /// Whether the associator arrows satisfy the pentagon identity for all
    /// object quadruples, computed literally with the arrow operations.
    pub fn pentagon_check(&self) -> bool {
        let g = &self.group;
        for g1 in g.elements() {
            for g2 in g.elements() {
                for g3 in g.elements() {
                    for g4 in g.elements() {
                        let left = self
                            .compose_arrows(
                                &self.associator(g1, g2, g.mul(g3, g4)),
                                &self.associator(g.mul(g1, g2), g3, g4),
                            )
                            .expect("pentagon arrows share an object");
                        let right = self
                            .compose_arrows(
                                &self.tensor_arrows(
                                    &self.identity_arrow(g1),
                                    &self.associator(g2, g3, g4),
                                ),
                                &self.associator(g1, g.mul(g2, g3), g4),
                            )
                            .and_then(|r| {
                                self.compose_arrows(
                                    &r,
                                    &self.tensor_arrows(
                                        &self.associator(g1, g2, g3),
                                        &self.identity_arrow(g4),
                                    ),
                                )
                            })
                            .expect("pentagon arrows share an object");
                        if left != right {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// A crossed module: groups `E` and `N`, a boundary homomorphism `N -> E`,
/// and an action of `E` on `N` by automorphisms, subject to the two
/// compatibility laws relating boundary, action, and conjugation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedModule {
    big: FinGroup,
    normal: FinGroup,
    boundary: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl CrossedModule {
    pub fn new(
        big: FinGroup,
        normal: FinGroup,
        boundary: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, TwoGroupError> {
        if boundary.len() != normal.order() || boundary.iter().any(|&e| e >= big.order()) {
            return Err(TwoGroupError::InvalidCrossedModule(
                "boundary has the wrong shape".into(),
            ));
        }
        if !is_homomorphism(&normal, &big, &boundary) {
            return Err(TwoGroupError::InvalidCrossedModule(
                "boundary is not a homomorphism".into(),
            ));
        }
        if action.len() != big.order()
            || action
                .iter()
                .any(|row| row.len() != normal.order() || row.iter().any(|&n| n >= normal.order()))
        {
            return Err(TwoGroupError::InvalidCrossedModule(
                "action table has the wrong shape".into(),
            ));
        }
        let cm = CrossedModule {
            big,
            normal,
            boundary,
            action,
        };
        // Identity acts trivially; each element acts as an automorphism;
        // the action is a homomorphism E -> Aut(N).
        let e_id = cm.big.identity();
        for n in cm.normal.elements() {
            if cm.act(e_id, n) != n {
                return Err(TwoGroupError::InvalidCrossedModule(
                    "identity does not act trivially".into(),
                ));
            }
        }
        for e in cm.big.elements() {
            for n1 in cm.normal.elements() {
                for n2 in cm.normal.elements() {
                    if cm.act(e, cm.normal.mul(n1, n2)) != cm.normal.mul(cm.act(e, n1), cm.act(e, n2))
                    {
                        return Err(TwoGroupError::InvalidCrossedModule(format!(
                            "element {e} does not act as a homomorphism"
                        )));
                    }
                }
            }
        }
        for e1 in cm.big.elements() {
            for e2 in cm.big.elements() {
                for n in cm.normal.elements() {
                    if cm.act(cm.big.mul(e1, e2), n) != cm.act(e1, cm.act(e2, n)) {
                        return Err(TwoGroupError::InvalidCrossedModule(format!(
                            "action law fails at ({e1}, {e2})"
                        )));
                    }
                }
            }
        }
        // Compatibility: boundary of an acted element is the conjugated
        // boundary, and boundary elements act by conjugation.
        for e in cm.big.elements() {
            for n in cm.normal.elements() {
                let lhs = cm.boundary[cm.act(e, n)];
                let rhs = cm.big.mul(cm.big.mul(e, cm.boundary[n]), cm.big.inv(e));
                if lhs != rhs {
                    return Err(TwoGroupError::InvalidCrossedModule(format!(
                        "boundary equivariance fails at ({e}, {n})"
                    )));
                }
            }
        }
        for n in cm.normal.elements() {
            for n2 in cm.normal.elements() {
                let lhs = cm.act(cm.boundary[n], n2);
                let rhs = cm.normal.mul(cm.normal.mul(n, n2), cm.normal.inv(n));
                if lhs != rhs {
                    return Err(TwoGroupError::InvalidCrossedModule(format!(
                        "boundary elements must act by conjugation (fails at ({n}, {n2}))"
                    )));
                }
            }
        }
        Ok(cm)
    }

    pub fn big_group(&self) -> &FinGroup {
        &self.big
    }

    pub fn normal_group(&self) -> &FinGroup {
        &self.normal
    }

    pub fn boundary(&self, n: usize) -> usize {
        self.boundary[n]
    }

    pub fn act(&self, e: usize, n: usize) -> usize {
        self.action[e][n]
    }

    /// The arrow `(e, n): e -> boundary(n) e` of the associated strict
    /// 2-group.
    pub fn strict_arrow(&self, source: usize, weight: usize) -> StrictArrow {
        StrictArrow { source, weight }
    }

    pub fn strict_identity(&self, object: usize) -> StrictArrow {
        StrictArrow {
            source: object,
            weight: self.normal.identity(),
        }
    }

    pub fn strict_target(&self, arrow: &StrictArrow) -> usize {
        self.big.mul(self.boundary[arrow.weight], arrow.source)
    }

    /// Composition `(e', n') o (e, n) = (e, n' n)`, defined when the source
    /// of the second arrow is the target of the first.
    pub fn compose_strict(
        &self,
        second: &StrictArrow,
        first: &StrictArrow,
    ) -> Result<StrictArrow, TwoGroupError> {
        if second.source != self.strict_target(first) {
            return Err(TwoGroupError::NotComposable);
        }
        Ok(StrictArrow {
            source: first.source,
            weight: self.normal.mul(second.weight, first.weight),
        })
    }

    /// Tensor `(e', n') (e, n) = (e' e, n' (e' . n))`.
    pub fn tensor_strict(&self, left: &StrictArrow, right: &StrictArrow) -> StrictArrow {
        StrictArrow {
            source: self.big.mul(left.source, right.source),
            weight: self
                .normal
                .mul(left.weight, self.act(left.source, right.weight)),
        }
    }
}

/// An arrow `(e, n)` of the strict 2-group of a crossed module, from the
/// object `e` to the object `boundary(n) e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrictArrow {
    pub source: usize,
    pub weight: usize,
}

/// The result of classifying a crossed module: the component group, the
/// loop module over it, and an associator representing the obstruction
/// class, together with the bookkeeping used to produce them.
#[derive(Clone, Debug)]
pub struct Classified {
    pub pi0: FinGroup,
    pub pi1: FinModule,
    pub alpha: Cochain,
    /// Component index of each object.
    pub projection: Vec<usize>,
    /// The section used: one object per component, identity first.
    pub section: Vec<usize>,
    /// Sorted kernel of the boundary.
    pub kernel: Vec<usize>,
    /// Coordinates of each kernel element over the chosen generators.
    pub kernel_coords: BTreeMap<usize, Vec<u64>>,
}

/// Classifies a crossed module up to its triple: component group, loop
/// module, and a verified associator 3-cocycle measuring the failure of
/// the section to be multiplicative.
///
/// The section, when not supplied, picks the least object of each
/// component, except that the identity component maps to the identity;
/// lifts through the boundary pick the least preimage, except that the
/// identity lifts to the identity. Both exceptions keep the output
/// normalized.
pub fn classify_crossed(
    cm: &CrossedModule,
    section: Option<&[usize]>,
) -> Result<Classified, TwoGroupError> {
    let image = hom_image(&cm.boundary);
    debug_assert!(cm.big.is_normal(&image));
    let (pi0, projection, reps) = cm.big.quotient(&image)?;
    let mut chosen: Vec<usize> = match section {
        Some(s) => {
            if s.len() != pi0.order() {
                return Err(TwoGroupError::InvalidSection(
                    "section has the wrong length".into(),
                ));
            }
            for (x, &e) in s.iter().enumerate() {
                if e >= cm.big.order() || projection[e] != x {
                    return Err(TwoGroupError::InvalidSection(format!(
                        "entry {x} does not represent its component"
                    )));
                }
            }
            s.to_vec()
        }
        None => reps,
    };
    if chosen[pi0.identity()] != cm.big.identity() {
        if section.is_some() {
            return Err(TwoGroupError::InvalidSection(
                "section must send the identity component to the identity".into(),
            ));
        }
        chosen[pi0.identity()] = cm.big.identity();
    }

    let kernel = hom_kernel(&cm.normal, &cm.big, &cm.boundary);
    let (factors, gens, kernel_coords) = decompose_abelian(&cm.normal, &kernel);

    // Loop module: components act on the kernel through the section; the
    // choice of representative does not matter because boundary elements
    // act by conjugation and the kernel is central in the normal group.
    let rank = factors.len();
    let mut matrices = vec![];
    for x in pi0.elements() {
        let mut mat = vec![vec![0u64; rank]; rank];
        for (j, &gen) in gens.iter().enumerate() {
            let moved = cm.act(chosen[x], gen);
            let coords = kernel_coords
                .get(&moved)
                .expect("action preserves the kernel");
            for i in 0..rank {
                mat[i][j] = coords[i];
            }
        }
        matrices.push(mat);
    }
    let pi1 = FinModule::new(pi0.clone(), factors, matrices)?;

    // Lift the multiplication defect of the section through the boundary.
    let lift = |e: usize| -> usize {
        if e == cm.big.identity() {
            cm.normal.identity()
        } else {
            cm.normal
                .elements()
                .find(|&n| cm.boundary[n] == e)
                .expect("defect lies in the boundary image")
        }
    };
    let defect = |x: usize, y: usize| -> usize {
        let sx_sy = cm.big.mul(chosen[x], chosen[y]);
        lift(cm.big.mul(sx_sy, cm.big.inv(chosen[pi0.mul(x, y)])))
    };

    let mut alpha = Cochain::zero(pi1.clone(), 3);
    for x in pi0.elements() {
        for y in pi0.elements() {
            for z in pi0.elements() {
                if [x, y, z].contains(&pi0.identity()) {
                    continue;
                }
                // Reassociating the section three ways differs by a kernel
                // element: q = (F(x,y) F(xy,z))^(-1) (s(x) . F(y,z)) F(x,yz).
                let left = cm.normal.mul(defect(x, y), defect(pi0.mul(x, y), z));
                let right = cm
                    .normal
                    .mul(cm.act(chosen[x], defect(y, z)), defect(x, pi0.mul(y, z)));
                let q = cm.normal.mul(cm.normal.inv(left), right);
                let coords = kernel_coords
                    .get(&q)
                    .expect("associativity defect lies in the kernel");
                alpha.set(&[x, y, z], coords.clone());
            }
        }
    }
    assert!(
        alpha.is_cocycle(),
        "classification produced a non-closed associator"
    );
    Ok(Classified {
        pi0,
        pi1,
        alpha,
        projection,
        section: chosen,
        kernel,
        kernel_coords,
    })
}

/// Presents a module as a plain group (forgetting the action): returns the
/// group together with the element each index stands for.
pub fn module_as_group(module: &FinModule) -> (FinGroup, Vec<Vec<u64>>) {
    let elements = module.elements();
    let index: BTreeMap<&[u64], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let n = elements.len();
    let mut table = vec![0; n * n];
    for (a, va) in elements.iter().enumerate() {
        for (b, vb) in elements.iter().enumerate() {
            table[a * n + b] = index[module.add(va, vb).as_slice()];
        }
    }
    let rows: Vec<Vec<usize>> = (0..n).map(|a| table[a * n..(a + 1) * n].to_vec()).collect();
    (
        FinGroup::from_table(rows).expect("module addition is a group"),
        elements,
    )
}

/// The crossed module of a split special 2-group (zero associator):
/// trivial boundary from the loop group, action through the module
/// structure.
pub fn special_to_crossed(tg: &SpecialTwoGroup) -> Result<CrossedModule, TwoGroupError> {
    if !tg.alpha().is_zero() {
        return Err(TwoGroupError::Mismatch(
            "only a zero associator yields a crossed module directly".into(),
        ));
    }
    let (normal, elements) = module_as_group(tg.module());
    let index: BTreeMap<&[u64], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let boundary = vec![tg.group().identity(); normal.order()];
    let action: Vec<Vec<usize>> = tg
        .group()
        .elements()
        .map(|g| {
            elements
                .iter()
                .map(|v| index[tg.module().act(g, v).as_slice()])
                .collect()
        })
        .collect();
    CrossedModule::new(tg.group().clone(), normal, boundary, action)
}

/// A morphism of special 2-groups in triple form: a homomorphism of object
/// groups, an equivariant morphism into the pulled-back loop module, and a
/// 2-cochain whose coboundary matches the associator defect.
#[derive(Clone, Debug)]
pub struct TwoGroupMorphism {
    source: SpecialTwoGroup,
    target: SpecialTwoGroup,
    rho: Vec<usize>,
    beta: ModuleMorphism,
    c: Cochain,
}

/// The target loop module pulled back along a homomorphism of object
/// groups, so it becomes a module over the source group.
pub fn pullback_module(
    target: &FinModule,
    source_group: &FinGroup,
    rho: &[usize],
) -> Result<FinModule, GroupError> {
    let action = source_group
        .elements()
        .map(|g| {
            (0..target.rank())
                .map(|i| {
                    (0..target.rank())
                        .map(|j| target.action_entry(rho[g], i, j))
                        .collect()
                })
                .collect()
        })
        .collect();
    FinModule::new(
        source_group.clone(),
        target.factors().to_vec(),
        action,
    )
}

impl TwoGroupMorphism {
    pub fn new(
        source: SpecialTwoGroup,
        target: SpecialTwoGroup,
        rho: Vec<usize>,
        beta: ModuleMorphism,
        c: Cochain,
    ) -> Result<Self, TwoGroupError> {
        if !is_homomorphism(source.group(), target.group(), &rho) {
            return Err(TwoGroupError::InvalidTriple(
                "object map is not a homomorphism".into(),
            ));
        }
        let pulled = pullback_module(target.module(), source.group(), &rho)?;
        if beta.source() != source.module() || beta.target() != &pulled {
            return Err(TwoGroupError::InvalidTriple(
                "loop map must go from the source module to the pulled-back target module".into(),
            ));
        }
        if c.module() != &pulled || c.degree() != 2 {
            return Err(TwoGroupError::InvalidTriple(
                "structure cochain must be a 2-cochain over the pulled-back module".into(),
            ));
        }
        // d(c) must equal beta(alpha) - alpha'(rho, rho, rho).
        let pushed_alpha = source.alpha().map_values(&beta);
        let pulled_alpha = Cochain::from_fn(pulled.clone(), 3, |t| {
            target.alpha().get(&[rho[t[0]], rho[t[1]], rho[t[2]]])
        });
        let want = pushed_alpha
            .sub(&pulled_alpha)
            .expect("both defects live over the pulled-back module");
        if c.coboundary() != want {
            return Err(TwoGroupError::InvalidTriple(
                "coboundary of the structure cochain does not match the associator defect".into(),
            ));
        }
        Ok(TwoGroupMorphism {
            source,
            target,
            rho,
            beta,
            c,
        })
    }

    pub fn identity(tg: &SpecialTwoGroup) -> Self {
        let rho: Vec<usize> = tg.group().elements().collect();
        let pulled = pullback_module(tg.module(), tg.group(), &rho)
            .expect("identity pullback is the module itself");
        let beta = ModuleMorphism::new(
            tg.module().clone(),
            pulled.clone(),
            (0..tg.module().rank())
                .map(|i| tg.module().basis_vector(i))
                .collect(),
        )
        .expect("identity generator images are equivariant");
        let c = Cochain::zero(pulled, 2);
        TwoGroupMorphism {
            source: tg.clone(),
            target: tg.clone(),
            rho,
            beta,
            c,
        }
    }

    pub fn source(&self) -> &SpecialTwoGroup {
        &self.source
    }

    pub fn target(&self) -> &SpecialTwoGroup {
        &self.target
    }

    pub fn rho(&self) -> &[usize] {
        &self.rho
    }

    pub fn beta(&self) -> &ModuleMorphism {
        &self.beta
    }

    pub fn structure_cochain(&self) -> &Cochain {
        &self.c
    }

    pub fn apply_object(&self, g: usize) -> usize {
        self.rho[g]
    }

    pub fn apply_arrow(&self, arrow: &Arrow) -> Arrow {
        self.target
            .arrow(self.rho[arrow.object], self.beta.apply(&arrow.value))
    }

    /// The structure arrow `F(g1) F(g2) -> F(g1 g2)` (a loop, since the
    /// object map is a homomorphism).
    pub fn structure_arrow(&self, g1: usize, g2: usize) -> Arrow {
        self.target.arrow(
            self.rho[self.source.group().mul(g1, g2)],
            self.c.get(&[g1, g2]),
        )
    }

    /// Coherence of the structure arrows against both associators, checked
    /// literally with arrow operations for all object triples.
    pub fn hexagon_check(&self) -> bool {
        let sg = self.source.group();
        for g1 in sg.elements() {
            for g2 in sg.elements() {
                for g3 in sg.elements() {
                    let lhs = self
                        .target
                        .compose_arrows(
                            &self.apply_arrow(&self.source.associator(g1, g2, g3)),
                            &self.target.compose_arrows(
                                &self.structure_arrow(sg.mul(g1, g2), g3),
                                &self.target.tensor_arrows(
                                    &self.structure_arrow(g1, g2),
                                    &self.target.identity_arrow(self.rho[g3]),
                                ),
                            ).expect("hexagon arrows share an object"),
                        )
                        .expect("hexagon arrows share an object");
                    let rhs = self
                        .target
                        .compose_arrows(
                            &self.structure_arrow(g1, sg.mul(g2, g3)),
                            &self.target.compose_arrows(
                                &self.target.tensor_arrows(
                                    &self.target.identity_arrow(self.rho[g1]),
                                    &self.structure_arrow(g2, g3),
                                ),
                                &self.target.associator(self.rho[g1], self.rho[g2], self.rho[g3]),
                            ).expect("hexagon arrows share an object"),
                        )
                        .expect("hexagon arrows share an object");
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A witness that two morphisms with the same object and loop maps are
/// monoidally isomorphic: a 1-cochain whose coboundary is the difference
/// of their structure cochains. `None` when the maps differ or the
/// cochains are not cohomologous.
pub fn monoidal_iso_witness(f: &TwoGroupMorphism, g: &TwoGroupMorphism) -> Option<Cochain> {
    if f.rho != g.rho || f.beta.gen_images() != g.beta.gen_images() {
        return None;
    }
    cohomologous_witness(&f.c, &g.c).ok().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::coboundary_solutions;
    use crate::group::Perm;
    use proptest::prelude::*;

    fn scalar_module(group: FinGroup, order: u64) -> FinModule {
        let rho = vec![Perm::identity(1); group.order()];
        FinModule::scalar_power(group, 1, order, &rho)
    }

    fn c2_mu2_with_alpha(alpha_value: u64) -> SpecialTwoGroup {
        let g = FinGroup::cyclic(2);
        let m = scalar_module(g.clone(), 2);
        let mut alpha = Cochain::zero(m.clone(), 3);
        alpha.set(&[1, 1, 1], vec![alpha_value]);
        SpecialTwoGroup::new(g, m, alpha).unwrap()
    }

    fn negation_2group(m: u64) -> SpecialTwoGroup {
        // Objects C2 acting on Z/m loops by negation, zero associator.
        let g = FinGroup::cyclic(2);
        let module = FinModule::new(
            g.clone(),
            vec![m],
            vec![vec![vec![1 % m]], vec![vec![(m - 1) % m]]],
        )
        .unwrap();
        SpecialTwoGroup::split(g, module).unwrap()
    }

    #[test]
    fn arrow_calculus_basics() {
        let tg = negation_2group(5);
        let id = tg.identity_arrow(1);
        let a = tg.arrow(1, vec![3]);
        assert_eq!(tg.compose_arrows(&id, &a).unwrap(), a);
        let b = tg.arrow(0, vec![2]);
        assert_eq!(
            tg.compose_arrows(&a, &b).unwrap_err(),
            TwoGroupError::ObjectMismatch
        );
        // Unit on the left of a tensor changes nothing.
        assert_eq!(tg.tensor_arrows(&tg.identity_arrow(0), &a), a);
        // The acted side flips sign under the nontrivial object.
        assert_eq!(tg.tensor_arrows(&tg.arrow(1, vec![0]), &b), tg.arrow(1, vec![3]));
        assert_eq!(
            tg.tensor_arrows(&a, &tg.arrow(0, vec![1])),
            tg.arrow(1, vec![2])
        );
    }

    #[test]
    fn action_recovered_from_gamma_and_delta() {
        let tg = negation_2group(7);
        for g in tg.group().elements() {
            for u in tg.module().elements() {
                assert_eq!(tg.gamma(0, &u).value, u);
                let recovered = tg.gamma_inv(&tg.delta(g, &u));
                assert_eq!(recovered, tg.module().act(g, &u));
            }
        }
    }

    #[test]
    fn interchange_for_arrows() {
        let tg = negation_2group(4);
        let m = tg.module();
        for g in tg.group().elements() {
            for h in tg.group().elements() {
                for v in m.elements() {
                    for w in m.elements() {
                        let phi = tg.arrow(g, v.clone());
                        let phi2 = tg.arrow(g, vec![1]);
                        let psi = tg.arrow(h, w.clone());
                        let psi2 = tg.arrow(h, vec![3]);
                        let lhs = tg.tensor_arrows(
                            &tg.compose_arrows(&phi2, &phi).unwrap(),
                            &tg.compose_arrows(&psi2, &psi).unwrap(),
                        );
                        let rhs = tg
                            .compose_arrows(
                                &tg.tensor_arrows(&phi2, &psi2),
                                &tg.tensor_arrows(&phi, &psi),
                            )
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn pentagon_matches_cocycle_condition_on_c2() {
        let g = FinGroup::cyclic(2);
        let m = scalar_module(g.clone(), 4);
        for v in 0..4 {
            let mut alpha = Cochain::zero(m.clone(), 3);
            alpha.set(&[1, 1, 1], vec![v]);
            let tg = SpecialTwoGroup::new_unchecked(g.clone(), m.clone(), alpha.clone()).unwrap();
            assert_eq!(tg.pentagon_check(), alpha.is_cocycle());
        }
        // The order-2 spike is a valid associator.
        assert!(c2_mu2_with_alpha(1).pentagon_check());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn pentagon_iff_cocycle_on_c3(values in proptest::collection::vec(0u64..3, 8)) {
            let g = FinGroup::cyclic(3);
            let m = scalar_module(g.clone(), 3);
            let mut alpha = Cochain::zero(m.clone(), 3);
            let mut idx = 0;
            for a in 1..3usize {
                for b in 1..3usize {
                    for c in 1..3usize {
                        alpha.set(&[a, b, c], vec![values[idx]]);
                        idx += 1;
                    }
                }
            }
            let tg = SpecialTwoGroup::new_unchecked(g, m, alpha.clone()).unwrap();
            prop_assert_eq!(tg.pentagon_check(), alpha.is_cocycle());
        }
    }

    #[test]
    fn non_cocycle_rejected_but_constructible_unchecked() {
        let g = FinGroup::cyclic(4);
        let m = scalar_module(g.clone(), 4);
        let mut alpha = Cochain::zero(m.clone(), 3);
        alpha.set(&[1, 1, 1], vec![1]);
        assert!(!alpha.is_cocycle());
        assert_eq!(
            SpecialTwoGroup::new(g.clone(), m.clone(), alpha.clone()).unwrap_err(),
            TwoGroupError::NotACocycle
        );
        let tg = SpecialTwoGroup::new_unchecked(g, m, alpha).unwrap();
        assert!(!tg.pentagon_check());
    }

    fn inclusion_crossed_module() -> CrossedModule {
        // The alternating subgroup of the symmetric group on 3 points,
        // included, with the conjugation action.
        let (s3, perms) = FinGroup::symmetric_with_perms(3);
        let c3 = FinGroup::cyclic(3);
        let index: BTreeMap<&[usize], usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images(), i))
            .collect();
        let three_cycle = Perm::new(vec![1, 2, 0]);
        let boundary: Vec<usize> = (0..3)
            .map(|k| {
                let mut p = Perm::identity(3);
                for _ in 0..k {
                    p = three_cycle.compose(&p);
                }
                index[p.images()]
            })
            .collect();
        let action: Vec<Vec<usize>> = s3
            .elements()
            .map(|e| {
                (0..3)
                    .map(|n| {
                        let conj = perms[e]
                            .compose(&perms[boundary[n]])
                            .compose(&perms[e].inv());
                        (0..3).find(|&k| boundary[k] == index[conj.images()]).unwrap()
                    })
                    .collect()
            })
            .collect();
        CrossedModule::new(s3, c3, boundary, action).unwrap()
    }

    fn obstructed_crossed_module() -> CrossedModule {
        // Doubling Z/4 -> Z/4 with the sign action: the classification
        // carries a nontrivial associator class.
        let e = FinGroup::cyclic(4);
        let n = FinGroup::cyclic(4);
        let boundary: Vec<usize> = (0..4).map(|k| (2 * k) % 4).collect();
        let action: Vec<Vec<usize>> = (0..4)
            .map(|ei| {
                (0..4)
                    .map(|ni: usize| if ei % 2 == 0 { ni } else { (4 - ni) % 4 })
                    .collect()
            })
            .collect();
        CrossedModule::new(e, n, boundary, action).unwrap()
    }

    #[test]
    fn crossed_module_validation_rejects_bad_data() {
        let e = FinGroup::cyclic(2);
        let n = FinGroup::cyclic(4);
        // Boundary k -> k mod 2 is a hom, but the trivial action breaks
        // conjugation-by-boundary only in nonabelian cases; here the bad
        // data is a non-homomorphism boundary.
        let bad_boundary = vec![0, 1, 1, 0];
        let action = vec![(0..4).collect::<Vec<_>>(); 2];
        assert!(matches!(
            CrossedModule::new(e.clone(), n.clone(), bad_boundary, action.clone()),
            Err(TwoGroupError::InvalidCrossedModule(_))
        ));
        // Non-equivariant boundary: doubling with sign action over C2
        // works, but claiming the action of 1 negates while the boundary
        // lands in an abelian group forces the equivariance check to do
        // the work; break it by using an action that is not order 2.
        let shift: Vec<usize> = (0..4).map(|k| (k + 1) % 4).collect();
        assert!(matches!(
            CrossedModule::new(e, n, vec![0, 0, 0, 0], vec![(0..4).collect(), shift]),
            Err(TwoGroupError::InvalidCrossedModule(_))
        ));
    }

    #[test]
    fn strict_arrows_compose_and_tensor() {
        let cm = inclusion_crossed_module();
        for e in cm.big_group().elements() {
            let id = cm.strict_identity(e);
            assert_eq!(cm.strict_target(&id), e);
            for n in cm.normal_group().elements() {
                let a = cm.strict_arrow(e, n);
                let composed = cm.compose_strict(&cm.strict_identity(cm.strict_target(&a)), &a);
                assert_eq!(composed.unwrap(), a);
            }
        }
        // Interchange for strict arrows, exhaustively.
        let e = cm.big_group();
        let n = cm.normal_group();
        for e1 in e.elements() {
            for e2 in e.elements() {
                for n1 in n.elements() {
                    for n2 in n.elements() {
                        for n1b in n.elements() {
                            for n2b in n.elements() {
                                let a1 = cm.strict_arrow(e1, n1);
                                let a2 = cm.strict_arrow(cm.strict_target(&a1), n1b);
                                let b1 = cm.strict_arrow(e2, n2);
                                let b2 = cm.strict_arrow(cm.strict_target(&b1), n2b);
                                let lhs = cm.tensor_strict(
                                    &cm.compose_strict(&a2, &a1).unwrap(),
                                    &cm.compose_strict(&b2, &b1).unwrap(),
                                );
                                let rhs = cm
                                    .compose_strict(
                                        &cm.tensor_strict(&a2, &b2),
                                        &cm.tensor_strict(&a1, &b1),
                                    )
                                    .unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn composability_enforced() {
        let cm = obstructed_crossed_module();
        let a = cm.strict_arrow(0, 1); // 0 -> 2
        assert_eq!(cm.strict_target(&a), 2);
        let b = cm.strict_arrow(1, 0); // 1 -> 1
        assert_eq!(
            cm.compose_strict(&b, &a).unwrap_err(),
            TwoGroupError::NotComposable
        );
    }

    #[test]
    fn classify_trivial_boundary_over_point() {
        let e = FinGroup::cyclic(1);
        let n = FinGroup::cyclic(4);
        let cm = CrossedModule::new(
            e,
            n,
            vec![0; 4],
            vec![(0..4).collect()],
        )
        .unwrap();
        let cls = classify_crossed(&cm, None).unwrap();
        assert_eq!(cls.pi0.order(), 1);
        assert_eq!(cls.pi1.factors(), &[4]);
        assert!(cls.alpha.is_zero());
    }

    #[test]
    fn classify_inclusion_has_trivial_loops() {
        let cm = inclusion_crossed_module();
        let cls = classify_crossed(&cm, None).unwrap();
        assert_eq!(cls.pi0.order(), 2);
        assert_eq!(cls.pi1.rank(), 0);
        assert!(cls.alpha.is_zero());
    }

    #[test]
    fn classify_negation_action_with_trivial_boundary() {
        let e = FinGroup::cyclic(2);
        let n = FinGroup::cyclic(3);
        let negate: Vec<usize> = (0..3).map(|k| (3 - k) % 3).collect();
        let cm = CrossedModule::new(e, n, vec![0; 3], vec![(0..3).collect(), negate]).unwrap();
        let cls = classify_crossed(&cm, None).unwrap();
        assert_eq!(cls.pi0.order(), 2);
        assert_eq!(cls.pi1.factors(), &[3]);
        // The nontrivial component negates.
        assert_eq!(cls.pi1.act(1, &[1]), vec![2]);
        assert!(cls.alpha.is_zero());
    }

    #[test]
    fn classify_obstructed_doubling() {
        let cm = obstructed_crossed_module();
        let cls = classify_crossed(&cm, None).unwrap();
        assert_eq!(cls.pi0.order(), 2);
        assert_eq!(cls.pi1.factors(), &[2]);
        assert_eq!(cls.kernel, vec![0, 2]);
        // The associator class is nontrivial: it is a cocycle but not a
        // coboundary (no 2-cochain bounds it).
        assert_eq!(cls.alpha.get(&[1, 1, 1]), vec![1]);
        assert!(cls.alpha.is_cocycle());
        assert_eq!(crate::cochain::solve_coboundary(&cls.alpha), None);
    }

    #[test]
    fn classification_is_section_independent_up_to_cohomology() {
        let cm = obstructed_crossed_module();
        let base = classify_crossed(&cm, None).unwrap();
        assert_eq!(base.section, vec![0, 1]);
        let other = classify_crossed(&cm, Some(&[0, 3])).unwrap();
        assert_eq!(other.pi1, base.pi1);
        let witness = cohomologous_witness(&base.alpha, &other.alpha).unwrap();
        assert!(witness.is_some());
        // A section moving the identity component is rejected.
        assert!(matches!(
            classify_crossed(&cm, Some(&[2, 1])),
            Err(TwoGroupError::InvalidSection(_))
        ));
    }

    #[test]
    fn split_2group_round_trips_through_crossed_form() {
        let tg = negation_2group(3);
        let cm = special_to_crossed(&tg).unwrap();
        let cls = classify_crossed(&cm, None).unwrap();
        assert_eq!(cls.pi0.order(), tg.group().order());
        assert_eq!(cls.pi1.factors(), tg.module().factors());
        assert!(cls.alpha.is_zero());
        for g in cls.pi0.elements() {
            for v in cls.pi1.elements() {
                assert_eq!(cls.pi1.act(g, &v), tg.module().act(g, &v));
            }
        }
    }

    #[test]
    fn identity_morphism_validates_and_obeys_hexagon() {
        let tg = c2_mu2_with_alpha(1);
        let id = TwoGroupMorphism::identity(&tg);
        assert!(id.hexagon_check());
        let arrow = tg.arrow(1, vec![1]);
        assert_eq!(id.apply_arrow(&arrow), arrow);
        // Rebuilding from the extracted triple reproduces the morphism.
        let rebuilt = TwoGroupMorphism::new(
            tg.clone(),
            tg.clone(),
            id.rho().to_vec(),
            id.beta().clone(),
            id.structure_cochain().clone(),
        )
        .unwrap();
        assert_eq!(rebuilt.rho(), id.rho());
        assert_eq!(rebuilt.structure_cochain(), id.structure_cochain());
    }

    #[test]
    fn triple_condition_is_enforced() {
        // Source: C2 with order-2 loops and the nontrivial associator.
        // Target: the same 2-group with zero associator. The zero triple
        // fails because the defect beta(alpha) is not a coboundary.
        let source = c2_mu2_with_alpha(1);
        let target = c2_mu2_with_alpha(0);
        let rho: Vec<usize> = vec![0, 1];
        let pulled = pullback_module(target.module(), source.group(), &rho).unwrap();
        let beta = ModuleMorphism::new(
            source.module().clone(),
            pulled.clone(),
            vec![vec![1]],
        )
        .unwrap();
        let c = Cochain::zero(pulled, 2);
        assert!(matches!(
            TwoGroupMorphism::new(source.clone(), target, rho, beta, c),
            Err(TwoGroupError::InvalidTriple(_))
        ));
        // The identity on the source is still fine.
        assert!(TwoGroupMorphism::new(
            source.clone(),
            source.clone(),
            vec![0, 1],
            TwoGroupMorphism::identity(&source).beta().clone(),
            Cochain::zero(
                pullback_module(source.module(), source.group(), &[0, 1]).unwrap(),
                2
            ),
        )
        .is_ok());
    }

    #[test]
    fn hexagon_matches_triple_condition_on_valid_and_invalid_cochains() {
        // Morphisms from the negation 2-group on Z/4 to itself with the
        // identity object and loop maps: valid structure cochains are the
        // 2-cocycles; every choice can be probed through hexagon_check by
        // bypassing validation.
        let tg = negation_2group(4);
        let rho: Vec<usize> = vec![0, 1];
        let pulled = pullback_module(tg.module(), tg.group(), &rho).unwrap();
        let beta = TwoGroupMorphism::identity(&tg).beta().clone();
        let zero3 = Cochain::zero(pulled.clone(), 3);
        let cocycles = coboundary_solutions(&zero3, 1000).unwrap();
        let mut seen_valid = 0;
        for v in 0..4u64 {
            let mut c = Cochain::zero(pulled.clone(), 2);
            c.set(&[1, 1], vec![v]);
            let valid = cocycles.contains(&c);
            let morphism = TwoGroupMorphism {
                source: tg.clone(),
                target: tg.clone(),
                rho: rho.clone(),
                beta: beta.clone(),
                c: c.clone(),
            };
            assert_eq!(morphism.hexagon_check(), valid);
            assert_eq!(
                TwoGroupMorphism::new(tg.clone(), tg.clone(), rho.clone(), beta.clone(), c).is_ok(),
                valid
            );
            seen_valid += usize::from(valid);
        }
        assert!(seen_valid >= 1);
    }

    #[test]
    fn monoidal_iso_witness_between_cohomologous_structures() {
        // Trivial action on order-4 scalars, so degree-1 coboundaries are
        // nonzero and the witness test has content.
        let g = FinGroup::cyclic(2);
        let tg = SpecialTwoGroup::split(g.clone(), scalar_module(g, 4)).unwrap();
        let id = TwoGroupMorphism::identity(&tg);
        // Another morphism with the same maps but a structure cochain that
        // is a coboundary: necessarily isomorphic to the identity.
        let pulled = id.structure_cochain().module().clone();
        let mut x = Cochain::zero(pulled, 1);
        x.set(&[1], vec![1]);
        let c = x.coboundary();
        let other = TwoGroupMorphism::new(
            tg.clone(),
            tg.clone(),
            id.rho().to_vec(),
            id.beta().clone(),
            c,
        )
        .unwrap();
        let w = monoidal_iso_witness(&id, &other).unwrap();
        assert_eq!(
            w.coboundary(),
            id.structure_cochain()
                .sub(other.structure_cochain())
                .unwrap()
        );
    }
}
