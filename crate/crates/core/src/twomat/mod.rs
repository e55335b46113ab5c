//! The 2-category of 2-matrices: objects are natural numbers, 1-morphisms
//! are rank matrices equipped with gauge fields, 2-morphisms are block
//! matrices, with exact vertical and horizontal composition throughout.
//!
//! A 1-morphism `n -> m` sends a multiplicity point `a` in `N^n` to the
//! point `R(a)` in `N^m`; the gauge supplies, for each target row and each
//! point, an invertible change of basis of size `R(a)_i`. Gauges are total
//! functions represented by finite tables (identity outside), and the
//! gauge of a composite is evaluated lazily from its factors and memoized.

pub mod equiv;

use crate::cyclo::CycloMatrix;
use crate::group::Perm;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwoMatError {
    #[error("middle objects do not match")]
    ObjectMismatch,
    #[error("2-morphisms are not composable")]
    NotComposable,
    #[error("invalid gauge: {0}")]
    InvalidGauge(String),
    #[error("invalid 2-morphism blocks: {0}")]
    InvalidBlocks(String),
    #[error("rank matrix is not a permutation matrix")]
    NotAPermutation,
}

/// A rectangular matrix of natural numbers; the shape of a 1-morphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RankMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl RankMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        RankMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Builds from equal-length rows; shapes with zero columns need
    /// [`RankMatrix::new`].
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n), "rows must be equal length");
        RankMatrix::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RankMatrix::new(rows, cols, vec![0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut r = RankMatrix::zeros(n, n);
        for i in 0..n {
            r.entries[i * n + i] = 1;
        }
        r
    }

    pub fn from_perm(p: &Perm) -> Self {
        let n = p.degree();
        let mut r = RankMatrix::zeros(n, n);
        for j in 0..n {
            r.entries[p.apply(j) * n + j] = 1;
        }
        r
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        assert!(i < self.rows, "row out of bounds");
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &RankMatrix) -> RankMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = RankMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.entries[i * other.cols + j] =
                    (0..self.cols).map(|t| self.get(i, t) * other.get(t, j)).sum();
            }
        }
        out
    }

    /// The image of a multiplicity point: `R(a)_i = sum_j R_ij a_j`.
    pub fn apply(&self, a: &[u64]) -> Vec<u64> {
        assert_eq!(a.len(), self.cols, "point has wrong dimension");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * a[j]).sum())
            .collect()
    }

    pub fn is_permutation(&self) -> bool {
        self.to_perm().is_some()
    }

    pub fn to_perm(&self) -> Option<Perm> {
        if self.rows != self.cols {
            return None;
        }
        let mut images = vec![usize::MAX; self.cols];
        for j in 0..self.cols {
            let mut hit = None;
            for i in 0..self.rows {
                match self.get(i, j) {
                    0 => {}
                    1 if hit.is_none() => hit = Some(i),
                    _ => return None,
                }
            }
            images[j] = hit?;
        }
        let mut seen = vec![false; self.rows];
        for &i in &images {
            if seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm::new(images))
    }
}

/// The standard point `e_j` in `N^n`.
pub fn basis_point(n: usize, j: usize) -> Vec<u64> {
    assert!(j < n, "basis index out of range");
    let mut a = vec![0; n];
    a[j] = 1;
    a
}

fn is_basis_point(a: &[u64]) -> bool {
    a.iter().filter(|&&x| x != 0).count() == 1 && a.iter().sum::<u64>() == 1
}

fn us(x: u64) -> usize {
    usize::try_from(x).expect("rank value exceeds the address space")
}

type GaugeKey = (usize, Vec<u64>);

/// A gauge field for a rank matrix: a total function from (target row,
/// multiplicity point) to an invertible matrix of size `R(a)_i`, equal to
/// the identity outside a finite table and forced to the identity at the
/// standard points `e_j`. Gauges of composites hold their factors and
/// evaluate through the composition formula on demand, memoized.
#[derive(Clone, Debug)]
pub struct Gauge {
    rank: RankMatrix,
    inner: GaugeInner,
}

#[derive(Clone, Debug)]
enum GaugeInner {
    Table(Arc<BTreeMap<GaugeKey, CycloMatrix>>),
    Composite(Arc<CompositeGauge>),
}

#[derive(Debug)]
struct CompositeGauge {
    outer: OneMorphism,
    inner: OneMorphism,
    memo: Mutex<BTreeMap<GaugeKey, CycloMatrix>>,
}

impl PartialEq for Gauge {
    /// Structural equality: tables compare by entries, composites by their
    /// factors. Extensional equality on all of `N^n` is checked separately
    /// on probe boxes.
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank {
            return false;
        }
        match (&self.inner, &other.inner) {
            (GaugeInner::Table(a), GaugeInner::Table(b)) => a == b,
            (GaugeInner::Composite(a), GaugeInner::Composite(b)) => {
                Arc::ptr_eq(a, b) || (a.outer == b.outer && a.inner == b.inner)
            }
            _ => false,
        }
    }
}

impl Eq for Gauge {}

impl Gauge {
    /// The identity gauge: every value is the identity matrix.
    pub fn identity(rank: RankMatrix) -> Self {
        Gauge {
            rank,
            inner: GaugeInner::Table(Arc::new(BTreeMap::new())),
        }
    }

    /// Validates sizes and invertibility; identity values are dropped so
    /// that equal gauges have equal tables, and non-identity values at the
    /// standard points are rejected.
    pub fn from_table(
        rank: RankMatrix,
        table: BTreeMap<GaugeKey, CycloMatrix>,
    ) -> Result<Self, TwoMatError> {
        let mut canonical = BTreeMap::new();
        for ((i, a), m) in table {
            if i >= rank.rows() || a.len() != rank.cols() {
                return Err(TwoMatError::InvalidGauge(format!(
                    "entry ({i}, {a:?}) is out of range for the rank shape"
                )));
            }
            let size = us(rank.apply(&a)[i]);
            if m.rows() != size || m.cols() != size {
                return Err(TwoMatError::InvalidGauge(format!(
                    "entry ({i}, {a:?}) must be {size} x {size}"
                )));
            }
            if m.is_identity() {
                continue;
            }
            if is_basis_point(&a) {
                return Err(TwoMatError::InvalidGauge(format!(
                    "entry ({i}, {a:?}) at a standard point must be the identity"
                )));
            }
            if !m.is_invertible() {
                return Err(TwoMatError::InvalidGauge(format!(
                    "entry ({i}, {a:?}) is singular"
                )));
            }
            canonical.insert((i, a), m);
        }
        Ok(Gauge {
            rank,
            inner: GaugeInner::Table(Arc::new(canonical)),
        })
    }

    /// Convenience constructor from `(row, point, matrix)` entries.
    pub fn from_entries(
        rank: RankMatrix,
        entries: impl IntoIterator<Item = (usize, Vec<u64>, CycloMatrix)>,
    ) -> Result<Self, TwoMatError> {
        Gauge::from_table(
            rank,
            entries.into_iter().map(|(i, a, m)| ((i, a), m)).collect(),
        )
    }

    pub fn rank(&self) -> &RankMatrix {
        &self.rank
    }

    pub fn is_table(&self) -> bool {
        matches!(self.inner, GaugeInner::Table(_))
    }

    pub(crate) fn table_entries(&self) -> Option<&BTreeMap<GaugeKey, CycloMatrix>> {
        match &self.inner {
            GaugeInner::Table(t) => Some(t),
            GaugeInner::Composite(_) => None,
        }
    }

    /// The gauge value at `(i, a)`: an invertible `R(a)_i x R(a)_i` matrix.
    /// Values at standard points are the identity; a size of zero yields
    /// the empty matrix, which stands for the scalar 1.
    pub fn eval(&self, i: usize, a: &[u64]) -> CycloMatrix {
        assert!(i < self.rank.rows(), "gauge row out of range");
        assert_eq!(a.len(), self.rank.cols(), "point has wrong dimension");
        let size = us(self.rank.apply(a)[i]);
        if size == 0 || is_basis_point(a) {
            return CycloMatrix::identity(size);
        }
        match &self.inner {
            GaugeInner::Table(t) => t
                .get(&(i, a.to_vec()))
                .cloned()
                .unwrap_or_else(|| CycloMatrix::identity(size)),
            GaugeInner::Composite(c) => {
                let key = (i, a.to_vec());
                let mut memo = c.memo.lock().expect("gauge memo poisoned");
                if let Some(m) = memo.get(&key) {
                    return m.clone();
                }
                let m = c.eval_uncached(i, a);
                memo.insert(key, m.clone());
                m
            }
        }
    }
}

impl CompositeGauge {
    /// The composite gauge value
    /// `s~_k(R(a)) (+_i I ox s_i(a)) P(R~_k, R, a) (+_j s~_k(R(e_j))^{-1} ox I)`.
    fn eval_uncached(&self, k: usize, a: &[u64]) -> CycloMatrix {
        let rt = self.outer.rank();
        let r = self.inner.rank();
        let m = r.rows();
        let n = r.cols();
        let head = self.outer.eval_gauge(k, &r.apply(a));
        let mids: Vec<CycloMatrix> = (0..m)
            .map(|i| {
                CycloMatrix::identity(us(rt.get(k, i))).kronecker(&self.inner.eval_gauge(i, a))
            })
            .collect();
        let mid = CycloMatrix::direct_sum_all(&mids);
        let shuffle = shuffle_perm(rt.row(k), r, a);
        let tails: Vec<CycloMatrix> = (0..n)
            .map(|j| {
                self.outer
                    .eval_gauge(k, &r.apply(&basis_point(n, j)))
                    .inverse()
                    .expect("gauge values are invertible")
                    .kronecker(&CycloMatrix::identity(us(a[j])))
            })
            .collect();
        let tail = CycloMatrix::direct_sum_all(&tails);
        head.mul(&mid)
            .and_then(|x| x.mul(&shuffle))
            .and_then(|x| x.mul(&tail))
            .expect("composite gauge factors have matching sizes")
    }
}

/// The shuffle permutation used in composite gauges: it reindexes the sum
/// `+_j (+_i C^{R~_ki} ox C^{R_ij}) ox C^{a_j}` (basis tuples `(j, i, p,
/// q, t)` in lexicographic order) to `+_i C^{R~_ki} ox (+_j C^{R_ij} ox
/// C^{a_j})` (basis tuples `(i, p, j, q, t)`). Whenever either grouping
/// collapses — a standard row, a standard point, or a single column — the
/// two orders coincide and the result is the identity.
pub fn shuffle_perm(rtilde_row: &[u64], rank: &RankMatrix, a: &[u64]) -> CycloMatrix {
    let m = rank.rows();
    let n = rank.cols();
    assert_eq!(rtilde_row.len(), m, "row has wrong length");
    assert_eq!(a.len(), n, "point has wrong dimension");
    let mut target_index = BTreeMap::new();
    let mut idx = 0usize;
    for i in 0..m {
        for p in 0..us(rtilde_row[i]) {
            for j in 0..n {
                for q in 0..us(rank.get(i, j)) {
                    for t in 0..us(a[j]) {
                        target_index.insert((i, p, j, q, t), idx);
                        idx += 1;
                    }
                }
            }
        }
    }
    let mut images = Vec::with_capacity(idx);
    for j in 0..n {
        for i in 0..m {
            for p in 0..us(rtilde_row[i]) {
                for q in 0..us(rank.get(i, j)) {
                    for t in 0..us(a[j]) {
                        images.push(target_index[&(i, p, j, q, t)]);
                    }
                }
            }
        }
    }
    CycloMatrix::from_permutation(&images)
}

/// A 1-morphism `n -> m`: a rank matrix with a gauge field over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneMorphism {
    rank: RankMatrix,
    gauge: Gauge,
}

impl OneMorphism {
    pub fn new(rank: RankMatrix, gauge: Gauge) -> Result<Self, TwoMatError> {
        if gauge.rank() != &rank {
            return Err(TwoMatError::InvalidGauge(
                "gauge belongs to a different rank matrix".into(),
            ));
        }
        Ok(OneMorphism { rank, gauge })
    }

    pub fn identity(n: usize) -> Self {
        let rank = RankMatrix::identity(n);
        let gauge = Gauge::identity(rank.clone());
        OneMorphism { rank, gauge }
    }

    pub fn zero(target: usize, source: usize) -> Self {
        let rank = RankMatrix::zeros(target, source);
        let gauge = Gauge::identity(rank.clone());
        OneMorphism { rank, gauge }
    }

    /// The permutation 1-morphism with identity gauge.
    pub fn from_perm(p: &Perm) -> Self {
        let rank = RankMatrix::from_perm(p);
        let gauge = Gauge::identity(rank.clone());
        OneMorphism { rank, gauge }
    }

    pub fn source(&self) -> usize {
        self.rank.cols()
    }

    pub fn target(&self) -> usize {
        self.rank.rows()
    }

    pub fn rank(&self) -> &RankMatrix {
        &self.rank
    }

    pub fn gauge(&self) -> &Gauge {
        &self.gauge
    }

    pub fn eval_gauge(&self, i: usize, a: &[u64]) -> CycloMatrix {
        self.gauge.eval(i, a)
    }
}

/// Composition of 1-morphisms: ranks multiply and the composite gauge is
/// evaluated lazily from the factors.
pub fn compose1(g: &OneMorphism, f: &OneMorphism) -> Result<OneMorphism, TwoMatError> {
    if f.target() != g.source() {
        return Err(TwoMatError::ObjectMismatch);
    }
    let rank = g.rank().mul(f.rank());
    let gauge = Gauge {
        rank: rank.clone(),
        inner: GaugeInner::Composite(Arc::new(CompositeGauge {
            outer: g.clone(),
            inner: f.clone(),
            memo: Mutex::new(BTreeMap::new()),
        })),
    };
    Ok(OneMorphism { rank, gauge })
}

/// A 2-morphism between parallel 1-morphisms: one `R'_ij x R_ij` block per
/// rank position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMorphism {
    source: OneMorphism,
    target: OneMorphism,
    blocks: Vec<CycloMatrix>,
}

impl TwoMorphism {
    pub fn new(
        source: OneMorphism,
        target: OneMorphism,
        blocks: Vec<Vec<CycloMatrix>>,
    ) -> Result<Self, TwoMatError> {
        if source.source() != target.source() || source.target() != target.target() {
            return Err(TwoMatError::InvalidBlocks(
                "source and target must be parallel".into(),
            ));
        }
        let m = source.target();
        let n = source.source();
        if blocks.len() != m || blocks.iter().any(|row| row.len() != n) {
            return Err(TwoMatError::InvalidBlocks(format!(
                "expected an {m} x {n} grid of blocks"
            )));
        }
        let mut flat = Vec::with_capacity(m * n);
        for (i, row) in blocks.into_iter().enumerate() {
            for (j, b) in row.into_iter().enumerate() {
                let want_rows = us(target.rank().get(i, j));
                let want_cols = us(source.rank().get(i, j));
                if b.rows() != want_rows || b.cols() != want_cols {
                    return Err(TwoMatError::InvalidBlocks(format!(
                        "block ({i}, {j}) must be {want_rows} x {want_cols}"
                    )));
                }
                flat.push(b);
            }
        }
        Ok(TwoMorphism {
            source,
            target,
            blocks: flat,
        })
    }

    pub fn source(&self) -> &OneMorphism {
        &self.source
    }

    pub fn target(&self) -> &OneMorphism {
        &self.target
    }

    pub fn block(&self, i: usize, j: usize) -> &CycloMatrix {
        assert!(
            i < self.source.target() && j < self.source.source(),
            "block index out of bounds"
        );
        &self.blocks[i * self.source.source() + j]
    }
}

/// The identity 2-morphism on a 1-morphism: identity blocks.
pub fn identity2(f: &OneMorphism) -> TwoMorphism {
    let m = f.target();
    let n = f.source();
    let blocks = (0..m * n)
        .map(|idx| CycloMatrix::identity(us(f.rank().get(idx / n, idx % n))))
        .collect();
    TwoMorphism {
        source: f.clone(),
        target: f.clone(),
        blocks,
    }
}

/// Vertical composition: blockwise products. A zero middle rank produces
/// the zero block of the outer shape, never an empty one.
pub fn vcompose2(t2: &TwoMorphism, t1: &TwoMorphism) -> Result<TwoMorphism, TwoMatError> {
    if t1.target != t2.source {
        return Err(TwoMatError::NotComposable);
    }
    let blocks = t2
        .blocks
        .iter()
        .zip(&t1.blocks)
        .map(|(b2, b1)| b2.mul(b1).expect("validated block shapes multiply"))
        .collect();
    Ok(TwoMorphism {
        source: t1.source.clone(),
        target: t2.target.clone(),
        blocks,
    })
}

/// Horizontal composition over composable 1-morphisms:
/// `(T~ o T)_kj = s~'_k(R'(e_j)) (+_i T~_ki ox T_ij) s~_k(R(e_j))^{-1}`.
pub fn hcompose2(outer: &TwoMorphism, inner: &TwoMorphism) -> Result<TwoMorphism, TwoMatError> {
    if inner.source.target() != outer.source.source() {
        return Err(TwoMatError::NotComposable);
    }
    let source = compose1(&outer.source, &inner.source)?;
    let target = compose1(&outer.target, &inner.target)?;
    let m = inner.source.target();
    let n = inner.source.source();
    let p = outer.source.target();
    let r_src = inner.source.rank();
    let r_tgt = inner.target.rank();
    let mut blocks = Vec::with_capacity(p * n);
    for k in 0..p {
        for j in 0..n {
            let e_j = basis_point(n, j);
            let mids: Vec<CycloMatrix> = (0..m)
                .map(|i| outer.block(k, i).kronecker(inner.block(i, j)))
                .collect();
            let mid = CycloMatrix::direct_sum_all(&mids);
            let left = outer.target.eval_gauge(k, &r_tgt.apply(&e_j));
            let right = outer
                .source
                .eval_gauge(k, &r_src.apply(&e_j))
                .inverse()
                .expect("gauge values are invertible");
            blocks.push(
                left.mul(&mid)
                    .and_then(|x| x.mul(&right))
                    .expect("horizontal composite factors have matching sizes"),
            );
        }
    }
    Ok(TwoMorphism {
        source,
        target,
        blocks,
    })
}

/// A 1-morphism is invertible exactly when its rank matrix is a
/// permutation matrix.
pub fn is_invertible1(f: &OneMorphism) -> bool {
    f.rank().is_permutation()
}

/// A 2-morphism is invertible exactly when every block is square and
/// nonsingular (empty blocks pass).
pub fn is_iso2(t: &TwoMorphism) -> bool {
    t.blocks.iter().all(|b| b.rows() == b.cols() && b.is_invertible())
}

/// Parallel 1-morphisms admit an invertible 2-morphism between them
/// exactly when their rank matrices agree.
pub fn iso_exists(f: &OneMorphism, g: &OneMorphism) -> bool {
    f.rank() == g.rank()
}

/// All points of `N^n` with coordinate sum at most `bound`, in
/// lexicographic order; the probe box for gauge comparisons.
pub fn points_with_sum_at_most(n: usize, bound: u64) -> Vec<Vec<u64>> {
    fn rec(n: usize, bound: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in 0..=bound {
            prefix.push(x);
            rec(n - 1, bound - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    rec(n, bound, &mut vec![], &mut out);
    out
}

/// Extensional agreement of parallel 1-morphisms on the probe box of the
/// given bound: equal ranks and equal gauge values at every (row, point).
pub fn agree_on_box(f: &OneMorphism, g: &OneMorphism, bound: u64) -> bool {
    if f.rank() != g.rank() {
        return false;
    }
    let points = points_with_sum_at_most(f.source(), bound);
    (0..f.target()).all(|i| points.iter().all(|a| f.eval_gauge(i, a) == g.eval_gauge(i, a)))
}
