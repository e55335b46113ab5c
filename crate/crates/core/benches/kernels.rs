//! Compares the dispatched execution helpers (rayon-backed under the
//! default `parallel` feature) with their always-sequential twins on three
//! representative kernels: dense cyclotomic matrix products, composite
//! gauge evaluation over a probe box, and a multiplicative-law grid sweep.
//! With `--no-default-features` both sides run sequentially, which makes
//! the dispatch overhead itself visible.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use tworep::cyclo::{CycloMatrix, Cyclotomic};
use tworep::exec;
use tworep::group::{FinGroup, Perm};
use tworep::twomat::{compose1, points_with_sum_at_most, Gauge, OneMorphism, RankMatrix};

/// A dense, deterministic matrix with order-12 root entries.
fn dense(size: usize, salt: u64) -> CycloMatrix {
    CycloMatrix::from_fn(size, size, |i, j| {
        Cyclotomic::root_of_unity(12, (salt + 7 * i as u64 + 5 * j as u64) % 12)
    })
}

/// A deterministic invertible monomial matrix.
fn monomial(size: usize, salt: u64) -> CycloMatrix {
    let mut m = CycloMatrix::from_fn(size, size, |_, _| Cyclotomic::zero(12));
    for j in 0..size {
        let i = (j + salt as usize) % size;
        m.set(i, j, Cyclotomic::root_of_unity(12, (salt + 3 * j as u64) % 12));
    }
    m
}

fn matrix_products(c: &mut Criterion) {
    let pairs: Vec<(CycloMatrix, CycloMatrix)> = (0..64)
        .map(|k| (dense(10, k), dense(10, k + 1)))
        .collect();
    let mut group = c.benchmark_group("matrix-products");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(exec::map_collect(&pairs, |(x, y)| {
                x.mul(y).expect("sizes agree")
            }))
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(exec::map_collect_seq(&pairs, |(x, y)| {
                x.mul(y).expect("sizes agree")
            }))
        })
    });
    group.finish();
}

/// A 2 x 2 morphism with monomial gauge values at every non-basis point of
/// coordinate sum at most two.
fn sample_morphism(salt: u64) -> OneMorphism {
    let rank = RankMatrix::new(2, 2, vec![2, 1, 1, 2]);
    let mut entries = Vec::new();
    for i in 0..2 {
        for a in points_with_sum_at_most(2, 2) {
            if a.iter().sum::<u64>() <= 1 {
                continue;
            }
            let size = rank.apply(&a)[i] as usize;
            entries.push((i, a, monomial(size, salt + i as u64)));
        }
    }
    let gauge = Gauge::from_entries(rank.clone(), entries).expect("monomial values are invertible");
    OneMorphism::new(rank, gauge).expect("the gauge lives over the rank")
}

fn composite_gauge_box(c: &mut Criterion) {
    let f = sample_morphism(1);
    let g = sample_morphism(4);
    let items: Vec<(usize, Vec<u64>)> = (0..2)
        .flat_map(|i| {
            points_with_sum_at_most(2, 4)
                .into_iter()
                .map(move |a| (i, a))
        })
        .collect();
    let mut group = c.benchmark_group("composite-gauge-box");
    group.sample_size(10);
    // Each iteration starts from a fresh composite so the memoized values
    // never carry over into the measurement.
    group.bench_function("parallel", |b| {
        b.iter_batched(
            || compose1(&g, &f).expect("objects agree"),
            |composite| {
                black_box(exec::map_collect(&items, |(i, a)| {
                    composite.gauge().eval(*i, a).rows()
                }))
            },
            BatchSize::PerIteration,
        )
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(
            || compose1(&g, &f).expect("objects agree"),
            |composite| {
                black_box(exec::map_collect_seq(&items, |(i, a)| {
                    composite.gauge().eval(*i, a).rows()
                }))
            },
            BatchSize::PerIteration,
        )
    });
    group.finish();
}

/// The vertex permutation of the dihedral element `g` in `D_{2m}`:
/// rotations shift, reflections negate.
fn vertex_perm(m: usize, g: usize) -> Perm {
    let images = (0..m)
        .map(|v| {
            if g < m {
                (v + g) % m
            } else {
                (g - m + m - v) % m
            }
        })
        .collect();
    Perm::new(images)
}

fn law_grid(c: &mut Criterion) {
    let m = 12;
    let group_d = FinGroup::dihedral(m);
    let mats: Vec<CycloMatrix> = (0..group_d.order())
        .map(|g| CycloMatrix::from_permutation(vertex_perm(m, g).images()))
        .collect();
    let grid: Vec<(usize, usize)> = (0..group_d.order())
        .flat_map(|g1| (0..group_d.order()).map(move |g2| (g1, g2)))
        .collect();
    let law = |&(g1, g2): &(usize, usize)| {
        mats[group_d.mul(g1, g2)] == mats[g1].mul(&mats[g2]).expect("sizes agree")
    };
    assert!(exec::all_seq(&grid, law), "the sample is a homomorphism");
    let mut group = c.benchmark_group("law-grid");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| black_box(exec::all(&grid, law))));
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(exec::all_seq(&grid, law)))
    });
    group.finish();
}

criterion_group!(benches, matrix_products, composite_gauge_box, law_grid);
criterion_main!(benches);
