//! Exact integer linear systems, diagonalized by unimodular row and column
//! operations (Smith-style elimination without the divisibility chain,
//! which solving does not need).

use num::{bigint::Sign, BigInt, Integer, One, Signed, Zero};

/// A system `A x = b` brought to diagonal form: row operations were applied
/// to `rhs` in step with `A`, and `back` accumulates the column operations,
/// so the solutions of the original system are exactly `x = back * w` where
/// `diag[i] * w[i] = rhs[i]` (missing diagonal entries are zero).
pub(crate) struct Diagonalized {
    pub rows: usize,
    pub cols: usize,
    pub diag: Vec<BigInt>,
    pub rhs: Vec<BigInt>,
    pub back: Vec<Vec<BigInt>>,
}

pub(crate) fn diagonalize(mut a: Vec<Vec<BigInt>>, mut b: Vec<BigInt>) -> Diagonalized {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), rows);
    let mut back: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut t = 0;
    while t < rows.min(cols) {
        // Deterministic pivot: the entry of least absolute value in the
        // untouched block, first in scan order on ties.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        b.swap(t, pi);
        col_swap(&mut a, &mut back, t, pj);
        loop {
            for i in t + 1..rows {
                while !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    if !q.is_zero() {
                        row_sub(&mut a, &mut b, i, t, &q);
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        b.swap(t, i);
                    }
                }
            }
            for j in t + 1..cols {
                while !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    if !q.is_zero() {
                        col_sub(&mut a, &mut back, j, t, &q);
                    }
                    if !a[t][j].is_zero() {
                        col_swap(&mut a, &mut back, t, j);
                    }
                }
            }
            // Column operations can dirty the column again; repeat until
            // both the column and the row are clear beyond the pivot.
            if (t + 1..rows).all(|i| a[i][t].is_zero()) {
                break;
            }
        }
        if a[t][t].sign() == Sign::Minus {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            b[t] = -b[t].clone();
        }
        t += 1;
    }
    Diagonalized {
        rows,
        cols,
        diag: (0..rows.min(cols)).map(|i| a[i][i].clone()).collect(),
        rhs: b,
        back,
    }
}

fn row_sub(a: &mut [Vec<BigInt>], b: &mut [BigInt], target: usize, source: usize, q: &BigInt) {
    let row: Vec<BigInt> = a[source].iter().map(|x| x * q).collect();
    for (x, y) in a[target].iter_mut().zip(row) {
        *x -= y;
    }
    let s = &b[source] * q;
    b[target] -= s;
}

fn col_sub(a: &mut [Vec<BigInt>], back: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = &row[source] * q;
        row[target] -= s;
    }
    for row in back.iter_mut() {
        let s = &row[source] * q;
        row[target] -= s;
    }
}

fn col_swap(a: &mut [Vec<BigInt>], back: &mut [Vec<BigInt>], x: usize, y: usize) {
    for row in a.iter_mut() {
        row.swap(x, y);
    }
    for row in back.iter_mut() {
        row.swap(x, y);
    }
}

fn to_u64_mod(x: &BigInt, modulus: u64) -> u64 {
    let m = BigInt::from(modulus);
    let r = x.mod_floor(&m);
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "inverse of a non-unit");
    e.x.mod_floor(m)
}

/// The canonical solution of `A x = b (mod modulus)`: free variables in the
/// diagonalized parametrization are zero and pivot variables take their
/// least non-negative value. Returns `None` when the system has no solution.
pub(crate) fn solve_mod(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, modulus: u64) -> Option<Vec<u64>> {
    let d = diagonalize(a, b);
    let w = particular_w(&d, modulus)?;
    Some(apply_back(&d, &w, modulus))
}

fn particular_w(d: &Diagonalized, modulus: u64) -> Option<Vec<BigInt>> {
    let l = BigInt::from(modulus);
    let mut w = vec![BigInt::zero(); d.cols];
    for i in 0..d.rows {
        let di = d.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let c = d.rhs[i].mod_floor(&l);
        if di.is_zero() {
            if !c.is_zero() {
                return None;
            }
        } else {
            let g = di.gcd(&l);
            if !(&c % &g).is_zero() {
                return None;
            }
            let lg = &l / &g;
            if !lg.is_one() {
                let inv = modinv(&(&di / &g).mod_floor(&lg), &lg);
                w[i] = ((&c / &g) * inv).mod_floor(&lg);
            }
        }
    }
    Some(w)
}

fn apply_back(d: &Diagonalized, w: &[BigInt], modulus: u64) -> Vec<u64> {
    (0..d.cols)
        .map(|r| {
            let mut acc = BigInt::zero();
            for (k, wk) in w.iter().enumerate() {
                if !wk.is_zero() {
                    acc += &d.back[r][k] * wk;
                }
            }
            to_u64_mod(&acc, modulus)
        })
        .collect()
}

/// All solutions of `A x = b (mod modulus)`, sorted, or the solution count
/// if it would exceed `cap`. The column-operation matrix is invertible mod
/// any modulus, so distinct parameter vectors give distinct solutions.
pub(crate) fn enumerate_mod(
    a: Vec<Vec<BigInt>>,
    b: Vec<BigInt>,
    modulus: u64,
    cap: u64,
) -> Result<Vec<Vec<u64>>, u128> {
    let d = diagonalize(a, b);
    let Some(base) = particular_w(&d, modulus) else {
        return Ok(vec![]);
    };
    let l = BigInt::from(modulus);
    // Per-variable solution counts of diag[i] * w = rhs[i] (mod modulus).
    let mut strides: Vec<(BigInt, u64)> = vec![];
    let mut total: u128 = 1;
    for i in 0..d.cols {
        let di = d.diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let (stride, count) = if di.is_zero() {
            (BigInt::one(), modulus)
        } else {
            let g = di.gcd(&l);
            let count = to_u64_mod(&g, u64::MAX).max(1);
            (&l / &g, count)
        };
        total = total.saturating_mul(u128::from(count));
        strides.push((stride, count));
    }
    if total > u128::from(cap) {
        return Err(total);
    }
    let mut out = vec![];
    let mut ticks = vec![0u64; d.cols];
    loop {
        let w: Vec<BigInt> = base
            .iter()
            .zip(&strides)
            .zip(&ticks)
            .map(|((b, (stride, _)), &t)| b + stride * BigInt::from(t))
            .collect();
        out.push(apply_back(&d, &w, modulus));
        let radices: Vec<u64> = strides.iter().map(|&(_, c)| c).collect();
        if !crate::group::increment_mixed_radix(&mut ticks, &radices) {
            break;
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
