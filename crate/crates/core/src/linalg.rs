//! Exact linear algebra for boundary systems `A x = b`.
//!
//! Matrices are given by sparse columns of small integers over `nrows` rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) type Column = Vec<(u32, i64)>;

/// The Mersenne prime `2^61 − 1`.
pub(crate) const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_mod(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Sparse vector over `F_p`, sorted by row.
type ModVec = Vec<(u32, u64)>;

/// `a + c·b` over `F_p`.
fn axpy(a: &ModVec, c: u64, b: &ModVec, p: u64) -> ModVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, mul_mod(c, b[j].1, p)));
            j += 1;
        } else {
            let v = (a[i].1 + mul_mod(c, b[j].1, p)) % p;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn to_modvec(col: &Column, p: u64) -> ModVec {
    let mut v: ModVec = col.iter().map(|&(r, x)| (r, to_mod(x, p))).filter(|e| e.1 != 0).collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

pub(crate) enum ModOutcome {
    /// Some column is a combination of the others.
    NotInjective,
    /// Injective, but `b` is not in the column span.
    Infeasible,
    /// The unique solution.
    Solution(Vec<u64>),
}

/// Whether the columns are independent over `F_p`, and if so the unique solution of `A x = b`.
///
/// `b` is a sparse vector of residues mod `p`.
pub(crate) fn solve_injective_mod(cols: &[Column], nrows: usize, b: &[(u32, u64)], p: u64) -> ModOutcome {
    // reduced columns keyed by their largest row, with the combination of originals they came from
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; nrows];
    let mut reduced: Vec<(ModVec, ModVec)> = Vec::with_capacity(cols.len());
    for (j, col) in cols.iter().enumerate() {
        let mut v = to_modvec(col, p);
        let mut comb: ModVec = vec![(j as u32, 1)];
        while let Some(&(low, val)) = v.last() {
            match pivot_of_row[low as usize] {
                Some(k) => {
                    let (pv, pc) = &reduced[k];
                    let f = mul_mod(p - val, inv_mod(pv.last().expect("pivot").1, p), p);
                    v = axpy(&v, f, pv, p);
                    comb = axpy(&comb, f, pc, p);
                }
                None => break,
            }
        }
        match v.last() {
            None => return ModOutcome::NotInjective,
            Some(&(low, _)) => {
                pivot_of_row[low as usize] = Some(reduced.len());
                reduced.push((v, comb));
            }
        }
    }
    let mut r: ModVec = b.iter().copied().filter(|e| e.1 % p != 0).map(|(i, v)| (i, v % p)).collect();
    r.sort_unstable_by_key(|e| e.0);
    let mut x: ModVec = Vec::new();
    while let Some(&(low, val)) = r.last() {
        match pivot_of_row[low as usize] {
            Some(k) => {
                let (pv, pc) = &reduced[k];
                let f = mul_mod(val, inv_mod(pv.last().expect("pivot").1, p), p);
                r = axpy(&r, p - f, pv, p);
                x = axpy(&x, f, pc, p);
            }
            None => return ModOutcome::Infeasible,
        }
    }
    let mut dense = vec![0u64; cols.len()];
    for (j, v) in x {
        dense[j as usize] = v;
    }
    ModOutcome::Solution(dense)
}

/// Rank of the column set over `F_p`.
pub(crate) fn rank_mod(cols: &[Column], nrows: usize, p: u64) -> usize {
    let mut pivot_of_row: Vec<Option<ModVec>> = vec![None; nrows];
    let mut rank = 0;
    for col in cols {
        let mut v = to_modvec(col, p);
        while let Some(&(low, val)) = v.last() {
            match &pivot_of_row[low as usize] {
                Some(pv) => {
                    let f = mul_mod(p - val, inv_mod(pv.last().expect("pivot").1, p), p);
                    v = axpy(&v, f, pv, p);
                }
                None => break,
            }
        }
        if let Some(&(low, _)) = v.last() {
            pivot_of_row[low as usize] = Some(v);
            rank += 1;
        }
    }
    rank
}

/// Smallest `(num, den)` with `num ≡ a·den (mod p)`, `|num|, den < sqrt(p/2)`.
pub(crate) fn rational_reconstruct(a: u64, p: u64) -> Option<(i64, i64)> {
    let bound = ((p / 2) as f64).sqrt() as i128;
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some((n as i64, d as i64))
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Check `A x = b` exactly.
pub(crate) fn verify_rational(cols: &[Column], nrows: usize, x: &[BigRational], b: &[BigRational]) -> bool {
    let mut acc = vec![BigRational::zero(); nrows];
    for (col, xj) in cols.iter().zip(x) {
        if xj.is_zero() {
            continue;
        }
        for &(r, a) in col {
            acc[r as usize] += xj * BigRational::from_integer(BigInt::from(a));
        }
    }
    acc == b
}

fn dense_rational(cols: &[Column], nrows: usize) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); cols.len()]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(r, a) in col {
            m[r as usize][j] += BigRational::from_integer(BigInt::from(a));
        }
    }
    m
}

/// Some rational solution of `A x = b` (free variables set to 0), or `None`.
pub(crate) fn solve_rational(cols: &[Column], nrows: usize, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = cols.len();
    let mut m = dense_rational(cols, nrows);
    for (row, bi) in m.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=ncols {
                    let t = &m[r][k] * &f;
                    m[i][k] -= t;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    if (r..nrows).any(|i| !m[i][ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, c) in pivots {
        x[c] = m[row][ncols].clone();
    }
    Some(x)
}

/// Some integer solution of `A x = b`, or `None` when there is none.
///
/// Column-style Hermite elimination: unimodular column operations bring `A` to
/// echelon form `H = A U`, then `H y = b` is solved top-down and `x = U y`.
pub(crate) fn solve_integer(cols: &[Column], nrows: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let ncols = cols.len();
    // h[j] is column j of H, u[j] column j of U
    let mut h: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); nrows]; ncols];
    for (j, col) in cols.iter().enumerate() {
        for &(r, a) in col {
            h[j][r as usize] += a;
        }
    }
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut e = vec![BigInt::zero(); ncols];
            e[j] = BigInt::one();
            e
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, column)
    let mut next = 0usize;
    for row in 0..nrows {
        if next == ncols {
            break;
        }
        // gcd-combine all columns >= next into column `next` at this row
        for j in next + 1..ncols {
            if h[j][row].is_zero() {
                continue;
            }
            if h[next][row].is_zero() {
                h.swap(next, j);
                u.swap(next, j);
                continue;
            }
            let (a, c) = (h[next][row].clone(), h[j][row].clone());
            let e = a.extended_gcd(&c);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (ag, cg) = (&a / &g, &c / &g);
            // [next, j] ← [s·next + t·j, −(c/g)·next + (a/g)·j], determinant 1
            let combine = |x: &BigInt, y: &BigInt| (&s * x + &t * y, &ag * y - &cg * x);
            for r in row..nrows {
                let (p, q) = combine(&h[next][r], &h[j][r]);
                h[next][r] = p;
                h[j][r] = q;
            }
            for r in 0..ncols {
                let (p, q) = combine(&u[next][r], &u[j][r]);
                u[next][r] = p;
                u[j][r] = q;
            }
        }
        if !h[next][row].is_zero() {
            pivots.push((row, next));
            next += 1;
        }
    }
    let mut residual: Vec<BigInt> = b.to_vec();
    let mut y = vec![BigInt::zero(); ncols];
    let mut pi = 0;
    for row in 0..nrows {
        if pi < pivots.len() && pivots[pi].0 == row {
            let c = pivots[pi].1;
            let (q, rem) = residual[row].div_rem(&h[c][row]);
            if !rem.is_zero() {
                return None;
            }
            for r in row..nrows {
                let t = &q * &h[c][r];
                residual[r] -= t;
            }
            y[c] = q;
            pi += 1;
        } else if !residual[row].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigInt::zero(); ncols];
    for (c, yc) in y.iter().enumerate() {
        if yc.is_zero() {
            continue;
        }
        for (xr, ur) in x.iter_mut().zip(&u[c]) {
            *xr += yc * ur;
        }
    }
    Some(x)
}

/// Some solution of `A x = b` over `Z/m`, entries in `[0, m)`.
pub(crate) fn solve_mod_m(cols: &[Column], nrows: usize, b: &[u64], m: u64) -> Option<Vec<u64>> {
    let mut aug: Vec<Column> = cols.to_vec();
    for r in 0..nrows {
        aug.push(vec![(r as u32, m as i64)]);
    }
    let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
    let x = solve_integer(&aug, nrows, &bb)?;
    let mm = BigInt::from(m);
    Some(
        x[..cols.len()]
            .iter()
            .map(|v| v.mod_floor(&mm).to_u64().expect("residue"))
            .collect(),
    )
}

/// Result of an exact linear program.
pub(crate) enum LpOutcome {
    Infeasible,
    Optimal { x: Vec<BigRational>, value: BigRational },
}

/// Minimise `Σ |x_j|` subject to `A x = b` over the rationals, exactly.
///
/// Dense two-phase simplex with Bland's rule on the split `x = x⁺ − x⁻`.
pub(crate) fn min_l1_rational(cols: &[Column], nrows: usize, b: &[BigRational]) -> LpOutcome {
    let n = cols.len();
    let a = dense_rational(cols, nrows);
    // variables: x⁺ (n), x⁻ (n), artificials (nrows)
    let nv = 2 * n + nrows;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    for i in 0..nrows {
        let flip = b[i].is_negative();
        let mut row = vec![BigRational::zero(); nv + 1];
        for j in 0..n {
            let v = if flip { -a[i][j].clone() } else { a[i][j].clone() };
            row[n + j] = -v.clone();
            row[j] = v;
        }
        row[2 * n + i] = BigRational::one();
        row[nv] = b[i].abs();
        t.push(row);
    }
    let mut basis: Vec<usize> = (2 * n..nv).collect();
    // phase 1: minimise the sum of artificials
    let mut cost1 = vec![BigRational::zero(); nv];
    for c in cost1.iter_mut().skip(2 * n) {
        *c = BigRational::one();
    }
    run_simplex(&mut t, &mut basis, &cost1, nv);
    let infeas: BigRational = basis
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v >= 2 * n)
        .map(|(i, _)| t[i][nv].clone())
        .sum();
    if !infeas.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive remaining (zero-valued) artificials out of the basis where possible
    for i in 0..nrows {
        if basis[i] >= 2 * n {
            if let Some(j) = (0..2 * n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }
    // phase 2 on the original variables; artificials are barred from entering
    let mut cost2 = vec![BigRational::one(); nv];
    for c in cost2.iter_mut().skip(2 * n) {
        *c = BigRational::zero();
    }
    run_simplex(&mut t, &mut basis, &cost2, 2 * n);
    let mut x = vec![BigRational::zero(); n];
    for (i, &v) in basis.iter().enumerate() {
        if v < n {
            x[v] += &t[i][nv];
        } else if v < 2 * n {
            x[v - n] -= &t[i][nv];
        }
    }
    let value = x.iter().map(|v| v.abs()).sum();
    LpOutcome::Optimal { x, value }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        *v *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = c;
}

/// Primal simplex from a feasible basis; only columns `< allowed` may enter.
fn run_simplex(t: &mut [Vec<BigRational>], basis: &mut [usize], cost: &[BigRational], allowed: usize) {
    let nv = cost.len();
    loop {
        // reduced cost of column j: cost_j − Σ_i cost_{basis_i} t_ij
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut rc = cost[j].clone();
            for (i, &bv) in basis.iter().enumerate() {
                if !cost[bv].is_zero() && !t[i][j].is_zero() {
                    rc -= &cost[bv] * &t[i][j];
                }
            }
            rc.is_negative()
        });
        let Some(j) = entering else { return };
        let mut best: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[nv] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && basis[i] < basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        match best {
            Some((i, _)) => pivot(t, basis, i, j),
            // unbounded cannot happen for a nonnegative objective
            None => return,
        }
    }
}
