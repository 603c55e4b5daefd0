//! Hermite and Smith normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are the nonzero rows in echelon order: each pivot is positive
/// and every entry above a pivot lies in `[0, pivot)`. The result depends only
/// on the lattice, not on the order or redundancy of the input.
pub fn hnf_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let pick = (r..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&i, &j| m[i][col].abs().cmp(&m[j][col].abs()));
            let Some(p) = pick else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == m.len() || m[r][col].is_zero() {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot_row = m[r].clone();
        for i in 0..r {
            let q = m[i][col].div_floor(&pivot_row[col]);
            if !q.is_zero() {
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Pivot column of each row of an echelon matrix.
pub fn pivots(rows: &[Vec<BigInt>]) -> Vec<usize> {
    rows.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in echelon form"))
        .collect()
}

/// Smith form data for the row lattice of `rows` inside `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub invariants: Vec<i64>,
    /// Unimodular `n x n` column transform: in coordinates `y = x V` the
    /// lattice is spanned by `d_i e_i`.
    pub transform: Vec<Vec<i64>>,
}

/// Smith normal form tracking the column transform. Returns `None` on i64 overflow.
pub fn smith(rows: &[Vec<i64>], n: usize) -> Option<SmithForm> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let k = a.len();
    let mut v: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut invariants = Vec::new();
    let col_op = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for row in a.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    for t in 0..k.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..n {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(invariants, v);
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let src = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&src) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut a, &mut v, j, t, q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..k).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let src = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&src) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        invariants.push(a[t][t].abs());
    }
    finish(invariants, v)
}

fn finish(invariants: Vec<i128>, v: Vec<Vec<i128>>) -> Option<SmithForm> {
    Some(SmithForm {
        invariants: invariants
            .into_iter()
            .map(|x| x.to_i64())
            .collect::<Option<_>>()?,
        transform: v
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_i64()).collect::<Option<_>>())
            .collect::<Option<_>>()?,
    })
}
