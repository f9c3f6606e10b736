//! Small exact integer linear algebra on weight vectors.
//!
//! The matrices involved here are tiny (at most `2n` rows of length `n + 1`),
//! so everything works on `i128` with fraction-free elimination.

use num_integer::Integer;

/// Rank over the rationals of the matrix whose rows are `rows`.
///
/// Bareiss fraction-free elimination; all intermediate values are minors of
/// the input.
pub fn rank(rows: &[&[i64]]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut prev = 1i128;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..a.len() {
            for j in (c + 1)..cols {
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// True if the two vectors are linearly dependent over the rationals.
pub fn parallel(a: &[i64], b: &[i64]) -> bool {
    assert_eq!(a.len(), b.len());
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if (a[i] as i128) * (b[j] as i128) != (a[j] as i128) * (b[i] as i128) {
                return false;
            }
        }
    }
    true
}

/// Returns `Some(k)` with `diff = k * base`, if such an integer exists.
///
/// `base` must be nonzero. Works componentwise: the ratio on the support of
/// `base` has to agree and be integral, and `diff` must vanish off it.
pub fn integer_multiple(diff: &[i64], base: &[i64]) -> Option<i64> {
    assert_eq!(diff.len(), base.len());
    let mut k: Option<i64> = None;
    for (&d, &b) in diff.iter().zip(base) {
        if b == 0 {
            if d != 0 {
                return None;
            }
            continue;
        }
        if d % b != 0 {
            return None;
        }
        let q = d / b;
        match k {
            None => k = Some(q),
            Some(prev) if prev != q => return None,
            _ => {}
        }
    }
    k
}

/// Invariant factors of the integer matrix with the given rows, in
/// divisibility order. Zero invariant factors are omitted, so the length of
/// the result is the rank.
pub fn smith_invariants(rows: &[&[i64]]) -> Vec<i128> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = a.len();
    let mut out = Vec::new();
    for t in 0..nrows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return out;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let pivot = a[t].clone();
            for row in a.iter_mut().skip(t + 1) {
                let q = Integer::div_floor(&row[t], &p);
                for (x, y) in row[t..].iter_mut().zip(&pivot[t..]) {
                    *x -= q * y;
                }
            }
            for j in (t + 1)..cols {
                let q = Integer::div_floor(&a[t][j], &p);
                for row in a.iter_mut() {
                    row[j] -= q * row[t];
                }
            }
            let cleared =
                ((t + 1)..nrows).all(|i| a[i][t] == 0) && ((t + 1)..cols).all(|j| a[t][j] == 0);
            if !cleared {
                continue;
            }
            let bad = ((t + 1)..nrows)
                .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                None => break,
                Some((i, _)) => {
                    let src = a[i].clone();
                    for (x, y) in a[t][t..].iter_mut().zip(&src[t..]) {
                        *x += y;
                    }
                }
            }
        }
        out.push(a[t][t].abs());
    }
    out
}

/// A unimodular matrix `U` (row-major, `m x m`) with `U * alpha = (g, 0, ..., 0)`
/// where `g = gcd(alpha) > 0`. Returns `(U, g)`; `alpha` must be nonzero.
pub fn unimodular_reduction(alpha: &[i64]) -> (Vec<Vec<i64>>, i64) {
    let m = alpha.len();
    let mut u: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut v = alpha.to_vec();
    for i in 1..m {
        let (a, b) = (v[0], v[i]);
        if b == 0 {
            continue;
        }
        let eg = a.extended_gcd(&b);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        let (ag, bg) = (a / g, b / g);
        let row0 = u[0].clone();
        let rowi = u[i].clone();
        for j in 0..m {
            u[0][j] = s * row0[j] + t * rowi[j];
            u[i][j] = -bg * row0[j] + ag * rowi[j];
        }
        v[0] = g;
        v[i] = 0;
    }
    if v[0] < 0 {
        for x in u[0].iter_mut() {
            *x = -*x;
        }
        v[0] = -v[0];
    }
    (u, v[0])
}
