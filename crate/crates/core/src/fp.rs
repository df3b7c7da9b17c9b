//! Dense linear algebra over a small prime field.
//!
//! Vectors are `Vec<u8>` with entries in `0..p`; matrices are lists of rows.

pub fn add(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + b as u32) % p) as u8
}

pub fn sub(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + p - b as u32) % p) as u8
}

pub fn mul(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 * b as u32) % p) as u8
}

pub fn neg(a: u8, p: u32) -> u8 {
    ((p - a as u32) % p) as u8
}

pub fn inv(a: u8, p: u32) -> u8 {
    assert!(!(a as u32).is_multiple_of(p), "zero has no inverse");
    let mut r = 1u32;
    let mut b = a as u32;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r as u8
}

/// `y += c * x`.
pub fn axpy(y: &mut [u8], c: u8, x: &[u8], p: u32) {
    if c == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = ((*yi as u32 + c as u32 * xi as u32) % p) as u8;
    }
}

pub fn scale(x: &mut [u8], c: u8, p: u32) {
    for xi in x.iter_mut() {
        *xi = mul(*xi, c, p);
    }
}

pub fn is_zero(x: &[u8]) -> bool {
    x.iter().all(|&e| e == 0)
}

/// Reduced row echelon form in place; zero rows are dropped.
/// Returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Vec<u8>>, p: u32) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let s = inv(rows[r][c], p);
        scale(&mut rows[r], s, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = neg(row[c], p);
                axpy(row, f, &pivot, p);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<u8>], p: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, p).len()
}

/// Reduces `v` against an RREF basis with the given pivots.
pub fn reduce(v: &mut [u8], basis: &[Vec<u8>], pivots: &[usize], p: u32) {
    for (row, &c) in basis.iter().zip(pivots) {
        if v[c] != 0 {
            let f = neg(v[c], p);
            axpy(v, f, row, p);
        }
    }
}

pub fn in_span(v: &[u8], basis: &[Vec<u8>], pivots: &[usize], p: u32) -> bool {
    let mut w = v.to_vec();
    reduce(&mut w, basis, pivots, p);
    is_zero(&w)
}

/// Solution set of `sum_j x_j * cols[j] = rhs`, given column vectors.
/// Returns a particular solution and a basis of the homogeneous solutions.
pub fn solve_columns(cols: &[Vec<u8>], rhs: &[u8], p: u32) -> Option<(Vec<u8>, Vec<Vec<u8>>)> {
    let nvars = cols.len();
    let neqs = rhs.len();
    // augmented rows: equation i has coefficients cols[j][i] and constant rhs[i]
    let mut rows: Vec<Vec<u8>> = (0..neqs)
        .map(|i| {
            let mut r: Vec<u8> = cols.iter().map(|c| c[i]).collect();
            r.push(rhs[i]);
            r
        })
        .collect();
    if rows.is_empty() {
        let kernel = (0..nvars).map(|j| unit(nvars, j)).collect();
        return Some((vec![0; nvars], kernel));
    }
    let pivots = rref(&mut rows, p);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut particular = vec![0u8; nvars];
    for (row, &c) in rows.iter().zip(&pivots) {
        particular[c] = row[nvars];
    }
    let mut kernel = Vec::new();
    for f in (0..nvars).filter(|j| !pivots.contains(j)) {
        let mut v = vec![0u8; nvars];
        v[f] = 1;
        for (row, &c) in rows.iter().zip(&pivots) {
            v[c] = neg(row[f], p);
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}

pub fn unit(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    v[i] = 1;
    v
}

/// All vectors of `F_p^n` in lexicographic order (last coordinate fastest).
pub fn all_vectors(n: usize, p: u32) -> impl Iterator<Item = Vec<u8>> {
    let total = (p as u64).pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0u8; n];
        for i in (0..n).rev() {
            v[i] = (k % p as u64) as u8;
            k /= p as u64;
        }
        v
    })
}

/// Affine combination `base + sum coeffs[i] * dirs[i]`.
pub fn combine(base: &[u8], dirs: &[Vec<u8>], coeffs: &[u8], p: u32) -> Vec<u8> {
    let mut v = base.to_vec();
    for (d, &c) in dirs.iter().zip(coeffs) {
        axpy(&mut v, c, d, p);
    }
    v
}

/// Every `k`-dimensional subspace of `F_p^n`, as RREF bases, ordered by
/// pivot set (lexicographic) and then by free entries.
pub fn subspaces(n: usize, k: usize, p: u32) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: row r, column c > pivots[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = pivots.clone();
                (pivots[r] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for vals in all_vectors(free.len(), p) {
            let mut basis: Vec<Vec<u8>> = (0..k).map(|r| unit(n, pivots[r])).collect();
            for (&(r, c), &v) in free.iter().zip(&vals) {
                basis[r][c] = v;
            }
            out.push(basis);
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Gaussian binomial coefficient `[n choose k]_p`.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= p.pow((n - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Row vector times matrix: `v * m` where `m` is given as rows.
pub fn vec_mat(v: &[u8], m: &[Vec<u8>], p: u32) -> Vec<u8> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0u8; ncols];
    for (&c, row) in v.iter().zip(m) {
        axpy(&mut out, c, row, p);
    }
    out
}

pub fn mat_mul(a: &[Vec<u8>], b: &[Vec<u8>], p: u32) -> Vec<Vec<u8>> {
    a.iter().map(|row| vec_mat(row, b, p)).collect()
}

pub fn identity(n: usize) -> Vec<Vec<u8>> {
    (0..n).map(|i| unit(n, i)).collect()
}
