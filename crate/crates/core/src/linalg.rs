//! Exact dense linear algebra over a [`Field`], plus integer lattice helpers.

use crate::scalar::Field;

/// Row-major dense matrix.
pub type Matrix<F> = Vec<Vec<F>>;

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_el()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv_el().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.mul_el(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_el() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].mul_el(&f);
                    m[i][j] = m[i][j].sub_el(&v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of `{x : m·x = 0}` where `m` has `cols` columns.
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero_el(); cols];
            v[f] = F::one_el();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = w[r][f].neg_el();
            }
            v
        })
        .collect()
}

/// Solves `m·x = b`, returning one solution if the system is consistent.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix<F> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![F::zero_el(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero_el())
                        .fold(F::zero_el(), |acc, (x, brow)| acc.add_el(&x.mul_el(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero_el(), |acc, (x, y)| acc.add_el(&x.mul_el(y)))
        })
        .collect()
}

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one_el() } else { F::zero_el() }).collect())
        .collect()
}

pub fn mat_add<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add_el(q)).collect())
        .collect()
}

pub fn mat_scale<F: Field>(a: &Matrix<F>, s: &F) -> Matrix<F> {
    a.iter()
        .map(|r| r.iter().map(|x| x.mul_el(s)).collect())
        .collect()
}

pub fn is_zero_matrix<F: Field>(a: &Matrix<F>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero_el()))
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    let n = a.len();
    let mut aug: Matrix<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one_el() } else { F::zero_el() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Hermite normal form of the lattice spanned by the integer rows of `rows`.
///
/// Output rows are nonzero, leading entries positive and strictly increasing
/// in column, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // Euclid on column c among rows r.. until a single nonzero remains.
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = m[i][c].div_euclid(m[p][c]);
                    for j in 0..cols {
                        m[i][j] -= q * m[p][j];
                    }
                }
            }
        }
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_euclid(m[r][c]);
            for j in 0..cols {
                m[i][j] -= q * m[r][j];
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// A basis of the integer kernel `{x ∈ ℤⁿ : A x = 0}`, in Hermite normal form.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    // Column-reduce A while tracking the unimodular transform U (A·U = [H | 0]).
    let rows = a.len();
    let mut m: Vec<Vec<i64>> = a.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        for row in m.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let mut c0 = 0;
    for r in 0..rows {
        if c0 == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (c0..n).filter(|&j| m[r][j] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| m[r][j].abs()).unwrap();
            for &j in &nz {
                if j != p {
                    let q = m[r][j].div_euclid(m[r][p]);
                    col_op(&mut m, &mut u, j, p, q);
                }
            }
        }
        if let Some(p) = (c0..n).find(|&j| m[r][j] != 0) {
            for row in m.iter_mut() {
                row.swap(c0, p);
            }
            for row in u.iter_mut() {
                row.swap(c0, p);
            }
            c0 += 1;
        }
    }
    let basis: Vec<Vec<i64>> = (c0..n).map(|j| (0..n).map(|i| u[i][j]).collect()).collect();
    hermite_normal_form(&basis)
}
