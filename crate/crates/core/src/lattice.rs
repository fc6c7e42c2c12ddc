//! Exact integer matrix arithmetic: products, powers, determinants and the
//! Smith normal form with its unimodular transforms.

use nalgebra::DMatrix;

/// Integer matrix with entries wide enough for the intermediate values of
/// elimination on small automorphisms.
pub type IntMatrix = DMatrix<i128>;

pub fn widen(m: &DMatrix<i64>) -> IntMatrix {
    m.map(i128::from)
}

pub fn checked_mul(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.ncols(), b.nrows());
    let mut out = IntMatrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for j in 0..b.ncols() {
            let mut acc: i128 = 0;
            for k in 0..a.ncols() {
                acc = acc.checked_add(a[(i, k)].checked_mul(b[(k, j)])?)?;
            }
            out[(i, j)] = acc;
        }
    }
    Some(out)
}

pub fn checked_pow(a: &IntMatrix, exponent: u32) -> Option<IntMatrix> {
    let mut result = IntMatrix::identity(a.nrows(), a.ncols());
    for _ in 0..exponent {
        result = checked_mul(&result, a)?;
    }
    Some(result)
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(a: &IntMatrix) -> i128 {
    assert!(a.is_square());
    let n = a.nrows();
    if n == 0 {
        return 1;
    }
    let mut m = a.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[(k, k)] == 0 {
            match (k + 1..n).find(|&r| m[(r, k)] != 0) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[(i, j)] = (m[(i, j)] * m[(k, k)] - m[(i, k)] * m[(k, j)]) / prev;
            }
        }
        prev = m[(k, k)];
    }
    sign * m[(n - 1, n - 1)]
}

/// `left * a * right = diag(diagonal)` with `left`, `right` unimodular and
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = a.shape();
    let mut m = a.clone();
    let mut left = IntMatrix::identity(rows, rows);
    let mut right = IntMatrix::identity(cols, cols);
    let size = rows.min(cols);

    for t in 0..size {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[(i, j)] != 0
                        && pivot.is_none_or(|(pi, pj)| m[(i, j)].abs() < m[(pi, pj)].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap_rows(t, pi);
            left.swap_rows(t, pi);
            m.swap_columns(t, pj);
            right.swap_columns(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = m[(i, t)].div_euclid(m[(t, t)]);
                if q != 0 {
                    row_axpy(&mut m, i, t, -q);
                    row_axpy(&mut left, i, t, -q);
                }
                clean &= m[(i, t)] == 0;
            }
            for j in t + 1..cols {
                let q = m[(t, j)].div_euclid(m[(t, t)]);
                if q != 0 {
                    col_axpy(&mut m, j, t, -q);
                    col_axpy(&mut right, j, t, -q);
                }
                clean &= m[(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[(i, j)] % m[(t, t)] != 0);
            match offender {
                Some((i, _)) => {
                    row_axpy(&mut m, t, i, 1);
                    row_axpy(&mut left, t, i, 1);
                }
                None => break,
            }
        }
        if m[(t, t)] < 0 {
            for j in 0..cols {
                m[(t, j)] = -m[(t, j)];
            }
            for j in 0..rows {
                left[(t, j)] = -left[(t, j)];
            }
        }
    }

    SmithForm {
        diagonal: (0..size).map(|t| m[(t, t)]).collect(),
        left,
        right,
    }
}

fn row_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: i128) {
    for j in 0..m.ncols() {
        m[(target, j)] += factor * m[(source, j)];
    }
}

fn col_axpy(m: &mut IntMatrix, target: usize, source: usize, factor: i128) {
    for i in 0..m.nrows() {
        m[(i, target)] += factor * m[(i, source)];
    }
}
