//! Dense linear algebra shared by the solvers.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CyclicSolveError {
    #[error(
        "cyclic system is numerically singular (reciprocal condition {rcond:e} at block {block})"
    )]
    Singular { block: usize, rcond: f64 },
    #[error("cyclic system has inconsistent block sizes")]
    Shape,
}

/// Relative singular-value floor below which a cyclic block is declared singular.
pub const SINGULAR_RCOND: f64 = 1e-13;

/// The floor actually applied to a `Q`-block system of `n x n` blocks.
///
/// Each elimination step perturbs the trailing block by a few ulps of the
/// block norm, so an exactly singular system shows a trailing pivot of size
/// about `Q n eps` rather than zero. The floor grows with that bound so long
/// cycles are still recognised as singular.
pub fn singular_floor(q: usize, n: usize) -> f64 {
    SINGULAR_RCOND.max(4.0 * (q * n) as f64 * f64::EPSILON)
}

/// Solves the cyclic block-bidiagonal system
///
/// `x[(i + 1) % Q] - A[i] x[i] = r[i]`, `i = 0..Q`
///
/// by a sequence of orthogonal (Householder) eliminations. Fill-in is confined
/// to the last block column, so the cost is `O(Q n^3)` and the elimination is
/// backward stable regardless of how strongly the `A[i]` expand or contract.
pub fn solve_cyclic(
    jacobians: &[DMatrix<f64>],
    rhs: &[DVector<f64>],
) -> Result<Vec<DVector<f64>>, CyclicSolveError> {
    let q = jacobians.len();
    if q == 0 || rhs.len() != q {
        return Err(CyclicSolveError::Shape);
    }
    let n = jacobians[0].nrows();
    if jacobians.iter().any(|a| a.shape() != (n, n)) || rhs.iter().any(|r| r.len() != n) {
        return Err(CyclicSolveError::Shape);
    }
    let scale = 1.0 + jacobians.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let floor = singular_floor(q, n);

    if q == 1 {
        let m = DMatrix::identity(n, n) - &jacobians[0];
        check_block(&m, 0, scale, floor)?;
        let x = m.lu().solve(&rhs[0]).ok_or(CyclicSolveError::Singular {
            block: 0,
            rcond: 0.0,
        })?;
        return Ok(vec![x]);
    }

    struct Finished {
        diag: DMatrix<f64>,
        next: DMatrix<f64>,
        corner: DMatrix<f64>,
        rhs: DVector<f64>,
    }

    // active row: coefficient on the current column, on the last column, and rhs
    let mut active_col = DMatrix::identity(n, n);
    let mut active_last = -&jacobians[q - 1];
    let mut active_rhs = rhs[q - 1].clone();
    let mut finished = Vec::with_capacity(q - 1);

    for i in 0..q - 1 {
        let merges = i + 1 == q - 1;
        let mut stacked = DMatrix::zeros(2 * n, n);
        stacked.view_mut((0, 0), (n, n)).copy_from(&active_col);
        stacked
            .view_mut((n, 0), (n, n))
            .copy_from(&(-&jacobians[i]));

        // columns: [next block | last block | rhs]
        let mut rest = DMatrix::zeros(2 * n, 2 * n + 1);
        rest.view_mut((0, n), (n, n)).copy_from(&active_last);
        if merges {
            for k in 0..n {
                rest[(n + k, n + k)] += 1.0;
            }
        } else {
            rest.view_mut((n, 0), (n, n)).fill_with_identity();
        }
        rest.view_mut((0, 2 * n), (n, 1)).copy_from(&active_rhs);
        rest.view_mut((n, 2 * n), (n, 1)).copy_from(&rhs[i]);

        let qr = stacked.qr();
        qr.q_tr_mul(&mut rest);
        let r = qr.r();
        let diag_min = r
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |m, d| m.min(d.abs()));
        if diag_min <= floor * scale {
            return Err(CyclicSolveError::Singular {
                block: i,
                rcond: diag_min / scale,
            });
        }

        finished.push(Finished {
            diag: r,
            next: rest.view((0, 0), (n, n)).into_owned(),
            corner: rest.view((0, n), (n, n)).into_owned(),
            rhs: rest.view((0, 2 * n), (n, 1)).column(0).into_owned(),
        });
        active_col = rest.view((n, 0), (n, n)).into_owned();
        active_last = rest.view((n, n), (n, n)).into_owned();
        active_rhs = rest.view((n, 2 * n), (n, 1)).column(0).into_owned();
        if merges {
            active_last += &active_col;
        }
    }

    check_block(&active_last, q - 1, scale, floor)?;
    let last = active_last
        .lu()
        .solve(&active_rhs)
        .ok_or(CyclicSolveError::Singular {
            block: q - 1,
            rcond: 0.0,
        })?;

    let mut x = vec![DVector::zeros(n); q];
    x[q - 1] = last;
    for i in (0..q - 1).rev() {
        let f = &finished[i];
        let mut b = &f.rhs - &f.corner * &x[q - 1];
        if i + 1 < q - 1 {
            b -= &f.next * &x[i + 1];
        }
        x[i] = f
            .diag
            .solve_upper_triangular(&b)
            .ok_or(CyclicSolveError::Singular {
                block: i,
                rcond: 0.0,
            })?;
    }
    Ok(x)
}

fn check_block(
    m: &DMatrix<f64>,
    block: usize,
    scale: f64,
    floor: f64,
) -> Result<(), CyclicSolveError> {
    let sv = m.singular_values();
    let smin = sv.min();
    if !(smin > floor * scale) {
        return Err(CyclicSolveError::Singular {
            block,
            rcond: smin / scale,
        });
    }
    Ok(())
}

/// Orthonormal basis of the column space of `m` (thin QR); `m` must have full
/// column rank.
pub fn orthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    m.clone().qr().q()
}

/// Largest singular value of `S^T U` for orthonormal bases `S`, `U`; zero when
/// either subspace is trivial.
pub fn max_principal_cosine(s: &DMatrix<f64>, u: &DMatrix<f64>) -> f64 {
    if s.ncols() == 0 || u.ncols() == 0 {
        return 0.0;
    }
    (s.transpose() * u).singular_values().max().min(1.0)
}

/// Spectral projector onto the invariant subspace of `b` belonging to
/// eigenvalues outside the unit circle.
///
/// The Cayley transform `(B + I)^{-1}(B - I)` sends the open unit disk to the
/// left half plane, and the matrix sign function of the result separates the
/// two halves. The sign is computed by the scaled Newton iteration.
pub fn unstable_projector(b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let n = b.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut x = (b + &id).lu().solve(&(b - &id))?;
    for _ in 0..200 {
        let inv = x.clone().try_inverse()?;
        let det = x.determinant().abs();
        let mu = if det > 0.0 && det.is_finite() {
            det.powf(-1.0 / n as f64)
        } else {
            1.0
        };
        let next = (&x * mu + inv / mu) * 0.5;
        let delta = (&next - &x).norm();
        let size = next.norm();
        x = next;
        if delta <= 1e-14 * size {
            break;
        }
        if !size.is_finite() {
            return None;
        }
    }
    // one unscaled polish step
    let inv = x.clone().try_inverse()?;
    x = (&x + inv) * 0.5;
    Some((id + x) * 0.5)
}

/// Orthonormal basis for the range of a projector of known rank.
pub fn projector_range(p: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    let n = p.nrows();
    if rank == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = p.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    DMatrix::from_fn(n, rank, |r, c| u[(r, order[c])])
}

/// `sigma_max((omega I - A)^{-1}) = 1 / sigma_min(omega I - A)`.
pub fn resolvent_norm(a: &DMatrix<f64>, omega: Complex<f64>) -> f64 {
    let n = a.nrows();
    let m = DMatrix::<Complex<f64>>::from_fn(n, n, |i, j| {
        let d = if i == j {
            omega
        } else {
            Complex::new(0.0, 0.0)
        };
        d - Complex::new(a[(i, j)], 0.0)
    });
    let smin = m.singular_values().min();
    if smin > 0.0 {
        1.0 / smin
    } else {
        f64::INFINITY
    }
}
