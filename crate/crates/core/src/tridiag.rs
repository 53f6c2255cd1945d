//! Symmetric Toeplitz tridiagonal solves with homogeneous Dirichlet ends.
//!
//! Every implicit line in the scheme has the form
//! `(1+2λ)u_p − λ(u_{p−1} + u_{p+1}) = r_p` with `u` pinned to zero at both
//! ends. The matrix is strictly diagonally dominant for `λ ≥ 0`, so the
//! Thomas algorithm runs without pivoting.

use crate::error::{AdiError, Result};
use crate::real::Real;

/// One line system. `rhs` holds only the interior unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct TriDiagSystem<T> {
    pub lambda: T,
    pub rhs: Vec<T>,
}

/// Precomputed elimination for a fixed `λ` and line length, shared by every
/// line of one batch.
#[derive(Debug, Clone)]
pub struct ThomasFactor<T> {
    lambda: T,
    /// Reciprocal of the eliminated pivots.
    inv_pivot: Vec<T>,
}

impl<T: Real> ThomasFactor<T> {
    pub fn new(lambda: T, n: usize) -> Self {
        let diag = T::one() + lambda + lambda;
        let mut inv_pivot = Vec::with_capacity(n);
        let mut prev_upper = T::zero();
        for _ in 0..n {
            // pivot_p = diag − λ·(λ/pivot_{p−1})
            let m = diag - lambda * prev_upper;
            let inv = m.recip();
            inv_pivot.push(inv);
            prev_upper = lambda * inv;
        }
        Self { lambda, inv_pivot }
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Solves in place for a contiguous line.
    pub fn solve_in_place(&self, u: &mut [T]) {
        debug_assert_eq!(u.len(), self.len());
        let lam = self.lambda;
        let mut prev = T::zero();
        for (v, &inv) in u.iter_mut().zip(&self.inv_pivot) {
            *v = (*v + lam * prev) * inv;
            prev = *v;
        }
        let mut next = T::zero();
        for (v, &inv) in u.iter_mut().zip(&self.inv_pivot).rev() {
            *v += lam * inv * next;
            next = *v;
        }
    }

    /// Solves `width` interleaved lines at once. Line `l`, unknown `p` is
    /// stored at `data[p * stride + l]`.
    pub fn solve_strided(&self, data: &mut [T], stride: usize, width: usize) {
        let n = self.len();
        if n == 0 || width == 0 {
            return;
        }
        let lam = self.lambda;
        let row = |p: usize| p * stride;
        let inv0 = self.inv_pivot[0];
        for v in &mut data[..width] {
            *v *= inv0;
        }
        for p in 1..n {
            let (lo, hi) = data.split_at_mut(row(p));
            let prev = &lo[row(p - 1)..row(p - 1) + width];
            let inv = self.inv_pivot[p];
            for (v, &pv) in hi[..width].iter_mut().zip(prev) {
                *v = (*v + lam * pv) * inv;
            }
        }
        for p in (0..n - 1).rev() {
            let (lo, hi) = data.split_at_mut(row(p + 1));
            let f = lam * self.inv_pivot[p];
            let cur = &mut lo[row(p)..row(p) + width];
            for (v, &nv) in cur.iter_mut().zip(&hi[..width]) {
                *v += f * nv;
            }
        }
    }
}

/// Solves one system. The result has the same length as `rhs`.
pub fn solve_tridiagonal<T: Real>(sys: &TriDiagSystem<T>) -> Result<Vec<T>> {
    if !(sys.lambda.is_finite() && sys.lambda >= T::zero()) {
        return Err(AdiError::InvalidArgument(format!(
            "lambda must be finite and nonnegative, got {}",
            sys.lambda
        )));
    }
    let mut u = sys.rhs.clone();
    ThomasFactor::new(sys.lambda, u.len()).solve_in_place(&mut u);
    Ok(u)
}
