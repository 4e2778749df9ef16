//! Float helpers that `core` does not provide, plus small dense solvers.

use alloc::vec::Vec;

#[inline]
pub(crate) fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `|x|^p` with `0^p = 0` for every `p > 0`.
#[inline]
pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    let a = abs(x);
    if a == 0.0 {
        0.0
    } else {
        pow(a, p)
    }
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n × n`. Returns `None` when a pivot falls below
/// `pivot_tol` times the largest entry of `a`.
pub(crate) fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize, pivot_tol: f64) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0_f64, |m, v| m.max(abs(*v)));
    if n > 0 && scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let mut piv = col;
        let mut best = abs(a[col * n + col]);
        for row in col + 1..n {
            let v = abs(a[row * n + col]);
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best <= pivot_tol * scale {
            return None;
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for j in col + 1..n {
                a[row * n + j] -= f * a[col * n + j];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for j in row + 1..n {
            s -= a[row * n + j] * x[j];
        }
        x[row] = s / a[row * n + row];
    }
    Some(x)
}

/// In-place Cholesky factorization of a symmetric row-major matrix. Only the
/// lower triangle is read and written. Fails on a nonpositive pivot.
pub(crate) fn cholesky(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = sqrt(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    true
}

/// Solves `L Lᵀ x = b` given the factor produced by [`cholesky`].
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}
