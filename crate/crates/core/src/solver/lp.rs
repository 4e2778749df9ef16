//! Restricted problem for `p = 1`.
//!
//! The primal `min Σ σρ  s.t. Nρ ≥ 1, ρ ≥ 0` and its dual
//! `max Σ λ  s.t. Nᵀλ ≤ σ, λ ≥ 0` are solved together by a dense tableau
//! simplex on the dual side. With `σ > 0` the all-slack basis is feasible, so
//! no phase one is needed, and Bland's rule keeps the pivoting finite on the
//! highly degenerate flow-like problems that arise here. The primal density
//! is read off the final objective row as the constraint shadow prices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{parameter, Error, Result};
use crate::family::UsageMatrix;
use crate::graph::EdgeDensity;

use super::RestrictedSolution;

const EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 100_000;

/// Solves the restricted `p = 1` program exactly up to floating point.
pub fn solve_restricted_lp(usage: &UsageMatrix, sigma: &[f64]) -> Result<RestrictedSolution> {
    if usage.is_empty() {
        return parameter("the restricted program needs at least one walk");
    }
    if sigma.len() != usage.edge_count() {
        return parameter("weights do not match the usage matrix");
    }
    if sigma.iter().any(|s| !(*s > 0.0)) {
        return parameter("weights must be positive");
    }
    let k = usage.row_count();
    // only edges some walk uses give a constraint
    let used: Vec<usize> = (0..usage.edge_count())
        .filter(|e| !usage.column(*e).is_empty())
        .collect();
    let rows = used.len();
    let cols = k + rows;
    let width = cols + 1;
    let mut tab = vec![0.0; rows * width];
    for (r, &e) in used.iter().enumerate() {
        for &(i, c) in usage.column(e) {
            tab[r * width + i] = c as f64;
        }
        tab[r * width + k + r] = 1.0;
        tab[r * width + cols] = sigma[e];
    }
    // reduced profits; slack columns start at zero
    let mut obj = vec![0.0; width];
    for v in obj.iter_mut().take(k) {
        *v = 1.0;
    }
    let mut basis: Vec<usize> = (k..cols).collect();

    let mut pivots = 0;
    // Bland: lowest-index improving column
    while let Some(enter) = (0..cols).find(|j| obj[*j] > EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let a = tab[r * width + enter];
            if a > EPS {
                let ratio = tab[r * width + cols] / a;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - EPS * (1.0 + lratio.abs())
                            || (ratio <= lratio + EPS * (1.0 + lratio.abs()) && basis[r] < basis[lr])
                        {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Internal(format!(
                "restricted LP unbounded in column {enter}; impossible with positive weights"
            )));
        };
        pivot(&mut tab, &mut obj, rows, width, pr, enter);
        basis[pr] = enter;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Internal("simplex pivot limit exceeded".into()));
        }
    }

    let mut lambda = vec![0.0; k];
    for (r, &b) in basis.iter().enumerate() {
        if b < k {
            lambda[b] = tab[r * width + cols].max(0.0);
        }
    }
    let mut rho = vec![0.0; usage.edge_count()];
    for (r, &e) in used.iter().enumerate() {
        rho[e] = (-obj[k + r]).max(0.0);
    }

    // scale λ onto the feasible side so Σλ is a certified lower bound
    let load = usage.transpose_mul(&lambda);
    let shrink = load
        .iter()
        .zip(sigma)
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, s)| s / a)
        .fold(1.0, f64::min);
    for l in lambda.iter_mut() {
        *l *= shrink;
    }
    let dual: f64 = lambda.iter().sum();

    let lmin = (0..k).map(|i| usage.row_dot(i, &rho)).fold(f64::INFINITY, f64::min);
    if !(lmin > 0.0) {
        return Err(Error::Internal("simplex returned an infeasible density".into()));
    }
    let primal = rho.iter().zip(sigma).map(|(r, s)| r * s).sum::<f64>() / lmin;
    Ok(RestrictedSolution {
        rho: EdgeDensity::from_vec_unchecked(rho),
        lambda,
        primal,
        dual,
        iterations: pivots,
    })
}

fn pivot(tab: &mut [f64], obj: &mut [f64], rows: usize, width: usize, pr: usize, pc: usize) {
    let d = tab[pr * width + pc];
    for j in 0..width {
        tab[pr * width + j] /= d;
    }
    tab[pr * width + pc] = 1.0;
    for r in 0..rows {
        if r == pr {
            continue;
        }
        let f = tab[r * width + pc];
        if f != 0.0 {
            for j in 0..width {
                tab[r * width + j] -= f * tab[pr * width + j];
            }
            tab[r * width + pc] = 0.0;
        }
    }
    let f = obj[pc];
    if f != 0.0 {
        for j in 0..width {
            obj[j] -= f * tab[pr * width + j];
        }
        obj[pc] = 0.0;
    }
}
