//! Restricted problem for `1 < p < ∞`, solved on the dual side.
//!
//! For a finite set of walks with usage matrix `N` the dual objective is
//!
//! ```text
//! F(λ) = Σ_γ λ(γ) − (p − 1) Σ_e σ(e) (a(e) / (p σ(e)))^{p/(p−1)},   a = Nᵀλ,
//! ```
//!
//! maximized over `λ ≥ 0`. Its gradient is `1 − N ρ_λ` with
//! `ρ_λ(e) = (a(e) / (p σ(e)))^{1/(p−1)}`, so the ascent only ever needs the
//! `ρ_λ` map and `ρ`-lengths of the active rows. The iteration is a
//! projected Newton ascent: variables pinned at zero with a negative gradient
//! take a diagonally scaled gradient step, the rest take a regularized Newton
//! step, and an Armijo backtracking search runs along the projected path.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{parameter, Error, Result};
use crate::family::UsageMatrix;
use crate::graph::EdgeDensity;
use crate::math::{abs_pow, cholesky, cholesky_solve, pow, sqrt};

use super::RestrictedSolution;

const MAX_NEWTON: usize = 500;
const ARMIJO: f64 = 1e-4;
// an edge no active multiplier loads gets its curvature evaluated at this
// fraction of the smallest positive load
const CURVATURE_FLOOR: f64 = 1e-6;

/// Maximizes the dual objective over `λ ≥ 0` for `1 < p < ∞` and recovers
/// `ρ_λ`. Returns once the restricted duality gap is at most `tol` relative
/// to the primal bound.
pub fn solve_restricted_program(
    usage: &UsageMatrix,
    sigma: &[f64],
    p: f64,
    tol: f64,
) -> Result<RestrictedSolution> {
    let (sol, converged) = ascend(usage, sigma, p, tol, &[])?;
    if converged {
        Ok(sol)
    } else {
        Err(Error::NotConverged {
            iterations: sol.iterations,
            primal_upper: sol.primal,
            dual_lower: sol.dual,
        })
    }
}

/// `F(λ)`. Any value is a lower bound on the modulus of every family that
/// contains the walks behind `usage`.
pub fn dual_energy(lambda: &[f64], usage: &UsageMatrix, sigma: &[f64], p: f64) -> Result<f64> {
    check_p(p)?;
    if lambda.len() != usage.row_count() {
        return parameter("one multiplier per active walk is required");
    }
    if sigma.len() != usage.edge_count() {
        return parameter("weights do not match the usage matrix");
    }
    if let Some(v) = lambda.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return parameter(alloc::format!("multipliers must be nonnegative, got {v}"));
    }
    let a = usage.transpose_mul(lambda);
    let rho = rho_of(&a, sigma, p);
    Ok(objective(lambda, &row_lengths(usage, &rho), p))
}

/// `ρ_λ` from `a = Nᵀλ`.
pub(crate) fn rho_of(a: &[f64], sigma: &[f64], p: f64) -> Vec<f64> {
    let r = 1.0 / (p - 1.0);
    a.iter()
        .zip(sigma)
        .map(|(a, s)| if *a > 0.0 { pow(a / (p * s), r) } else { 0.0 })
        .collect()
}

fn objective(lambda: &[f64], lengths: &[f64], p: f64) -> f64 {
    // Σ_e a ρ = Σ_γ λ ℓ_ρ(γ); grouping by rows keeps F accurate when a few
    // large multipliers sit on nearly tight rows
    lambda
        .iter()
        .zip(lengths)
        .map(|(l, len)| l * (1.0 - len) + l * len / p)
        .sum()
}

fn row_lengths(usage: &UsageMatrix, rho: &[f64]) -> Vec<f64> {
    (0..usage.row_count()).map(|i| usage.row_dot(i, rho)).collect()
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        parameter(alloc::format!("the dual program needs 1 < p < inf, got {p}"))
    }
}

struct Point {
    lambda: Vec<f64>,
    a: Vec<f64>,
    rho: Vec<f64>,
    lengths: Vec<f64>,
    value: f64,
}

impl Point {
    fn new(usage: &UsageMatrix, sigma: &[f64], p: f64, lambda: Vec<f64>) -> Self {
        let a = usage.transpose_mul(&lambda);
        let rho = rho_of(&a, sigma, p);
        let lengths = row_lengths(usage, &rho);
        let value = objective(&lambda, &lengths, p);
        Point {
            lambda,
            a,
            rho,
            lengths,
            value,
        }
    }

    fn gradient(&self) -> Vec<f64> {
        self.lengths.iter().map(|l| 1.0 - l).collect()
    }

    /// Energy of `ρ_λ` rescaled to satisfy every active row, and the
    /// smallest active row length used for the rescaling.
    fn primal(&self, sigma: &[f64], p: f64) -> f64 {
        let lmin = self.lengths.iter().copied().fold(f64::INFINITY, f64::min);
        if !(lmin > 0.0) {
            return f64::INFINITY;
        }
        let e: f64 = self.rho.iter().zip(sigma).map(|(r, s)| s * abs_pow(*r, p)).sum();
        e / pow(lmin, p)
    }
}

/// λ for a single row made exactly tight: `Σ_e N_e ρ_λ(e) = 1`.
fn tight_single_row(usage: &UsageMatrix, row: usize, sigma: &[f64], p: f64) -> f64 {
    let r = 1.0 / (p - 1.0);
    // λ = (Σ_e N_e^{1+r} (pσ_e)^{−r})^{−1/r}, via log-sum-exp
    let logs: Vec<f64> = usage
        .row(row)
        .iter()
        .map(|(e, c)| (1.0 + r) * libm::log(*c as f64) - r * libm::log(p * sigma[*e]))
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = top + libm::log(logs.iter().map(|l| libm::exp(l - top)).sum::<f64>());
    libm::exp(-lse / r)
}

/// The multiplier `t ≥ 0` that makes row `i` exactly tight when added to the
/// loads `a` of the other rows; zero if the row is already long enough.
fn tighten_row(usage: &UsageMatrix, i: usize, a: &[f64], sigma: &[f64], p: f64) -> f64 {
    let r = 1.0 / (p - 1.0);
    let row = usage.row(i);
    let length = |t: f64| -> f64 {
        row.iter()
            .map(|(e, c)| {
                let c = *c as f64;
                let load = a[*e] + c * t;
                if load > 0.0 {
                    c * pow(load / (p * sigma[*e]), r)
                } else {
                    0.0
                }
            })
            .sum()
    };
    if length(0.0) >= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while length(hi) < 1.0 {
        lo = hi;
        hi *= 16.0;
        if !hi.is_finite() {
            return 0.0;
        }
    }
    if lo == 0.0 {
        lo = hi;
        while lo > f64::MIN_POSITIVE && length(lo) >= 1.0 {
            hi = lo;
            lo /= 16.0;
        }
        if length(lo) >= 1.0 {
            return lo;
        }
    }
    // geometric bisection while the bracket spans orders of magnitude
    for _ in 0..400 {
        let mid = if hi > 4.0 * lo { sqrt(lo * hi) } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if length(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Projected Newton ascent from `warm` (missing entries start at zero, an
/// all-zero start is replaced by a tight first row). The flag reports
/// whether the requested gap was reached; stagnation at the precision
/// limit returns the best point with `false`.
pub(crate) fn ascend(
    usage: &UsageMatrix,
    sigma: &[f64],
    p: f64,
    tol: f64,
    warm: &[f64],
) -> Result<(RestrictedSolution, bool)> {
    check_p(p)?;
    if usage.is_empty() {
        return parameter("the restricted program needs at least one walk");
    }
    if sigma.len() != usage.edge_count() {
        return parameter("weights do not match the usage matrix");
    }
    if !(tol > 0.0) {
        return parameter("tolerance must be positive");
    }
    let k = usage.row_count();
    let m = usage.edge_count();
    let r = 1.0 / (p - 1.0);

    let mut lambda: Vec<f64> = (0..k)
        .map(|i| warm.get(i).copied().filter(|v| *v > 0.0 && v.is_finite()).unwrap_or(0.0))
        .collect();
    if lambda.iter().all(|v| *v == 0.0) {
        lambda[0] = tight_single_row(usage, 0, sigma, p);
    }
    let mut pt = Point::new(usage, sigma, p, lambda);
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let primal = pt.primal(sigma, p);
        let gap = primal - pt.value;
        if primal.is_finite() && gap <= tol * primal {
            converged = true;
            break;
        }
        if iterations >= MAX_NEWTON {
            break;
        }
        iterations += 1;

        let g = pt.gradient();
        let entering: Vec<usize> = (0..k).filter(|i| pt.lambda[*i] == 0.0 && g[*i] > 0.0).collect();
        if !entering.is_empty() {
            // a multiplier leaving zero can need a value many orders of
            // magnitude below its neighbours; place it by a 1-D solve first
            let mut lambda = pt.lambda.clone();
            let mut a = pt.a.clone();
            for i in entering {
                let t = tighten_row(usage, i, &a, sigma, p);
                if t > 0.0 {
                    lambda[i] = t;
                    for &(e, c) in usage.row(i) {
                        a[e] += t * c as f64;
                    }
                }
            }
            pt = Point::new(usage, sigma, p, lambda);
            continue;
        }

        // curvature of ρ_λ(e) in a(e); unloaded edges borrow a tiny load
        let smallest = pt.a.iter().copied().filter(|a| *a > 0.0).fold(f64::INFINITY, f64::min);
        let floor = if smallest.is_finite() { CURVATURE_FLOOR * smallest } else { 1.0 };
        let h: Vec<f64> = (0..m)
            .map(|e| {
                let a = if pt.a[e] > 0.0 { pt.a[e] } else { floor };
                r * pow(a / (p * sigma[e]), r) / a
            })
            .collect();

        // diagonal of −∇²F
        let mut diag = vec![0.0; k];
        for (e, col) in (0..m).map(|e| (e, usage.column(e))) {
            for &(i, c) in col {
                diag[i] += h[e] * (c as f64) * (c as f64);
            }
        }
        let scaled: Vec<f64> = (0..k)
            .map(|i| if diag[i] > 0.0 { g[i] / diag[i] } else { g[i] })
            .collect();
        let binding: Vec<bool> = (0..k)
            .map(|i| g[i] <= 0.0 && pt.lambda[i] + scaled[i] <= 0.0)
            .collect();
        let free: Vec<usize> = (0..k).filter(|i| !binding[*i]).collect();

        let mut dir = scaled.clone();
        if !free.is_empty() {
            if let Some(step) = newton_step(usage, &h, &g, &free, k) {
                for (j, &i) in free.iter().enumerate() {
                    dir[i] = step[j];
                }
            }
        }

        match line_search(usage, sigma, p, &pt, &g, &dir)
            .or_else(|| line_search(usage, sigma, p, &pt, &g, &scaled))
        {
            Some(next) => pt = next,
            None => break,
        }
    }

    let primal = pt.primal(sigma, p);
    let Point { lambda, rho, value, .. } = pt;
    Ok((
        RestrictedSolution {
            rho: EdgeDensity::from_vec_unchecked(rho),
            lambda,
            primal,
            dual: value,
            iterations,
        },
        converged,
    ))
}

/// Solves `(M_FF + μ I) d = g_F` with `M = N diag(h) Nᵀ`, raising `μ` until
/// the factorization succeeds.
fn newton_step(usage: &UsageMatrix, h: &[f64], g: &[f64], free: &[usize], k: usize) -> Option<Vec<f64>> {
    let nf = free.len();
    let mut slot = vec![usize::MAX; k];
    for (j, &i) in free.iter().enumerate() {
        slot[i] = j;
    }
    let mut mat = vec![0.0; nf * nf];
    for (e, he) in h.iter().enumerate() {
        let col = usage.column(e);
        for &(i, ci) in col {
            let a = slot[i];
            if a == usize::MAX {
                continue;
            }
            for &(j, cj) in col {
                let b = slot[j];
                if b == usize::MAX || b > a {
                    continue;
                }
                mat[a * nf + b] += he * (ci as f64) * (cj as f64);
            }
        }
    }
    // symmetric Jacobi scaling: loads differ by many orders of magnitude
    // across rows at large p, so damping is applied to the unit-diagonal form
    let scale: Vec<f64> = (0..nf)
        .map(|j| {
            let d = mat[j * nf + j];
            if d > 0.0 {
                1.0 / sqrt(d)
            } else {
                1.0
            }
        })
        .collect();
    for a in 0..nf {
        for b in 0..=a {
            mat[a * nf + b] *= scale[a] * scale[b];
        }
    }
    let mut mu = 1e-12;
    for _ in 0..12 {
        let mut fac = mat.clone();
        for j in 0..nf {
            fac[j * nf + j] += mu;
        }
        if cholesky(&mut fac, nf) {
            let mut d: Vec<f64> = free.iter().zip(&scale).map(|(i, s)| g[*i] * s).collect();
            cholesky_solve(&fac, nf, &mut d);
            for (v, s) in d.iter_mut().zip(&scale) {
                *v *= s;
            }
            if d.iter().all(|v| v.is_finite()) {
                return Some(d);
            }
        }
        mu *= 100.0;
    }
    None
}

fn line_search(
    usage: &UsageMatrix,
    sigma: &[f64],
    p: f64,
    pt: &Point,
    g: &[f64],
    dir: &[f64],
) -> Option<Point> {
    let mut alpha = 1.0;
    for _ in 0..60 {
        let trial: Vec<f64> = pt
            .lambda
            .iter()
            .zip(dir)
            .map(|(l, d)| (l + alpha * d).max(0.0))
            .collect();
        let step: Vec<f64> = trial.iter().zip(&pt.lambda).map(|(t, l)| t - l).collect();
        let predicted: f64 = step.iter().zip(g).map(|(s, g)| s * g).sum();
        if !(predicted > 0.0) {
            return None;
        }
        if increase(usage, sigma, p, pt, &step) >= ARMIJO * predicted {
            return Some(Point::new(usage, sigma, p, trial));
        }
        alpha *= 0.5;
    }
    None
}

/// `F(λ + step) − F(λ)` evaluated edge by edge, so that changes far below
/// the magnitude of `F` itself are still resolved.
fn increase(usage: &UsageMatrix, sigma: &[f64], p: f64, pt: &Point, step: &[f64]) -> f64 {
    let r = 1.0 / (p - 1.0);
    let da = usage.transpose_mul(step);
    let spent: f64 = da
        .iter()
        .enumerate()
        .filter(|(_, d)| **d != 0.0)
        .map(|(e, d)| {
            let a = pt.a[e];
            if a > 0.0 {
                // a ρ scales as a^{1+r}
                a * pt.rho[e] * libm::expm1((1.0 + r) * libm::log1p(d / a))
            } else {
                let next = a + d;
                if next > 0.0 {
                    next * pow(next / (p * sigma[e]), r)
                } else {
                    0.0
                }
            }
        })
        .sum();
    step.iter().sum::<f64>() - (p - 1.0) / p * spent
}
