//! The modulus computation.
//!
//! [`modulus`] runs constraint generation: it solves the convex program on a
//! finite active set of walks, asks the family oracle for a ρ-shortest
//! member, and adds that walk whenever it violates admissibility. A finite
//! essential subfamily always exists, so the loop terminates; each pass also
//! yields certified bounds:
//!
//! * upper: `E_p(ρ / ℓ_ρ(Γ))`, the energy of the exactly admissible rescaling;
//! * lower: the dual objective of the current multipliers (weak duality).
//!
//! `p = ∞` never enters the loop: the modulus is `1/ℓ(Γ)` in closed form.

mod dual;
mod lp;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

pub use dual::{dual_energy, solve_restricted_program};
pub use lp::solve_restricted_lp;

use crate::error::{parameter, Error, Result};
use crate::family::{UsageMatrix, WalkFamily};
use crate::graph::{energy, EdgeDensity, Exponent, Graph, Walk};

/// Tightest relative gap requested from the inner dual ascent.
const INNER_FLOOR: f64 = 1e-15;

/// Below this exponent the `ρ_λ` map is badly conditioned and the inner
/// tolerance is tightened.
pub const ILL_CONDITIONED_BELOW: f64 = 1.05;

/// Solution of a restricted (finite active set) program.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedSolution {
    /// Optimal density of the restricted program (not rescaled).
    pub rho: EdgeDensity,
    /// One multiplier per active walk.
    pub lambda: Vec<f64>,
    /// Energy of `rho` rescaled to satisfy every active row.
    pub primal: f64,
    /// Dual objective at `lambda`.
    pub dual: f64,
    /// Newton steps or simplex pivots spent.
    pub iterations: usize,
}

/// Solver knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative duality gap (and admissibility slack) at which to stop.
    pub tol: f64,
    /// Outer iteration cap; `None` means `10·m`.
    pub max_iterations: Option<usize>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iterations: None,
        }
    }
}

impl SolverOptions {
    /// Default options with a given tolerance.
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions {
            tol,
            ..Default::default()
        }
    }
}

/// Outcome of a modulus computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusResult {
    /// The exponent.
    pub p: Exponent,
    /// Modulus estimate; equals `primal_upper`, the energy of `rho_star`.
    pub value: f64,
    /// Admissible near-extremal density.
    pub rho_star: EdgeDensity,
    /// Generated active subfamily.
    pub active_walks: Vec<Walk>,
    /// Dual multipliers, one per active walk.
    pub lambda: Vec<f64>,
    /// Certified upper bound.
    pub primal_upper: f64,
    /// Certified lower bound.
    pub dual_lower: f64,
    /// `primal_upper − dual_lower`.
    pub gap: f64,
    /// Outer iterations.
    pub iterations: usize,
}

impl ModulusResult {
    fn empty(p: Exponent, m: usize) -> Self {
        ModulusResult {
            p,
            value: 0.0,
            rho_star: EdgeDensity::zeros(m),
            active_walks: Vec::new(),
            lambda: Vec::new(),
            primal_upper: 0.0,
            dual_lower: 0.0,
            gap: 0.0,
            iterations: 0,
        }
    }
}

/// `Mod_∞(Γ) = 1/ℓ(Γ)` with witness `ρ ≡ 1/ℓ(Γ)`; `(0, 0)` for an empty family.
pub fn mod_infinity(graph: &Graph, family: &WalkFamily) -> (f64, EdgeDensity) {
    match family.hop_shortest(graph) {
        None => (0.0, EdgeDensity::zeros(graph.edge_count())),
        Some(w) => {
            let v = 1.0 / w.hops() as f64;
            (v, EdgeDensity::constant(graph.edge_count(), v))
        }
    }
}

/// Computes `Mod_p(Γ)` with certified bounds.
///
/// Stops once the rescaled density is admissible to within `tol` and the
/// relative gap `(primal − dual) / primal` is at most `tol`. Exceeding the
/// iteration cap is an error carrying the last bounds.
pub fn modulus(graph: &Graph, family: &WalkFamily, p: Exponent, opts: &SolverOptions) -> Result<ModulusResult> {
    let p = p.check()?;
    let tol = opts.tol;
    if !(tol > 0.0) || !tol.is_finite() {
        return parameter(alloc::format!("tolerance must be positive, got {tol}"));
    }
    let m = graph.edge_count();
    let Some(seed) = family.hop_shortest(graph) else {
        return Ok(ModulusResult::empty(p, m));
    };

    let p = match p {
        Exponent::Infinity => {
            let l = seed.hops() as f64;
            let v = 1.0 / l;
            return Ok(ModulusResult {
                p,
                value: v,
                rho_star: EdgeDensity::constant(m, v),
                active_walks: vec![seed],
                // Σλ over a single shortest walk certifies the lower bound
                lambda: vec![v],
                primal_upper: v,
                dual_lower: v,
                gap: 0.0,
                iterations: 0,
            });
        }
        Exponent::Finite(p) => p,
    };

    let sigma = graph.sigma();
    let cap = opts.max_iterations.unwrap_or(10 * m).max(1);
    let mut usage = UsageMatrix::new(m);
    usage.push_walk(&seed)?;
    let mut seen: BTreeSet<Walk> = BTreeSet::new();
    seen.insert(seed.clone());
    let mut active = vec![seed];

    let mut inner_tol = (0.1 * tol).max(INNER_FLOOR);
    if p < ILL_CONDITIONED_BELOW {
        inner_tol = (inner_tol * 1e-2).max(INNER_FLOOR);
    }
    let mut lambda: Vec<f64> = Vec::new();
    let mut best_upper = f64::INFINITY;
    let mut best_lower = 0.0_f64;
    let mut iterations = 0;

    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::NotConverged {
                iterations: cap,
                primal_upper: best_upper,
                dual_lower: best_lower,
            });
        }
        let sol = if p == 1.0 {
            solve_restricted_lp(&usage, sigma)?
        } else {
            dual::ascend(&usage, sigma, p, inner_tol, &lambda)?.0
        };
        lambda = sol.lambda;
        let rho = sol.rho;
        let (walk, len) = family
            .shortest_walk(graph, &rho)?
            .ok_or_else(|| Error::Internal("family became empty".into()))?;

        best_lower = best_lower.max(sol.dual);
        if len > 0.0 {
            let rho_star = rho.scaled(1.0 / len);
            let value = energy(&rho_star, Exponent::Finite(p), sigma)?;
            best_upper = best_upper.min(value);
            let gap = value - sol.dual;
            if len >= 1.0 - tol && gap <= tol * value {
                return finish(p, value, sol.dual, rho_star, active, lambda, iterations);
            }
        }

        if len < 1.0 && !seen.contains(&walk) {
            usage.push_walk(&walk)?;
            seen.insert(walk.clone());
            active.push(walk);
        } else if p != 1.0 && inner_tol > INNER_FLOOR {
            inner_tol = (inner_tol * 1e-2).max(INNER_FLOOR);
        } else {
            return Err(Error::NotConverged {
                iterations,
                primal_upper: best_upper,
                dual_lower: best_lower,
            });
        }
    }
}

fn finish(
    p: f64,
    value: f64,
    dual: f64,
    rho_star: EdgeDensity,
    active: Vec<Walk>,
    lambda: Vec<f64>,
    iterations: usize,
) -> Result<ModulusResult> {
    // rounding can push the dual a few ulps past the primal at convergence
    let dual_lower = if dual > value {
        if dual - value > 1e-12 * value {
            return Err(Error::Internal(alloc::format!(
                "weak duality violated: dual {dual:e} > primal {value:e}"
            )));
        }
        value
    } else {
        dual
    };
    Ok(ModulusResult {
        p: Exponent::Finite(p),
        value,
        rho_star,
        active_walks: active,
        lambda,
        primal_upper: value,
        dual_lower,
        gap: value - dual_lower,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::{String, ToString};

    fn parallel(k: usize, l: usize) -> Graph {
        let mut labels = vec!["s".to_string(), "t".to_string()];
        let mut edges = Vec::new();
        for path in 0..k {
            let mut prev = 0;
            for hop in 0..l {
                let next = if hop + 1 == l {
                    1
                } else {
                    labels.push(format!("v{path}_{hop}"));
                    labels.len() - 1
                };
                edges.push((prev, next, 1.0));
                prev = next;
            }
        }
        Graph::new(false, labels, edges).unwrap()
    }

    fn k4() -> Graph {
        let labels: Vec<String> = ["s", "a", "b", "t"].iter().map(|s| s.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((i, j, 1.0));
            }
        }
        Graph::new(false, labels, edges).unwrap()
    }

    #[test]
    fn parallel_paths_all_p() {
        let g = parallel(3, 2);
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        for (p, want) in [(1.0, 3.0), (2.0, 1.5), (3.0, 0.75)] {
            let r = modulus(&g, &fam, Exponent::Finite(p), &SolverOptions::with_tol(1e-10)).unwrap();
            assert!((r.value - want).abs() < 1e-8 * want, "p={p}: {}", r.value);
            // at p = 1 any split of ρ along a path is extremal
            if p > 1.0 {
                for e in 0..6 {
                    assert!((r.rho_star.get(e) - 0.5).abs() < 1e-6, "p={p}");
                }
            }
            assert!(r.dual_lower <= r.value && r.value <= r.primal_upper);
        }
        let r = modulus(&g, &fam, Exponent::Infinity, &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0.5);
    }

    #[test]
    fn single_edge_weight_five() {
        let g = Graph::from_labeled(false, &["s", "t"], &[("s", "t", 5.0)]).unwrap();
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        for p in [1.0, 1.3, 2.0, 4.5] {
            let r = modulus(&g, &fam, Exponent::Finite(p), &SolverOptions::with_tol(1e-12)).unwrap();
            assert!((r.value - 5.0).abs() < 1e-10, "p={p}");
            assert!((r.rho_star.get(0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_values() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        let r2 = modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::with_tol(1e-10)).unwrap();
        assert!((r2.value - 2.0).abs() < 1e-8);
        let r1 = modulus(&g, &fam, Exponent::Finite(1.0), &SolverOptions::with_tol(1e-10)).unwrap();
        assert!((r1.value - 3.0).abs() < 1e-9);
        let (v, _) = mod_infinity(&g, &fam);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn mod_infinity_cases() {
        let g = parallel(3, 2);
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let (v, rho) = mod_infinity(&g, &fam);
        assert_eq!(v, 0.5);
        assert_eq!(rho, EdgeDensity::constant(6, 0.5));
        // walks from s to t through a: two hops
        let k = k4();
        let via = WalkFamily::via_vertex(&k, 0, 1, 3).unwrap();
        assert_eq!(mod_infinity(&k, &via).0, 0.5);
        let iso = Graph::new(false, vec!["s".into(), "t".into()], vec![]).unwrap();
        let empty = WalkFamily::connecting(&iso, 0, 1).unwrap();
        assert_eq!(mod_infinity(&iso, &empty).0, 0.0);
    }

    #[test]
    fn empty_family_is_zero() {
        let g = Graph::new(false, vec!["s".into(), "t".into(), "u".into()], vec![(0, 2, 1.0)]).unwrap();
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let r = modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.rho_star, EdgeDensity::zeros(1));
        assert!(r.active_walks.is_empty());
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        assert!(matches!(
            modulus(&g, &fam, Exponent::Finite(0.5), &SolverOptions::default()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::with_tol(0.0)),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn iteration_cap_is_an_error() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        let opts = SolverOptions {
            tol: 1e-10,
            max_iterations: Some(1),
        };
        match modulus(&g, &fam, Exponent::Finite(2.0), &opts) {
            Err(Error::NotConverged { primal_upper, dual_lower, .. }) => {
                assert!(dual_lower <= 2.0 + 1e-9 && primal_upper >= 2.0 - 1e-9);
            }
            other => panic!("expected nonconvergence, got {other:?}"),
        }
    }

    #[test]
    fn ill_conditioned_exponent() {
        let g = parallel(2, 3);
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let p = 1.02;
        let r = modulus(&g, &fam, Exponent::Finite(p), &SolverOptions::with_tol(1e-9)).unwrap();
        let want = 2.0 / pow_f(3.0, p - 1.0);
        assert!((r.value - want).abs() < 1e-7 * want);
    }

    fn pow_f(x: f64, y: f64) -> f64 {
        crate::math::pow(x, y)
    }

    #[test]
    fn dual_energy_below_modulus() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        let r = modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::with_tol(1e-10)).unwrap();
        let usage = UsageMatrix::from_walks(6, r.active_walks.iter()).unwrap();
        let mut x: u64 = 0x9e3779b97f4a7c15;
        for _ in 0..100 {
            let lam: Vec<f64> = (0..usage.row_count())
                .map(|_| {
                    x ^= x << 13;
                    x ^= x >> 7;
                    x ^= x << 17;
                    (x % 1000) as f64 / 250.0
                })
                .collect();
            let f = dual_energy(&lam, &usage, g.sigma(), 2.0).unwrap();
            assert!(f <= r.value + 1e-10);
        }
        let f = dual_energy(&r.lambda, &usage, g.sigma(), 2.0).unwrap();
        assert!((f - r.dual_lower).abs() < 1e-12);
    }
}
