//! Behavior across exponents and weights, as executable checks.
//!
//! * [`p_sweep`]: `Mod_p` over a grid of exponents with monotonicity verdicts.
//! * [`reconstruct_potential`]: a vertex potential whose differences reproduce
//!   an extremal density on an undirected connecting family.
//! * [`sigma_gradient`]: `∂Mod_p/∂σ(e) = ρ*(e)^p`.
//! * [`clarkson_certificate`]: a-posteriori distance bound from a duality gap.

use alloc::vec::Vec;

use crate::error::{input, parameter, Error, Result};
use crate::family::{self, WalkFamily};
use crate::graph::{EdgeDensity, Exponent, Graph, VertexId};
use crate::math::{abs, abs_pow, pow};
use crate::solver::{modulus, ModulusResult, SolverOptions};

/// Exponent grid used when none is given: `1, 1.25, 1.5, 2, 3, 4, 8, 16, 32, ∞`.
pub const DEFAULT_P_GRID: [Exponent; 10] = [
    Exponent::Finite(1.0),
    Exponent::Finite(1.25),
    Exponent::Finite(1.5),
    Exponent::Finite(2.0),
    Exponent::Finite(3.0),
    Exponent::Finite(4.0),
    Exponent::Finite(8.0),
    Exponent::Finite(16.0),
    Exponent::Finite(32.0),
    Exponent::Infinity,
];

/// Outcome of one monotonicity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Holds within the slack.
    Pass,
    /// Violated beyond the slack.
    Fail,
    /// Not checked for this row.
    NotApplicable,
}

/// Numbers from one successful solve in a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepValues {
    /// `Mod_p`.
    pub value: f64,
    /// `σ(E)^{−1/p} Mod_p^{1/p}`; `Mod_∞` itself at `p = ∞`.
    pub normalized: f64,
    /// Certified lower bound.
    pub dual_lower: f64,
    /// Certified upper bound.
    pub primal_upper: f64,
    /// Solver gap.
    pub gap: f64,
    /// Outer iterations.
    pub iterations: usize,
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// Exponent.
    pub p: Exponent,
    /// Solver output, or the error that stopped this row.
    pub outcome: core::result::Result<SweepValues, Error>,
    /// `Mod_q ≤ Mod_p` against every earlier successful finite row.
    pub monotone: Verdict,
    /// Normalized column nondecreasing against every earlier successful row.
    pub normalized_monotone: Verdict,
}

impl SweepRow {
    /// Wraps a solver outcome; verdicts are filled in by [`annotate_sweep`].
    pub fn from_outcome(graph: &Graph, p: Exponent, outcome: Result<ModulusResult>) -> Self {
        let outcome = outcome.map(|r| SweepValues {
            value: r.value,
            normalized: normalized_modulus(graph, p, r.value),
            dual_lower: r.dual_lower,
            primal_upper: r.primal_upper,
            gap: r.gap,
            iterations: r.iterations,
        });
        SweepRow {
            p,
            outcome,
            monotone: Verdict::NotApplicable,
            normalized_monotone: Verdict::NotApplicable,
        }
    }

    /// Whether any verdict failed.
    pub fn violated(&self) -> bool {
        self.monotone == Verdict::Fail || self.normalized_monotone == Verdict::Fail
    }
}

/// `σ(E)^{−1/p} Mod_p^{1/p}` for finite `p`, `Mod_∞` otherwise.
pub fn normalized_modulus(graph: &Graph, p: Exponent, value: f64) -> f64 {
    match p {
        Exponent::Infinity => value,
        Exponent::Finite(p) => pow(value / graph.sigma_total(), 1.0 / p),
    }
}

fn slack(tol: f64, a: f64, b: f64) -> f64 {
    2.0 * tol * 1f64.max(abs(a)).max(abs(b))
}

/// Fills in verdicts for rows sorted by ascending `p`: values must not
/// increase and the normalized column must not decrease, each up to
/// `2·tol` (relative to the larger magnitude when above one).
pub fn annotate_sweep(rows: &mut [SweepRow], tol: f64) {
    for i in 0..rows.len() {
        let Ok(cur) = rows[i].outcome.clone() else {
            continue;
        };
        let mut monotone = Verdict::NotApplicable;
        let mut normalized = Verdict::NotApplicable;
        for j in 0..i {
            let Ok(prev) = &rows[j].outcome else {
                continue;
            };
            if rows[i].p.finite().is_some() && rows[j].p.finite().is_some() {
                let ok = cur.value <= prev.value + slack(tol, cur.value, prev.value);
                monotone = merge(monotone, ok);
            }
            let ok = prev.normalized <= cur.normalized + slack(tol, cur.normalized, prev.normalized);
            normalized = merge(normalized, ok);
        }
        rows[i].monotone = monotone;
        rows[i].normalized_monotone = normalized;
    }
}

fn merge(v: Verdict, ok: bool) -> Verdict {
    match (v, ok) {
        (Verdict::Fail, _) | (_, false) => Verdict::Fail,
        _ => Verdict::Pass,
    }
}

/// Validates a sweep grid: nonempty, ascending, every entry in `[1, ∞]`.
pub fn check_grid(p_list: &[Exponent]) -> Result<()> {
    if p_list.is_empty() {
        return parameter("empty exponent list");
    }
    for p in p_list {
        p.check()?;
    }
    if p_list.windows(2).any(|w| !(w[0] < w[1])) {
        return parameter("exponent list must be strictly ascending");
    }
    Ok(())
}

/// One solve per exponent, in order. A failed solve marks its row and the
/// sweep continues.
pub fn p_sweep(graph: &Graph, family: &WalkFamily, p_list: &[Exponent], opts: &SolverOptions) -> Result<Vec<SweepRow>> {
    check_grid(p_list)?;
    let mut rows: Vec<SweepRow> = p_list
        .iter()
        .map(|p| SweepRow::from_outcome(graph, *p, modulus(graph, family, *p, opts)))
        .collect();
    annotate_sweep(&mut rows, opts.tol);
    Ok(rows)
}

/// Vertex potential rebuilt from a density.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialResult {
    /// `φ(x)`: normalized `ρ`-distance from `s`; `+∞` outside the component of `s`.
    pub phi: Vec<f64>,
    /// `max_e |ρ(x,y) − |φ(x) − φ(y)||` over edges reachable from `s`.
    pub max_mismatch: f64,
}

/// `φ(x) = min ℓ_ρ` over walks `s → x`, with `ρ` first divided by
/// `ℓ_ρ(Γ(s, t))` so that `φ(s) = 0` and `φ(t) = 1` hold exactly.
pub fn reconstruct_potential(graph: &Graph, s: VertexId, t: VertexId, rho: &EdgeDensity) -> Result<PotentialResult> {
    if graph.is_directed() {
        return Err(Error::Unsupported("potential reconstruction on a directed graph"));
    }
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    if s == t {
        return input("potential reconstruction needs distinct vertices");
    }
    if rho.len() != graph.edge_count() {
        return input("density does not match the graph");
    }
    if !rho.is_nonnegative() {
        return parameter("potential reconstruction needs a nonnegative density");
    }
    // undirected: distances to s equal distances from s
    let (dist, _) = family::distances_to(graph, rho.values(), s);
    let scale = dist[t];
    if !(scale > 0.0) || !scale.is_finite() {
        return input("density gives the connecting family zero or infinite length");
    }
    let phi: Vec<f64> = dist.iter().map(|d| d / scale).collect();
    let max_mismatch = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, (x, y))| phi[*x].is_finite() && phi[*y].is_finite())
        .map(|(e, (x, y))| abs(rho.get(e) / scale - abs(phi[*x] - phi[*y])))
        .fold(0.0, f64::max);
    Ok(PotentialResult { phi, max_mismatch })
}

/// `ρ*(e)^p` from a converged solve: the gradient of `σ ↦ Mod_p(Γ; σ)`.
pub fn sigma_gradient(graph: &Graph, family: &WalkFamily, p: f64, opts: &SolverOptions) -> Result<Vec<f64>> {
    let res = solve_interior(graph, family, p, opts)?;
    Ok(gradient_of(&res, p))
}

/// `ρ*(e)^p` for an existing result.
pub fn gradient_of(result: &ModulusResult, p: f64) -> Vec<f64> {
    result.rho_star.values().iter().map(|r| abs_pow(*r, p)).collect()
}

/// Central differences of `Mod_p` in each `σ(e)` with step `rel_step·σ(e)`.
pub fn finite_difference_gradient(
    graph: &Graph,
    family: &WalkFamily,
    p: f64,
    opts: &SolverOptions,
    rel_step: f64,
) -> Result<Vec<f64>> {
    if !(rel_step > 0.0 && rel_step < 1.0) {
        return parameter("relative step must lie in (0, 1)");
    }
    let sigma = graph.sigma();
    let mut out = Vec::with_capacity(sigma.len());
    for e in 0..sigma.len() {
        let h = rel_step * sigma[e];
        let mut up = sigma.to_vec();
        up[e] += h;
        let mut down = sigma.to_vec();
        down[e] -= h;
        let fu = modulus(&graph.with_sigma(up)?, family, Exponent::Finite(p), opts)?.value;
        let fd = modulus(&graph.with_sigma(down)?, family, Exponent::Finite(p), opts)?.value;
        out.push((fu - fd) / (2.0 * h));
    }
    Ok(out)
}

fn solve_interior(graph: &Graph, family: &WalkFamily, p: f64, opts: &SolverOptions) -> Result<ModulusResult> {
    if !(p > 1.0) || !p.is_finite() {
        return parameter(alloc::format!("needs 1 < p < inf, got {p}"));
    }
    modulus(graph, family, Exponent::Finite(p), opts)
}

/// Bound on `‖ρ − ρ*‖_p` for an admissible `ρ` with energy `energy_of_rho`,
/// given any `lower_bound ≤ Mod_p`.
///
/// For `p ≥ 2`: `(2^{p−1}/σ_min · (E − L))^{1/p}`.
/// For `1 < p < 2`, with `p' = p/(p−1)` and `r = p'/p`:
/// `((2^p/σ_min)^r · [((E + M)/2)^r − M^r])^{1/p'}`, where the bracket is
/// maximized over the unknown modulus `M ∈ [L, E]`. The bracket is
/// unimodal in `M`, so the maximum is at `M = L` unless its stationary point
/// lies above `L`.
pub fn clarkson_certificate(p: f64, sigma_min: f64, energy_of_rho: f64, lower_bound: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return parameter(alloc::format!("certificate needs 1 < p < inf, got {p}"));
    }
    if !(sigma_min > 0.0) {
        return parameter("sigma_min must be positive");
    }
    if !(lower_bound >= 0.0) || !energy_of_rho.is_finite() {
        return parameter("bounds must be finite and nonnegative");
    }
    if lower_bound > energy_of_rho {
        return input(alloc::format!(
            "lower bound {lower_bound:e} exceeds the energy {energy_of_rho:e}"
        ));
    }
    let e = energy_of_rho;
    let l = lower_bound;
    if p >= 2.0 {
        return Ok(pow(pow(2.0, p - 1.0) / sigma_min * (e - l), 1.0 / p));
    }
    let pp = p / (p - 1.0);
    let r = pp / p;
    let bracket = |m: f64| pow((e + m) / 2.0, r) - pow(m, r);
    // stationary point of the bracket: ((E + M)/(2M))^{r−1} = 2
    let m = if r > 1.0 {
        let stat = e / (pow(2.0, 1.0 + 1.0 / (r - 1.0)) - 1.0);
        l.max(stat).min(e)
    } else {
        l
    };
    let b = bracket(m).max(0.0);
    Ok(pow(pow(pow(2.0, p) / sigma_min, r) * b, 1.0 / pp))
}

/// Clarkson certificate of a finished solve (`1 < p < ∞`).
pub fn result_certificate(graph: &Graph, result: &ModulusResult) -> Result<f64> {
    let p = result
        .p
        .finite()
        .ok_or_else(|| Error::Parameter("certificate needs a finite exponent".into()))?;
    clarkson_certificate(p, graph.sigma_min(), result.primal_upper, result.dual_lower.min(result.primal_upper))
}

/// `‖ρ_p − ρ_q‖_p` between two converged extremal densities.
pub fn density_continuity_check(graph: &Graph, family: &WalkFamily, p: f64, q: f64, opts: &SolverOptions) -> Result<f64> {
    let a = solve_interior(graph, family, p, opts)?;
    let b = solve_interior(graph, family, q, opts)?;
    a.rho_star.distance(&b.rho_star, Exponent::Finite(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

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
        let mut edges = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((i, j, 1.0));
            }
        }
        Graph::new(false, (0..4).map(|i| format!("v{i}")).collect(), edges).unwrap()
    }

    #[test]
    fn sweep_parallel_paths() {
        let g = parallel(3, 2);
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let grid = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(3.0)];
        let rows = p_sweep(&g, &fam, &grid, &SolverOptions::with_tol(1e-10)).unwrap();
        for (row, want) in rows.iter().zip([3.0, 1.5, 0.75]) {
            let v = row.outcome.as_ref().unwrap();
            assert!((v.value - want).abs() < 1e-8);
            assert!(!row.violated());
        }
        assert_eq!(rows[0].monotone, Verdict::NotApplicable);
        assert_eq!(rows[1].monotone, Verdict::Pass);
    }

    #[test]
    fn sweep_single_edge_constant() {
        let g = Graph::from_labeled(false, &["s", "t"], &[("s", "t", 1.0)]).unwrap();
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let rows = p_sweep(&g, &fam, &DEFAULT_P_GRID, &SolverOptions::with_tol(1e-10)).unwrap();
        for row in &rows {
            assert!((row.outcome.as_ref().unwrap().value - 1.0).abs() < 1e-9);
            assert!(!row.violated());
        }
        assert_eq!(rows.last().unwrap().monotone, Verdict::NotApplicable);
    }

    #[test]
    fn sweep_normalized_approaches_limit_on_k4() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        let grid: Vec<Exponent> = [2.0, 4.0, 8.0, 16.0, 32.0].iter().map(|p| Exponent::Finite(*p)).collect();
        let rows = p_sweep(&g, &fam, &grid, &SolverOptions::with_tol(1e-10)).unwrap();
        let mut last = 0.0;
        for row in &rows {
            let n = row.outcome.as_ref().unwrap().normalized;
            assert!(n <= 1.0 + 1e-9 && n >= last - 1e-9);
            last = n;
        }
        assert!(last > 0.9);
    }

    #[test]
    fn annotate_flags_violations() {
        let g = k4();
        let ok = |v: f64| -> Result<ModulusResult> {
            Ok(ModulusResult {
                p: Exponent::Finite(1.0),
                value: v,
                rho_star: EdgeDensity::zeros(6),
                active_walks: vec![],
                lambda: vec![],
                primal_upper: v,
                dual_lower: v,
                gap: 0.0,
                iterations: 1,
            })
        };
        let mut rows = vec![
            SweepRow::from_outcome(&g, Exponent::Finite(1.0), ok(3.0)),
            SweepRow::from_outcome(&g, Exponent::Finite(2.0), Err(Error::Internal("x".into()))),
            SweepRow::from_outcome(&g, Exponent::Finite(3.0), ok(3.5)),
        ];
        annotate_sweep(&mut rows, 1e-8);
        assert_eq!(rows[1].monotone, Verdict::NotApplicable);
        assert_eq!(rows[2].monotone, Verdict::Fail);
        assert!(rows[2].violated());
    }

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[]).is_err());
        assert!(check_grid(&[Exponent::Finite(2.0), Exponent::Finite(1.0)]).is_err());
        assert!(check_grid(&[Exponent::Finite(0.5)]).is_err());
        assert!(check_grid(&DEFAULT_P_GRID).is_ok());
    }

    #[test]
    fn potential_parallel_paths() {
        let g = parallel(3, 2);
        let pot = reconstruct_potential(&g, 0, 1, &EdgeDensity::constant(6, 0.5)).unwrap();
        assert_eq!(pot.phi[0], 0.0);
        assert_eq!(pot.phi[1], 1.0);
        for v in 2..5 {
            assert_eq!(pot.phi[v], 0.5);
        }
        assert_eq!(pot.max_mismatch, 0.0);
    }

    #[test]
    fn potential_single_edge_and_errors() {
        let g = Graph::from_labeled(false, &["s", "t"], &[("s", "t", 1.0)]).unwrap();
        let pot = reconstruct_potential(&g, 0, 1, &EdgeDensity::constant(1, 1.0)).unwrap();
        assert_eq!(pot.phi, vec![0.0, 1.0]);
        assert_eq!(pot.max_mismatch, 0.0);
        let d = Graph::from_labeled(true, &["s", "t"], &[("s", "t", 1.0)]).unwrap();
        assert!(matches!(
            reconstruct_potential(&d, 0, 1, &EdgeDensity::constant(1, 1.0)),
            Err(Error::Unsupported(_))
        ));
        assert!(reconstruct_potential(&g, 0, 1, &EdgeDensity::zeros(1)).is_err());
    }

    #[test]
    fn potential_k4_is_harmonic() {
        let g = k4();
        let fam = WalkFamily::connecting(&g, 0, 3).unwrap();
        let r = modulus(&g, &fam, Exponent::Finite(2.0), &SolverOptions::with_tol(1e-12)).unwrap();
        let pot = reconstruct_potential(&g, 0, 3, &r.rho_star).unwrap();
        let want = [0.0, 0.5, 0.5, 1.0];
        for (got, want) in pot.phi.iter().zip(want) {
            assert!((got - want).abs() < 1e-6);
        }
        assert!(pot.max_mismatch < 1e-6);
    }

    #[test]
    fn gradient_single_edge_and_parallel() {
        let one = Graph::from_labeled(false, &["s", "t"], &[("s", "t", 1.0)]).unwrap();
        let fam = WalkFamily::connecting(&one, 0, 1).unwrap();
        let g = sigma_gradient(&one, &fam, 2.5, &SolverOptions::with_tol(1e-12)).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-10);

        let par = parallel(3, 2);
        let fam = WalkFamily::connecting(&par, 0, 1).unwrap();
        let opts = SolverOptions::with_tol(1e-13);
        let g = sigma_gradient(&par, &fam, 2.0, &opts).unwrap();
        let fd = finite_difference_gradient(&par, &fam, 2.0, &opts, 1e-4).unwrap();
        for e in 0..6 {
            assert!((g[e] - 0.25).abs() < 1e-9);
            assert!((fd[e] - g[e]).abs() <= 1e-3 * g[e]);
        }
        assert!(sigma_gradient(&par, &fam, 1.0, &opts).is_err());
    }

    #[test]
    fn clarkson_examples() {
        for p in [1.2, 1.5, 2.0, 3.0] {
            assert_eq!(clarkson_certificate(p, 1.0, 2.0, 2.0).unwrap(), 0.0);
        }
        let c = clarkson_certificate(2.0, 1.0, 1.0 + 1e-8, 1.0).unwrap();
        assert!((c - libm::sqrt(2e-8)).abs() < 1e-12);
        // p = 1.5, p' = 3: ((2^1.5)^2 ((1 + 5e-7)^2 − 1))^{1/3}
        let c = clarkson_certificate(1.5, 1.0, 1.0 + 1e-6, 1.0).unwrap();
        let want = pow(8.0 * (pow(1.0 + 5e-7, 2.0) - 1.0), 1.0 / 3.0);
        assert!((c - want).abs() < 1e-9 * want);
        assert!(clarkson_certificate(2.0, 1.0, 1.0, 2.0).is_err());
        assert!(clarkson_certificate(1.0, 1.0, 2.0, 1.0).is_err());
        assert!(clarkson_certificate(f64::INFINITY, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn clarkson_worst_case_modulus() {
        // with E ≫ L the bracket peaks inside (L, E): the bound must cover
        // every candidate modulus in between
        let (p, e, l) = (1.25, 10.0, 0.1);
        let c = clarkson_certificate(p, 1.0, e, l).unwrap();
        let pp = p / (p - 1.0);
        let r = pp / p;
        for i in 0..=100 {
            let m = l + (e - l) * i as f64 / 100.0;
            let b = pow((e + m) / 2.0, r) - pow(m, r);
            let at_m = pow(pow(pow(2.0, p), r) * b, 1.0 / pp);
            assert!(at_m <= c * (1.0 + 1e-12));
        }
    }

    #[test]
    fn continuity_on_parallel_paths() {
        let g = parallel(2, 5);
        let fam = WalkFamily::connecting(&g, 0, 1).unwrap();
        let d = density_continuity_check(&g, &fam, 1.5, 3.0, &SolverOptions::with_tol(1e-12)).unwrap();
        assert!(d < 1e-6);
    }
}
