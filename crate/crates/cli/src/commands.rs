//! Subcommand implementations.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use pmodulus_core::analysis::{
    annotate_sweep, check_grid, finite_difference_gradient, gradient_of, result_certificate, SweepRow, DEFAULT_P_GRID,
};
use pmodulus_core::family::WalkFamily;
use pmodulus_core::graph::{Exponent, Graph, VertexId};
use pmodulus_core::oracles::{effective_conductance, max_flow_min_cut, shortest_hops};
use pmodulus_core::solver::{modulus, SolverOptions, ILL_CONDITIONED_BELOW};
use pmodulus_core::Error as CoreError;
use serde_json::{json, Map, Value};

use crate::error::{core_exit_code, CliError};
use crate::format::{parse_graph, Format};
use crate::output::{
    exponent, exponent_text, float_text, modulus_record, number, render_csv, render_json, sweep_fields, sweep_record,
    SWEEP_COLUMNS,
};
use crate::{CommonArgs, Command, CompareArgs, GradientArgs, ModulusArgs, OutputFormat, SweepArgs};

/// Runs a parsed subcommand.
pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Modulus(a) => run_modulus(a, out, err),
        Command::Sweep(a) => run_sweep(a, out, err),
        Command::Compare(a) => run_compare(a, out),
        Command::Gradient(a) => run_gradient(a, out, err),
    }
}

struct Problem {
    graph: Graph,
    family: WalkFamily,
    source: VertexId,
    target: VertexId,
    description: Value,
    opts: SolverOptions,
}

fn load(args: &CommonArgs) -> Result<Problem, CliError> {
    if !(args.tol > 0.0 && args.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {}", args.tol)));
    }
    let bytes = std::fs::read(&args.graph).map_err(|source| CliError::Io {
        path: args.graph.display().to_string(),
        source,
    })?;
    let format = args.format.unwrap_or_else(|| Format::from_path(&args.graph));
    let graph = parse_graph(&bytes, format)?;
    let lookup = |label: &str| {
        graph
            .vertex(label)
            .ok_or_else(|| CliError::Usage(format!("unknown vertex {label:?}")))
    };
    let source = lookup(&args.source)?;
    let target = lookup(&args.target)?;
    let mut description = Map::new();
    description.insert("source".into(), json!(args.source));
    let family = match &args.via {
        Some(via) => {
            description.insert("via".into(), json!(via));
            WalkFamily::via_vertex(&graph, source, lookup(via)?, target)?
        }
        None => WalkFamily::connecting(&graph, source, target)?,
    };
    description.insert("target".into(), json!(args.target));
    let opts = SolverOptions {
        tol: args.tol,
        max_iterations: args.max_iterations,
    };
    Ok(Problem {
        graph,
        family,
        source,
        target,
        description: Value::Object(description),
        opts,
    })
}

fn warn_ill_conditioned(p: Exponent, err: &mut dyn Write) {
    if let Some(p) = p.finite() {
        if p > 1.0 && p < ILL_CONDITIONED_BELOW {
            let _ = writeln!(
                err,
                "warning: p = {p} is below {ILL_CONDITIONED_BELOW}; the program is ill-conditioned near p = 1 and may stop at the iteration cap"
            );
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Output(e.to_string()))
}

fn certificate(graph: &Graph, result: &pmodulus_core::solver::ModulusResult) -> Option<f64> {
    match result.p {
        Exponent::Finite(p) if p > 1.0 => result_certificate(graph, result).ok(),
        _ => None,
    }
}

fn run_modulus(args: &ModulusArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let pr = load(&args.common)?;
    warn_ill_conditioned(args.p, err);
    let res = modulus(&pr.graph, &pr.family, args.p, &pr.opts)?;
    let text = match args.common.output {
        OutputFormat::Json => {
            let cert = certificate(&pr.graph, &res);
            render_json(&modulus_record(&pr.graph, pr.description.clone(), &res, cert))?
        }
        OutputFormat::Csv => {
            let row = SweepRow::from_outcome(&pr.graph, args.p, Ok(res));
            render_csv(&SWEEP_COLUMNS, &[sweep_fields(&row)])?
        }
    };
    emit(out, &text)
}

/// Solves every exponent on a small worker pool; rows come back in input order.
fn solve_rows(pr: &Problem, grid: &[Exponent]) -> Vec<SweepRow> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(grid.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<SweepRow>>> = grid.iter().map(|_| Mutex::new(None)).collect();
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&p) = grid.get(i) else { break };
                let row = SweepRow::from_outcome(&pr.graph, p, modulus(&pr.graph, &pr.family, p, &pr.opts));
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(row);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| {
            m.into_inner()
                .unwrap_or_else(|e| e.into_inner())
                .expect("every exponent is solved")
        })
        .collect()
}

fn run_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let pr = load(&args.common)?;
    let mut grid = args.p_list.clone().unwrap_or_else(|| DEFAULT_P_GRID.to_vec());
    grid.sort_by(|a, b| a.as_f64().total_cmp(&b.as_f64()));
    check_grid(&grid)?;
    for p in &grid {
        warn_ill_conditioned(*p, err);
    }
    let mut rows = solve_rows(&pr, &grid);
    annotate_sweep(&mut rows, pr.opts.tol);

    let text = match args.common.output {
        OutputFormat::Json => {
            let mut obj = Map::new();
            obj.insert("family".into(), pr.description.clone());
            obj.insert("tol".into(), number(pr.opts.tol));
            obj.insert("rows".into(), Value::Array(rows.iter().map(sweep_record).collect()));
            render_json(&Value::Object(obj))?
        }
        OutputFormat::Csv => {
            let fields: Vec<Vec<String>> = rows.iter().map(sweep_fields).collect();
            render_csv(&SWEEP_COLUMNS, &fields)?
        }
    };
    emit(out, &text)?;

    let mut worst: Option<CoreError> = None;
    for row in &rows {
        if let Err(e) = &row.outcome {
            let _ = writeln!(err, "error: p = {}: {e}", exponent_text(row.p));
            if worst.as_ref().is_none_or(|w| core_exit_code(e) > core_exit_code(w)) {
                worst = Some(e.clone());
            }
        }
    }
    let violated: Vec<String> = rows
        .iter()
        .filter(|r| r.violated())
        .map(|r| exponent_text(r.p))
        .collect();
    if !violated.is_empty() {
        return Err(CliError::Invariant(format!(
            "monotonicity in p fails at p = {}",
            violated.join(", ")
        )));
    }
    match worst {
        Some(e) => Err(CliError::Core(e)),
        None => Ok(()),
    }
}

struct Check {
    p: Exponent,
    reference: &'static str,
    modulus: f64,
    expected: Option<f64>,
}

impl Check {
    fn delta(&self) -> Option<f64> {
        self.expected.map(|r| (self.modulus - r).abs())
    }

    fn passes(&self, tol: f64) -> Option<bool> {
        let r = self.expected?;
        let slack = (10.0 * tol).max(1e-9) * r.abs().max(1.0);
        Some(self.delta()? <= slack)
    }
}

fn run_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.common.via.is_some() {
        return Err(CliError::Usage(
            "compare checks the connecting family; --via is not accepted".into(),
        ));
    }
    let pr = load(&args.common)?;
    let (g, s, t) = (&pr.graph, pr.source, pr.target);
    let hops = shortest_hops(g, s, t)?;
    let connected = hops.is_some();

    let flow = if connected { max_flow_min_cut(g, s, t)?.value } else { 0.0 };
    let conductance = match (connected, g.is_directed()) {
        (_, true) => None,
        (false, false) => Some(0.0),
        (true, false) => Some(effective_conductance(g, s, t)?),
    };
    let inverse_hops = hops.map_or(0.0, |h| 1.0 / h as f64);

    let solve = |p: Exponent| modulus(g, &pr.family, p, &pr.opts).map(|r| r.value);
    let checks = [
        Check {
            p: Exponent::Finite(1.0),
            reference: "max_flow",
            modulus: solve(Exponent::Finite(1.0))?,
            expected: Some(flow),
        },
        Check {
            p: Exponent::Finite(2.0),
            reference: "effective_conductance",
            modulus: solve(Exponent::Finite(2.0))?,
            expected: conductance,
        },
        Check {
            p: Exponent::Infinity,
            reference: "inverse_hop_distance",
            modulus: solve(Exponent::Infinity)?,
            expected: Some(inverse_hops),
        },
    ];
    let status = |c: &Check| match c.passes(pr.opts.tol) {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "unsupported",
    };

    let text = match args.common.output {
        OutputFormat::Json => {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    let mut obj = Map::new();
                    obj.insert("p".into(), exponent(c.p));
                    obj.insert("modulus".into(), number(c.modulus));
                    obj.insert("reference".into(), json!(c.reference));
                    obj.insert("reference_value".into(), c.expected.map_or(Value::Null, number));
                    obj.insert("delta".into(), c.delta().map_or(Value::Null, number));
                    obj.insert("status".into(), json!(status(c)));
                    Value::Object(obj)
                })
                .collect();
            let mut obj = Map::new();
            obj.insert("family".into(), pr.description.clone());
            obj.insert("checks".into(), Value::Array(rows));
            render_json(&Value::Object(obj))?
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| {
                    vec![
                        exponent_text(c.p),
                        float_text(c.modulus),
                        c.reference.to_string(),
                        c.expected.map(float_text).unwrap_or_default(),
                        c.delta().map(float_text).unwrap_or_default(),
                        status(c).to_string(),
                    ]
                })
                .collect();
            render_csv(&["p", "modulus", "reference", "reference_value", "delta", "status"], &rows)?
        }
    };
    emit(out, &text)?;

    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c.passes(pr.opts.tol) == Some(false))
        .map(|c| format!("p = {} against {}", exponent_text(c.p), c.reference))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("reference mismatch: {}", failed.join("; "))))
    }
}

fn run_gradient(args: &GradientArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    if !(args.p > 1.0 && args.p.is_finite()) {
        return Err(CliError::Usage(format!("gradient needs 1 < p < inf, got {}", args.p)));
    }
    if !(args.step > 0.0 && args.step < 1.0) {
        return Err(CliError::Usage(format!("--step must lie in (0, 1), got {}", args.step)));
    }
    let pr = load(&args.common)?;
    let p = Exponent::Finite(args.p);
    warn_ill_conditioned(p, err);
    let res = modulus(&pr.graph, &pr.family, p, &pr.opts)?;
    let grad = gradient_of(&res, args.p);
    let fd = finite_difference_gradient(&pr.graph, &pr.family, args.p, &pr.opts, args.step)?;
    let g = &pr.graph;
    let delta: Vec<f64> = grad.iter().zip(&fd).map(|(a, b)| (a - b).abs()).collect();

    let text = match args.common.output {
        OutputFormat::Json => {
            let edges: Vec<Value> = (0..g.edge_count())
                .map(|e| {
                    let mut obj = Map::new();
                    obj.insert("edge".into(), json!(g.edge_key(e)));
                    obj.insert("sigma".into(), number(g.sigma()[e]));
                    obj.insert("gradient".into(), number(grad[e]));
                    obj.insert("finite_difference".into(), number(fd[e]));
                    obj.insert("delta".into(), number(delta[e]));
                    Value::Object(obj)
                })
                .collect();
            let mut obj = Map::new();
            obj.insert("p".into(), exponent(p));
            obj.insert("family".into(), pr.description.clone());
            obj.insert("value".into(), number(res.value));
            obj.insert("step".into(), number(args.step));
            obj.insert("max_delta".into(), number(delta.iter().copied().fold(0.0, f64::max)));
            obj.insert("edges".into(), Value::Array(edges));
            render_json(&Value::Object(obj))?
        }
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = (0..g.edge_count())
                .map(|e| {
                    vec![
                        g.edge_key(e),
                        float_text(g.sigma()[e]),
                        float_text(grad[e]),
                        float_text(fd[e]),
                        float_text(delta[e]),
                    ]
                })
                .collect();
            render_csv(&["edge", "sigma", "gradient", "finite_difference", "delta"], &rows)?
        }
    };
    emit(out, &text)
}
