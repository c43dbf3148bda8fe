use std::fs;
use std::path::Path;
use std::time::Instant;

use opnorm_core::amplify::{tensor_norm_check, tensor_power_check, OracleBudget};
use opnorm_core::embeddings::{
    check_kwise_uniform, derandomized_embedding, gaussian_embedding, isometry_report, kwise_space,
    lp_isometry_report, schechtman_embedding, SchechtmanConfig,
};
use opnorm_core::io::{
    parse_instance, parse_labeling, read_matrix, report_record, write_instance, write_matrix,
    MatrixFormat,
};
use opnorm_core::norm::{
    estimate_norm, norm_grid_oracle, norm_heuristic, EngineBudget, HeuristicConfig, NormEstimate,
    DEFAULT_MAX_ENUM_DIM,
};
use opnorm_core::numerics::{rademacher_moment_exact, sub_seed};
use opnorm_core::reduction::{
    build_reduction_matrix, completeness_vector, generate_planted, soundness_estimate,
    LabelCoverInstance, Labeling, ReductionConfig,
};
use opnorm_core::verify::{run_suite, suite_names};
use opnorm_core::{DenseMatrix, Error, ExponentPair, Matrix, NormKind};
use serde::Serialize;
use serde_json::json;

use crate::{
    BenchArgs, BenchEngine, EmbedArgs, EmbedKind, Engine, EngineArgs, Failure, Format, NormArgs,
    ReduceArgs, TensorArgs, VerifyArgs,
};

type Outcome = Result<(), Failure>;

/// Products below this dimension get an exact idempotence residual.
const EXACT_IDEMPOTENCE_DIM: usize = 1024;
const IDEMPOTENCE_PROBES: usize = 8;
const IDENTITY_TOL: f64 = 1e-9;

fn emit<C: Serialize, R: Serialize>(command: &str, config: &C, result: &R) -> Outcome {
    println!("{}", report_record(command, config, result)?);
    Ok(())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn output_format(path: &Path, format: Option<Format>) -> MatrixFormat {
    format
        .map(MatrixFormat::from)
        .or_else(|| MatrixFormat::from_path(path))
        .unwrap_or(MatrixFormat::MatrixMarket)
}

fn load(path: &Path) -> Result<Matrix, Failure> {
    read_matrix(path).map_err(|e| match e {
        Error::Io(io) => Failure::Usage(format!("{}: {io}", path.display())),
        Error::Parse { .. } => Failure::Usage(format!("{}: {e}", path.display())),
        other => other.into(),
    })
}

fn heuristic_config(restarts: usize, seed: u64) -> HeuristicConfig {
    HeuristicConfig::default()
        .with_restarts(restarts)
        .with_seed(seed)
}

fn run_engine(
    a: &Matrix,
    pq: ExponentPair,
    kind: NormKind,
    e: &EngineArgs,
) -> Result<NormEstimate<f64>, Failure> {
    let cfg = heuristic_config(e.restarts, e.seed);
    let budget = EngineBudget {
        heuristic: cfg,
        max_enum_dim: e.max_enum_dim,
    };
    let est = match e.engine {
        Engine::Auto => estimate_norm(a, pq, kind, &budget)?,
        Engine::Exact => {
            let est = estimate_norm(a, pq, kind, &budget)?;
            if !est.method.is_exact() {
                return Err(Error::Resource(format!(
                    "no exact route for a {}x{} matrix at {pq} within max-enum-dim {}",
                    a.rows(),
                    a.cols(),
                    e.max_enum_dim
                ))
                .into());
            }
            est
        }
        Engine::Heuristic => norm_heuristic(a, pq, kind, &cfg)?,
        Engine::Grid => norm_grid_oracle(a, pq, kind, e.grid_resolution)?,
    };
    Ok(est)
}

pub fn norm(args: &NormArgs) -> Outcome {
    let a = load(&args.matrix)?;
    let est = run_engine(
        &a,
        ExponentPair::new(args.p, args.q),
        args.kind,
        &args.engine,
    )?;
    emit("norm", args, &est)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn idempotence_residual(a: &Matrix, seed: u64) -> Result<(f64, usize), Failure> {
    if a.rows() <= EXACT_IDEMPOTENCE_DIM {
        return Ok((a.matmul(a)?.max_abs_diff(a), 0));
    }
    let probes: Matrix = gaussian_embedding(IDEMPOTENCE_PROBES, a.cols(), seed)?;
    let mut worst: f64 = 0.0;
    for i in 0..IDEMPOTENCE_PROBES {
        let x = probes.column(i);
        let ax = a.matvec(&x);
        let aax = a.matvec(&ax);
        let diff: Vec<f64> = aax.iter().zip(&ax).map(|(u, v)| u - v).collect();
        worst = worst.max(max_abs(&diff) / max_abs(&x));
    }
    Ok((worst, IDEMPOTENCE_PROBES))
}

fn reduce_input(args: &ReduceArgs) -> Result<(LabelCoverInstance, Option<Labeling>), Failure> {
    if let Some(path) = &args.instance {
        let inst = parse_instance(&read_text(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let labeling = match &args.labeling {
            Some(lp) => Some(
                parse_labeling(&read_text(lp)?, &inst)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", lp.display())))?,
            ),
            None => None,
        };
        return Ok((inst, labeling));
    }
    let v = args
        .vertices
        .ok_or_else(|| Failure::Usage("give --instance or --vertices to plant one".into()))?;
    let (inst, labeling) = generate_planted(
        v,
        args.degree,
        args.big_labels,
        args.small_labels,
        args.seed,
        !args.scrambled,
    )?;
    if let Some(out) = &args.instance_out {
        fs::write(out, write_instance(&inst)).map_err(Error::from)?;
    }
    Ok((inst, labeling))
}

pub fn reduce(args: &ReduceArgs) -> Outcome {
    let (inst, labeling) = reduce_input(args)?;
    let cfg = ReductionConfig {
        max_dim: args.max_dim,
        ..ReductionConfig::default()
    };
    let out = build_reduction_matrix::<f64>(&inst, &cfg)?;
    let a = &out.matrix;
    write_matrix(&args.out, a, output_format(&args.out, args.format))?;

    let (idempotence, probes) = idempotence_residual(a, args.seed)?;
    let completeness = match &labeling {
        Some(l) => {
            let f = completeness_vector::<f64>(&inst, l)?;
            let af = a.matvec(&f);
            let r = af
                .iter()
                .zip(&f)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            Some(json!({
                "residual": r,
                "satisfied_edges": inst.satisfied_edges(l),
            }))
        }
        None => None,
    };
    let soundness = match args.soundness_r {
        Some(r) => Some(soundness_estimate(
            &out,
            r,
            &heuristic_config(16, args.seed),
        )?),
        None => None,
    };
    let result = json!({
        "dim": out.dim(),
        "edges": inst.edges().len(),
        "projector_rank": out.projector_rank,
        "constraint_rank": out.constraint_rank,
        "trace": a.trace(),
        "symmetry_residual": a.symmetry_residual(),
        "idempotence_residual": idempotence,
        "idempotence_probes": probes,
        "completeness": completeness,
        "soundness": soundness,
    });
    emit("reduce", args, &result)
}

fn write_embedding(args: &EmbedArgs, b: &Matrix) -> Outcome {
    if let Some(path) = &args.out {
        write_matrix(path, b, output_format(path, args.format))?;
    }
    Ok(())
}

pub fn embed(args: &EmbedArgs) -> Outcome {
    match args.kind {
        EmbedKind::Gaussian => {
            let b: Matrix = gaussian_embedding(args.n, args.m, args.seed)?;
            let report = isometry_report(&b, args.q, args.trials, sub_seed(args.seed, 1))?;
            write_embedding(args, &b)?;
            emit(
                "embed",
                args,
                &json!({ "rows": b.rows(), "isometry": report }),
            )
        }
        EmbedKind::Kwise => embed_kwise(args),
        EmbedKind::Stable => {
            let e = schechtman_embedding::<f64>(
                args.n,
                args.p,
                args.q,
                args.eps,
                args.seed,
                &SchechtmanConfig::default(),
            )?;
            let report = lp_isometry_report(
                &e.matrix,
                args.p,
                args.q,
                args.trials,
                sub_seed(args.seed, 1),
            )?;
            write_embedding(args, &e.matrix)?;
            let result = json!({
                "rows": e.m,
                "c_pq": e.c_pq,
                "tau": e.tau,
                "tail_constant": e.tail_constant,
                "m_hat": e.m_hat,
                "truncated_fraction": e.truncated_fraction,
                "isometry": report,
            });
            emit("embed", args, &result)
        }
    }
}

fn embed_kwise(args: &EmbedArgs) -> Outcome {
    if args.q.fract() != 0.0 || args.q < 2.0 || args.q % 2.0 != 0.0 {
        return Err(Error::Domain(format!(
            "kwise embedding needs an even integer q, got {}",
            args.q
        ))
        .into());
    }
    let q = args.q as usize;
    let b: Matrix = derandomized_embedding(args.n, q)?;
    let check = check_kwise_uniform(&kwise_space(args.n, q)?, q, args.seed)?;
    let xs: Matrix = gaussian_embedding(args.n, args.trials.max(args.n), sub_seed(args.seed, 1))?;
    let m = b.rows() as f64;
    let mut residual: f64 = 0.0;
    for i in 0..args.trials {
        let x = xs.row(i);
        let lhs: f64 = b.matvec(x).iter().map(|v| v.powi(q as i32)).sum();
        let rhs = m * rademacher_moment_exact(x, q as u32)?;
        residual = residual.max((lhs - rhs).abs() / rhs);
    }
    write_embedding(args, &b)?;
    let result = json!({
        "rows": b.rows(),
        "identity_residual": residual,
        "uniformity": check,
        "uniformity_passed": check.passed(),
    });
    emit("embed", args, &result)?;
    if residual > IDENTITY_TOL || !check.passed() {
        return Err(Failure::Verification(format!(
            "moment identity residual {residual:.3e}, uniformity passed {}",
            check.passed()
        )));
    }
    Ok(())
}

pub fn tensor(args: &TensorArgs) -> Outcome {
    let pq = ExponentPair::new(args.p, args.q);
    let budget = OracleBudget {
        engine: EngineBudget {
            heuristic: heuristic_config(args.restarts, args.seed),
            max_enum_dim: args.max_enum_dim,
        },
        grid_resolution: args.grid_resolution,
        max_entries: args.max_entries,
    };
    let a = load(&args.a)?;
    if let Some(k) = args.k {
        let check = tensor_power_check(&a, pq, k, &budget)?;
        emit("tensor", args, &check)?;
        // the lower bound always holds; equality only when p <= q
        let lower = check.power >= check.base.powi(k as i32) * (1.0 - args.tol);
        let equality = args.p.value() > args.q.value() || check.log_gap <= args.tol;
        return if lower && equality {
            Ok(())
        } else {
            Err(Failure::Verification(format!(
                "log gap {:.3e} at k = {k}",
                check.log_gap
            )))
        };
    }
    let b = match &args.b {
        Some(path) => load(path)?,
        None => a.clone(),
    };
    let run = tensor_norm_check(&a, &b, pq, &budget)?;
    emit("tensor", args, &run)?;
    if run.holds(args.tol) {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "relative gap {:.3e}",
            run.rel_gap
        )))
    }
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let names: Vec<String> = if args.suites.is_empty() || args.suites.iter().any(|s| s == "all") {
        suite_names().into_iter().map(String::from).collect()
    } else {
        args.suites.clone()
    };
    let mut failed = Vec::new();
    for name in &names {
        let r = run_suite(name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown suite {name:?}; known: {}",
                suite_names().join(", ")
            ))
        })?;
        eprintln!(
            "[{}] {:>2} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.detail
        );
        emit("verify", &json!({ "suite": name }), &r)?;
        if !r.passed {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    engine: &'static str,
    value: Option<f64>,
    method: Option<String>,
    secs: f64,
    error: Option<String>,
}

fn timed(
    n: usize,
    engine: &'static str,
    f: impl FnOnce() -> opnorm_core::Result<NormEstimate<f64>>,
) -> BenchRow {
    let start = Instant::now();
    let r = f();
    let secs = start.elapsed().as_secs_f64();
    match r {
        Ok(e) => BenchRow {
            n,
            engine,
            value: Some(e.value),
            method: Some(e.method.to_string()),
            secs,
            error: None,
        },
        Err(e) => BenchRow {
            n,
            engine,
            value: None,
            method: None,
            secs,
            error: Some(e.to_string()),
        },
    }
}

pub fn bench(args: &BenchArgs) -> Outcome {
    let pq = ExponentPair::new(args.p, args.q);
    let cfg = heuristic_config(16, args.seed);
    let budget = EngineBudget {
        heuristic: cfg,
        max_enum_dim: DEFAULT_MAX_ENUM_DIM,
    };
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let a: DenseMatrix<f64> = gaussian_embedding(n, n, sub_seed(args.seed, n as u64))?;
        if args.engine != BenchEngine::Heuristic {
            rows.push(timed(n, "exact", || {
                let e = estimate_norm(&a, pq, NormKind::Counting, &budget)?;
                if e.method.is_exact() {
                    Ok(e)
                } else {
                    Err(Error::Resource(format!("no exact route at {pq}")))
                }
            }));
        }
        if args.engine != BenchEngine::Exact {
            rows.push(timed(n, "heuristic", || {
                norm_heuristic(&a, pq, NormKind::Counting, &cfg)
            }));
        }
    }
    for r in &rows {
        eprintln!(
            "{:>4} {:<10} {:>12} {:>10.4}s {}",
            r.n,
            r.engine,
            r.value.map_or("-".into(), |v| format!("{v:.6}")),
            r.secs,
            r.error.as_deref().unwrap_or("")
        );
    }
    emit("bench", args, &rows)
}
