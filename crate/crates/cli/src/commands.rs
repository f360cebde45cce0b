use crate::input::{usage, write_output, CliResult, Inputs};
use crate::{BenchArgs, EstimateArgs, ExactArgs, ExactWhat, KernelChain, Model, SampleArgs, Source};
use matroid_mcmc::batch::{run_batch, Batch};
use matroid_mcmc::exact::{
    collapsed_target, exact_kernel, exact_mu, exact_pi, exact_rc, set_of, ChainKind, ExactDistribution,
};
use matroid_mcmc::reliability::{rel_estimate, rel_exact};
use matroid_mcmc::scaling::sweep;
use matroid_mcmc::{ChainConfig, EstimateConfig, Fields, MatroidSpec, NetworkInstance, PolarizedChain, RandomClusterChain};
use serde_json::{json, Value};
use std::time::Instant;

fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if jobs == Some(0) {
        return Err(usage("--jobs must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("cannot start worker pool: {e}")))
}

/// A matroid with fields, plus the graph when it came from a graph file.
struct Problem {
    spec: MatroidSpec,
    fields: Fields,
    graph: Option<NetworkInstance>,
}

/// Interprets `--graph`/`--matroid`/`--lambda` for a model.
///
/// With a graph file, `independent` and `random-cluster` use the graphic
/// matroid and `connected-spanning` the cographic one. Fields default to 1,
/// except that a graph's failure probabilities give `p/(1-p)` for
/// `connected-spanning` and `(1-p)/p` for `random-cluster`.
fn resolve(model: Model, src: &Source, inputs: &mut Inputs) -> CliResult<Problem> {
    let (spec, graph) = match (&src.graph, &src.matroid) {
        (Some(g), None) => {
            let g = inputs.graph(g)?;
            let spec = if model == Model::ConnectedSpanning { g.cographic() } else { g.graphic() };
            (spec, Some(g))
        }
        (None, Some(m)) => {
            if model == Model::ConnectedSpanning {
                return Err(usage("--model connected-spanning needs --graph"));
            }
            (inputs.matroid(m)?, None)
        }
        _ => return Err(usage("exactly one of --graph or --matroid is required")),
    };
    let n = spec.ground_size();
    let fields = match (&src.lambda, &graph, model) {
        (Some(_), Some(_), Model::ConnectedSpanning) => {
            return Err(usage("--lambda is fixed by the failure probabilities for connected-spanning"))
        }
        (Some(arg), _, _) => inputs.fields(arg, n)?,
        (None, Some(g), Model::ConnectedSpanning) => g.fields(),
        (None, Some(g), Model::RandomCluster) => {
            Fields::new(g.failure_probs().iter().map(|p| (1.0 - p) / p).collect())?
        }
        (None, _, _) => Fields::constant(n, 1.0)?,
    };
    Ok(Problem { spec, fields, graph })
}

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    let mut keep = vec![true; n];
    for &i in s {
        keep[i] = false;
    }
    (0..n).filter(|&i| keep[i]).collect()
}

pub fn sample(a: SampleArgs) -> CliResult<()> {
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let cfg = ChainConfig {
        epsilon: a.eps,
        mix_constant: a.mix_constant,
        seed: a.seed,
        step_override: a.steps,
        backend: a.backend,
        check_invariants: false,
    }
    .with_env_checks();
    cfg.validate()?;
    if a.num_samples == 0 {
        return Err(usage("--num-samples must be at least 1"));
    }
    let p = resolve(a.model, &a.source, &mut inputs)?;
    let n = p.spec.ground_size();
    let pool = pool(a.jobs)?;
    let batch: Batch = match a.model {
        Model::Independent | Model::ConnectedSpanning => {
            if a.q.is_some() {
                return Err(usage("--q only applies to --model random-cluster"));
            }
            pool.install(|| {
                run_batch(a.num_samples, a.seed, || PolarizedChain::new(&p.spec, p.fields.clone(), cfg.clone()))
            })?
        }
        Model::RandomCluster => {
            let q = a.q.ok_or_else(|| usage("--model random-cluster needs --q"))?;
            pool.install(|| {
                run_batch(a.num_samples, a.seed, || RandomClusterChain::new(&p.spec, p.fields.clone(), q, cfg.clone()))
            })?
        }
    };
    let mut out = String::new();
    for s in &batch.samples {
        let line = if a.model == Model::ConnectedSpanning {
            let g = p.graph.as_ref().expect("connected-spanning reads a graph");
            if cfg.check_invariants {
                assert!(g.survives(s), "failure set {s:?} disconnects the graph");
            }
            complement(n, s)
        } else {
            s.clone()
        };
        out.push_str(&serde_json::to_string(&line).expect("index lists serialize"));
        out.push('\n');
    }
    write_output(a.out.as_deref(), &out)?;
    if let Some(path) = &a.stats {
        let manifest = json!({
            "command": "sample",
            "config": &a,
            "input_digest": inputs.digest(),
            "seed": a.seed,
            "steps_per_sample": cfg.steps(n),
            "ground_size": n,
            "versions": { "matroid-mcmc": env!("CARGO_PKG_VERSION") },
            "wall_clock_s": start.elapsed().as_secs_f64(),
            "stats": batch.stats,
            "rejection_rate": batch.stats.rejection_rate(),
        });
        write_output(Some(path), &pretty(&manifest))?;
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn estimate(a: EstimateArgs) -> CliResult<()> {
    let mut inputs = Inputs::default();
    let g = inputs.graph(&a.graph)?;
    let cfg = EstimateConfig {
        eps: a.eps,
        delta: a.delta,
        c0: a.c0,
        chain_eps: a.chain_eps,
        mix_constant: a.mix_constant,
        seed: a.seed,
        backend: a.backend,
    };
    let est = pool(a.jobs)?.install(|| rel_estimate(&g, &cfg))?;
    write_output(a.out.as_deref(), &pretty(&serde_json::to_value(&est).expect("estimate serializes")))
}

fn atoms(d: &ExactDistribution, f: impl Fn(u64) -> Value) -> Value {
    Value::Array(d.iter().map(|(s, p)| json!({ "set": f(s), "prob": p })).collect())
}

pub fn exact(a: ExactArgs) -> CliResult<()> {
    let mut inputs = Inputs::default();
    let model = match (a.what, a.chain) {
        (ExactWhat::Rc, _) | (ExactWhat::Kernel, KernelChain::RandomCluster) => Model::RandomCluster,
        _ => a.model,
    };
    let v = match a.what {
        ExactWhat::Reliability => {
            let path = a.source.graph.as_ref().ok_or_else(|| usage("exact reliability needs --graph"))?;
            let g = inputs.graph(path)?;
            json!({ "z_rel": rel_exact(&g)? })
        }
        ExactWhat::Mu => {
            let p = resolve(model, &a.source, &mut inputs)?;
            let n = p.spec.ground_size();
            let d = exact_mu(&p.spec, &p.fields)?;
            // connected-spanning reports surviving edges, like `sample`
            let d = if model == Model::ConnectedSpanning { d.map(|s| !s & ((1u64 << n) - 1)) } else { d };
            json!({ "n": n, "atoms": atoms(&d, |s| json!(set_of(s))) })
        }
        ExactWhat::Pi => {
            let p = resolve(model, &a.source, &mut inputs)?;
            let n = p.spec.ground_size();
            let d = exact_pi(&p.spec, &p.fields)?;
            let lift = |s: u64| json!({ "x": set_of(s & ((1u64 << n) - 1)), "y": set_of(s >> n) });
            json!({ "n": n, "atoms": atoms(&d, lift) })
        }
        ExactWhat::Rc => {
            let q = a.q.ok_or_else(|| usage("exact rc needs --q"))?;
            let p = resolve(model, &a.source, &mut inputs)?;
            let d = exact_rc(&p.spec, &p.fields, q)?;
            json!({ "n": p.spec.ground_size(), "q": q, "atoms": atoms(&d, |s| json!(set_of(s))) })
        }
        ExactWhat::Kernel => {
            let p = resolve(model, &a.source, &mut inputs)?;
            let kind = match a.chain {
                KernelChain::Polarized => ChainKind::Polarized,
                KernelChain::RandomCluster => {
                    ChainKind::RandomCluster { q: a.q.ok_or_else(|| usage("random-cluster kernel needs --q"))? }
                }
            };
            let k = exact_kernel(kind, &p.spec, &p.fields)?;
            let stationary = k.stationary()?;
            let target = collapsed_target(kind, &p.spec, &p.fields)?;
            let target_error = target
                .iter()
                .map(|&(s, w)| (stationary[k.index_of(s).expect("target state is in the kernel")] - w).abs())
                .fold(0.0, f64::max);
            json!({
                "chain": kind,
                "states": k.states.iter().map(|&(s, y)| json!({ "set": set_of(s), "y": y })).collect::<Vec<_>>(),
                "matrix": k.matrix,
                "row_sum_error": k.row_sum_error(),
                "stationary": stationary,
                "residual": k.residual(&stationary),
                "target_error": target_error,
            })
        }
    };
    write_output(None, &pretty(&v))
}

pub fn bench(a: BenchArgs) -> CliResult<()> {
    let rows = sweep(&a.families, &a.sizes, &a.backends, a.warmup, a.steps, a.seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| usage(format!("csv: {e}")))?;
    write_output(a.out.as_deref(), &String::from_utf8(bytes).expect("csv is utf-8"))
}
