use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rnbrw::rng::derive_seed;
use rnbrw::{
    cnm, estimate_retracing, generate_lfr_like, generate_planted_partition, louvain, modularity, nmi, rnbrw_weights,
    EdgeWeights, EstimateOptions, Graph, Partition, RetracingEstimate,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{Cli, Command, DetectArgs, GenerateArgs, Kind, Method, WalkArgs, WeightArgs, Weighting};
use crate::{CliResult, Failure};

pub const WALK_TAG: u64 = 0x5741_4c4b;
pub const DETECT_TAG: u64 = 0x4445_5445;
pub const GENERATE_TAG: u64 = 0x4745_4e45;

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Weight(a) => weight(&a),
        Command::Detect(a) => detect(&a),
        Command::Generate(a) => generate(&a),
        Command::Sweep(a) => crate::sweep::sweep(&a),
    }
}

/// `<path><suffix>`, e.g. `out.txt` -> `out.txt.json`.
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn distinct_paths(paths: &[&Path]) -> CliResult<()> {
    for (i, a) in paths.iter().enumerate() {
        if paths[i + 1..].contains(a) {
            return Err(Failure::usage(format!("path {} is used twice", a.display())));
        }
    }
    Ok(())
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::data(e).context(format!("creating {}", path.display())))
}

fn load_graph(path: &Path, weighted: bool) -> CliResult<Graph> {
    let f = File::open(path).map_err(|e| Failure::data(e).context(format!("opening {}", path.display())))?;
    Graph::load_edge_list(BufReader::new(f), weighted)
        .map_err(|e| Failure::from(e).context(format!("reading {}", path.display())))
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct WalkStats {
    pub rho: u64,
    pub discards: u64,
    pub walks: u64,
    pub walk_seed: u64,
}

/// Runs the estimator on `g` and turns the result into weights.
pub fn rnbrw_pass(g: &Graph, walk: &WalkArgs, workers: usize) -> CliResult<(RetracingEstimate, EdgeWeights, WalkStats)> {
    if !(walk.walks_mult > 0.0 && walk.walks_mult.is_finite()) {
        return Err(Failure::usage(format!("--walks-mult must be positive, got {}", walk.walks_mult)));
    }
    let rho = ((walk.walks_mult * g.edge_count() as f64).ceil() as u64).max(1);
    let walk_seed = derive_seed(walk.seed, WALK_TAG);
    let est = estimate_retracing(g, &EstimateOptions::new(rho, walk_seed).workers(workers))?;
    let weights = rnbrw_weights(&est, g, walk.smoothing.into())?;
    let stats = WalkStats {
        rho,
        discards: est.discards,
        walks: est.walks,
        walk_seed,
    };
    Ok((est, weights, stats))
}

fn weight(args: &WeightArgs) -> CliResult<()> {
    let stats_path = sidecar(&args.out, ".json");
    let csv_path = sidecar(&args.out, ".estimate.csv");
    distinct_paths(&[&args.input, &args.out, &stats_path, &csv_path])?;
    let g = load_graph(&args.input, false)?;

    let started = Instant::now();
    let (est, weights, stats) = rnbrw_pass(&g, &args.walk, args.walk.workers())?;
    let wallclock_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut out = create(&args.out)?;
    g.apply_weights(&weights)?.save_edge_list(&mut out, true)?;
    out.flush()?;
    let mut audit = create(&csv_path)?;
    est.write_csv(&mut audit, &g)?;
    audit.flush()?;

    let summary = json!({
        "config": { "command": "weight", "args": args },
        "n": g.node_count(),
        "m": g.edge_count(),
        "rho": stats.rho,
        "discards": stats.discards,
        "walks": stats.walks,
        "walk_seed": stats.walk_seed,
        "wallclock_ms": wallclock_ms,
    });
    write_json(&stats_path, &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

pub struct Detection {
    pub partition: Partition,
    pub modularity: f64,
    pub detail: serde_json::Value,
}

pub fn run_method(g: &Graph, method: Method, seed: u64) -> CliResult<Detection> {
    Ok(match method {
        Method::Louvain => {
            let r = louvain(g, derive_seed(seed, DETECT_TAG))?;
            Detection {
                detail: json!({ "levels": r.levels.len(), "sweeps": r.sweeps, "moves": r.moves }),
                partition: r.partition,
                modularity: r.modularity,
            }
        }
        Method::Cnm => {
            let r = cnm(g)?;
            Detection {
                detail: json!({ "merges": r.merges.len(), "best_step": r.best_step }),
                partition: r.partition,
                modularity: r.modularity,
            }
        }
    })
}

fn detect(args: &DetectArgs) -> CliResult<()> {
    let summary_path = sidecar(&args.out, ".json");
    let mut paths = vec![args.input.as_path(), args.out.as_path(), summary_path.as_path()];
    if let Some(t) = &args.truth {
        paths.push(t);
    }
    distinct_paths(&paths)?;
    let g = load_graph(&args.input, args.weighted)?;
    let truth = match &args.truth {
        Some(path) => {
            let f = File::open(path).map_err(|e| Failure::data(e).context(format!("opening {}", path.display())))?;
            Some(Partition::read(BufReader::new(f), &g).map_err(|e| Failure::from(e).context(format!("reading {}", path.display())))?)
        }
        None => None,
    };

    let (target, walk) = match args.weighting {
        Weighting::None => (g.clone(), None),
        Weighting::Rnbrw => {
            let (_, weights, stats) = rnbrw_pass(&g.unweighted(), &args.walk, args.walk.workers())?;
            (g.apply_weights(&weights)?, Some(stats))
        }
    };
    let found = run_method(&target, args.method, args.walk.seed)?;

    let mut out = create(&args.out)?;
    found.partition.write(&mut out, &g)?;
    out.flush()?;

    let score = truth.as_ref().map(|t| nmi(&found.partition, t)).transpose()?;
    let summary = json!({
        "config": { "command": "detect", "args": args },
        "method": args.method,
        "weighting": args.weighting,
        "q": found.partition.q(),
        "modularity": found.modularity,
        "modularity_input_weights": modularity(&g, &found.partition)?,
        "nmi": score,
        "detail": found.detail,
        "walk": walk,
    });
    write_json(&summary_path, &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn generate(args: &GenerateArgs) -> CliResult<()> {
    let truth_path = sidecar(&args.out, ".truth");
    let params_path = sidecar(&args.out, ".json");
    distinct_paths(&[&args.out, &truth_path, &params_path])?;
    let seed = derive_seed(args.seed, GENERATE_TAG);
    let bench = match args.kind {
        Kind::Lfr => generate_lfr_like(&args.lfr.spec(args.n, args.avg_degree, args.mu, seed))?,
        Kind::Planted => generate_planted_partition(args.n, args.q, args.p_in, args.p_out, seed)?,
    };
    let isolated = (0..bench.graph.node_count()).filter(|&i| bench.graph.degree(i) == 0).count();
    if isolated > 0 {
        eprintln!("warning: {isolated} isolated nodes cannot be represented in an edge list");
    }
    let mut out = create(&args.out)?;
    bench.graph.save_edge_list(&mut out, false)?;
    out.flush()?;
    let mut truth = create(&truth_path)?;
    bench.truth.write(&mut truth, &bench.graph)?;
    truth.flush()?;

    let summary = json!({
        "config": { "command": "generate", "args": args },
        "params": bench.params,
        "n": bench.graph.node_count(),
        "m": bench.graph.edge_count(),
        "communities": bench.truth.q(),
        "mean_degree": bench.mean_degree(),
        "realized_mixing": bench.realized_mixing(),
        "isolated_nodes": isolated,
    });
    write_json(&params_path, &summary)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}
