//! Benchmark grid runner. One row per (grid point, repetition, method,
//! weighting); rows already in the output file are not recomputed.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use rnbrw::rng::{derive_seed, splitmix64};
use rnbrw::{generate_lfr_like, nmi, Graph};
use serde::{Deserialize, Serialize};

use crate::commands::{rnbrw_pass, run_method, GENERATE_TAG};
use crate::config::{Method, SweepArgs, Weighting};
use crate::{CliResult, Failure};

pub const HEADER: [&str; 9] = [
    "n",
    "avg_degree",
    "mu",
    "method",
    "weighting",
    "seed",
    "nmi",
    "modularity",
    "runtime_ms",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub avg_degree: f64,
    pub mu: f64,
    pub method: String,
    pub weighting: String,
    pub seed: u64,
    pub nmi: f64,
    pub modularity: f64,
    pub runtime_ms: f64,
}

impl Row {
    fn key(&self) -> String {
        row_key(self.n, self.avg_degree, self.mu, &self.method, &self.weighting, self.seed)
    }
}

fn row_key(n: usize, deg: f64, mu: f64, method: &str, weighting: &str, seed: u64) -> String {
    format!("{n}|{deg}|{mu}|{method}|{weighting}|{seed}")
}

fn name<T: Serialize>(v: T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|x| x.as_str().map(str::to_owned))
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy)]
struct Point {
    n: usize,
    deg: f64,
    mu: f64,
    seed: u64,
}

impl Point {
    fn generator_seed(&self) -> u64 {
        let tag = [self.n as u64, self.deg.to_bits(), self.mu.to_bits()]
            .into_iter()
            .fold(GENERATE_TAG, |acc, x| splitmix64(acc ^ x));
        derive_seed(self.seed, tag)
    }
}

fn existing_keys(file: &File) -> CliResult<HashSet<String>> {
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers()?.clone();
    if headers.iter().ne(HEADER.iter().copied()) {
        return Err(Failure::data(anyhow::anyhow!(
            "existing file has header {:?}, expected {:?}",
            headers.iter().collect::<Vec<_>>(),
            HEADER
        )));
    }
    let mut keys = HashSet::new();
    for row in reader.deserialize::<Row>() {
        keys.insert(row?.key());
    }
    Ok(keys)
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    if args.grid_mu.is_empty() || args.grid_n.is_empty() || args.grid_deg.is_empty() {
        return Err(Failure::usage("sweep grid must be non-empty"));
    }
    if let Some(mu) = args.grid_mu.iter().find(|mu| !(0.0..1.0).contains(*mu)) {
        return Err(Failure::usage(format!("mixing values must lie in [0, 1), got {mu}")));
    }
    if args.reps == 0 {
        return Err(Failure::usage("--reps must be at least 1"));
    }
    if args.method.is_empty() || args.weighting.is_empty() {
        return Err(Failure::usage("at least one method and one weighting are required"));
    }

    let done = match File::open(&args.out) {
        Ok(f) if f.metadata()?.len() > 0 => existing_keys(&f)?,
        _ => HashSet::new(),
    };
    let fresh = done.is_empty() && std::fs::metadata(&args.out).map_or(true, |m| m.len() == 0);

    let cells: Vec<(Method, Weighting)> = args
        .method
        .iter()
        .flat_map(|&m| args.weighting.iter().map(move |&w| (m, w)))
        .collect();
    let mut points = Vec::new();
    for &n in &args.grid_n {
        for &deg in &args.grid_deg {
            for &mu in &args.grid_mu {
                for r in 0..args.reps {
                    let p = Point {
                        n,
                        deg,
                        mu,
                        seed: args.walk.seed.wrapping_add(r),
                    };
                    let missing = cells
                        .iter()
                        .any(|&(m, w)| !done.contains(&row_key(n, deg, mu, &name(m), &name(w), p.seed)));
                    if missing {
                        points.push(p);
                    }
                }
            }
        }
    }

    let file = OpenOptions::new().create(true).append(true).open(&args.out)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    if fresh {
        writer.write_record(HEADER)?;
        writer.flush()?;
    }
    let writer = Mutex::new(writer);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.walk.workers())
        .build()
        .map_err(|e| Failure::data(anyhow::anyhow!("thread pool: {e}")))?;
    let written = pool.install(|| {
        points.par_iter().try_fold(
            || 0usize,
            |count, p| -> CliResult<usize> {
                let rows: Vec<Row> = run_point(args, p, &cells)?
                    .into_iter()
                    .filter(|r| !done.contains(&r.key()))
                    .collect();
                let mut w = writer.lock().expect("writer lock");
                for r in &rows {
                    w.serialize(r)?;
                }
                w.flush()?;
                Ok(count + rows.len())
            },
        )
        .try_reduce(|| 0, |a, b| Ok(a + b))
    })?;
    eprintln!(
        "sweep: {written} rows written, {} already present",
        done.len()
    );
    Ok(())
}

fn failed_rows(p: &Point, cells: &[(Method, Weighting)]) -> Vec<Row> {
    cells
        .iter()
        .map(|&(m, w)| Row {
            n: p.n,
            avg_degree: p.deg,
            mu: p.mu,
            method: name(m),
            weighting: name(w),
            seed: p.seed,
            nmi: f64::NAN,
            modularity: f64::NAN,
            runtime_ms: f64::NAN,
        })
        .collect()
}

fn run_point(args: &SweepArgs, p: &Point, cells: &[(Method, Weighting)]) -> CliResult<Vec<Row>> {
    let spec = args.lfr.spec(p.n, p.deg, p.mu, p.generator_seed());
    let bench = match generate_lfr_like(&spec) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("warning: n={} deg={} mu={} seed={}: {e}", p.n, p.deg, p.mu, p.seed);
            return Ok(failed_rows(p, cells));
        }
    };

    let mut rows = Vec::with_capacity(cells.len());
    for &weighting in &args.weighting {
        let started = Instant::now();
        let graph: Option<Graph> = match weighting {
            Weighting::None => Some(bench.graph.clone()),
            Weighting::Rnbrw => {
                let mut walk = args.walk.clone();
                walk.seed = p.seed;
                match rnbrw_pass(&bench.graph, &walk, 1) {
                    Ok((_, w, _)) => Some(bench.graph.apply_weights(&w)?),
                    Err(f) if f.code == 4 => {
                        eprintln!("warning: n={} mu={} seed={}: {:#}", p.n, p.mu, p.seed, f.error);
                        None
                    }
                    Err(f) => return Err(f),
                }
            }
        };
        let weighting_ms = started.elapsed().as_secs_f64() * 1e3;
        for &method in &args.method {
            let mut row = failed_rows(p, &[(method, weighting)]).remove(0);
            if let Some(g) = &graph {
                let started = Instant::now();
                let found = run_method(g, method, p.seed)?;
                row.runtime_ms = weighting_ms + started.elapsed().as_secs_f64() * 1e3;
                row.nmi = nmi(&found.partition, &bench.truth)?;
                row.modularity = found.modularity;
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
