//! Command-line front end. Every command can emit a JSON `RunReport`.
//!
//! Exit codes: 0 when the command's verdict passes, 1 when it fails, 2 on
//! usage or input errors.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{read_edge_list, write_edge_list, EdgeListFile};
use crate::hikes::{
    classify_steps, enumerate_hikes, evaluate_bound, hike_violations, singleton_free_envelope,
    verify_expectation_identity, BoundParams, EnumerationOptions, HikeFilter,
};
use crate::lifts::{deck_is_automorphism, sign_from_bits, sign_from_source, two_lift, verify_spectrum_union, SignedGraph};
use crate::models::{limiting_simple_probability, sample_simple, simplicity_rate, Model, ModelSpec, DEFAULT_REJECTION_CAP};
use crate::nb::{ihara_bass_residual, sample_points};
use crate::oracle::Oracle;
use crate::pipeline::{
    run_pipeline, PipelineConfig, SignMode, SignSourceKind, DEFAULT_BASE_BUDGET, DEFAULT_N0, DEFAULT_R0,
    DEFAULT_S2_BUDGET,
};
use crate::prg::{PermutationMode, Seed, StreamSigns};
use crate::spectra::{signed_report, spectral_report, SpectrumOptions, DENSE_CAP, THRESHOLD_TOLERANCE};
use crate::structure::{bicycle_free_radius, summarize};

pub const SCHEMA: &str = "nearram.run/1";
pub const SEED_ENV: &str = "NEARRAM_SEED";

#[derive(Debug, Parser)]
#[command(name = "nearram", version, about = "Near-Ramanujan graphs from pseudorandom 2-lifts")]
pub struct Cli {
    /// Print the JSON run report to stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the JSON run report to a file.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a random regular graph.
    Generate(GenerateArgs),
    /// Adjacency spectrum and threshold verdict.
    Spectrum(SpectrumArgs),
    /// Largest bicycle-free radius, or a check at one radius.
    CheckBicycle(BicycleArgs),
    /// Compare both sides of the Ihara-Bass determinant identity.
    CheckIharaBass(IharaArgs),
    /// Sign a graph from a seed and write its 2-lift.
    Lift(LiftArgs),
    /// Hike counts, the trace identity, or step classification.
    HikeExperiment(HikeArgs),
    /// Base search followed by repeated signed 2-lifts.
    Pipeline(PipelineArgs),
    /// Neighbor queries on a pipeline graph from its seeds.
    Oracle(OracleArgs),
    /// Estimate the probability that a sample is simple.
    Simplicity(SimplicityArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "config")]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    /// Hex seed; falls back to $NEARRAM_SEED.
    #[arg(long)]
    pub seed: Option<Seed>,
    #[arg(long, value_enum, default_value = "shuffle")]
    pub mode: PermutationMode,
    /// Resample until simple.
    #[arg(long)]
    pub simple: bool,
    #[arg(long, default_value_t = DEFAULT_REJECTION_CAP)]
    pub max_attempts: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = THRESHOLD_TOLERANCE)]
    pub tol: f64,
    /// Use the signs in the file.
    #[arg(long)]
    pub signed: bool,
    /// Also eigensolve the non-backtracking matrix.
    #[arg(long)]
    pub rho_b: bool,
    #[arg(long, default_value_t = DENSE_CAP)]
    pub dense_cap: usize,
}

#[derive(Debug, Args)]
pub struct BicycleArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub radius: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IharaArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Modulus of the sample points.
    #[arg(long, default_value_t = 0.2)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub point_seed: u64,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Seed for the signing; falls back to $NEARRAM_SEED. Ignored with --file-signs.
    #[arg(long)]
    pub seed: Option<Seed>,
    /// Use the signs stored in the input file.
    #[arg(long)]
    pub file_signs: bool,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub verify_union: bool,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HikeMode {
    Identity,
    Classify,
    Counts,
}

#[derive(Debug, Args)]
pub struct HikeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub ell: usize,
    #[arg(long, value_enum, default_value = "counts")]
    pub mode: HikeMode,
    #[arg(long, value_enum, default_value = "all")]
    pub filter: HikeFilter,
    /// Radius for stretch partitions; defaults to the bicycle-free radius.
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub budget: Option<u64>,
    /// Failure probability for the bound envelope in counts mode.
    #[arg(long)]
    pub eta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long = "N")]
    pub n_target: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "config")]
    pub base: Model,
    #[arg(long, default_value_t = DEFAULT_N0)]
    pub n0: usize,
    #[arg(long, default_value_t = DEFAULT_R0)]
    pub r0: usize,
    /// Base seed; falls back to a seed derived from $NEARRAM_SEED.
    #[arg(long)]
    pub s1: Option<Seed>,
    /// Signing seed; falls back to a seed derived from $NEARRAM_SEED.
    #[arg(long)]
    pub s2: Option<Seed>,
    #[arg(long, value_enum, default_value = "reuse")]
    pub sign_mode: SignMode,
    #[arg(long, value_enum, default_value = "stream")]
    pub signs: SignSourceKind,
    #[arg(long, default_value_t = crate::prg::DEFAULT_FIELD_DEGREE)]
    pub field_degree: u32,
    #[arg(long, value_enum, default_value = "shuffle")]
    pub permutation: PermutationMode,
    #[arg(long, default_value_t = DEFAULT_BASE_BUDGET)]
    pub base_budget: u64,
    #[arg(long, default_value_t = DEFAULT_S2_BUDGET)]
    pub s2_budget: u64,
    #[arg(long, default_value_t = DENSE_CAP)]
    pub dense_cap: usize,
    #[arg(long)]
    pub verify_union: bool,
    /// Write the final graph as an edge list.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the configuration the oracle needs.
    #[arg(long)]
    pub config_out: Option<PathBuf>,
    /// Write per-stage lambda and radius as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// A pipeline configuration, or a pipeline run report.
    #[arg(long)]
    pub config: PathBuf,
    /// Seed of the base graph. Taken from the report when omitted.
    #[arg(long)]
    pub s1: Option<Seed>,
    /// Seed of the signings. Taken from the report when omitted.
    #[arg(long)]
    pub s2: Option<Seed>,
    #[arg(long)]
    pub vertex: Option<usize>,
    #[arg(long, requires = "vertex")]
    pub port: Option<usize>,
    /// Read vertex ids from stdin, one per line, and write JSON lines.
    #[arg(long, conflicts_with = "vertex")]
    pub batch: bool,
}

#[derive(Debug, Args)]
pub struct SimplicityArgs {
    #[arg(long, value_enum, default_value = "config")]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<Seed>,
    /// Pass when the rate is within this distance of the limit.
    #[arg(long, default_value_t = 0.03)]
    pub tol: f64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub version: String,
    pub command: String,
    /// Arguments as given, so the run can be replayed.
    pub argv: Vec<String>,
    pub seeds: BTreeMap<String, String>,
    pub config: Value,
    pub outputs: Value,
    pub seconds: f64,
    pub verdict: bool,
}

struct Outcome {
    seeds: BTreeMap<String, String>,
    config: Value,
    outputs: Value,
    verdict: bool,
    summary: String,
}

fn default_seed() -> Result<Seed> {
    match std::env::var(SEED_ENV) {
        Ok(s) => Seed::from_hex(s.trim()),
        Err(_) => Ok(Seed::from_u64(0)),
    }
}

fn seed_or_env(s: &Option<Seed>) -> Result<Seed> {
    s.clone().map_or_else(default_seed, Ok)
}

fn read_graph(path: &Path) -> Result<EdgeListFile> {
    read_edge_list(BufReader::new(File::open(path)?))
}

fn write_graph(path: &Path, g: &crate::graph::Graph, d: usize, signs: Option<&[i8]>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_edge_list(&mut w, g, d, signs)?;
    w.flush()?;
    Ok(())
}

fn seeds(pairs: &[(&str, &Seed)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, s)| (k.to_string(), s.to_hex())).collect()
}

fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let seed = seed_or_env(&a.seed)?;
    let spec = ModelSpec {
        model: a.model,
        n: a.n,
        d: a.d,
        mode: a.mode,
    };
    let (g, used, attempts) = if a.simple {
        let s = sample_simple(&spec, &seed, a.max_attempts)?;
        (s.graph, s.seed, s.attempts)
    } else {
        (spec.sample(&seed)?, seed.clone(), 1)
    };
    write_graph(&a.out, &g, a.d, None)?;
    Ok(Outcome {
        seeds: seeds(&[("seed", &seed), ("sample", &used)]),
        config: json!({"model": a.model, "n": a.n, "d": a.d, "mode": a.mode, "simple": a.simple}),
        outputs: json!({
            "out": a.out, "vertices": g.vertex_count(), "edges": g.edge_count(),
            "simple": g.is_simple(), "loops": g.has_loops(), "attempts": attempts,
        }),
        verdict: true,
        summary: format!("wrote {} ({} vertices, simple: {})", a.out.display(), g.vertex_count(), g.is_simple()),
    })
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let f = read_graph(&a.input)?;
    let opts = SpectrumOptions {
        eps: a.eps,
        tol: a.tol,
        dense_cap: a.dense_cap,
        with_rho_b: a.rho_b,
        ..SpectrumOptions::default()
    };
    let r = if a.signed {
        signed_report(&sign_from_bits(f.multigraph()?, &f.signs_or_plus())?, &opts)
    } else {
        spectral_report(&f.graph()?, f.d, &opts)
    };
    Ok(Outcome {
        seeds: BTreeMap::new(),
        config: json!({"in": a.input, "eps": a.eps, "tol": a.tol, "signed": a.signed, "dense_cap": a.dense_cap}),
        verdict: r.verdict.passes(),
        summary: format!("lambda = {:.9} threshold = {:.9} verdict = {:?}", r.lambda, r.threshold + r.eps, r.verdict),
        outputs: serde_json::to_value(&r)?,
    })
}

fn check_bicycle(a: &BicycleArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?.graph()?;
    let s = summarize(&g, a.radius);
    Ok(Outcome {
        seeds: BTreeMap::new(),
        config: json!({"in": a.input, "radius": a.radius}),
        verdict: s.bicycle_free,
        summary: format!("bicycle-free radius {:?}, checked {}: {}", s.radius, s.checked_radius, s.bicycle_free),
        outputs: serde_json::to_value(&s)?,
    })
}

fn check_ihara_bass(a: &IharaArgs) -> Result<Outcome> {
    let f = read_graph(&a.input)?;
    let sg = sign_from_bits(f.multigraph()?, &f.signs_or_plus())?;
    let check = ihara_bass_residual(&sg, &sample_points(a.points, a.radius, a.point_seed))?;
    Ok(Outcome {
        seeds: BTreeMap::new(),
        config: json!({"in": a.input, "points": a.points, "tol": a.tol, "radius": a.radius, "point_seed": a.point_seed}),
        verdict: check.max_residual <= a.tol,
        summary: format!("max residual {:e} (tol {:e})", check.max_residual, a.tol),
        outputs: serde_json::to_value(&check)?,
    })
}

fn lift(a: &LiftArgs) -> Result<Outcome> {
    let f = read_graph(&a.input)?;
    let g = f.multigraph()?;
    let seed = seed_or_env(&a.seed)?;
    let sg: SignedGraph = if a.file_signs {
        sign_from_bits(g, &f.signs_or_plus())?
    } else {
        sign_from_source(g, &StreamSigns::new(&seed), 0)
    };
    let lifted = two_lift(&sg);
    write_graph(&a.out, &lifted, f.d, None)?;
    let union = a.verify_union.then(|| verify_spectrum_union(&sg, a.tol));
    let deck = deck_is_automorphism(&lifted);
    let verdict = deck && union.as_ref().is_none_or(|u| u.holds);
    Ok(Outcome {
        seeds: if a.file_signs { BTreeMap::new() } else { seeds(&[("seed", &seed)]) },
        config: json!({"in": a.input, "out": a.out, "file_signs": a.file_signs, "verify_union": a.verify_union, "tol": a.tol}),
        outputs: json!({
            "vertices": lifted.vertex_count(), "edges": lifted.edge_count(),
            "signs": sg.signing(), "deck_automorphism": deck,
            "union_max_deviation": union.as_ref().map(|u| u.max_deviation),
            "union_holds": union.as_ref().map(|u| u.holds),
        }),
        verdict,
        summary: format!("wrote {} ({} vertices)", a.out.display(), lifted.vertex_count()),
    })
}

fn hike_experiment(a: &HikeArgs) -> Result<Outcome> {
    let g = read_graph(&a.input)?.graph()?;
    let config = json!({"in": a.input, "ell": a.ell, "mode": format!("{:?}", a.mode).to_lowercase(),
        "filter": a.filter, "radius": a.radius, "budget": a.budget});
    let opts = EnumerationOptions {
        budget: a.budget.or(EnumerationOptions::default().budget),
        collect: false,
    };
    let (outputs, verdict, summary) = match a.mode {
        HikeMode::Identity => {
            let r = verify_expectation_identity(&g, a.ell)?;
            let s = format!("signed trace average {} vs {} even special hikes", r.trace_sum as f64 / r.signings as f64, r.even_special_hikes);
            (serde_json::to_value(&r)?, r.exact, s)
        }
        HikeMode::Counts => {
            let e = enumerate_hikes(&g, a.ell, a.filter, opts)?;
            let r = a.radius.or_else(|| bicycle_free_radius(&g)).unwrap_or(1).max(1);
            let d = g.max_degree();
            let envelope = singleton_free_envelope(g.vertex_count(), d, a.ell + 1, r);
            let bound = a.eta.map(|eta| {
                let p = BoundParams { n: g.vertex_count(), d, ell: a.ell, r, eta, delta: 0.0, constant: 1.0 };
                match evaluate_bound(&p) {
                    Ok(b) => serde_json::to_value(b).unwrap_or(Value::Null),
                    Err(e) => json!({"error": e.to_string()}),
                }
            });
            let s = format!("{} matching hikes (complete: {})", e.matching, e.complete);
            (
                json!({"enumeration": e, "radius": r, "singleton_free_envelope": envelope, "bound": bound}),
                e.complete,
                s,
            )
        }
        HikeMode::Classify => {
            let r = a.radius.or_else(|| bicycle_free_radius(&g)).unwrap_or(1).max(1);
            let e = enumerate_hikes(&g, a.ell, a.filter, EnumerationOptions { collect: true, ..opts })?;
            let hikes = e.hikes.clone().unwrap_or_default();
            let mut violations = Vec::new();
            let (mut fresh, mut boundary, mut stale) = (0u64, 0u64, 0u64);
            for h in &hikes {
                let c = classify_steps(&g, h);
                fresh += c.fresh as u64;
                boundary += c.boundary as u64;
                stale += c.stale as u64;
                for v in hike_violations(&g, h, r) {
                    if violations.len() < 20 {
                        violations.push(json!({"arcs": h.arcs, "violation": v}));
                    }
                }
            }
            let ok = violations.is_empty() && e.complete;
            let s = format!("{} hikes classified at radius {r}, {} violations", hikes.len(), violations.len());
            (
                json!({"hikes": hikes.len(), "radius": r, "fresh": fresh, "boundary": boundary, "stale": stale,
                       "complete": e.complete, "violations": violations}),
                ok,
                s,
            )
        }
    };
    Ok(Outcome {
        seeds: BTreeMap::new(),
        config,
        outputs,
        verdict,
        summary,
    })
}

fn pipeline(a: &PipelineArgs) -> Result<Outcome> {
    let global = default_seed()?;
    let s1 = a.s1.clone().unwrap_or_else(|| global.derive("s1", 0));
    let s2 = a.s2.clone().unwrap_or_else(|| global.derive("s2", 0));
    let mut cfg = PipelineConfig::with_base(a.n_target, a.d, a.eps, a.n0, a.base)?;
    cfg.r0 = a.r0;
    cfg.sign_mode = a.sign_mode;
    cfg.signs = a.signs;
    cfg.field_degree = a.field_degree;
    cfg.permutation = a.permutation;
    cfg.base_budget = a.base_budget;
    cfg.s2_budget = a.s2_budget;
    cfg.dense_cap = a.dense_cap;
    cfg.verify_union = a.verify_union;
    let r = run_pipeline(&cfg, &s1, &s2)?;
    if let Some(p) = &a.out {
        write_graph(p, &r.graph, cfg.d, None)?;
    }
    if let Some(p) = &a.config_out {
        std::fs::write(p, serde_json::to_string_pretty(&cfg)?)?;
    }
    if let Some(p) = &a.csv {
        let mut w = BufWriter::new(File::create(p)?);
        writeln!(w, "stage,vertices,lambda,signed_lambda,radius,passed,seconds")?;
        for s in &r.stages {
            let opt = |x: Option<String>| x.unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                s.stage,
                s.vertices,
                s.lambda,
                opt(s.signed_lambda.map(|x| x.to_string())),
                opt(s.radius.map(|x| x.to_string())),
                s.passed,
                s.seconds
            )?;
        }
        w.flush()?;
    }
    Ok(Outcome {
        seeds: seeds(&[("s1", &s1), ("s2", &s2), ("base", &r.base.seed), ("signing", &r.sign_seed)]),
        config: serde_json::to_value(&cfg)?,
        verdict: r.passed,
        summary: format!(
            "{} vertices, lambda = {:.9}, threshold = {:.9}, passed = {}",
            r.final_vertices, r.final_lambda, r.threshold, r.passed
        ),
        outputs: serde_json::to_value(&r)?,
    })
}

/// A bare configuration, or a pipeline report carrying the seeds too.
fn load_oracle_config(path: &Path) -> Result<(PipelineConfig, Option<Seed>, Option<Seed>)> {
    let v: Value = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    if v.get("schema").is_some() {
        let r: RunReport = serde_json::from_value(v)?;
        if r.command != "pipeline" {
            return Err(Error::ConfigMismatch(format!("report of `{}`, not `pipeline`", r.command)));
        }
        let seed = |k: &str| r.seeds.get(k).map(|h| Seed::from_hex(h)).transpose();
        Ok((serde_json::from_value(r.config.clone())?, seed("base")?, seed("signing")?))
    } else {
        Ok((serde_json::from_value(v)?, None, None))
    }
}

fn oracle(a: &OracleArgs) -> Result<Outcome> {
    let (cfg, r1, r2) = load_oracle_config(&a.config)?;
    let missing = |name: &str| Error::ConfigMismatch(format!("--{name} is required with a bare configuration"));
    let s1 = a.s1.clone().or(r1).ok_or_else(|| missing("s1"))?;
    let s2 = a.s2.clone().or(r2).ok_or_else(|| missing("s2"))?;
    let o = Oracle::new(&cfg, &s1, &s2)?;
    let config = serde_json::to_value(&cfg)?;
    let seeds = seeds(&[("s1", &s1), ("s2", &s2)]);
    if a.batch {
        let stdin = std::io::stdin();
        let mut out = std::io::stdout().lock();
        let mut count = 0u64;
        for (i, line) in stdin.lock().lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let id: usize = t.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("not a vertex id: {t:?}"),
            })?;
            let nb = o.neighbor_ids(id)?;
            writeln!(out, "{}", json!({"vertex": id, "neighbors": nb}))?;
            count += 1;
        }
        return Ok(Outcome {
            seeds,
            config,
            outputs: json!({"queries": count}),
            verdict: true,
            summary: String::new(),
        });
    }
    let id = a.vertex.ok_or_else(|| Error::ConfigMismatch("--vertex or --batch is required".into()))?;
    let label = o.decode(id)?;
    let (outputs, summary) = match a.port {
        Some(p) => {
            let q = o.ported_neighbor(id, p)?;
            (json!({"vertex": id, "label": label, "port": p, "neighbor": q}), format!("{}", q.id))
        }
        None => {
            let nb: Vec<_> = (0..cfg.d).map(|p| o.ported_neighbor(id, p)).collect::<Result<_>>()?;
            let ids: Vec<String> = nb.iter().map(|q| q.id.to_string()).collect();
            (json!({"vertex": id, "label": label, "neighbors": nb}), ids.join(" "))
        }
    };
    Ok(Outcome {
        seeds,
        config,
        outputs,
        verdict: true,
        summary,
    })
}

fn simplicity(a: &SimplicityArgs) -> Result<Outcome> {
    let seed = seed_or_env(&a.seed)?;
    let spec = ModelSpec::new(a.model, a.n, a.d);
    let est = simplicity_rate(&spec, a.trials, &seed)?;
    let limit = limiting_simple_probability(a.d);
    if let Some(p) = &a.csv {
        let mut w = BufWriter::new(File::create(p)?);
        writeln!(w, "model,n,d,trials,simple,rate,ci_low,ci_high,limit")?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            serde_json::to_value(a.model)?.as_str().unwrap_or(""),
            a.n,
            a.d,
            est.trials,
            est.simple,
            est.rate,
            est.ci_low,
            est.ci_high,
            limit
        )?;
        w.flush()?;
    }
    let verdict = a.model == Model::Lift || (est.rate - limit).abs() <= a.tol;
    Ok(Outcome {
        seeds: seeds(&[("seed", &seed)]),
        config: json!({"model": a.model, "n": a.n, "d": a.d, "trials": a.trials, "tol": a.tol}),
        summary: format!("simple rate {:.4} [{:.4}, {:.4}], limit {:.4}", est.rate, est.ci_low, est.ci_high, limit),
        outputs: json!({"estimate": est, "limit": limit}),
        verdict,
    })
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::Generate(_) => "generate",
        Command::Spectrum(_) => "spectrum",
        Command::CheckBicycle(_) => "check-bicycle",
        Command::CheckIharaBass(_) => "check-ihara-bass",
        Command::Lift(_) => "lift",
        Command::HikeExperiment(_) => "hike-experiment",
        Command::Pipeline(_) => "pipeline",
        Command::Oracle(_) => "oracle",
        Command::Simplicity(_) => "simplicity",
    }
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli, argv: Vec<String>) -> Result<RunReport> {
    let start = Instant::now();
    let out = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Spectrum(a) => spectrum(a),
        Command::CheckBicycle(a) => check_bicycle(a),
        Command::CheckIharaBass(a) => check_ihara_bass(a),
        Command::Lift(a) => lift(a),
        Command::HikeExperiment(a) => hike_experiment(a),
        Command::Pipeline(a) => pipeline(a),
        Command::Oracle(a) => oracle(a),
        Command::Simplicity(a) => simplicity(a),
    }?;
    let report = RunReport {
        schema: SCHEMA.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: name(&cli.command).into(),
        argv,
        seeds: out.seeds,
        config: out.config,
        outputs: out.outputs,
        seconds: start.elapsed().as_secs_f64(),
        verdict: out.verdict,
    };
    let batch = matches!(&cli.command, Command::Oracle(a) if a.batch);
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else if !batch {
        println!("{}", out.summary);
    }
    if let Some(p) = &cli.report {
        std::fs::write(p, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, argv.into_iter().skip(1).collect()) {
        Ok(r) if r.verdict => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
