//! Base-graph search followed by repeated signed 2-lifts.
//!
//! Stage `i` signs `G_{i-1}` with bits read from one source seeded by `s2`
//! and lifts it. Edge `e` of `G_{i-1}` reads index `offset_i + e`, where the
//! offset is zero when the seed is reused across stages and the number of
//! edges consumed so far otherwise. Edge `e` of a lift is `e0 + |E0| * x`
//! where `e0` is the projected base edge and `x = tail / n0`, so the index is
//! computable from the base edge and the tail's lift bits alone.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::lifts::{sign_from_source, two_lift, verify_spectrum_union, SignedGraph};
use crate::models::{trial_seed, Model, ModelSpec};
use crate::prg::{
    BitSource, ConstantSigns, PermutationMode, Seed, SignSource, StreamSigns, TablePermutation, PermutationFamily,
    DEFAULT_FIELD_DEGREE,
};
use crate::spectra::{
    adjacency_spectrum, nontrivial_lambda, ramanujan_bound, signed_report, spectral_report, Method, SpectrumOptions,
    DENSE_CAP, THRESHOLD_TOLERANCE,
};
use crate::structure::{bicycle_free_radius, is_bicycle_free_at};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SignSourceKind {
    /// ChaCha20 keystream.
    #[default]
    Stream,
    /// Powering-construction small-bias bits.
    SmallBias,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SignMode {
    /// Every stage reads the same prefix of one bit string.
    #[default]
    Reuse,
    /// Stages read disjoint stretches of the bit string.
    Fresh,
    /// Every sign is +1. Each lift is two disjoint copies.
    AllPlus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Requested vertex count.
    pub n_target: usize,
    pub d: usize,
    pub eps: f64,
    pub n0: usize,
    /// Number of lifts, the least with `n0 * 2^t >= n_target`.
    pub t: usize,
    pub base: Model,
    #[serde(default)]
    pub permutation: PermutationMode,
    /// Required bicycle-free radius of the base graph.
    pub r0: usize,
    #[serde(default)]
    pub signs: SignSourceKind,
    #[serde(default = "default_field_degree")]
    pub field_degree: u32,
    #[serde(default)]
    pub sign_mode: SignMode,
    pub base_budget: u64,
    pub s2_budget: u64,
    pub dense_cap: usize,
    /// Also eigensolve each full lift and compare with the spectrum union.
    #[serde(default)]
    pub verify_union: bool,
}

fn default_field_degree() -> u32 {
    DEFAULT_FIELD_DEGREE
}

pub const DEFAULT_N0: usize = 64;
pub const DEFAULT_R0: usize = 1;
pub const DEFAULT_BASE_BUDGET: u64 = 50;
pub const DEFAULT_S2_BUDGET: u64 = 20;

impl PipelineConfig {
    pub fn new(n_target: usize, d: usize, eps: f64) -> Result<Self> {
        Self::with_base(n_target, d, eps, DEFAULT_N0, Model::Configuration)
    }

    pub fn with_base(n_target: usize, d: usize, eps: f64, n0: usize, base: Model) -> Result<Self> {
        let mut t = 0;
        while n0 << t < n_target {
            t += 1;
        }
        let c = PipelineConfig {
            n_target,
            d,
            eps,
            n0,
            t,
            base,
            permutation: PermutationMode::Shuffle,
            r0: DEFAULT_R0,
            signs: SignSourceKind::Stream,
            field_degree: DEFAULT_FIELD_DEGREE,
            sign_mode: SignMode::Reuse,
            base_budget: DEFAULT_BASE_BUDGET,
            s2_budget: DEFAULT_S2_BUDGET,
            dense_cap: DENSE_CAP,
            verify_union: false,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigMismatch(m));
        if self.d < 3 {
            return bad(format!("degree {} < 3", self.d));
        }
        if self.n0 == 0 || self.n0 % 2 != 0 {
            return bad(format!("n0 = {} must be positive and even", self.n0));
        }
        if !(self.eps >= 0.0) {
            return bad(format!("eps = {} must be non-negative", self.eps));
        }
        if self.final_vertices() > 2 * self.n_target.max(self.n0) {
            return bad(format!("n0 * 2^t = {} exceeds twice the target", self.final_vertices()));
        }
        self.base_spec().validate()
    }

    pub fn base_spec(&self) -> ModelSpec {
        ModelSpec {
            model: self.base,
            n: self.n0,
            d: self.d,
            mode: self.permutation,
        }
    }

    pub fn final_vertices(&self) -> usize {
        self.n0 << self.t
    }

    pub fn base_edges(&self) -> usize {
        self.n0 * self.d / 2
    }

    pub fn threshold(&self) -> f64 {
        ramanujan_bound(self.d) + self.eps
    }

    /// Index offset of stage `i` (1-based).
    pub fn stage_offset(&self, i: usize) -> u64 {
        match self.sign_mode {
            SignMode::Fresh => (self.base_edges() as u64) * ((1u64 << (i - 1)) - 1),
            _ => 0,
        }
    }

    /// Number of sign indices the whole run reads.
    pub fn sign_length(&self) -> u64 {
        if self.t == 0 {
            return 1;
        }
        let m = self.base_edges() as u64;
        match self.sign_mode {
            SignMode::Fresh => m * ((1u64 << self.t) - 1),
            _ => m << (self.t - 1),
        }
    }

    pub fn sign_source(&self, s2: &Seed) -> Result<Box<dyn SignSource>> {
        Ok(match (self.sign_mode, self.signs) {
            (SignMode::AllPlus, _) => Box::new(ConstantSigns(1)),
            (_, SignSourceKind::Stream) => Box::new(StreamSigns::new(s2)),
            (_, SignSourceKind::SmallBias) => Box::new(BitSource::new(s2, self.sign_length(), self.field_degree)?),
        })
    }

    /// Below the threshold and strictly below `d`: a nontrivial eigenvalue
    /// of magnitude `d` means the graph is disconnected or bipartite.
    pub fn accepts(&self, lambda: f64, band: f64) -> bool {
        lambda + band <= self.threshold() + THRESHOLD_TOLERANCE && lambda + band < self.d as f64 - THRESHOLD_TOLERANCE
    }

    fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            eps: self.eps,
            dense_cap: self.dense_cap,
            ..SpectrumOptions::default()
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BaseSearch {
    pub seed: Seed,
    pub attempts: u64,
    pub not_simple: u64,
    pub radius_failures: u64,
    pub spectral_failures: u64,
    pub lambda: f64,
    pub radius: Option<usize>,
}

/// `j = 0` tries `s1` itself, later candidates use derived seeds.
pub fn base_candidate(s1: &Seed, j: u64) -> Seed {
    if j == 0 {
        s1.clone()
    } else {
        trial_seed(s1, j)
    }
}

enum Candidate {
    NotSimple,
    RadiusTooSmall,
    Spectral(f64),
    Pass(Multigraph, f64),
}

fn try_base(cfg: &PipelineConfig, seed: &Seed) -> Result<Candidate> {
    let spec = cfg.base_spec();
    if !spec.sample_is_simple(seed)? {
        return Ok(Candidate::NotSimple);
    }
    let g = spec.sample(seed)?;
    if !is_bicycle_free_at(&g, cfg.r0) {
        return Ok(Candidate::RadiusTooSmall);
    }
    let r = spectral_report(&g, cfg.d, &cfg.spectrum_options());
    let band = if r.method == Method::Lanczos { r.residual } else { 0.0 };
    if cfg.accepts(r.lambda, band) {
        Ok(Candidate::Pass(g, r.lambda))
    } else {
        Ok(Candidate::Spectral(r.lambda))
    }
}

/// First candidate seed whose graph is simple, bicycle-free at radius `r0`
/// and below the spectral threshold.
pub fn search_base(cfg: &PipelineConfig, s1: &Seed) -> Result<(Multigraph, BaseSearch)> {
    cfg.validate()?;
    let mut stats = BaseSearch::default();
    // Candidates are evaluated in parallel batches, the first pass in seed
    // order wins so results do not depend on scheduling.
    let batch = rayon::current_num_threads().max(1) as u64;
    let mut j = 0;
    while j < cfg.base_budget {
        let hi = (j + batch).min(cfg.base_budget);
        let outcomes: Vec<Result<Candidate>> =
            (j..hi).into_par_iter().map(|k| try_base(cfg, &base_candidate(s1, k))).collect();
        for (k, out) in (j..hi).zip(outcomes) {
            stats.attempts += 1;
            match out? {
                Candidate::NotSimple => stats.not_simple += 1,
                Candidate::RadiusTooSmall => stats.radius_failures += 1,
                Candidate::Spectral(l) => {
                    stats.spectral_failures += 1;
                    stats.lambda = l;
                }
                Candidate::Pass(g, l) => {
                    stats.seed = base_candidate(s1, k);
                    stats.lambda = l;
                    stats.radius = bicycle_free_radius(&g);
                    return Ok((g, stats));
                }
            }
        }
        j = hi;
    }
    Err(Error::BudgetExhausted {
        attempts: stats.attempts,
        detail: format!(
            "no base graph: {} not simple, {} below radius {}, {} above threshold",
            stats.not_simple, stats.radius_failures, cfg.r0, stats.spectral_failures
        ),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub vertices: usize,
    pub edges: usize,
    /// `lambda(G_i)`, the larger of `lambda(G_{i-1})` and the signed radius.
    pub lambda: f64,
    /// Spectral radius of the signed `G_{i-1}`, absent for stage 0.
    pub signed_lambda: Option<f64>,
    pub method: Method,
    pub radius: Option<usize>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union_deviation: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineResult {
    pub config: PipelineConfig,
    pub s1: Seed,
    pub s2: Seed,
    pub base: BaseSearch,
    /// Seed that produced the reported signings.
    pub sign_seed: Seed,
    pub s2_attempts: u64,
    pub stages: Vec<StageReport>,
    pub final_vertices: usize,
    pub final_lambda: f64,
    pub threshold: f64,
    /// Every stage passed.
    pub passed: bool,
    /// Radius never dropped from one stage to the next.
    pub radius_monotone: bool,
    pub seconds: f64,
    #[serde(skip)]
    pub graph: Multigraph,
}

pub fn sign_candidate(s2: &Seed, j: u64) -> Seed {
    if j == 0 {
        s2.clone()
    } else {
        s2.derive("signing", j)
    }
}

struct LiftRun {
    graph: Multigraph,
    stages: Vec<StageReport>,
    passed: bool,
}

fn lift_stages(cfg: &PipelineConfig, g0: &Multigraph, stage0: &StageReport, s2: &Seed) -> Result<LiftRun> {
    let src = cfg.sign_source(s2)?;
    let opts = cfg.spectrum_options();
    let mut g = g0.clone();
    let mut stages = vec![stage0.clone()];
    let mut lambda = stage0.lambda;
    for i in 1..=cfg.t {
        let start = Instant::now();
        let sg = sign_from_source(g, src.as_ref(), cfg.stage_offset(i));
        let r = signed_report(&sg, &opts);
        let band = if r.method == Method::Lanczos { r.residual } else { 0.0 };
        lambda = lambda.max(r.lambda);
        let passed = cfg.accepts(r.lambda, band);
        let union_deviation = cfg.verify_union.then(|| verify_spectrum_union(&sg, 1e-8).max_deviation);
        let lifted = two_lift(&sg);
        stages.push(StageReport {
            stage: i,
            vertices: lifted.vertex_count(),
            edges: lifted.edge_count(),
            lambda,
            signed_lambda: Some(r.lambda),
            method: r.method,
            radius: bicycle_free_radius(&lifted),
            passed,
            union_deviation,
            seconds: start.elapsed().as_secs_f64(),
        });
        g = lifted;
        if !passed {
            return Ok(LiftRun {
                graph: g,
                stages,
                passed: false,
            });
        }
    }
    Ok(LiftRun {
        graph: g,
        stages,
        passed: true,
    })
}

pub fn run_pipeline(cfg: &PipelineConfig, s1: &Seed, s2: &Seed) -> Result<PipelineResult> {
    let start = Instant::now();
    let (g0, base) = search_base(cfg, s1)?;
    let stage0 = StageReport {
        stage: 0,
        vertices: g0.vertex_count(),
        edges: g0.edge_count(),
        lambda: base.lambda,
        signed_lambda: None,
        method: if cfg.n0 <= cfg.dense_cap { Method::Dense } else { Method::Lanczos },
        radius: base.radius,
        passed: true,
        union_deviation: None,
        seconds: start.elapsed().as_secs_f64(),
    };
    let mut attempts = 0;
    let mut run = None;
    let mut sign_seed = s2.clone();
    for j in 0..cfg.s2_budget.max(1) {
        attempts += 1;
        sign_seed = sign_candidate(s2, j);
        let r = lift_stages(cfg, &g0, &stage0, &sign_seed)?;
        let ok = r.passed;
        run = Some(r);
        if ok {
            break;
        }
    }
    let run = run.expect("at least one attempt");
    let radius_monotone = run
        .stages
        .windows(2)
        .all(|w| matches!((w[0].radius, w[1].radius), (Some(a), Some(b)) if b >= a) || w[0].radius.is_none());
    let final_lambda = run.stages.last().map_or(base.lambda, |s| s.lambda);
    Ok(PipelineResult {
        config: cfg.clone(),
        s1: s1.clone(),
        s2: s2.clone(),
        base,
        sign_seed,
        s2_attempts: attempts,
        final_vertices: run.graph.vertex_count(),
        final_lambda,
        threshold: cfg.threshold(),
        passed: run.passed,
        radius_monotone,
        stages: run.stages,
        seconds: start.elapsed().as_secs_f64(),
        graph: run.graph,
    })
}

/// Rebuilds the final graph from the seeds a run reported, without any
/// spectral checks.
pub fn materialize(cfg: &PipelineConfig, base_seed: &Seed, sign_seed: &Seed) -> Result<Multigraph> {
    cfg.validate()?;
    let mut g = cfg.base_spec().sample(base_seed)?;
    let src = cfg.sign_source(sign_seed)?;
    for i in 1..=cfg.t {
        g = two_lift(&sign_from_source(g, src.as_ref(), cfg.stage_offset(i)));
    }
    Ok(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct Augmentation {
    #[serde(skip)]
    pub graph: Multigraph,
    pub matchings: usize,
    pub lambda_before: f64,
    pub lambda_after: f64,
    pub holds: bool,
}

/// Adds `m` perfect matchings on ports `d..d+m`. With a seed each matching
/// pairs consecutive vertices of a shuffled order, otherwise `2i` with `2i+1`.
pub fn augment_with_matchings(g: &Multigraph, m: usize, seed: Option<&Seed>) -> Result<Augmentation> {
    let n = g.vertex_count();
    if n % 2 != 0 {
        return Err(Error::InvalidGraph(format!("no perfect matching on {n} vertices")));
    }
    let d = g.d();
    let mut pairs = g.pairs();
    for k in 0..m {
        let order: Vec<usize> = match seed {
            Some(s) => TablePermutation::shuffled(&s.derive("matching", k as u64), n).to_vec(),
            None => (0..n).collect(),
        };
        for c in order.chunks(2) {
            pairs.push((
                crate::graph::HalfEdge::new(c[0], d + k),
                crate::graph::HalfEdge::new(c[1], d + k),
            ));
        }
    }
    let graph = Multigraph::from_pairs(n, d + m, &pairs)?;
    let lambda_before = nontrivial_lambda(&adjacency_spectrum(g));
    let lambda_after = nontrivial_lambda(&adjacency_spectrum(&graph));
    Ok(Augmentation {
        holds: lambda_after <= lambda_before + m as f64 + 1e-9,
        graph,
        matchings: m,
        lambda_before,
        lambda_after,
    })
}

/// Signed view of stage `i` of a materialized run, for cross-checks.
pub fn stage_signing(cfg: &PipelineConfig, g: Multigraph, sign_seed: &Seed, i: usize) -> Result<SignedGraph> {
    let src = cfg.sign_source(sign_seed)?;
    Ok(sign_from_source(g, src.as_ref(), cfg.stage_offset(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn lift_count_and_offsets() {
        let c = PipelineConfig::new(4096, 3, 0.3).unwrap();
        assert_eq!((c.n0, c.t, c.final_vertices()), (64, 6, 4096));
        assert_eq!(c.sign_length(), 96 << 5);
        let f = PipelineConfig {
            sign_mode: SignMode::Fresh,
            ..c.clone()
        };
        assert_eq!(f.stage_offset(1), 0);
        assert_eq!(f.stage_offset(3), 96 * 3);
        assert_eq!(f.sign_length(), 96 * 63);
        assert!(PipelineConfig::new(100, 2, 0.3).is_err());
    }

    #[test]
    fn zero_lifts_return_base() {
        let c = PipelineConfig::new(64, 3, 0.5).unwrap();
        assert_eq!(c.t, 0);
        let r = run_pipeline(&c, &Seed::from_u64(3), &Seed::from_u64(4)).unwrap();
        let g0 = c.base_spec().sample(&r.base.seed).unwrap();
        assert_eq!(r.graph, g0);
        assert_eq!(r.stages.len(), 1);
    }

    #[test]
    fn small_run_passes_and_replays() {
        let mut c = PipelineConfig::new(256, 3, 0.3).unwrap();
        c.verify_union = true;
        let (s1, s2) = (Seed::from_u64(10), Seed::from_u64(11));
        let r = run_pipeline(&c, &s1, &s2).unwrap();
        assert!(r.passed);
        assert_eq!(r.final_vertices, 256);
        assert!(r.radius_monotone);
        for (i, s) in r.stages.iter().enumerate() {
            assert_eq!(s.vertices, 64 << i);
            if let Some(dev) = s.union_deviation {
                assert!(dev < 1e-8);
            }
        }
        let direct = nontrivial_lambda(&adjacency_spectrum(&r.graph));
        assert!((direct - r.final_lambda).abs() < 1e-8);
        assert!(r.graph.is_simple());
        let again = run_pipeline(&c, &s1, &s2).unwrap();
        assert_eq!(again.graph, r.graph);
        assert_eq!(materialize(&c, &r.base.seed, &r.sign_seed).unwrap(), r.graph);
    }

    #[test]
    fn all_plus_is_rejected() {
        let mut c = PipelineConfig::new(128, 3, 0.3).unwrap();
        c.sign_mode = SignMode::AllPlus;
        c.s2_budget = 2;
        let r = run_pipeline(&c, &Seed::from_u64(1), &Seed::from_u64(2)).unwrap();
        assert!(!r.passed);
        assert_eq!(r.s2_attempts, 2);
        assert!((r.stages[1].signed_lambda.unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn lift_base_is_simple() {
        let c = PipelineConfig::with_base(64, 3, 0.3, 64, Model::Lift).unwrap();
        let (g, s) = search_base(&c, &Seed::from_u64(5)).unwrap();
        assert_eq!(s.not_simple, 0);
        assert!(g.is_simple());
    }

    #[test]
    fn matchings() {
        let p = named::petersen();
        let a = augment_with_matchings(&p, 0, None).unwrap();
        assert_eq!(a.graph, p);
        let a = augment_with_matchings(&p, 1, None).unwrap();
        assert!(a.holds && a.lambda_after <= 3.0 + 1e-9);
        assert_eq!(a.graph.d(), 4);
        assert!(augment_with_matchings(&named::complete(3), 1, None).is_err());
    }
}
