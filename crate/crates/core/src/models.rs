//! Random regular graph models driven by permutation families.
//!
//! Configuration model: a permutation `pi` of the `n * d` half-edges pairs
//! `pi(2t)` with `pi(2t + 1)`; that pair is edge `t` with tail `pi(2t)`.
//!
//! Lift of `K_{d+1}`: vertex `(u, i)` with `u <= d`, `i < n_lift` has id
//! `u + (d + 1) * i`. For each base pair `u < w` a permutation `pi_uw` joins
//! `(u, i)` to `(w, pi_uw(i))`. The port of `(u, i)` towards base vertex `w` is
//! `w` if `w < u`, else `w - 1`, and the edge id is `pair(u, w) * n_lift + i`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{HalfEdge, Multigraph};
use crate::prg::{permutation, PermutationFamily, PermutationMode, Seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    #[value(name = "config", alias = "configuration")]
    #[serde(rename = "config", alias = "configuration")]
    Configuration,
    #[value(name = "lift")]
    #[serde(rename = "lift")]
    Lift,
}

/// A model with fixed size; `n` is the total vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub mode: PermutationMode,
}

impl ModelSpec {
    pub fn new(model: Model, n: usize, d: usize) -> Self {
        ModelSpec {
            model,
            n,
            d,
            mode: PermutationMode::Shuffle,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::Configuration if (self.n * self.d) % 2 != 0 => Err(Error::InvalidGraph(
                format!("n*d = {} must be even", self.n * self.d),
            )),
            Model::Lift if self.n == 0 || self.n % (self.d + 1) != 0 => Err(Error::InvalidGraph(
                format!("lift model needs n a positive multiple of d+1 = {}, got {}", self.d + 1, self.n),
            )),
            _ if self.d == 0 => Err(Error::InvalidGraph("degree must be positive".into())),
            _ => Ok(()),
        }
    }

    pub fn n_lift(&self) -> usize {
        self.n / (self.d + 1)
    }

    /// The permutations the model consumes for `seed`.
    pub fn permutations(&self, seed: &Seed) -> Result<Vec<Box<dyn PermutationFamily>>> {
        self.validate()?;
        Ok(match self.model {
            Model::Configuration => vec![permutation(
                self.mode,
                &seed.derive("configuration", 0),
                self.n * self.d,
            )],
            Model::Lift => (0..pair_count(self.d))
                .map(|p| permutation(self.mode, &seed.derive("lift", p as u64), self.n_lift()))
                .collect(),
        })
    }

    pub fn sample(&self, seed: &Seed) -> Result<Multigraph> {
        let perms = self.permutations(seed)?;
        match self.model {
            Model::Configuration => sample_configuration(self.n, self.d, perms[0].as_ref()),
            Model::Lift => sample_lift_of_complete(self.d, self.n_lift(), &perms),
        }
    }

    /// Simplicity of the sample without building the graph.
    pub fn sample_is_simple(&self, seed: &Seed) -> Result<bool> {
        match self.model {
            Model::Lift => Ok(true),
            Model::Configuration => {
                let perms = self.permutations(seed)?;
                Ok(pairs_are_simple(&configuration_pairs(self.n, self.d, perms[0].as_ref())))
            }
        }
    }
}

pub fn configuration_pairs(n: usize, d: usize, perm: &dyn PermutationFamily) -> Vec<(HalfEdge, HalfEdge)> {
    (0..n * d / 2)
        .map(|t| {
            (
                HalfEdge::from_index(perm.forward(2 * t), d),
                HalfEdge::from_index(perm.forward(2 * t + 1), d),
            )
        })
        .collect()
}

pub fn sample_configuration(n: usize, d: usize, perm: &dyn PermutationFamily) -> Result<Multigraph> {
    if (n * d) % 2 != 0 {
        return Err(Error::InvalidGraph(format!("n*d = {} must be even", n * d)));
    }
    if perm.domain() != n * d {
        return Err(Error::ConfigMismatch(format!(
            "permutation domain {} != n*d = {}",
            perm.domain(),
            n * d
        )));
    }
    Multigraph::from_pairs(n, d, &configuration_pairs(n, d, perm))
}

/// Number of base pairs `u < w` in `K_{d+1}`.
pub fn pair_count(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Lexicographic index of the pair `u < w` among pairs of `0..=d`.
pub fn pair_index(d: usize, u: usize, w: usize) -> usize {
    debug_assert!(u < w && w <= d);
    // Pairs with first element below u: sum_{a<u} (d - a).
    u * d - u * (u.saturating_sub(1)) / 2 + (w - u - 1)
}

/// Port of base vertex `u` that leads towards base vertex `w`.
pub fn lift_port(u: usize, w: usize) -> usize {
    if w < u {
        w
    } else {
        w - 1
    }
}

/// Base vertex reached from `u` through `port`.
pub fn lift_port_target(u: usize, port: usize) -> usize {
    if port < u {
        port
    } else {
        port + 1
    }
}

pub fn sample_lift_of_complete(
    d: usize,
    n_lift: usize,
    perms: &[Box<dyn PermutationFamily>],
) -> Result<Multigraph> {
    if n_lift == 0 {
        return Err(Error::InvalidGraph("n_lift must be at least 1".into()));
    }
    if perms.len() != pair_count(d) || perms.iter().any(|p| p.domain() != n_lift) {
        return Err(Error::ConfigMismatch(format!(
            "need {} permutations of {n_lift} points",
            pair_count(d)
        )));
    }
    let b = d + 1;
    let mut pairs = Vec::with_capacity(pair_count(d) * n_lift);
    for u in 0..=d {
        for w in u + 1..=d {
            let pi = &perms[pair_index(d, u, w)];
            for i in 0..n_lift {
                let j = pi.forward(i);
                pairs.push((
                    HalfEdge::new(u + b * i, lift_port(u, w)),
                    HalfEdge::new(w + b * j, lift_port(w, u)),
                ));
            }
        }
    }
    Multigraph::from_pairs(b * n_lift, d, &pairs)
}

fn pairs_are_simple(pairs: &[(HalfEdge, HalfEdge)]) -> bool {
    let mut keys = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        if a.vertex == b.vertex {
            return false;
        }
        keys.push((a.vertex.min(b.vertex), a.vertex.max(b.vertex)));
    }
    keys.sort_unstable();
    keys.windows(2).all(|w| w[0] != w[1])
}

/// Seed of the `j`-th independent draw derived from `seed`.
pub fn trial_seed(seed: &Seed, j: u64) -> Seed {
    seed.derive("trial", j)
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplicityEstimate {
    pub trials: u64,
    pub simple: u64,
    pub rate: f64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

pub fn simplicity_rate(spec: &ModelSpec, trials: u64, seed: &Seed) -> Result<SimplicityEstimate> {
    if trials == 0 {
        return Err(Error::InvalidGraph("trials must be at least 1".into()));
    }
    spec.validate()?;
    let simple = (0..trials)
        .into_par_iter()
        .map(|j| spec.sample_is_simple(&trial_seed(seed, j)).map(u64::from))
        .sum::<Result<u64>>()?;
    let (ci_low, ci_high) = wilson_interval(simple, trials, 1.959964);
    Ok(SimplicityEstimate {
        trials,
        simple,
        rate: simple as f64 / trials as f64,
        ci_low,
        ci_high,
    })
}

/// `exp(-(d^2 - 1) / 4)`, the limiting probability that a configuration-model
/// graph is simple.
pub fn limiting_simple_probability(d: usize) -> f64 {
    let d = d as f64;
    (-(d * d - 1.0) / 4.0).exp()
}

pub const DEFAULT_REJECTION_CAP: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct SimpleSample {
    pub graph: Multigraph,
    pub seed: Seed,
    pub attempts: u64,
}

/// Draws from `spec` with seeds `seed, trial_seed(seed, 1), ...` until simple.
pub fn sample_simple(spec: &ModelSpec, seed: &Seed, max_attempts: u64) -> Result<SimpleSample> {
    for j in 0..max_attempts {
        let s = if j == 0 { seed.clone() } else { trial_seed(seed, j) };
        if spec.sample_is_simple(&s)? {
            return Ok(SimpleSample {
                graph: spec.sample(&s)?,
                seed: s,
                attempts: j + 1,
            });
        }
    }
    Err(Error::BudgetExhausted {
        attempts: max_attempts,
        detail: format!("no simple {:?} graph with n={}, d={}", spec.model, spec.n, spec.d),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditioningTest {
    pub samples: u64,
    /// Per isomorphism class: `(automorphism count, observed, expected)`.
    pub classes: Vec<(u64, u64, f64)>,
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub rejected: bool,
}

/// Chi-squared test at the 1% level that simple configuration-model graphs on
/// `n <= 7` vertices are uniform over labeled graphs, i.e. that each
/// isomorphism class appears with probability proportional to `1/|Aut|`.
pub fn conditioning_test(n: usize, d: usize, samples: u64, seed: &Seed) -> Result<ConditioningTest> {
    if n > 7 {
        return Err(Error::InvalidGraph("conditioning test enumerates n! relabelings, n <= 7".into()));
    }
    let spec = ModelSpec::new(Model::Configuration, n, d);
    spec.validate()?;
    let perms = all_permutations(n);
    let mut canon_cache: HashMap<u64, u64> = HashMap::new();
    let mut class_counts: HashMap<u64, u64> = HashMap::new();
    let mut drawn = 0u64;
    let mut j = 0u64;
    while drawn < samples {
        let s = trial_seed(seed, j);
        j += 1;
        if !spec.sample_is_simple(&s)? {
            continue;
        }
        let g = spec.sample(&s)?;
        let mask = edge_mask(n, g.edges().iter().copied());
        let canon = *canon_cache
            .entry(mask)
            .or_insert_with(|| canonical_mask(n, mask, &perms));
        *class_counts.entry(canon).or_default() += 1;
        drawn += 1;
    }

    // Every class of simple d-regular graphs on n vertices, by exhaustive search.
    let mut all_classes: HashMap<u64, u64> = HashMap::new();
    for mask in regular_masks(n, d) {
        let canon = canonical_mask(n, mask, &perms);
        all_classes.entry(canon).or_insert_with(|| automorphisms(n, canon, &perms));
    }
    let mut keys: Vec<_> = all_classes.keys().copied().collect();
    keys.sort_unstable();
    let weight: f64 = keys.iter().map(|k| 1.0 / all_classes[k] as f64).sum();
    let mut statistic = 0.0;
    let mut classes = Vec::new();
    for k in keys {
        let aut = all_classes[&k];
        let expected = samples as f64 * (1.0 / aut as f64) / weight;
        let observed = class_counts.get(&k).copied().unwrap_or(0);
        statistic += (observed as f64 - expected).powi(2) / expected;
        classes.push((aut, observed, expected));
    }
    let df = classes.len().saturating_sub(1);
    let critical = chi_square_critical_1pct(df);
    Ok(ConditioningTest {
        samples,
        classes,
        statistic,
        df,
        critical,
        rejected: df > 0 && statistic > critical,
    })
}

/// Upper 1% point of the chi-squared distribution.
pub fn chi_square_critical_1pct(df: usize) -> f64 {
    const TABLE: [f64; 10] = [
        6.634897, 9.210340, 11.344867, 13.276704, 15.086272, 16.811894, 18.475307, 20.090235,
        21.665994, 23.209251,
    ];
    match df {
        0 => 0.0,
        1..=10 => TABLE[df - 1],
        _ => {
            // Wilson-Hilferty
            let k = df as f64;
            let z = 2.326348;
            k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
        }
    }
}

fn pair_bit(n: usize, u: usize, v: usize) -> u32 {
    let (a, b) = (u.min(v), u.max(v));
    (a * n + b) as u32
}

fn edge_mask(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> u64 {
    edges.fold(0u64, |m, (u, v)| m | 1u64 << pair_bit(n, u, v))
}

fn relabel_mask(n: usize, mask: u64, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> pair_bit(n, u, v) & 1 == 1 {
                out |= 1u64 << pair_bit(n, perm[u], perm[v]);
            }
        }
    }
    out
}

fn canonical_mask(n: usize, mask: u64, perms: &[Vec<usize>]) -> u64 {
    perms.iter().map(|p| relabel_mask(n, mask, p)).min().unwrap_or(mask)
}

fn automorphisms(n: usize, mask: u64, perms: &[Vec<usize>]) -> u64 {
    perms.iter().filter(|p| relabel_mask(n, mask, p) == mask).count() as u64
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        if k % 2 == 0 {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

/// All labeled simple `d`-regular graphs on `n` vertices as edge masks.
fn regular_masks(n: usize, d: usize) -> Vec<u64> {
    struct Search {
        n: usize,
        d: usize,
        pairs: Vec<(usize, usize)>,
        deg: Vec<usize>,
        out: Vec<u64>,
    }
    impl Search {
        fn rec(&mut self, i: usize, mask: u64) {
            if i == self.pairs.len() {
                if self.deg.iter().all(|&x| x == self.d) {
                    self.out.push(mask);
                }
                return;
            }
            let (u, v) = self.pairs[i];
            for take in [false, true] {
                if take {
                    if self.deg[u] == self.d || self.deg[v] == self.d {
                        continue;
                    }
                    self.deg[u] += 1;
                    self.deg[v] += 1;
                }
                // (u, n-1) is the last pair touching u.
                if v != self.n - 1 || self.deg[u] == self.d {
                    let bit = if take { 1u64 << pair_bit(self.n, u, v) } else { 0 };
                    self.rec(i + 1, mask | bit);
                }
                if take {
                    self.deg[u] -= 1;
                    self.deg[v] -= 1;
                }
            }
        }
    }
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut s = Search {
        n,
        d,
        pairs,
        deg: vec![0; n],
        out: Vec::new(),
    };
    s.rec(0, 0);
    s.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prg::TablePermutation;

    #[test]
    fn identity_permutation_gives_loops() {
        let g = sample_configuration(2, 2, &TablePermutation::identity(4)).unwrap();
        assert_eq!(g.edges(), &[(0, 0), (1, 1)]);
        assert_eq!(g.edge_halves(0), (HalfEdge::new(0, 0), HalfEdge::new(0, 1)));
        assert!(!g.is_simple());
    }

    #[test]
    fn pair_index_is_lexicographic() {
        for d in 1..8 {
            let mut k = 0;
            for u in 0..=d {
                for w in u + 1..=d {
                    assert_eq!(pair_index(d, u, w), k);
                    k += 1;
                }
            }
            assert_eq!(k, pair_count(d));
        }
    }

    #[test]
    fn ports_round_trip() {
        for u in 0..6 {
            for w in 0..6 {
                if u != w {
                    assert_eq!(lift_port_target(u, lift_port(u, w)), w);
                }
            }
        }
    }

    #[test]
    fn one_lift_is_complete_graph() {
        let spec = ModelSpec::new(Model::Lift, 5, 4);
        let g = spec.sample(&Seed::from_u64(1)).unwrap();
        assert_eq!(g.adjacency_matrix(), crate::graph::named::complete(5).adjacency_matrix());
    }

    #[test]
    fn lift_is_simple_and_regular() {
        for seed in 0..20 {
            let spec = ModelSpec::new(Model::Lift, 40, 3);
            let g = spec.sample(&Seed::from_u64(seed)).unwrap();
            assert!(g.is_simple());
            assert!((0..40).all(|v| g.degree(v) == 3));
            let a = g.adjacency_matrix();
            assert_eq!(a, a.transpose());
        }
    }

    #[test]
    fn lift_ports_point_at_the_right_base_vertex() {
        let spec = ModelSpec::new(Model::Lift, 5 * 7, 4);
        let g = spec.sample(&Seed::from_u64(3)).unwrap();
        for v in 0..g.vertex_count() {
            for p in 0..4 {
                let h = g.neighbor(v, p);
                assert_eq!(h.vertex % 5, lift_port_target(v % 5, p));
                assert_eq!(h.port, lift_port(h.vertex % 5, v % 5));
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = ModelSpec::new(Model::Configuration, 30, 3);
        let s = Seed::from_u64(42);
        assert_eq!(spec.sample(&s).unwrap(), spec.sample(&s).unwrap());
        let mut spec_f = spec;
        spec_f.mode = PermutationMode::Feistel;
        assert_eq!(spec_f.sample(&s).unwrap(), spec_f.sample(&s).unwrap());
    }

    #[test]
    fn fast_simplicity_agrees_with_graph() {
        let spec = ModelSpec::new(Model::Configuration, 8, 3);
        for j in 0..200 {
            let s = Seed::from_u64(j);
            assert_eq!(spec.sample_is_simple(&s).unwrap(), spec.sample(&s).unwrap().is_simple());
        }
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100, 1.96);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
    }

    #[test]
    fn six_vertex_cubic_classes() {
        let masks = regular_masks(6, 3);
        assert_eq!(masks.len(), 70);
        let perms = all_permutations(6);
        assert_eq!(perms.len(), 720);
        let mut auts: Vec<u64> = masks
            .iter()
            .map(|&m| canonical_mask(6, m, &perms))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .map(|c| automorphisms(6, c, &perms))
            .collect();
        auts.sort();
        assert_eq!(auts, vec![12, 72]);
    }

    #[test]
    fn rejection_reports_budget() {
        let spec = ModelSpec::new(Model::Configuration, 2, 2);
        // Two vertices of degree 2 are never simple.
        let err = sample_simple(&spec, &Seed::from_u64(0), 50).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { attempts: 50, .. }));
    }
}
