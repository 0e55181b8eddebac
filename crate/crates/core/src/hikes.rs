//! Closed walks for the trace method.
//!
//! An `l`-hike is a closed walk of `2l` arcs that never steps straight back
//! along the edge it arrived on, except between steps `l` and `l + 1` (the
//! turnaround). It is special when step `l + 1` reverses step `l` and the last
//! step reverses the first. For `B` the signed non-backtracking matrix,
//! `tr(B^l (B^T)^l)` is the signed count of special `(l + 1)`-hikes.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{excess, reverse_arc, Graph};
use crate::lifts::EdgeSigning;
use crate::nb::NonBacktracking;
use crate::structure::{check_excess_bound, ExcessVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Hike {
    pub ell: usize,
    /// `2 * ell` arc ids.
    pub arcs: Vec<usize>,
}

impl Hike {
    pub fn new(g: &Graph, ell: usize, arcs: Vec<usize>) -> Result<Self> {
        let h = Hike { ell, arcs };
        h.validate(g)?;
        Ok(h)
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if self.ell == 0 || self.arcs.len() != 2 * self.ell {
            return bad(format!("{} arcs do not make a {}-hike", self.arcs.len(), self.ell));
        }
        if self.arcs.iter().any(|&a| a >= g.arc_count()) {
            return bad("arc out of range".into());
        }
        let n = self.arcs.len();
        for i in 0..n {
            let (a, b) = (self.arcs[i], self.arcs[(i + 1) % n]);
            if g.arc_head(a) != g.arc_tail(b) {
                return bad(format!("steps {i} and {} do not meet", (i + 1) % n));
            }
            if i + 1 < n && i + 1 != self.ell && b == reverse_arc(a) {
                return bad(format!("step {} backtracks", i + 1));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn start(&self, g: &Graph) -> usize {
        g.arc_tail(self.arcs[0])
    }

    /// `(edge, times traversed)`, sorted by edge.
    pub fn edge_multiplicities(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<usize> = self.arcs.iter().map(|a| a / 2).collect();
        edges.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for e in edges {
            match out.last_mut() {
                Some((f, c)) if *f == e => *c += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.edge_multiplicities().iter().all(|&(_, c)| c % 2 == 0)
    }

    pub fn is_singleton_free(&self) -> bool {
        self.edge_multiplicities().iter().all(|&(_, c)| c >= 2)
    }

    pub fn is_special(&self) -> bool {
        let l = self.ell;
        self.arcs[l] == reverse_arc(self.arcs[l - 1]) && self.arcs[2 * l - 1] == reverse_arc(self.arcs[0])
    }

    /// Vertex and edge counts of the traversed subgraph.
    pub fn footprint(&self, g: &Graph) -> (usize, usize) {
        let mut vs: Vec<usize> = self.arcs.iter().map(|&a| g.arc_tail(a)).collect();
        vs.sort_unstable();
        vs.dedup();
        (vs.len(), self.edge_multiplicities().len())
    }
}

/// Product of the signs of the traversed edges, with multiplicity.
pub fn hike_sign(signing: &EdgeSigning, h: &Hike) -> i8 {
    h.arcs.iter().map(|a| signing.sign(a / 2)).product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum HikeFilter {
    All,
    Even,
    SingletonFree,
    Special,
    EvenSpecial,
}

impl HikeFilter {
    fn special_only(self) -> bool {
        matches!(self, HikeFilter::Special | HikeFilter::EvenSpecial)
    }

    fn accepts(self, even: bool, singleton_free: bool) -> bool {
        match self {
            HikeFilter::All | HikeFilter::Special => true,
            HikeFilter::Even | HikeFilter::EvenSpecial => even,
            HikeFilter::SingletonFree => singleton_free,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HikeCounts {
    pub total: u64,
    pub even: u64,
    pub singleton_free: u64,
    pub special: u64,
    pub even_special: u64,
}

impl std::ops::Add for HikeCounts {
    type Output = HikeCounts;

    fn add(self, o: HikeCounts) -> HikeCounts {
        HikeCounts {
            total: self.total + o.total,
            even: self.even + o.even,
            singleton_free: self.singleton_free + o.singleton_free,
            special: self.special + o.special,
            even_special: self.even_special + o.even_special,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HikeEnumeration {
    pub ell: usize,
    pub filter: HikeFilter,
    /// Counts over the searched family: special hikes only when the filter
    /// asks for special hikes, all hikes otherwise.
    pub counts: HikeCounts,
    /// Hikes passing the filter.
    pub matching: u64,
    /// False if the step budget ran out.
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hikes: Option<Vec<Hike>>,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationOptions {
    /// Maximum number of DFS extensions.
    pub budget: Option<u64>,
    pub collect: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            budget: Some(2_000_000_000),
            collect: false,
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    ell: usize,
    filter: HikeFilter,
    dist: Option<Vec<Vec<u32>>>,
    budget: Option<u64>,
    steps: &'a AtomicU64,
    exhausted: &'a AtomicBool,
    collect: bool,
}

struct Walk {
    arcs: Vec<usize>,
    mult: Vec<u32>,
    counts: HikeCounts,
    hikes: Vec<Hike>,
}

impl Search<'_> {
    fn run_from(&self, a0: usize) -> Walk {
        let mut w = Walk {
            arcs: vec![a0],
            mult: vec![0; self.g.edge_count()],
            counts: HikeCounts::default(),
            hikes: Vec::new(),
        };
        w.mult[a0 / 2] += 1;
        self.extend(&mut w);
        w
    }

    fn extend(&self, w: &mut Walk) {
        let len = 2 * self.ell;
        let i = w.arcs.len();
        let last = w.arcs[i - 1];
        let start = self.g.arc_tail(w.arcs[0]);
        if i == len {
            if self.g.arc_head(last) == start {
                self.record(w);
            }
            return;
        }
        if self.exhausted.load(Ordering::Relaxed) {
            return;
        }
        if let Some(b) = self.budget {
            if self.steps.fetch_add(1, Ordering::Relaxed) >= b {
                self.exhausted.store(true, Ordering::Relaxed);
                return;
            }
        }
        let v = self.g.arc_head(last);
        for inc in self.g.incident(v) {
            let next = inc.arc;
            let back = next == reverse_arc(last);
            if back && i != self.ell {
                continue;
            }
            if self.filter.special_only() {
                if i == self.ell && !back {
                    continue;
                }
                if i == len - 1 && next != reverse_arc(w.arcs[0]) {
                    continue;
                }
            }
            // Remaining steps after this one must lead home.
            if let Some(d) = &self.dist {
                let remaining = (len - i - 1) as u32;
                if d[inc.neighbor][start] > remaining {
                    continue;
                }
            }
            w.arcs.push(next);
            w.mult[next / 2] += 1;
            self.extend(w);
            w.mult[next / 2] -= 1;
            w.arcs.pop();
        }
    }

    fn record(&self, w: &mut Walk) {
        let mut even = true;
        let mut sf = true;
        for &a in &w.arcs {
            let m = w.mult[a / 2];
            even &= m % 2 == 0;
            sf &= m >= 2;
        }
        let l = self.ell;
        let special = w.arcs[l] == reverse_arc(w.arcs[l - 1])
            && w.arcs[2 * l - 1] == reverse_arc(w.arcs[0]);
        let c = &mut w.counts;
        c.total += 1;
        c.even += u64::from(even);
        c.singleton_free += u64::from(sf);
        c.special += u64::from(special);
        c.even_special += u64::from(even && special);
        if self.collect && self.filter.accepts(even, sf) {
            w.hikes.push(Hike {
                ell: l,
                arcs: w.arcs.clone(),
            });
        }
    }
}

fn all_distances(g: &Graph) -> Option<Vec<Vec<u32>>> {
    (g.vertex_count() <= 2048).then(|| {
        (0..g.vertex_count())
            .map(|v| {
                g.distances_from(v)
                    .into_iter()
                    .map(|d| d.min(u32::MAX as usize) as u32)
                    .collect()
            })
            .collect()
    })
}

pub fn enumerate_hikes(g: &Graph, ell: usize, filter: HikeFilter, opts: EnumerationOptions) -> Result<HikeEnumeration> {
    if ell == 0 {
        return Err(Error::Regime("hikes need ell >= 1".into()));
    }
    let steps = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    let search = Search {
        g,
        ell,
        filter,
        dist: all_distances(g),
        budget: opts.budget,
        steps: &steps,
        exhausted: &exhausted,
        collect: opts.collect,
    };
    let walks: Vec<Walk> = (0..g.arc_count()).into_par_iter().map(|a| search.run_from(a)).collect();
    let mut counts = HikeCounts::default();
    let mut hikes = opts.collect.then(Vec::new);
    for w in walks {
        counts = counts + w.counts;
        if let Some(h) = hikes.as_mut() {
            h.extend(w.hikes);
        }
    }
    let matching = match filter {
        HikeFilter::All | HikeFilter::Special => counts.total,
        HikeFilter::Even | HikeFilter::EvenSpecial => counts.even,
        HikeFilter::SingletonFree => counts.singleton_free,
    };
    Ok(HikeEnumeration {
        ell,
        filter,
        counts,
        matching,
        complete: !exhausted.load(Ordering::Relaxed),
        hikes,
    })
}

/// `tr(B^l (B^T)^l)` for one signing, in exact integer arithmetic.
pub fn trace_power_exact(b: &NonBacktracking, signs: &[i8], ell: usize) -> i128 {
    let dim = b.dim();
    let mut total = 0i128;
    let mut cur = vec![0i64; dim];
    let mut next = vec![0i64; dim];
    for a in 0..dim {
        cur.iter_mut().for_each(|x| *x = 0);
        cur[a] = 1;
        for _ in 0..ell {
            next.iter_mut().for_each(|x| *x = 0);
            for (x, &v) in cur.iter().enumerate() {
                if v != 0 {
                    for &(y, _) in b.row(x) {
                        next[y] += v * i64::from(signs[y / 2]);
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
        }
        total += cur.iter().map(|&v| i128::from(v) * i128::from(v)).sum::<i128>();
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationIdentity {
    pub ell: usize,
    pub edges: usize,
    pub signings: u64,
    /// Sum of `tr(B^l (B^T)^l)` over every signing.
    pub trace_sum: i128,
    /// Number of even special `(l + 1)`-hikes.
    pub even_special_hikes: u64,
    /// `|trace_sum / signings - even_special_hikes|`.
    pub residual: f64,
    pub exact: bool,
}

pub const MAX_IDENTITY_EDGES: usize = 20;

/// Averages the trace over all `2^|E|` signings and compares with the count
/// of even special `(l + 1)`-hikes.
pub fn verify_expectation_identity(g: &Graph, ell: usize) -> Result<ExpectationIdentity> {
    let m = g.edge_count();
    if m > MAX_IDENTITY_EDGES {
        return Err(Error::Regime(format!("{m} edges: 2^{m} signings is too many")));
    }
    if ell == 0 {
        return Err(Error::Regime("ell must be at least 1".into()));
    }
    let b = NonBacktracking::new(g, None);
    let signings = 1u64 << m;
    let trace_sum: i128 = (0..signings)
        .into_par_iter()
        .map(|mask| {
            let s = EdgeSigning::from_mask(m, mask);
            trace_power_exact(&b, s.as_slice(), ell)
        })
        .sum();
    let hikes = enumerate_hikes(g, ell + 1, HikeFilter::EvenSpecial, EnumerationOptions { budget: None, collect: false })?;
    let count = hikes.counts.even_special;
    let exact = trace_sum == i128::from(count) * i128::from(signings);
    Ok(ExpectationIdentity {
        ell,
        edges: m,
        signings,
        trace_sum,
        even_special_hikes: count,
        residual: (trace_sum as f64 / signings as f64 - count as f64).abs(),
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Fresh,
    Boundary,
    Stale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stretch {
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepClassification {
    pub labels: Vec<StepKind>,
    /// Maximal runs of consecutive stale steps.
    pub maximal_stretches: Vec<Stretch>,
    pub fresh: usize,
    pub boundary: usize,
    pub stale: usize,
    /// Index of the first step after the turnaround.
    pub turnaround: usize,
}

impl StepClassification {
    /// Maximal stretches split at the turnaround and cut into pieces of
    /// length at most `r` (`r >= 1`).
    pub fn partition(&self, r: usize) -> Vec<Stretch> {
        let r = r.max(1);
        let mut out = Vec::new();
        for s in &self.maximal_stretches {
            let end = s.start + s.len;
            let cuts: Vec<(usize, usize)> = if s.start < self.turnaround && self.turnaround < end {
                vec![(s.start, self.turnaround), (self.turnaround, end)]
            } else {
                vec![(s.start, end)]
            };
            for (a, b) in cuts {
                let mut x = a;
                while x < b {
                    let len = r.min(b - x);
                    out.push(Stretch { start: x, len });
                    x += len;
                }
            }
        }
        out
    }
}

/// Labels each step in reveal order. The start vertex counts as visited.
pub fn classify_steps(g: &Graph, h: &Hike) -> StepClassification {
    let mut visited = vec![false; g.vertex_count()];
    let mut explored = vec![false; g.edge_count()];
    visited[h.start(g)] = true;
    let mut labels = Vec::with_capacity(h.len());
    for &a in &h.arcs {
        let e = a / 2;
        let head = g.arc_head(a);
        let kind = if explored[e] {
            StepKind::Stale
        } else if !visited[head] {
            StepKind::Fresh
        } else {
            StepKind::Boundary
        };
        explored[e] = true;
        visited[head] = true;
        labels.push(kind);
    }
    let mut maximal_stretches = Vec::new();
    let mut i = 0;
    while i < labels.len() {
        if labels[i] == StepKind::Stale {
            let start = i;
            while i < labels.len() && labels[i] == StepKind::Stale {
                i += 1;
            }
            maximal_stretches.push(Stretch { start, len: i - start });
        } else {
            i += 1;
        }
    }
    let count = |k| labels.iter().filter(|&&l| l == k).count();
    StepClassification {
        fresh: count(StepKind::Fresh),
        boundary: count(StepKind::Boundary),
        stale: count(StepKind::Stale),
        labels,
        maximal_stretches,
        turnaround: h.ell,
    }
}

/// Every structural property a hike must satisfy; returns the violations.
///
/// `r` is a radius at which `g` is bicycle-free.
pub fn hike_violations(g: &Graph, h: &Hike, r: usize) -> Vec<String> {
    let mut out = Vec::new();
    let c = classify_steps(g, h);
    let (vs, es) = h.footprint(g);
    let exc = excess(es, vs);
    if c.boundary as i64 != exc + 1 {
        out.push(format!("{} boundary steps but excess {exc}", c.boundary));
    }
    if h.is_singleton_free() {
        if 2 * c.stale < h.len() {
            out.push(format!("singleton-free with {} of {} steps stale", c.stale, h.len()));
        }
        if c.fresh > h.ell {
            out.push(format!("singleton-free with {} fresh steps", c.fresh));
        }
    }
    for s in &c.maximal_stretches {
        let ok = s.start == c.turnaround || (s.start > 0 && c.labels[s.start - 1] == StepKind::Boundary);
        if !ok {
            out.push(format!("stale stretch at {} follows neither a boundary step nor the turnaround", s.start));
        }
    }
    if c.maximal_stretches.len() > c.boundary + 1 {
        out.push(format!("{} stretches but {} boundary steps", c.maximal_stretches.len(), c.boundary));
    }
    for s in c.partition(r) {
        if s.len > r.max(1) || (s.start < c.turnaround && c.turnaround < s.start + s.len) {
            out.push(format!("stretch {s:?} too long or straddles the turnaround"));
        }
    }
    // The traversed subgraph inherits bicycle-freeness, so the excess bound
    // applies to it whenever its radius hypothesis does.
    let mut edges: Vec<usize> = h.edge_multiplicities().iter().map(|&(e, _)| e).collect();
    edges.sort_unstable();
    let mut verts: Vec<usize> = edges.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    verts.sort_unstable();
    verts.dedup();
    let sub: Vec<(usize, usize)> = edges
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (verts.binary_search(&u).unwrap(), verts.binary_search(&v).unwrap())
        })
        .collect();
    let gh = Graph::new(verts.len(), &sub).expect("subgraph is valid");
    if check_excess_bound(&gh, r).verdict == ExcessVerdict::Violated {
        out.push("traversed subgraph violates the excess bound".into());
    }
    out
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub d: usize,
    pub ell: usize,
    pub r: usize,
    pub eta: f64,
    /// Bias of the sign source, zero for uniform signs.
    #[serde(default)]
    pub delta: f64,
    /// Stand-in for every hidden constant.
    #[serde(default = "unit")]
    pub constant: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundEnvelope {
    pub eps1: f64,
    pub eps2: f64,
    /// `sqrt(d-1) (1 + C eps1 + C eps2) + C d (delta n / eta)^(1/2l)`.
    pub b_side: f64,
    /// `b + (d-1)/b`, the adjacency magnitude matching `b_side`.
    pub a_side: f64,
    pub constant: f64,
}

/// `ln(n / eta) / l`.
pub fn epsilon1(n: usize, eta: f64, ell: usize) -> f64 {
    (n as f64 / eta).ln() / ell as f64
}

/// `ln(d l) ln(l) / r`.
pub fn epsilon2(d: usize, ell: usize, r: usize) -> f64 {
    let l = ell as f64;
    (d as f64 * l).ln() * l.ln() / r as f64
}

/// A monitoring envelope, not a proven bound: hidden constants are `C`.
pub fn evaluate_bound(p: &BoundParams) -> Result<BoundEnvelope> {
    if p.ell == 0 || p.r == 0 || !(0.0 < p.eta && p.eta < 1.0) || p.d < 2 {
        return Err(Error::Regime(format!("invalid parameters {p:?}")));
    }
    let eps1 = epsilon1(p.n, p.eta, p.ell);
    let eps2 = epsilon2(p.d, p.ell, p.r);
    if eps1 > 1.0 || eps2 > 1.0 {
        return Err(Error::Regime(format!("eps1 = {eps1:.4}, eps2 = {eps2:.4}; both must be <= 1")));
    }
    let c = p.constant;
    let q = p.d as f64 - 1.0;
    let mut b = q.sqrt() * (1.0 + c * eps1 + c * eps2);
    if p.delta > 0.0 {
        b += c * p.d as f64 * (p.delta * p.n as f64 / p.eta).powf(1.0 / (2.0 * p.ell as f64));
    }
    Ok(BoundEnvelope {
        eps1,
        eps2,
        b_side: b,
        a_side: b + q / b,
        constant: c,
    })
}

/// `C l^3 n (d-1)^l (d r l)^(C l ln(l) / r)` with every constant `C = 8`,
/// the monitored envelope for singleton-free `(l - 1)`-hike counts.
pub fn singleton_free_envelope(n: usize, d: usize, ell: usize, r: usize) -> f64 {
    let c = 8.0;
    let (l, r) = (ell as f64, r.max(1) as f64);
    let m = c * l * l.max(1.0).ln() / r;
    c * l.powi(3) * n as f64 * (d as f64 - 1.0).powf(l) * (d as f64 * r * l).powf(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    /// Every sequence of 2l arcs, filtered by the definition.
    fn brute_force(g: &Graph, ell: usize) -> Vec<Hike> {
        let arcs = g.arc_count();
        let len = 2 * ell;
        let mut out = Vec::new();
        let total = arcs.pow(len as u32);
        for code in 0..total {
            let mut x = code;
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let a = x % arcs;
                    x /= arcs;
                    a
                })
                .collect();
            let h = Hike { ell, arcs: seq };
            if h.validate(g).is_ok() {
                out.push(h);
            }
        }
        out
    }

    #[test]
    fn single_edge_one_hike() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let e = enumerate_hikes(&g, 1, HikeFilter::All, EnumerationOptions::default()).unwrap();
        assert_eq!(e.counts.total, 2);
        assert_eq!(e.counts.even, 2);
        assert_eq!(e.counts.even_special, 2);
        let h = Hike::new(&g, 1, vec![0, 1]).unwrap();
        assert!(h.is_even() && h.is_special());
        let s = EdgeSigning::new(vec![-1]).unwrap();
        assert_eq!(hike_sign(&s, &h), 1);
        let c = classify_steps(&g, &h);
        assert_eq!(c.labels, vec![StepKind::Fresh, StepKind::Stale]);
    }

    #[test]
    fn dfs_matches_brute_force() {
        let graphs = [
            named::cycle(3).graph().clone(),
            named::complete(4).graph().clone(),
            named::dipole(3).graph().clone(),
            Graph::new(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap(),
        ];
        for g in &graphs {
            for ell in 1..=2 {
                let brute = brute_force(g, ell);
                let opts = EnumerationOptions { budget: None, collect: true };
                let e = enumerate_hikes(g, ell, HikeFilter::All, opts).unwrap();
                assert_eq!(e.counts.total as usize, brute.len());
                let even = brute.iter().filter(|h| h.is_even()).count();
                assert_eq!(e.counts.even as usize, even);
                let es = brute.iter().filter(|h| h.is_even() && h.is_special()).count();
                let sp = enumerate_hikes(g, ell, HikeFilter::EvenSpecial, opts).unwrap();
                assert_eq!(sp.matching as usize, es);
                let mut a = e.hikes.unwrap();
                let mut b = brute;
                a.sort_by(|x, y| x.arcs.cmp(&y.arcs));
                b.sort_by(|x, y| x.arcs.cmp(&y.arcs));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn counts_are_isomorphism_invariant() {
        let g = named::petersen();
        let perm: Vec<usize> = (0..10).map(|v| (v * 3 + 1) % 10).collect();
        let h = g.relabel(&perm).unwrap();
        for ell in 1..=3 {
            let a = enumerate_hikes(&g, ell, HikeFilter::All, EnumerationOptions::default()).unwrap();
            let b = enumerate_hikes(&h, ell, HikeFilter::All, EnumerationOptions::default()).unwrap();
            assert_eq!(a.counts, b.counts);
        }
    }

    #[test]
    fn identity_on_small_graphs() {
        for g in [
            named::complete(4).graph().clone(),
            named::cycle(3).graph().clone(),
            Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap(),
        ] {
            for ell in 1..=3 {
                let r = verify_expectation_identity(&g, ell).unwrap();
                assert!(r.exact, "{r:?}");
                assert_eq!(r.residual, 0.0);
            }
        }
    }

    #[test]
    fn tree_path_labels() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let h = Hike::new(&g, 2, vec![0, 2, 3, 1]).unwrap();
        let c = classify_steps(&g, &h);
        assert_eq!(c.labels, vec![StepKind::Fresh, StepKind::Fresh, StepKind::Stale, StepKind::Stale]);
        assert_eq!(c.partition(1), vec![Stretch { start: 2, len: 1 }, Stretch { start: 3, len: 1 }]);
        assert!(hike_violations(&g, &h, 1).is_empty());
    }

    #[test]
    fn budget_flags_partial_results() {
        let g = named::complete(4);
        let e = enumerate_hikes(&g, 3, HikeFilter::All, EnumerationOptions { budget: Some(10), collect: false }).unwrap();
        assert!(!e.complete);
    }

    #[test]
    fn epsilons() {
        assert!((epsilon1(4096, 0.01, 64) - 0.201_920_880_5).abs() < 1e-9);
        assert!((epsilon2(3, 64, 8) - 2.733_163_570_4).abs() < 1e-9);
        let p = BoundParams { n: 4096, d: 3, ell: 5, r: 8, eta: 0.01, delta: 0.0, constant: 1.0 };
        assert!(evaluate_bound(&p).is_err());
        let p = BoundParams { ell: 64, r: 40, ..p };
        let b = evaluate_bound(&p).unwrap();
        assert!(b.b_side > 2f64.sqrt() && b.a_side > 2.0 * 2f64.sqrt());
    }
}
