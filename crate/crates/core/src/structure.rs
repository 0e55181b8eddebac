//! Local cycle structure: bicycle-freeness, short cycles and excess bounds.
//!
//! The distance-`r` neighborhood of a vertex is the subgraph induced on the
//! vertices at distance at most `r`. A loop is a cycle of length 1 and a pair
//! of parallel edges a cycle of length 2.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{excess, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Acyclic,
    Unicyclic,
    BicyclicOrWorse,
}

impl Classification {
    pub fn from_excess(exc: i64) -> Self {
        match exc {
            i64::MIN..=-1 => Classification::Acyclic,
            0 => Classification::Unicyclic,
            _ => Classification::BicyclicOrWorse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodReport {
    pub root: usize,
    pub radius: usize,
    pub vertices: usize,
    pub edges: usize,
    pub excess: i64,
    pub classification: Classification,
}

/// Reusable BFS state for growing balls layer by layer.
struct Explorer<'g> {
    g: &'g Graph,
    dist: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<usize>,
    next: Vec<usize>,
    /// Vertices in the current ball.
    vertices: usize,
    /// Twice the number of edges inside the current ball.
    doubled_edges: usize,
    depth: usize,
}

impl<'g> Explorer<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.vertex_count();
        Explorer {
            g,
            dist: vec![0; n],
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
            vertices: 0,
            doubled_edges: 0,
            depth: 0,
        }
    }

    /// Resets to the radius-0 ball around `root`.
    fn start(&mut self, root: usize) {
        self.epoch += 1;
        self.stamp[root] = self.epoch;
        self.dist[root] = 0;
        self.frontier.clear();
        self.frontier.push(root);
        self.vertices = 1;
        self.depth = 0;
        self.doubled_edges = 0;
        self.count_layer();
    }

    /// Adds the edges between the newest layer and the ball.
    fn count_layer(&mut self) {
        let k = self.depth;
        for &w in &self.frontier {
            for inc in self.g.incident(w) {
                let x = inc.neighbor;
                if self.stamp[x] == self.epoch {
                    self.doubled_edges += if self.dist[x] < k { 2 } else { 1 };
                }
            }
        }
    }

    /// Grows the ball by one layer; false if nothing new was reached.
    fn grow(&mut self) -> bool {
        self.next.clear();
        for &w in &self.frontier {
            for inc in self.g.incident(w) {
                let x = inc.neighbor;
                if self.stamp[x] != self.epoch {
                    self.stamp[x] = self.epoch;
                    self.dist[x] = self.depth + 1;
                    self.next.push(x);
                }
            }
        }
        std::mem::swap(&mut self.frontier, &mut self.next);
        self.depth += 1;
        self.vertices += self.frontier.len();
        self.count_layer();
        !self.frontier.is_empty()
    }

    fn excess(&self) -> i64 {
        excess(self.doubled_edges / 2, self.vertices)
    }

    /// Ball of radius `r` around `root`.
    fn ball(&mut self, root: usize, r: usize) -> (usize, usize) {
        self.start(root);
        while self.depth < r && self.grow() {}
        (self.vertices, self.doubled_edges / 2)
    }

    /// Largest radius `<= cap` whose ball has excess `<= 0`; `None` if even
    /// the radius-0 ball fails. Stops early once `limit` is reached.
    fn free_radius(&mut self, root: usize, cap: usize, limit: usize) -> Option<usize> {
        self.start(root);
        if self.excess() > 0 {
            return None;
        }
        while self.depth < cap.min(limit) {
            if !self.grow() {
                // The whole component is inside the ball.
                return Some(cap);
            }
            if self.excess() > 0 {
                return Some(self.depth - 1);
            }
        }
        Some(self.depth)
    }
}

pub fn neighborhood(g: &Graph, root: usize, r: usize) -> NeighborhoodReport {
    let mut ex = Explorer::new(g);
    let (vertices, edges) = ex.ball(root, r);
    let exc = excess(edges, vertices);
    NeighborhoodReport {
        root,
        radius: r,
        vertices,
        edges,
        excess: exc,
        classification: Classification::from_excess(exc),
    }
}

/// The neighborhood of largest excess at radius `r` (lowest root on ties).
pub fn worst_neighborhood(g: &Graph, r: usize) -> Option<NeighborhoodReport> {
    let n = g.vertex_count();
    let best = (0..n)
        .into_par_iter()
        .map_init(
            || Explorer::new(g),
            |ex, v| {
                let (vs, es) = ex.ball(v, r);
                (excess(es, vs), std::cmp::Reverse(v))
            },
        )
        .max()?;
    Some(neighborhood(g, best.1 .0, r))
}

/// `ceil(2 log_b n) + 2` with `b = max(maxdeg - 1, 2)`.
pub fn default_radius_cap(g: &Graph) -> usize {
    let n = g.vertex_count().max(2) as f64;
    let b = (g.max_degree().saturating_sub(1)).max(2) as f64;
    (2.0 * n.ln() / b.ln()).ceil() as usize + 2
}

pub fn is_bicycle_free_at(g: &Graph, r: usize) -> bool {
    (0..g.vertex_count())
        .into_par_iter()
        .map_init(
            || Explorer::new(g),
            |ex, v| {
                let (vs, es) = ex.ball(v, r);
                excess(es, vs) <= 0
            },
        )
        .all(|ok| ok)
}

pub fn bicycle_free_radius(g: &Graph) -> Option<usize> {
    bicycle_free_radius_capped(g, default_radius_cap(g))
}

/// Largest `r <= cap` with `g` bicycle-free at radius `r`, or `None` when a
/// vertex carries two loops.
pub fn bicycle_free_radius_capped(g: &Graph, cap: usize) -> Option<usize> {
    let best = AtomicUsize::new(cap);
    let failed = (0..g.vertex_count())
        .into_par_iter()
        .map_init(
            || Explorer::new(g),
            |ex, v| {
                let limit = best.load(Ordering::Relaxed);
                match ex.free_radius(v, cap, limit) {
                    Some(r) => {
                        best.fetch_min(r, Ordering::Relaxed);
                        false
                    }
                    None => true,
                }
            },
        )
        .reduce(|| false, |a, b| a || b);
    (!failed).then(|| best.load(Ordering::Relaxed))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cycle {
    /// Vertices in order, starting at the smallest.
    pub vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` to `vertices[i + 1]` (cyclically).
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Every cycle of length `<= cap`, once each up to rotation and reflection.
pub fn enumerate_short_cycles(g: &Graph, cap: usize) -> Vec<Cycle> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if cap == 0 {
        return out;
    }
    let mut on_path = vec![false; n];
    for s in 0..n {
        let mut verts = vec![s];
        let mut edges = Vec::new();
        on_path[s] = true;
        extend_cycles(g, s, cap, &mut verts, &mut edges, &mut on_path, &mut out);
        on_path[s] = false;
    }
    out
}

fn extend_cycles(
    g: &Graph,
    s: usize,
    cap: usize,
    verts: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let v = *verts.last().unwrap();
    for inc in g.incident(v) {
        let w = inc.neighbor;
        if edges.last() == Some(&inc.edge) {
            continue;
        }
        if w == s {
            if edges.is_empty() {
                // A loop appears twice in the incidence list; keep its even arc.
                if inc.arc % 2 == 0 {
                    out.push(Cycle {
                        vertices: vec![s],
                        edges: vec![inc.edge],
                    });
                }
            } else if edges[0] < inc.edge {
                let mut es = edges.clone();
                es.push(inc.edge);
                out.push(Cycle {
                    vertices: verts.clone(),
                    edges: es,
                });
            }
            continue;
        }
        if w < s || on_path[w] || edges.len() + 1 >= cap {
            continue;
        }
        on_path[w] = true;
        verts.push(w);
        edges.push(inc.edge);
        extend_cycles(g, s, cap, verts, edges, on_path, out);
        edges.pop();
        verts.pop();
        on_path[w] = false;
    }
}

pub fn cycles_vertex_disjoint(n: usize, cycles: &[Cycle]) -> bool {
    let mut owner = vec![usize::MAX; n];
    for (i, c) in cycles.iter().enumerate() {
        for &v in &c.vertices {
            if owner[v] != usize::MAX {
                return false;
            }
            owner[v] = i;
        }
    }
    true
}

/// Whether the sets of vertices within distance `r - len(C)/2` of each cycle
/// `C` are pairwise disjoint.
pub fn cycle_balls_disjoint(g: &Graph, cycles: &[Cycle], r: usize) -> bool {
    let n = g.vertex_count();
    let mut owner = vec![usize::MAX; n];
    for (i, c) in cycles.iter().enumerate() {
        // dist <= r - len/2  <=>  2 dist <= 2r - len
        if 2 * r < c.len() {
            continue;
        }
        let reach = (2 * r - c.len()) / 2;
        let mut dist = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for &v in &c.vertices {
            dist[v] = 0;
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            if owner[v] != usize::MAX && owner[v] != i {
                return false;
            }
            owner[v] = i;
            if dist[v] == reach {
                continue;
            }
            for inc in g.incident(v) {
                if dist[inc.neighbor] == usize::MAX {
                    dist[inc.neighbor] = dist[v] + 1;
                    queue.push_back(inc.neighbor);
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcessVerdict {
    Holds,
    Violated,
    Inapplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcessCheck {
    pub verdict: ExcessVerdict,
    pub vertices: usize,
    pub radius: usize,
    pub excess: i64,
    /// Sum over components of `ln(e v_c) v_c / r`.
    pub bound: f64,
    pub reason: Option<String>,
}

/// Checks `exc(h) <= ln(e v) v / r` for `h` bicycle-free at radius
/// `r >= 10 ln v`, applying the bound to each component and summing.
pub fn check_excess_bound(h: &Graph, r: usize) -> ExcessCheck {
    let v = h.vertex_count();
    let exc = h.excess();
    let mut check = ExcessCheck {
        verdict: ExcessVerdict::Inapplicable,
        vertices: v,
        radius: r,
        excess: exc,
        bound: f64::NAN,
        reason: None,
    };
    if v == 0 || r == 0 {
        check.reason = Some("empty graph or zero radius".into());
        return check;
    }
    if (r as f64) < 10.0 * (v as f64).ln() {
        check.reason = Some(format!("radius {r} < 10 ln {v}"));
        return check;
    }
    if !is_bicycle_free_at(h, r) {
        check.reason = Some(format!("not bicycle-free at radius {r}"));
        return check;
    }
    let (comp, count) = h.components();
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    let bound: f64 = sizes
        .iter()
        .map(|&vc| (std::f64::consts::E * vc as f64).ln() * vc as f64 / r as f64)
        .sum();
    check.bound = bound;
    check.verdict = if exc as f64 <= bound + 1e-9 {
        ExcessVerdict::Holds
    } else {
        ExcessVerdict::Violated
    };
    check
}

#[derive(Debug, Clone, Serialize)]
pub struct BicycleSummary {
    pub vertices: usize,
    pub edges: usize,
    pub cap: usize,
    /// Largest bicycle-free radius up to `cap`.
    pub radius: Option<usize>,
    pub checked_radius: usize,
    pub bicycle_free: bool,
    pub worst: Option<NeighborhoodReport>,
}

/// Radius search plus the worst neighborhood at `radius` (or at the found radius).
pub fn summarize(g: &Graph, radius: Option<usize>) -> BicycleSummary {
    let cap = default_radius_cap(g);
    let found = bicycle_free_radius_capped(g, cap);
    let checked = radius.or(found).unwrap_or(0);
    BicycleSummary {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        cap,
        radius: found,
        checked_radius: checked,
        bicycle_free: is_bicycle_free_at(g, checked),
        worst: worst_neighborhood(g, checked),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn bowtie() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
    }

    /// Straight from the definition: every ball via fresh BFS.
    fn brute_free_at(g: &Graph, r: usize) -> bool {
        (0..g.vertex_count()).all(|v| {
            let dist = g.distances_from(v);
            let inside = |x: usize| dist[x] <= r;
            let vs = (0..g.vertex_count()).filter(|&x| inside(x)).count();
            let es = g.edges().iter().filter(|&&(a, b)| inside(a) && inside(b)).count();
            excess(es, vs) <= 0
        })
    }

    #[test]
    fn cycle_is_free_at_cap() {
        let c6 = named::cycle(6);
        let cap = default_radius_cap(&c6);
        assert_eq!(bicycle_free_radius(&c6), Some(cap));
        assert_eq!(enumerate_short_cycles(&c6, 6).len(), 1);
        assert!(enumerate_short_cycles(&c6, 5).is_empty());
    }

    #[test]
    fn bowtie_radius_zero() {
        let g = bowtie();
        assert_eq!(bicycle_free_radius(&g), Some(0));
        assert!(brute_free_at(&g, 0) && !brute_free_at(&g, 1));
        let cycles = enumerate_short_cycles(&g, 3);
        assert_eq!(cycles.len(), 2);
        assert!(!cycles_vertex_disjoint(5, &cycles));
        assert_eq!(cycles[0].vertices[0], 0);
        assert_eq!(cycles[1].vertices[0], 0);
    }

    #[test]
    fn k4_at_radius_one() {
        let k4 = named::complete(4);
        assert!(!is_bicycle_free_at(&k4, 1));
        assert_eq!(neighborhood(&k4, 0, 1).excess, 2);
        assert_eq!(neighborhood(&k4, 0, 0).classification, Classification::Acyclic);
        // 4 triangles and 3 four-cycles
        assert_eq!(enumerate_short_cycles(&k4, 3).len(), 4);
        assert_eq!(enumerate_short_cycles(&k4, 4).len(), 7);
    }

    #[test]
    fn loops_and_parallel_edges_are_short_cycles() {
        let g = Graph::new(3, &[(0, 0), (0, 1), (0, 1), (1, 2), (2, 2), (2, 2)]).unwrap();
        let cycles = enumerate_short_cycles(&g, 2);
        let lens: Vec<_> = cycles.iter().map(Cycle::len).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 1).count(), 3);
        assert_eq!(lens.iter().filter(|&&l| l == 2).count(), 1);
        // two loops at one vertex already form a bicycle
        assert_eq!(bicycle_free_radius(&g), None);
        assert_eq!(bicycle_free_radius(&named::dipole(3)), Some(0));
    }

    #[test]
    fn forests_are_free() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (1, 3), (4, 5)]).unwrap();
        for r in 0..8 {
            assert!(is_bicycle_free_at(&g, r));
        }
        assert_eq!(check_excess_bound(&Graph::new(1, &[]).unwrap(), 1).verdict, ExcessVerdict::Holds);
    }

    #[test]
    fn theta_at_diameter() {
        let g = Graph::new(5, &[(0, 1), (1, 4), (0, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(!is_bicycle_free_at(&g, 2));
        assert_eq!(neighborhood(&g, 0, 2).excess, 1);
    }

    #[test]
    fn long_cycle_excess_holds() {
        let v = 50;
        let g = named::cycle(v);
        let r = (10.0 * (v as f64).ln()).ceil() as usize;
        let c = check_excess_bound(&g, r);
        assert_eq!(c.verdict, ExcessVerdict::Holds);
        assert_eq!(c.excess, 0);
        assert_eq!(check_excess_bound(&g, 5).verdict, ExcessVerdict::Inapplicable);
    }

    #[test]
    fn incremental_matches_brute_force() {
        let graphs = [
            named::petersen().graph().clone(),
            named::cube().graph().clone(),
            bowtie(),
            named::cycle(9).graph().clone(),
            Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4)]).unwrap(),
        ];
        for g in &graphs {
            let cap = 6;
            let r = bicycle_free_radius_capped(g, cap);
            let brute = (0..=cap).take_while(|&r| brute_free_at(g, r)).last();
            assert_eq!(r, brute);
            for r in 0..5 {
                assert_eq!(is_bicycle_free_at(g, r), brute_free_at(g, r));
            }
        }
    }

    #[test]
    fn worst_neighborhood_has_max_excess() {
        let g = Graph::new(8, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 3), (3, 5)]).unwrap();
        assert_eq!(worst_neighborhood(&g, 1).unwrap().excess, 0);
        let w = worst_neighborhood(&g, 2).unwrap();
        assert_eq!(w.excess, 1);
        assert_eq!(w.classification, Classification::BicyclicOrWorse);
    }
}
