//! Undirected multigraphs.
//!
//! Two representations live here. [`Graph`] is a general undirected
//! multigraph (loops and parallel edges allowed, any degrees) used by the
//! structural checks. [`Multigraph`] is a `d`-regular multigraph stored as a
//! fixed-point-free involution on its `n * d` half-edges; it dereferences to
//! the [`Graph`] it induces, with each vertex's incidence list in port order.
//!
//! Every undirected edge carries an id, so parallel edges stay distinct. Edge
//! `e` gives rise to two directed edges ("arcs"): `2e` runs tail to head and
//! `2e + 1` runs head to tail. Reversal is `a ^ 1`.

mod io;

pub use io::{read_edge_list, write_edge_list, EdgeListFile};

use std::ops::Deref;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `|E| - |V|`.
pub fn excess(edges: usize, vertices: usize) -> i64 {
    edges as i64 - vertices as i64
}

/// One end of an edge as seen from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
    /// Arc leaving this vertex along `edge`.
    pub arc: usize,
}

/// A directed edge of a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub tail: usize,
    pub head: usize,
    pub edge: usize,
    /// `false` for the tail-to-head orientation of `edge`.
    pub reversed: bool,
}

impl DirectedEdge {
    pub fn index(&self) -> usize {
        2 * self.edge + usize::from(self.reversed)
    }

    pub fn reverse(&self) -> DirectedEdge {
        DirectedEdge {
            tail: self.head,
            head: self.tail,
            edge: self.edge,
            reversed: !self.reversed,
        }
    }
}

#[inline]
pub fn reverse_arc(arc: usize) -> usize {
    arc ^ 1
}

/// General undirected multigraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<Incidence>>,
}

impl Graph {
    /// Builds a graph from `(tail, head)` pairs; edge ids follow slice order.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {e} = ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            adj[u].push(Incidence {
                neighbor: v,
                edge: e,
                arc: 2 * e,
            });
            adj[v].push(Incidence {
                neighbor: u,
                edge: e,
                arc: 2 * e + 1,
            });
        }
        Ok(Graph {
            n,
            edges: edges.to_vec(),
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        self.edges[edge]
    }

    pub fn incident(&self, v: usize) -> &[Incidence] {
        &self.adj[v]
    }

    /// Degree with a loop counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn excess(&self) -> i64 {
        excess(self.edge_count(), self.vertex_count())
    }

    pub fn arc(&self, arc: usize) -> DirectedEdge {
        let edge = arc / 2;
        let (u, v) = self.edges[edge];
        if arc % 2 == 0 {
            DirectedEdge {
                tail: u,
                head: v,
                edge,
                reversed: false,
            }
        } else {
            DirectedEdge {
                tail: v,
                head: u,
                edge,
                reversed: true,
            }
        }
    }

    pub fn arc_tail(&self, arc: usize) -> usize {
        let (u, v) = self.edges[arc / 2];
        if arc % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn arc_head(&self, arc: usize) -> usize {
        self.arc_tail(arc ^ 1)
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Adjacency entry `A[u][v]`; a loop contributes 2 to the diagonal.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].iter().filter(|i| i.neighbor == v).count()
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = vec![usize::MAX; self.n];
        for (v, inc) in self.adj.iter().enumerate() {
            for i in inc {
                if i.neighbor == v || seen[i.neighbor] == v {
                    return false;
                }
                seen[i.neighbor] = v;
            }
        }
        true
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        self.weighted_adjacency(|_| 1.0)
    }

    /// Symmetric matrix with `weight(e)` added at `(u, v)` and `(v, u)` for
    /// each edge; loops add `2 * weight(e)` on the diagonal.
    pub fn weighted_adjacency(&self, weight: impl Fn(usize) -> f64) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let w = weight(e);
            a[(u, v)] += w;
            a[(v, u)] += w;
        }
        a
    }

    /// Component id per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for i in &self.adj[v] {
                    if comp[i.neighbor] == usize::MAX {
                        comp[i.neighbor] = count;
                        stack.push(i.neighbor);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Breadth-first distances from `root`, `usize::MAX` when unreachable.
    pub fn distances_from(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for i in &self.adj[v] {
                if dist[i.neighbor] == usize::MAX {
                    dist[i.neighbor] = dist[v] + 1;
                    queue.push_back(i.neighbor);
                }
            }
        }
        dist
    }

    /// Applies `perm` to vertex labels, keeping edge ids.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidGraph("relabeling has wrong length".into()));
        }
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::new(self.n, &edges)
    }
}

/// A `(vertex, port)` pair; `port < d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub vertex: usize,
    pub port: usize,
}

impl HalfEdge {
    pub fn new(vertex: usize, port: usize) -> Self {
        HalfEdge { vertex, port }
    }

    pub fn index(&self, d: usize) -> usize {
        self.vertex * d + self.port
    }

    pub fn from_index(index: usize, d: usize) -> Self {
        HalfEdge {
            vertex: index / d,
            port: index % d,
        }
    }
}

/// A `d`-regular multigraph given by a perfect matching of its half-edges.
///
/// Edge ids come from construction order. [`Multigraph::from_matching`] numbers
/// edges by their lower half-edge index; [`Multigraph::from_pairs`] keeps the
/// caller's order and treats the first half of each pair as the tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    d: usize,
    mate: Vec<usize>,
    /// `(tail half, head half)` per edge, as half-edge indices.
    halves: Vec<(usize, usize)>,
    edge_of_half: Vec<usize>,
    graph: Graph,
}

impl Multigraph {
    /// Builds the multigraph induced by `mate`, an involution on `0..n*d`.
    pub fn from_matching(n: usize, d: usize, mate: Vec<usize>) -> Result<Self> {
        check_matching(n, d, &mate)?;
        let halves: Vec<_> = (0..n * d)
            .filter(|&h| mate[h] > h)
            .map(|h| (h, mate[h]))
            .collect();
        Ok(Self::assemble(n, d, mate, halves))
    }

    /// Builds the multigraph whose edge `i` joins `pairs[i].0` to `pairs[i].1`.
    pub fn from_pairs(n: usize, d: usize, pairs: &[(HalfEdge, HalfEdge)]) -> Result<Self> {
        if n * d != 2 * pairs.len() {
            return Err(Error::InvalidMatching(format!(
                "{} pairs cannot cover {} half-edges",
                pairs.len(),
                n * d
            )));
        }
        let mut mate = vec![usize::MAX; n * d];
        let mut halves = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            if a.vertex >= n || b.vertex >= n || a.port >= d || b.port >= d {
                return Err(Error::InvalidMatching(format!(
                    "half-edge pair {a:?}-{b:?} out of range"
                )));
            }
            let (x, y) = (a.index(d), b.index(d));
            if x == y || mate[x] != usize::MAX || mate[y] != usize::MAX {
                return Err(Error::InvalidMatching(format!(
                    "half-edge pair {a:?}-{b:?} reuses a half-edge"
                )));
            }
            mate[x] = y;
            mate[y] = x;
            halves.push((x, y));
        }
        Ok(Self::assemble(n, d, mate, halves))
    }

    fn assemble(n: usize, d: usize, mate: Vec<usize>, halves: Vec<(usize, usize)>) -> Self {
        let mut edge_of_half = vec![0; n * d];
        let mut edges = Vec::with_capacity(halves.len());
        for (e, &(x, y)) in halves.iter().enumerate() {
            edge_of_half[x] = e;
            edge_of_half[y] = e;
            edges.push((x / d.max(1), y / d.max(1)));
        }
        // Incidence lists are indexed by port.
        let mut adj = vec![Vec::with_capacity(d); n];
        for v in 0..n {
            for p in 0..d {
                let h = v * d + p;
                let e = edge_of_half[h];
                let (x, _) = halves[e];
                let arc = if h == x { 2 * e } else { 2 * e + 1 };
                adj[v].push(Incidence {
                    neighbor: mate[h] / d,
                    edge: e,
                    arc,
                });
            }
        }
        Multigraph {
            d,
            mate,
            halves,
            edge_of_half,
            graph: Graph { n, edges, adj },
        }
    }

    /// The regular degree `d`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn matching(&self) -> &[usize] {
        &self.mate
    }

    pub fn mate(&self, h: HalfEdge) -> HalfEdge {
        HalfEdge::from_index(self.mate[h.index(self.d)], self.d)
    }

    /// `(tail half, head half)` of edge `e`.
    pub fn edge_halves(&self, e: usize) -> (HalfEdge, HalfEdge) {
        let (x, y) = self.halves[e];
        (
            HalfEdge::from_index(x, self.d),
            HalfEdge::from_index(y, self.d),
        )
    }

    pub fn edge_of(&self, h: HalfEdge) -> usize {
        self.edge_of_half[h.index(self.d)]
    }

    /// Whether `h` is the tail half of its edge.
    pub fn is_tail_half(&self, h: HalfEdge) -> bool {
        let idx = h.index(self.d);
        self.halves[self.edge_of_half[idx]].0 == idx
    }

    pub fn pairs(&self) -> Vec<(HalfEdge, HalfEdge)> {
        (0..self.halves.len()).map(|e| self.edge_halves(e)).collect()
    }

    /// The endpoint reached through `port` of `v`.
    pub fn neighbor(&self, v: usize, port: usize) -> HalfEdge {
        self.mate(HalfEdge::new(v, port))
    }
}

impl Deref for Multigraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

fn check_matching(n: usize, d: usize, mate: &[usize]) -> Result<()> {
    let total = n * d;
    if total % 2 != 0 {
        return Err(Error::InvalidMatching(format!("n*d = {total} is odd")));
    }
    if mate.len() != total {
        return Err(Error::InvalidMatching(format!(
            "matching has {} entries, expected {total}",
            mate.len()
        )));
    }
    for (h, &m) in mate.iter().enumerate() {
        if m >= total {
            return Err(Error::InvalidMatching(format!("half-edge {h} maps to {m}")));
        }
        if m == h {
            return Err(Error::InvalidMatching(format!("half-edge {h} is a fixed point")));
        }
        if mate[m] != h {
            return Err(Error::InvalidMatching(format!(
                "not an involution: {h} -> {m} -> {}",
                mate[m]
            )));
        }
    }
    Ok(())
}

/// Small named graphs used throughout tests and examples.
pub mod named {
    use super::*;

    fn from_edge_list(n: usize, d: usize, edges: &[(usize, usize)]) -> Multigraph {
        let mut next_port = vec![0; n];
        let pairs: Vec<_> = edges
            .iter()
            .map(|&(u, v)| {
                let a = HalfEdge::new(u, next_port[u]);
                next_port[u] += 1;
                let b = HalfEdge::new(v, next_port[v]);
                next_port[v] += 1;
                (a, b)
            })
            .collect();
        Multigraph::from_pairs(n, d, &pairs).expect("named graph is regular")
    }

    /// Builds a `d`-regular multigraph from an edge list, assigning ports in
    /// order of appearance.
    pub fn regular(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Multigraph> {
        let mut deg = vec![0; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        if let Some(v) = deg.iter().position(|&k| k != d) {
            return Err(Error::InvalidGraph(format!(
                "vertex {v} has degree {}, expected {d}",
                deg[v]
            )));
        }
        Ok(from_edge_list(n, d, edges))
    }

    pub fn complete(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        from_edge_list(n, n - 1, &edges)
    }

    pub fn cycle(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        from_edge_list(n, 2, &edges)
    }

    pub fn petersen() -> Multigraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        from_edge_list(10, 3, &edges)
    }

    pub fn complete_bipartite(k: usize) -> Multigraph {
        let edges: Vec<_> = (0..k)
            .flat_map(|u| (0..k).map(move |v| (u, k + v)))
            .collect();
        from_edge_list(2 * k, k, &edges)
    }

    /// Triangular prism: two triangles joined by a perfect matching.
    pub fn prism() -> Multigraph {
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
        from_edge_list(6, 3, &edges)
    }

    pub fn cube() -> Multigraph {
        let mut edges = Vec::new();
        for v in 0..8usize {
            for b in 0..3 {
                let w = v ^ (1 << b);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        from_edge_list(8, 3, &edges)
    }

    /// Two vertices joined by `d` parallel edges.
    pub fn dipole(d: usize) -> Multigraph {
        from_edge_list(2, d, &vec![(0, 1); d])
    }

    /// Disjoint union, keeping the left graph's labels and shifting the right.
    pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
        assert_eq!(a.d(), b.d(), "disjoint union needs equal degrees");
        let shift = a.vertex_count();
        let mut pairs = a.pairs();
        pairs.extend(b.pairs().into_iter().map(|(x, y)| {
            (
                HalfEdge::new(x.vertex + shift, x.port),
                HalfEdge::new(y.vertex + shift, y.port),
            )
        }));
        Multigraph::from_pairs(shift + b.vertex_count(), a.d(), &pairs)
            .expect("union of regular graphs is regular")
    }
}
