//! Edge signings and 2-lifts.
//!
//! The 2-lift of a signed `d`-regular multigraph on `n` vertices has vertex
//! `(v, b)` at id `v + n * b`, `b in {0, 1}`. Base edge `e` from half-edge
//! `(u, p)` to `(w, q)` with sign `s` lifts to edge `e + |E| * b` from
//! `(u + n b, p)` to `(w + n (b ^ [s = -1]), q)`, so ports are preserved.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{HalfEdge, Multigraph};
use crate::prg::SignSource;
use crate::spectra::symmetric_eigenvalues;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EdgeSigning(Vec<i8>);

impl EdgeSigning {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(e) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidGraph(format!("sign of edge {e} is {}", signs[e])));
        }
        Ok(EdgeSigning(signs))
    }

    pub fn constant(len: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        EdgeSigning(vec![sign; len])
    }

    /// Signing number `mask` among all `2^len`: bit `e` set means edge `e` is -1.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        EdgeSigning((0..len).map(|e| if mask >> e & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sign(&self, e: usize) -> i8 {
        self.0[e]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    base: Multigraph,
    signing: EdgeSigning,
}

impl SignedGraph {
    pub fn new(base: Multigraph, signing: EdgeSigning) -> Result<Self> {
        if signing.len() != base.edge_count() {
            return Err(Error::InsufficientBits {
                needed: base.edge_count(),
                got: signing.len(),
            });
        }
        Ok(SignedGraph { base, signing })
    }

    pub fn unsigned(base: Multigraph) -> Self {
        let signing = EdgeSigning::constant(base.edge_count(), 1);
        SignedGraph { base, signing }
    }

    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn into_base(self) -> Multigraph {
        self.base
    }

    pub fn signing(&self) -> &EdgeSigning {
        &self.signing
    }

    pub fn sign(&self, e: usize) -> i8 {
        self.signing.sign(e)
    }

    pub fn weight(&self, e: usize) -> f64 {
        f64::from(self.signing.sign(e))
    }

    pub fn d(&self) -> usize {
        self.base.d()
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.base.edge_count()
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        self.base.weighted_adjacency(|e| self.weight(e))
    }
}

/// Edge `e` gets `bits[e]`; extra bits are ignored.
pub fn sign_from_bits(g: Multigraph, bits: &[i8]) -> Result<SignedGraph> {
    let m = g.edge_count();
    if bits.len() < m {
        return Err(Error::InsufficientBits {
            needed: m,
            got: bits.len(),
        });
    }
    SignedGraph::new(g, EdgeSigning::new(bits[..m].to_vec())?)
}

/// Edge `e` gets `src.sign(offset + e)`.
pub fn sign_from_source(g: Multigraph, src: &dyn SignSource, offset: u64) -> SignedGraph {
    let signs = (0..g.edge_count() as u64).map(|e| src.sign(offset + e)).collect();
    SignedGraph {
        base: g,
        signing: EdgeSigning(signs),
    }
}

pub fn two_lift(sg: &SignedGraph) -> Multigraph {
    let g = sg.base();
    let (n, d, m) = (g.vertex_count(), g.d(), g.edge_count());
    let mut pairs = Vec::with_capacity(2 * m);
    for b in 0..2 {
        for e in 0..m {
            let (t, h) = g.edge_halves(e);
            let hb = if sg.sign(e) == 1 { b } else { 1 - b };
            pairs.push((
                HalfEdge::new(t.vertex + n * b, t.port),
                HalfEdge::new(h.vertex + n * hb, h.port),
            ));
        }
    }
    Multigraph::from_pairs(2 * n, d, &pairs).expect("lift of a valid matching is valid")
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumUnion {
    pub lift: Vec<f64>,
    pub union: Vec<f64>,
    pub max_deviation: f64,
    pub holds: bool,
}

/// Compares the lift's spectrum with the union of the base and signed spectra.
pub fn verify_spectrum_union(sg: &SignedGraph, tol: f64) -> SpectrumUnion {
    let lift = symmetric_eigenvalues(two_lift(sg).adjacency_matrix());
    let mut union = symmetric_eigenvalues(sg.base().adjacency_matrix());
    union.extend(symmetric_eigenvalues(sg.adjacency()));
    union.sort_by(|a, b| b.total_cmp(a));
    let max_deviation = lift
        .iter()
        .zip(&union)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    SpectrumUnion {
        holds: lift.len() == union.len() && max_deviation <= tol,
        lift,
        union,
        max_deviation,
    }
}

/// Whether swapping the two copies, `v <-> v + n`, preserves the edge multiset.
pub fn deck_is_automorphism(lift: &crate::graph::Graph) -> bool {
    let n2 = lift.vertex_count();
    if n2 % 2 != 0 {
        return false;
    }
    let n = n2 / 2;
    let swap = |v: usize| if v < n { v + n } else { v - n };
    let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
    let mut before: Vec<_> = lift.edges().iter().map(|&e| key(e)).collect();
    let mut after: Vec<_> = lift.edges().iter().map(|&(a, b)| key((swap(a), swap(b)))).collect();
    before.sort_unstable();
    after.sort_unstable();
    before == after
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::prg::{Seed, StreamSigns};

    #[test]
    fn all_plus_gives_two_copies() {
        let k4 = named::complete(4);
        let lift = two_lift(&SignedGraph::unsigned(k4.clone()));
        assert_eq!(lift.components().1, 2);
        let a = lift.adjacency_matrix();
        let base = k4.adjacency_matrix();
        assert_eq!(a.view((0, 0), (4, 4)), base.view((0, 0), (4, 4)));
        assert_eq!(a.view((4, 4), (4, 4)), base.view((0, 0), (4, 4)));
        let u = verify_spectrum_union(&SignedGraph::unsigned(k4), 1e-8);
        assert!(u.holds);
        assert!((u.lift[0] - 3.0).abs() < 1e-9 && (u.lift[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn one_negative_edge_on_c4_gives_c8() {
        let c4 = named::cycle(4);
        let mut signs = vec![1; 4];
        signs[2] = -1;
        let lift = two_lift(&sign_from_bits(c4, &signs).unwrap());
        assert_eq!(lift.vertex_count(), 8);
        assert!(lift.is_connected());
        assert!((0..8).all(|v| lift.degree(v) == 2));
        assert!(lift.is_simple());
    }

    #[test]
    fn all_minus_negates_bipartite_spectrum() {
        let g = named::cube();
        let sg = sign_from_bits(g.clone(), &vec![-1; g.edge_count()]).unwrap();
        assert_eq!(sg.adjacency(), -g.adjacency_matrix());
        let a = symmetric_eigenvalues(sg.adjacency());
        let b = symmetric_eigenvalues(g.adjacency_matrix());
        for (x, y) in a.iter().zip(b.iter().rev()) {
            assert!((x + y).abs() < 1e-9);
        }
    }

    #[test]
    fn random_signings_of_petersen() {
        let p = named::petersen();
        for s in 0..10 {
            let src = StreamSigns::new(&Seed::from_u64(s));
            let sg = sign_from_source(p.clone(), &src, 0);
            let u = verify_spectrum_union(&sg, 1e-8);
            assert!(u.holds, "deviation {}", u.max_deviation);
            let lift = two_lift(&sg);
            assert!(lift.is_simple());
            assert!(deck_is_automorphism(&lift));
            assert!((0..20).all(|v| lift.degree(v) == 3));
        }
    }

    #[test]
    fn too_few_bits() {
        let err = sign_from_bits(named::complete(4), &[1, 1]).unwrap_err();
        assert!(matches!(err, Error::InsufficientBits { needed: 6, got: 2 }));
        assert!(EdgeSigning::new(vec![1, 0]).is_err());
    }

    #[test]
    fn lifted_edge_ids_follow_layers() {
        let g = named::petersen();
        let src = StreamSigns::new(&Seed::from_u64(1));
        let sg = sign_from_source(g.clone(), &src, 0);
        let lift = two_lift(&sg);
        for e in 0..g.edge_count() {
            let (t, _) = g.edge_halves(e);
            for b in 0..2 {
                let (lt, _) = lift.edge_halves(e + 15 * b);
                assert_eq!(lt, HalfEdge::new(t.vertex + 10 * b, t.port));
            }
        }
    }
}
