//! Neighbor queries on a pipeline graph answered from its seeds.
//!
//! A vertex of `G_t` is `(v, a, x)`: `v` and `a` locate it in the base graph
//! and bit `i - 1` of `x` says which copy it sits in after lift `i`. Its id
//! is `base + n0 * x` where `base = v` for the configuration model and
//! `v + (d + 1) a` for the lift model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::HalfEdge;
use crate::models::{lift_port, lift_port_target, pair_index, Model};
use crate::pipeline::PipelineConfig;
use crate::prg::{PermutationFamily, Seed, SignSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LiftedVertexLabel {
    pub v: usize,
    pub a: usize,
    pub x: u64,
}

/// A neighbor with the port it is reached through on its own side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PortedNeighbor {
    pub label: LiftedVertexLabel,
    pub id: usize,
    pub port: usize,
}

pub struct Oracle {
    cfg: PipelineConfig,
    perms: Vec<Box<dyn PermutationFamily>>,
    signs: Box<dyn SignSource>,
}

struct BaseStep {
    neighbor: HalfEdge,
    edge: usize,
    is_tail: bool,
}

impl Oracle {
    /// `base_seed` and `sign_seed` are the seeds a pipeline run reports for
    /// its base graph and its signings.
    pub fn new(cfg: &PipelineConfig, base_seed: &Seed, sign_seed: &Seed) -> Result<Self> {
        let signs = cfg.sign_source(sign_seed)?;
        Self::with_signs(cfg, base_seed, signs)
    }

    pub fn with_signs(cfg: &PipelineConfig, base_seed: &Seed, signs: Box<dyn SignSource>) -> Result<Self> {
        cfg.validate()?;
        if cfg.t >= 64 {
            return Err(Error::ConfigMismatch(format!("t = {} lifts do not fit a 64-bit label", cfg.t)));
        }
        Ok(Oracle {
            cfg: cfg.clone(),
            perms: cfg.base_spec().permutations(base_seed)?,
            signs,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn vertex_count(&self) -> usize {
        self.cfg.final_vertices()
    }

    fn check(&self, u: &LiftedVertexLabel) -> Result<()> {
        let (vmax, amax) = match self.cfg.base {
            Model::Configuration => (self.cfg.n0, 1),
            Model::Lift => (self.cfg.d + 1, self.cfg.n0 / (self.cfg.d + 1)),
        };
        if u.v >= vmax || u.a >= amax || (self.cfg.t < 64 && u.x >> self.cfg.t != 0) {
            return Err(Error::LabelOutOfRange(format!("{u:?}")));
        }
        Ok(())
    }

    pub fn encode(&self, u: &LiftedVertexLabel) -> Result<usize> {
        self.check(u)?;
        let base = match self.cfg.base {
            Model::Configuration => u.v,
            Model::Lift => u.v + (self.cfg.d + 1) * u.a,
        };
        Ok(base + self.cfg.n0 * u.x as usize)
    }

    pub fn decode(&self, id: usize) -> Result<LiftedVertexLabel> {
        if id >= self.vertex_count() {
            return Err(Error::LabelOutOfRange(format!("vertex {id} of {}", self.vertex_count())));
        }
        let (base, x) = (id % self.cfg.n0, (id / self.cfg.n0) as u64);
        Ok(match self.cfg.base {
            Model::Configuration => LiftedVertexLabel { v: base, a: 0, x },
            Model::Lift => LiftedVertexLabel {
                v: base % (self.cfg.d + 1),
                a: base / (self.cfg.d + 1),
                x,
            },
        })
    }

    fn base_step(&self, base: usize, port: usize) -> BaseStep {
        let d = self.cfg.d;
        match self.cfg.base {
            Model::Configuration => {
                let pi = &self.perms[0];
                let j = pi.inverse(HalfEdge::new(base, port).index(d));
                BaseStep {
                    neighbor: HalfEdge::from_index(pi.forward(j ^ 1), d),
                    edge: j / 2,
                    is_tail: j % 2 == 0,
                }
            }
            Model::Lift => {
                let (b, nl) = (d + 1, self.cfg.n0 / (d + 1));
                let (u, i) = (base % b, base / b);
                let w = lift_port_target(u, port);
                if u < w {
                    let p = pair_index(d, u, w);
                    let j = self.perms[p].forward(i);
                    BaseStep {
                        neighbor: HalfEdge::new(w + b * j, lift_port(w, u)),
                        edge: p * nl + i,
                        is_tail: true,
                    }
                } else {
                    let p = pair_index(d, w, u);
                    let j = self.perms[p].inverse(i);
                    BaseStep {
                        neighbor: HalfEdge::new(w + b * j, lift_port(w, u)),
                        edge: p * nl + j,
                        is_tail: false,
                    }
                }
            }
        }
    }

    /// Sign index read at each stage `1..=t` by the edge at `(id, port)`.
    pub fn sign_indices(&self, id: usize, port: usize) -> Result<Vec<u64>> {
        Ok(self.walk(id, port)?.1)
    }

    fn walk(&self, id: usize, port: usize) -> Result<(PortedNeighbor, Vec<u64>)> {
        if id >= self.vertex_count() {
            return Err(Error::LabelOutOfRange(format!("vertex {id}")));
        }
        if port >= self.cfg.d {
            return Err(Error::LabelOutOfRange(format!("port {port} of degree {}", self.cfg.d)));
        }
        let n0 = self.cfg.n0;
        let m0 = self.cfg.base_edges() as u64;
        let x = (id / n0) as u64;
        let step = self.base_step(id % n0, port);
        let mut y = 0u64;
        let mut indices = Vec::with_capacity(self.cfg.t);
        for i in 1..=self.cfg.t {
            let low = (1u64 << (i - 1)) - 1;
            let tail_bits = if step.is_tail { x & low } else { y & low };
            let index = self.cfg.stage_offset(i) + step.edge as u64 + m0 * tail_bits;
            indices.push(index);
            let xi = x >> (i - 1) & 1;
            let yi = if self.signs.sign(index) == 1 { xi } else { 1 - xi };
            y |= yi << (i - 1);
        }
        let nid = step.neighbor.vertex + n0 * y as usize;
        Ok((
            PortedNeighbor {
                label: self.decode(nid)?,
                id: nid,
                port: step.neighbor.port,
            },
            indices,
        ))
    }

    pub fn neighbor_by_port(&self, u: &LiftedVertexLabel, port: usize) -> Result<LiftedVertexLabel> {
        Ok(self.walk(self.encode(u)?, port)?.0.label)
    }

    pub fn neighbors(&self, u: &LiftedVertexLabel) -> Result<Vec<LiftedVertexLabel>> {
        let id = self.encode(u)?;
        (0..self.cfg.d).map(|p| Ok(self.walk(id, p)?.0.label)).collect()
    }

    /// Neighbor ids of vertex `id` in port order.
    pub fn neighbor_ids(&self, id: usize) -> Result<Vec<usize>> {
        (0..self.cfg.d).map(|p| Ok(self.walk(id, p)?.0.id)).collect()
    }

    pub fn ported_neighbor(&self, id: usize, port: usize) -> Result<PortedNeighbor> {
        Ok(self.walk(id, port)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{materialize, SignMode};
    use crate::prg::{FlippedSign, StreamSigns};

    fn agrees(cfg: &PipelineConfig, s1: &Seed, s2: &Seed) {
        let g = materialize(cfg, s1, s2).unwrap();
        let o = Oracle::new(cfg, s1, s2).unwrap();
        assert_eq!(o.vertex_count(), g.vertex_count());
        for id in 0..g.vertex_count() {
            assert_eq!(o.encode(&o.decode(id).unwrap()).unwrap(), id);
            for p in 0..cfg.d {
                let h = g.neighbor(id, p);
                let q = o.ported_neighbor(id, p).unwrap();
                assert_eq!((q.id, q.port), (h.vertex, h.port), "vertex {id} port {p}");
            }
        }
    }

    #[test]
    fn zero_lifts_match_base() {
        let c = PipelineConfig::new(64, 3, 0.3).unwrap();
        agrees(&c, &Seed::from_u64(1), &Seed::from_u64(2));
    }

    #[test]
    fn matches_materialized_graphs() {
        for (d, base, n0) in [(3, Model::Configuration, 16), (4, Model::Lift, 20), (7, Model::Configuration, 8)] {
            for mode in [SignMode::Reuse, SignMode::Fresh] {
                let mut c = PipelineConfig::with_base(n0 << 4, d, 1.0, n0, base).unwrap();
                c.sign_mode = mode;
                agrees(&c, &Seed::from_u64(d as u64), &Seed::from_u64(99));
            }
        }
    }

    #[test]
    fn flipping_one_sign_is_local() {
        let c = PipelineConfig::new(512, 3, 0.3).unwrap();
        let (s1, s2) = (Seed::from_u64(4), Seed::from_u64(5));
        let a = Oracle::new(&c, &s1, &s2).unwrap();
        let flip = 17;
        let b = Oracle::with_signs(&c, &s1, Box::new(FlippedSign { inner: StreamSigns::new(&s2), index: flip })).unwrap();
        for id in 0..a.vertex_count() {
            for p in 0..3 {
                let idx = a.sign_indices(id, p).unwrap();
                if !idx.contains(&flip) {
                    assert_eq!(a.ported_neighbor(id, p).unwrap(), b.ported_neighbor(id, p).unwrap());
                }
            }
        }
        let changed = (0..a.vertex_count())
            .filter(|&id| a.neighbor_ids(id).unwrap() != b.neighbor_ids(id).unwrap())
            .count();
        assert!(changed > 0);
    }

    #[test]
    fn rejects_bad_labels() {
        let c = PipelineConfig::new(128, 3, 0.3).unwrap();
        let o = Oracle::new(&c, &Seed::from_u64(1), &Seed::from_u64(2)).unwrap();
        assert!(o.decode(128).is_err());
        assert!(o.encode(&LiftedVertexLabel { v: 64, a: 0, x: 0 }).is_err());
        assert!(o.encode(&LiftedVertexLabel { v: 0, a: 0, x: 2 }).is_err());
        assert!(o.ported_neighbor(0, 3).is_err());
    }
}
