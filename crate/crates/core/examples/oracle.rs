//! Neighbor queries answered from seeds, checked against the materialized graph,
//! with per-query latency as the number of lifts grows.

use std::time::Instant;

use nearram::oracle::Oracle;
use nearram::pipeline::{materialize, PipelineConfig};
use nearram::prg::Seed;

fn main() -> nearram::Result<()> {
    let (s1, s2) = (Seed::from_u64(11), Seed::from_u64(12));
    let cfg = PipelineConfig::new(1024, 3, 0.3)?;
    let o = Oracle::new(&cfg, &s1, &s2)?;
    let g = materialize(&cfg, &s1, &s2)?;
    let agree = (0..g.vertex_count()).all(|v| {
        let mut a = o.neighbor_ids(v).unwrap();
        let mut b: Vec<usize> = (0..3).map(|p| g.neighbor(v, p).vertex).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    });
    println!("oracle agrees with the materialized graph on all {} vertices: {agree}", g.vertex_count());
    let v = o.decode(777)?;
    println!("vertex 777 = {v:?}, neighbors {:?}", o.neighbors(&v)?);

    for t in [4usize, 8, 16, 24, 32] {
        let cfg = PipelineConfig::new(64 << t, 3, 0.3)?;
        let o = Oracle::new(&cfg, &s1, &s2)?;
        let queries = 20_000;
        let start = Instant::now();
        let mut acc = 0usize;
        for i in 0..queries {
            let id = (i * 2_654_435_761usize) % o.vertex_count();
            acc ^= o.neighbor_ids(id)?[0];
        }
        let us = start.elapsed().as_secs_f64() * 1e6 / queries as f64;
        println!("t = {t:2}: {us:.2} us per vertex query ({acc})");
    }
    Ok(())
}
