//! Sample configuration-model and lift-of-K_{d+1} graphs, then condition on simplicity.

use nearram::models::{limiting_simple_probability, sample_simple, simplicity_rate, Model, ModelSpec};
use nearram::prg::Seed;

fn main() -> nearram::Result<()> {
    let seed = Seed::from_hex("c0ffee")?;

    let spec = ModelSpec::new(Model::Configuration, 500, 3);
    let g = spec.sample(&seed)?;
    println!(
        "configuration n=500 d=3: {} edges, loops: {}, simple: {}",
        g.edge_count(),
        g.has_loops(),
        g.is_simple()
    );

    let s = sample_simple(&spec, &seed, 10_000)?;
    println!("first simple sample after {} attempts (seed {})", s.attempts, s.seed);

    let lift = ModelSpec::new(Model::Lift, 4 * 16, 3).sample(&seed)?;
    println!("lift of K4, n_lift=16: {} vertices, simple: {}", lift.vertex_count(), lift.is_simple());

    let est = simplicity_rate(&spec, 2_000, &seed)?;
    println!(
        "simple rate {:.4} (95% CI {:.4}..{:.4}), limit exp(-(d^2-1)/4) = {:.4}",
        est.rate,
        est.ci_low,
        est.ci_high,
        limiting_simple_probability(3)
    );
    Ok(())
}
