//! Base search followed by six signed 2-lifts with one reused signing seed.

use nearram::pipeline::{run_pipeline, PipelineConfig};
use nearram::prg::Seed;

fn main() -> nearram::Result<()> {
    let cfg = PipelineConfig::new(4096, 3, 0.3)?;
    let r = run_pipeline(&cfg, &Seed::from_hex("a1")?, &Seed::from_hex("b2")?)?;
    println!(
        "base seed {} after {} attempts ({} not simple)",
        r.base.seed, r.base.attempts, r.base.not_simple
    );
    for s in &r.stages {
        println!(
            "stage {}: n = {:5}, lambda = {:.6}, signed = {:?}, radius = {:?}, {:.2}s",
            s.stage, s.vertices, s.lambda, s.signed_lambda, s.radius, s.seconds
        );
    }
    println!(
        "final lambda {:.6} <= {:.6}: {} (signing attempts: {})",
        r.final_lambda, r.threshold, r.passed, r.s2_attempts
    );
    Ok(())
}
