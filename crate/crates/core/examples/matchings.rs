//! Raising the degree with perfect matchings costs at most one per matching.

use nearram::graph::named;
use nearram::pipeline::augment_with_matchings;
use nearram::prg::Seed;

fn main() -> nearram::Result<()> {
    let p = named::petersen();
    for m in 0..4 {
        let a = augment_with_matchings(&p, m, Some(&Seed::from_u64(m as u64)))?;
        println!(
            "petersen + {m} matchings: degree {}, lambda {:.4} -> {:.4} (bound {:.4}) holds: {}",
            a.graph.d(),
            a.lambda_before,
            a.lambda_after,
            a.lambda_before + m as f64,
            a.holds
        );
    }
    Ok(())
}
