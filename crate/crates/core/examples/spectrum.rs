//! Adjacency spectra, Ramanujan verdicts and the Lanczos path for large graphs.

use nearram::graph::named;
use nearram::models::{Model, ModelSpec};
use nearram::prg::Seed;
use nearram::spectra::{adjacency_spectrum, decide_threshold, ramanujan_bound, spectral_report, SpectrumOptions};

fn main() -> nearram::Result<()> {
    let p = named::petersen();
    println!("petersen spectrum: {:?}", adjacency_spectrum(&p));
    let r = spectral_report(&p, 3, &SpectrumOptions::default());
    println!("lambda = {} vs 2 sqrt 2 = {:.6}: {:?}", r.lambda, ramanujan_bound(3), r.verdict);

    let g = ModelSpec::new(Model::Configuration, 6000, 3).sample(&Seed::from_u64(7))?;
    let opts = SpectrumOptions {
        eps: 0.2,
        dense_cap: 2000,
        ..SpectrumOptions::default()
    };
    let r = spectral_report(&g, 3, &opts);
    println!(
        "n=6000 via {:?}: lambda2 ~ {:.6}, lambda_n ~ {:.6}, residual {:.1e}, verdict {:?}",
        r.method, r.lambda2, r.lambda_n, r.residual, r.verdict
    );
    match decide_threshold(&g, 3, ramanujan_bound(3) + 0.2, &opts) {
        Ok(b) => println!("below 2 sqrt 2 + 0.2: {b}"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
