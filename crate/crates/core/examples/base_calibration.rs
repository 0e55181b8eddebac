//! Monte Carlo calibration of the base-graph search: how often a candidate
//! passes each check, and how often a budget of 50 candidates suffices.

use rayon::prelude::*;

use nearram::models::{trial_seed, Model};
use nearram::pipeline::{search_base, PipelineConfig};
use nearram::prg::Seed;
use nearram::spectra::{spectral_report, SpectrumOptions};
use nearram::structure::bicycle_free_radius;

fn main() -> nearram::Result<()> {
    let cfg = PipelineConfig::new(4096, 3, 0.3)?;
    let spec = cfg.base_spec();
    let root = Seed::from_hex("ca1b")?;
    let draws = 4000u64;
    let stats: Vec<(bool, Option<usize>, f64)> = (0..draws)
        .into_par_iter()
        .map(|j| {
            let s = trial_seed(&root, j);
            let g = spec.sample(&s).unwrap();
            if !g.is_simple() {
                return (false, None, 0.0);
            }
            let l = spectral_report(&g, 3, &SpectrumOptions::default()).lambda;
            (true, bicycle_free_radius(&g), l)
        })
        .collect();
    let simple = stats.iter().filter(|s| s.0).count();
    println!("n0=64 d=3: simple {simple}/{draws}");
    for r0 in 1..=3 {
        let ok = stats.iter().filter(|s| s.0 && s.1.is_some_and(|r| r >= r0)).count();
        let both = stats
            .iter()
            .filter(|s| s.0 && s.1.is_some_and(|r| r >= r0) && s.2 <= cfg.threshold())
            .count();
        let p = both as f64 / draws as f64;
        println!(
            "r0 = {r0}: radius ok {ok}, radius and spectrum ok {both}, P(50 candidates fail) = {:.2e}",
            (1.0 - p).powi(50)
        );
    }

    for (model, n0) in [(Model::Configuration, 64), (Model::Lift, 64)] {
        let mut c = PipelineConfig::with_base(4096, 3, 0.3, n0, model)?;
        c.r0 = cfg.r0;
        let found = (0..200u64).filter(|&k| search_base(&c, &Seed::from_u64(k)).is_ok()).count();
        println!("{model:?} base, r0 = {}: search succeeded {found}/200", c.r0);
    }
    Ok(())
}
