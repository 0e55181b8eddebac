//! Hike enumeration, the signed trace identity and step classification.

use nearram::graph::{named, Graph};
use nearram::hikes::{
    classify_steps, enumerate_hikes, epsilon1, epsilon2, evaluate_bound, hike_violations, verify_expectation_identity,
    BoundParams, EnumerationOptions, HikeFilter,
};

fn main() -> nearram::Result<()> {
    let k4: &Graph = &named::complete(4);
    for ell in 1..=3 {
        let id = verify_expectation_identity(k4, ell)?;
        println!(
            "K4, l={ell}: sum over {} signings = {}, even special {}-hikes = {}, exact: {}",
            id.signings,
            id.trace_sum,
            ell + 1,
            id.even_special_hikes,
            id.exact
        );
    }

    let p: &Graph = &named::petersen();
    let e = enumerate_hikes(p, 4, HikeFilter::SingletonFree, EnumerationOptions { budget: None, collect: true })?;
    println!("Petersen 4-hikes: {:?}", e.counts);
    let hikes = e.hikes.unwrap_or_default();
    if let Some(h) = hikes.first() {
        let c = classify_steps(p, h);
        println!("first singleton-free hike {:?}: {:?}", h.arcs, c.labels);
        println!("stretches cut at r=1: {:?}", c.partition(1));
    }
    let bad: usize = hikes.iter().map(|h| hike_violations(p, h, 1).len()).sum();
    println!("violations over {} hikes: {bad}", hikes.len());

    println!("eps1(4096, 0.01, 64) = {:.10}", epsilon1(4096, 0.01, 64));
    println!("eps2(3, 64, 8) = {:.10}", epsilon2(3, 64, 8));
    let params = BoundParams { n: 4096, d: 3, ell: 64, r: 40, eta: 0.01, delta: 0.0, constant: 1.0 };
    println!("envelope: {:?}", evaluate_bound(&params)?);
    println!("r = 8 rejected: {}", evaluate_bound(&BoundParams { r: 8, ..params }).is_err());
    Ok(())
}
