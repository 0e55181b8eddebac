//! Neighborhood excess, bicycle-free radius and short cycles.

use nearram::graph::named;
use nearram::models::{Model, ModelSpec};
use nearram::prg::Seed;
use nearram::structure::{
    bicycle_free_radius, check_excess_bound, cycle_balls_disjoint, enumerate_short_cycles, neighborhood,
    worst_neighborhood,
};

fn main() -> nearram::Result<()> {
    let g = ModelSpec::new(Model::Configuration, 2000, 3).sample(&Seed::from_u64(1))?;
    let r = bicycle_free_radius(&g);
    println!("n=2000 cubic: bicycle-free radius {r:?}");
    let r = r.unwrap_or(1);
    println!("ball at 0: {:?}", neighborhood(&g, 0, r));
    println!("worst ball one step further: {:?}", worst_neighborhood(&g, r + 1));

    let cycles = enumerate_short_cycles(&g, 2 * r);
    println!("{} cycles of length <= {}", cycles.len(), 2 * r);
    println!("their radius-{r} balls pairwise disjoint: {}", cycle_balls_disjoint(&g, &cycles, r));

    let k4 = named::complete(4);
    println!("K4 against the excess bound at r=1: {:?}", check_excess_bound(&k4, 1).verdict);
    Ok(())
}
