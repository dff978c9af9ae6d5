//! Monte Carlo spread of one seed set, with the activation steps of a single run.
use lt_influence::generate::random_lt_graph;
use lt_influence::montecarlo::{estimate_sigma, simulate_activation};
use lt_influence::SeedSet;

fn main() -> lt_influence::Result<()> {
    let g = random_lt_graph(30, 0.15, 42);
    let seeds = SeedSet::new([0, 5]);
    let trace = simulate_activation(&g, &seeds, 7)?;
    for (k, step) in trace.steps.iter().enumerate() {
        println!("step {k}: {step:?}");
    }
    let est = estimate_sigma(&g, &seeds, 20_000, 7)?;
    println!("sigma = {:.4} ± {:.4}", est.mean, est.half_width);
    Ok(())
}
