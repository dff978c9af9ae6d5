//! Exact spread by recursion and by path enumeration, plus the best pair.
use lt_influence::exact::{optimal_seed_exhaustive, sigma_set_exact, sigma_via_paths};
use lt_influence::{InfluenceGraph, SeedSet};

fn main() -> lt_influence::Result<()> {
    let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5), (2, 0, 0.5)])?;
    let a0 = SeedSet::new([0]);
    println!("recursion: {}", sigma_set_exact(&g, &a0)?);
    println!("paths:     {}", sigma_via_paths(&g, &a0)?);

    let g = lt_influence::generate::random_lt_graph(9, 0.4, 1);
    let (best, value) = optimal_seed_exhaustive(&g, 2)?;
    println!("best pair on a random 9-node graph: {best} with sigma {value:.6}");
    Ok(())
}
