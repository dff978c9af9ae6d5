//! On a 50-node UISLT graph the PageRank top-K is as good as Monte Carlo greedy.
use lt_influence::closed_form::sigma_uislt;
use lt_influence::generate::random_uislt_params;
use lt_influence::graph::{build_uislt, make_transition_matrix};
use lt_influence::optimize::greedy;
use lt_influence::rank::pagerank;
use lt_influence::{Evaluator, SeedSet};

fn main() -> lt_influence::Result<()> {
    let params = random_uislt_params(50, 9);
    let g = build_uislt(&params)?;
    let pr = pagerank(&make_transition_matrix(&g)?, 1.0, 1e-13, 1_000_000)?;
    let gr = greedy(&g, 10, Evaluator::monte_carlo(5_000, 1))?.chosen_order();
    println!("K\tpagerank\tgreedy");
    for k in 1..=10 {
        let a = sigma_uislt(&params, &pr.top(k))?.sigma;
        let b = sigma_uislt(&params, &SeedSet::new(gr[..k].iter().copied()))?.sigma;
        println!("{k}\t{a:.4}\t{b:.4}");
    }
    Ok(())
}
