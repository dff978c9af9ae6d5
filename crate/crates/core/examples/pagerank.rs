//! PageRank of the reversed chain on a UISLT graph; scores follow alpha/beta.
use lt_influence::generate::random_uislt_params;
use lt_influence::graph::{build_uislt, make_transition_matrix};
use lt_influence::rank::pagerank;

fn main() -> lt_influence::Result<()> {
    let params = random_uislt_params(8, 3);
    let p = make_transition_matrix(&build_uislt(&params)?)?;
    let ranks = pagerank(&p, 1.0, 1e-13, 100_000)?;
    let z: f64 = params.alphas().iter().zip(params.betas()).map(|(a, b)| a / b).sum();
    for &(v, score) in &ranks.entries {
        let predicted = params.alphas()[v] / params.betas()[v] / z;
        println!("node {v}: pi {score:.8}  alpha/beta {predicted:.8}");
    }
    Ok(())
}
