//! On a degree-normalized tree a single seed reaches degree + 1 nodes on average.
use lt_influence::closed_form::sigma_degree_acyclic;
use lt_influence::exact::{sigma_node_exact, NodeMask};
use lt_influence::generate::random_tree;
use lt_influence::graph::normalize_adjacency;

fn main() -> lt_influence::Result<()> {
    let adj = random_tree(10, 4);
    let g = normalize_adjacency(&adj)?;
    for i in 0..adj.node_count() {
        let exact = sigma_node_exact(&g, i, NodeMask::empty())?;
        println!("node {i}: degree {} closed form {} recursion {exact:.12}", adj.degree(i), sigma_degree_acyclic(&g, i)?);
    }
    Ok(())
}
