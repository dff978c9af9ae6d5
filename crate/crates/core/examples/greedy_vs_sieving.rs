//! Greedy and G1-sieving on a degree-normalized scale-free graph.
use lt_influence::generate::barabasi_albert;
use lt_influence::graph::normalize_adjacency;
use lt_influence::optimize::{g1_sieving, greedy, SievingConfig};
use lt_influence::Evaluator;

fn main() -> lt_influence::Result<()> {
    let g = normalize_adjacency(&barabasi_albert(300, 2, 11)?)?;
    let ev = Evaluator::monte_carlo(2_000, 5);
    let k = 8;
    let gr = greedy(&g, k, ev)?;
    let sv = g1_sieving(&g, SievingConfig::new(k), ev)?;
    println!("greedy: {:?} sigma {:.2} calls {}", gr.chosen_order(), gr.sigma, gr.evaluator_calls);
    println!("sieve:  {:?} sigma {:.2} calls {}", sv.chosen_order(), sv.sigma, sv.evaluator_calls);
    for w in &sv.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
