//! Closed-form spread on a complete UISLT graph, checked against the recursion.
use lt_influence::closed_form::sigma_uislt;
use lt_influence::exact::sigma_set_exact;
use lt_influence::graph::{build_uislt, UisltParams};
use lt_influence::SeedSet;

fn main() -> lt_influence::Result<()> {
    let params = UisltParams::new(vec![0.1, 0.25, 0.15, 0.2, 0.05], vec![1.0, 1.3, 1.2, 1.25, 1.1])?;
    let g = build_uislt(&params)?;
    for seeds in [vec![0], vec![1, 3], vec![0, 2, 4]] {
        let a0 = SeedSet::new(seeds);
        let ev = sigma_uislt(&params, &a0)?;
        println!("{a0}: closed form {:.10}, recursion {:.10}", ev.sigma, sigma_set_exact(&g, &a0)?);
    }
    Ok(())
}
