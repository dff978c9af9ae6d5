//! Cross-checks between independent evaluators.

use lt_influence::closed_form::{
    forest_degrees, pairwise_influence_identities, sigma_degree_acyclic, sigma_uilt, sigma_uislt, sigma_uslt,
};
use lt_influence::exact::{optimal_seed_exhaustive, sigma_node_exact, sigma_set_exact, sigma_via_paths, NodeMask};
use lt_influence::generate::{random_lt_graph, random_tree, random_uilt_alphas, random_uslt_betas};
use lt_influence::graph::{build_uislt, normalize_adjacency, Adjacency, UisltParams};
use lt_influence::montecarlo::estimate_sigma;
use lt_influence::optimize::{evaluate_restricted, g1_sieving, greedy, SievingConfig};
use lt_influence::rank::build_g1;
use lt_influence::{Error, Evaluator, InfluenceGraph, SeedSet};

#[test]
fn three_cycle_by_every_method() {
    let g = InfluenceGraph::from_edges(3, [(0, 1, 0.5), (1, 2, 0.5), (2, 0, 0.5)]).unwrap();
    let a0 = SeedSet::new([0]);
    assert!((sigma_set_exact(&g, &a0).unwrap() - 1.75).abs() < 1e-15);
    assert!((sigma_via_paths(&g, &a0).unwrap() - 1.75).abs() < 1e-15);
    let mc = estimate_sigma(&g, &a0, 100_000, 3).unwrap();
    assert!((mc.mean - 1.75).abs() <= mc.half_width);
}

#[test]
fn recursion_matches_paths_on_random_graphs() {
    for seed in 0..40 {
        let g = random_lt_graph(6, 0.6, seed);
        for i in 0..6 {
            let a0 = SeedSet::new([i, (i + 2) % 6]);
            let r = sigma_set_exact(&g, &a0).unwrap();
            let p = sigma_via_paths(&g, &a0).unwrap();
            assert!((r - p).abs() < 1e-10, "seed {seed}: {r} vs {p}");
        }
    }
}

#[test]
fn uslt_and_uilt_forms_agree_with_general_closed_form() {
    for seed in 0..20 {
        let n = 5;
        let betas = random_uslt_betas(n, seed);
        let alphas = random_uilt_alphas(n, seed);
        let uslt = UisltParams::new(vec![1.0; n], betas.clone()).unwrap();
        let uilt = UisltParams::new(alphas.clone(), vec![1.0; n]).unwrap();
        for a0 in [SeedSet::new([0]), SeedSet::new([1, 3]), SeedSet::new([0, 2, 4])] {
            let a = sigma_uslt(&betas, &a0).unwrap();
            assert!((a - sigma_uislt(&uslt, &a0).unwrap().sigma).abs() < 1e-10);
            assert!((a - sigma_set_exact(&build_uislt(&uslt).unwrap(), &a0).unwrap()).abs() < 1e-10);
            let b = sigma_uilt(&alphas, &a0).unwrap();
            assert!((b - sigma_uislt(&uilt, &a0).unwrap().sigma).abs() < 1e-10);
            assert!((b - sigma_set_exact(&build_uislt(&uilt).unwrap(), &a0).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn uslt_optimum_is_least_beta_nodes() {
    let betas = vec![0.2, 0.05, 0.15, 0.1, 0.25];
    let g = build_uislt(&UisltParams::new(vec![1.0; 5], betas).unwrap()).unwrap();
    assert_eq!(optimal_seed_exhaustive(&g, 2).unwrap().0, SeedSet::new([1, 3]));
}

#[test]
fn uilt_optimum_is_highest_alpha_nodes() {
    let alphas = vec![0.1, 0.3, 0.05, 0.25, 0.2];
    let g = build_uislt(&UisltParams::new(alphas, vec![1.0; 5]).unwrap()).unwrap();
    assert_eq!(optimal_seed_exhaustive(&g, 2).unwrap().0, SeedSet::new([1, 3]));
}

#[test]
fn tree_formula_matches_recursion() {
    for seed in 0..20 {
        let adj = random_tree(12, seed);
        let g = normalize_adjacency(&adj).unwrap();
        let degrees = forest_degrees(&g).unwrap();
        for i in 0..12 {
            assert_eq!(degrees[i], adj.degree(i));
            let closed = sigma_degree_acyclic(&g, i).unwrap();
            let exact = sigma_node_exact(&g, i, NodeMask::empty()).unwrap();
            assert!((closed - exact).abs() < 1e-10);
        }
    }
}

#[test]
fn tree_formula_rejects_cycles() {
    let g = normalize_adjacency(&Adjacency::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()).unwrap();
    assert!(matches!(sigma_degree_acyclic(&g, 0), Err(Error::CycleDetected(_))));
}

#[test]
fn pairwise_first_identity_always_holds() {
    for seed in 0..30 {
        let g = random_lt_graph(6, 0.5, seed);
        let r = pairwise_influence_identities(&g, 0, 1).unwrap();
        assert!(r.residuals[0].abs() < 1e-10, "seed {seed}: {:?}", r.residuals);
    }
}

#[test]
fn pairwise_identities_on_a_tree_edge() {
    // On a tree all influence between adjacent nodes uses the shared edge.
    let g = normalize_adjacency(&Adjacency::from_edges(5, &[(0, 1), (1, 2), (1, 3), (0, 4)]).unwrap()).unwrap();
    let r = pairwise_influence_identities(&g, 0, 1).unwrap();
    for x in r.residuals {
        assert!(x.abs() < 1e-12, "{:?}", r.residuals);
    }
}

#[test]
fn g1_head_is_the_single_best_seed() {
    for seed in 0..20 {
        let g = random_lt_graph(7, 0.5, seed);
        let g1 = build_g1(&g, Evaluator::exact()).unwrap();
        let (best, value) = optimal_seed_exhaustive(&g, 1).unwrap();
        assert_eq!(g1.top(1), best);
        assert!((g1.entries[0].1 - value).abs() < 1e-12);
    }
}

#[test]
fn greedy_and_sieving_pick_a_disjoint_star_pair() {
    // Two stars: hub 0 with leaves 1..=3, hub 4 with leaves 5..=6.
    let g = normalize_adjacency(&Adjacency::from_edges(7, &[(0, 1), (0, 2), (0, 3), (4, 5), (4, 6)]).unwrap()).unwrap();
    let gr = greedy(&g, 2, Evaluator::exact()).unwrap();
    assert_eq!(gr.chosen, SeedSet::new([0, 4]));
    let sv = g1_sieving(&g, SievingConfig::new(2), Evaluator::exact()).unwrap();
    assert_eq!(sv.chosen, gr.chosen);
    assert!((sv.sigma - gr.sigma).abs() < 1e-12);
    assert!((gr.sigma - sigma_set_exact(&g, &gr.chosen).unwrap()).abs() < 1e-12);
}

#[test]
fn restricted_influence_exact_vs_monte_carlo() {
    let g = random_lt_graph(8, 0.5, 11);
    let x = SeedSet::new([0, 1]);
    for i in 2..8 {
        let e = evaluate_restricted(&g, &x, i, Evaluator::exact()).unwrap();
        let m = evaluate_restricted(&g, &x, i, Evaluator::monte_carlo(200_000, 5)).unwrap();
        assert!((e - m).abs() < 0.02, "node {i}: exact {e} mc {m}");
        assert!(e <= sigma_node_exact(&g, i, NodeMask::empty()).unwrap() + 1e-12);
    }
}
