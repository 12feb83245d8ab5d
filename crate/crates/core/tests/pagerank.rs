use meshfab::fabric::{Fabric, FabricConfig};
use meshfab::kernel::{build_pagerank_iteration, pagerank_iteration_timesteps};
use meshfab::pagerank::{
    build_transition, fabric_pagerank, load_graph, random_graph, rank_report, reference_pagerank,
    reference_pagerank_detailed, synthetic_network, Graph, PageRankParams,
};

/// Dense power iteration straight from the adjacency lists.
fn dense_oracle(n: usize, edges: &[(usize, usize)], directed: bool, d: f64, iters: usize) -> Vec<f64> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        if !directed {
            adj[b][a] = true;
        }
    }
    let mut h = vec![vec![0.0; n]; n];
    for j in 0..n {
        let deg = adj[j].iter().filter(|&&x| x).count();
        for i in 0..n {
            h[i][j] = if deg == 0 {
                1.0 / n as f64
            } else if adj[j][i] {
                1.0 / deg as f64
            } else {
                0.0
            };
        }
    }
    let mut pr = vec![1.0 / n as f64; n];
    for _ in 0..iters {
        pr = (0..n)
            .map(|i| d * (0..n).map(|j| h[i][j] * pr[j]).sum::<f64>() + (1.0 - d) / n as f64)
            .collect();
    }
    pr
}

fn linf(a: &[f32], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| (x as f64 - y).abs()).fold(0.0, f64::max)
}

#[test]
fn three_cycle_is_uniform() {
    let g = Graph::unlabeled(3, [(0, 1), (1, 2), (2, 0)], true).unwrap();
    let cfg = FabricConfig::new(4, 4).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 10), &cfg).unwrap();
    for v in r.ranks {
        assert!((v as f64 - 1.0 / 3.0).abs() < 1e-6);
    }
}

#[test]
fn zero_damping_gives_teleport_only() {
    let g = Graph::unlabeled(4, [(0, 1), (0, 2), (0, 3)], false).unwrap();
    let cfg = FabricConfig::new(4, 5).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.0, 1), &cfg).unwrap();
    assert!(r.ranks.iter().all(|&v| v == 0.25));
}

#[test]
fn star_hub_ranks_first() {
    let edges: Vec<_> = (1..6).map(|i| (0, i)).collect();
    let g = Graph::unlabeled(6, edges.clone(), false).unwrap();
    let cfg = FabricConfig::new(8, 8).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 30), &cfg).unwrap();
    let oracle = dense_oracle(6, &edges, false, 0.85, 30);
    assert!(linf(&r.ranks, &oracle) < 1e-5);
    let scores: Vec<f64> = r.ranks.iter().map(|&v| v as f64).collect();
    assert_eq!(rank_report(&scores, g.labels(), 1)[0].node, 0);
}

#[test]
fn reference_matches_dense_oracle() {
    for seed in 0..5 {
        let g = random_graph(12, 0.25, seed % 2 == 0, seed).unwrap();
        let h = build_transition(&g);
        let r = reference_pagerank(&h, &PageRankParams::new(0.85, 40)).unwrap();
        let o = dense_oracle(12, g.edges(), g.is_directed(), 0.85, 40);
        for (a, b) in r.iter().zip(&o) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn four_nodes_three_iterations_take_thirty_steps() {
    let g = Graph::unlabeled(4, [(0, 1), (1, 2), (2, 3)], false).unwrap();
    let cfg = FabricConfig::new(5, 5).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 3), &cfg).unwrap();
    assert_eq!(r.timesteps, 30);
    assert_eq!(r.model_seconds, 30.0 / cfg.clock_hz);
}

#[test]
fn single_iteration_schedule_length() {
    let g = synthetic_network(8, 2, 1).unwrap();
    let h = build_transition(&g).to_matrix_f32();
    let cfg = FabricConfig::new(8, 9).unwrap();
    let pr = vec![0.125; 8];
    let sched = build_pagerank_iteration(&h, &pr, 0.85, &cfg).unwrap();
    assert_eq!(sched.expected_timesteps, 14);
    let out = Fabric::new(cfg.clone()).unwrap().run(&sched).unwrap();
    assert_eq!(out.timesteps, 14);
    assert_eq!(pagerank_iteration_timesteps(8, &cfg).unwrap(), 14);
}

#[test]
fn sixteen_nodes_twenty_iterations() {
    let g = synthetic_network(16, 2, 7).unwrap();
    let cfg = FabricConfig::new(16, 17).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 20), &cfg).unwrap();
    let oracle = dense_oracle(16, g.edges(), false, 0.85, 20);
    assert!(linf(&r.ranks, &oracle) < 1e-4);
    assert_eq!(r.timesteps, 20 * 22);
}

#[test]
fn tiled_run_matches_oracle() {
    let g = random_graph(20, 0.2, true, 11).unwrap();
    let cfg = FabricConfig::new(6, 7).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 15), &cfg).unwrap();
    let oracle = dense_oracle(20, g.edges(), true, 0.85, 15);
    assert!(linf(&r.ranks, &oracle) < 1e-4);
    assert_eq!(r.timesteps, 15 * pagerank_iteration_timesteps(20, &cfg).unwrap());
}

#[test]
fn relabeling_permutes_ranks() {
    let g = synthetic_network(12, 2, 3).unwrap();
    let perm: Vec<usize> = (0..12).map(|i| (i * 5) % 12).collect();
    let p = PageRankParams::new(0.85, 30);
    let base = reference_pagerank(&build_transition(&g), &p).unwrap();
    let moved = reference_pagerank(&build_transition(&g.relabeled(&perm).unwrap()), &p).unwrap();
    for i in 0..12 {
        assert!((base[i] - moved[perm[i]]).abs() < 1e-12);
    }
}

#[test]
fn changes_shrink_geometrically() {
    let g = random_graph(15, 0.3, false, 2).unwrap();
    let p = PageRankParams::new(0.85, 30);
    let r = reference_pagerank_detailed(&build_transition(&g), &p).unwrap();
    for w in r.deltas.windows(2) {
        assert!(w[1] <= 0.85 * w[0] + 1e-15);
    }
}

#[test]
fn ranks_sum_to_one() {
    let g = random_graph(10, 0.15, true, 4).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::new(0.85, 25), &FabricConfig::new(10, 11).unwrap()).unwrap();
    let total: f64 = r.ranks.iter().map(|&v| v as f64).sum();
    assert!((total - 1.0).abs() < 1e-5);
}

#[test]
fn edge_list_drives_fabric_run() {
    let g = load_graph("A\tB\nB\tC\nC\tA\nC\tD\n", false).unwrap();
    let r = fabric_pagerank(&g, &PageRankParams::default(), &FabricConfig::new(4, 5).unwrap()).unwrap();
    let scores: Vec<f64> = r.ranks.iter().map(|&v| v as f64).collect();
    assert_eq!(rank_report(&scores, g.labels(), 1)[0].label, "C");
}
