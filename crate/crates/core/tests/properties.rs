use std::collections::VecDeque;

use kdecomp::cubic::{decompose_subcubic, ReducibleGraph};
use kdecomp::formats::{
    parse_colouring, parse_graph, parse_path, path_to_json, write_colouring, write_graph,
};
use kdecomp::gadgets::{build_reduction, reduction_edge_count, CnfInstance};
use kdecomp::graph::{
    components_and_forbidden_clique_check, peel_degeneracy, reverse_bfs_order,
    verify_decomposition, Decomposition, Graph, Vertex,
};
use kdecomp::kdegen::{decompose_k_traced, greedy_from_order, probe_pair, PairKind};
use kdecomp::oracles::{
    brute_decompose, brute_reconfig_path, gen_connected_bounded, gen_random_bounded,
    gen_random_colouring, gen_random_regular, gen_sparse_bounded,
};
use kdecomp::recolour::{classify, compact, find_path, reverse_path, validate_path, Status};
use kdecomp::{batch::Execution, Error, VertexOrder};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=2 * n).prop_map(move |pairs| {
            let edges: Vec<(Vertex, Vertex)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Graph::from_edges_dedup(n, &edges)
        })
    })
}

fn arb_bounded(max_n: usize, max_degree: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.1f64..0.9, any::<u64>())
        .prop_map(move |(n, p, seed)| gen_random_bounded(n, max_degree, p, seed))
}

fn arb_connected(min_n: usize, max_n: usize, delta: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n, 0..=12usize, any::<u64>())
        .prop_map(move |(n, extra, seed)| gen_connected_bounded(n, delta, extra, seed))
        .prop_filter("maximum degree must equal the target", move |g| {
            g.max_degree() == delta
        })
}

fn no_forbidden_clique(g: &Graph, k: usize) -> bool {
    components_and_forbidden_clique_check(g, k).1.is_empty()
}

/// Independent re-check: `A` independent by an edge scan, `G[B]` peeled by
/// repeatedly deleting every vertex of degree at most `k - 2`.
fn rechecked(g: &Graph, k: usize, d: &Decomposition) -> bool {
    let mut in_a = vec![false; g.n()];
    for &v in &d.a_set {
        in_a[v] = true;
    }
    if g.edges().iter().any(|&(u, v)| in_a[u] && in_a[v]) {
        return false;
    }
    let mut alive: Vec<bool> = in_a.iter().map(|&a| !a).collect();
    loop {
        let low: Vec<Vertex> = g
            .vertices()
            .filter(|&v| alive[v] && g.neighbours(v).iter().filter(|&&w| alive[w]).count() + 2 <= k)
            .collect();
        if low.is_empty() {
            return !alive.contains(&true);
        }
        for v in low {
            alive[v] = false;
        }
    }
}

fn arb_partition(g: &Graph) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), g.n())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reverse_bfs_has_a_later_neighbour_everywhere_but_last(g in arb_graph(14), pick in any::<prop::sample::Index>()) {
        let start = pick.index(g.n());
        let order = reverse_bfs_order(&g, start).unwrap();
        let seq = &order.sequence;
        prop_assert_eq!(seq.last().copied(), Some(start));
        for (i, &v) in seq.iter().enumerate().take(seq.len() - 1) {
            prop_assert!(g.neighbours(v).iter().any(|w| seq[i + 1..].contains(w)));
        }
    }

    #[test]
    fn peeling_order_is_degenerate(g in arb_graph(16)) {
        let (d, order) = peel_degeneracy(&g);
        prop_assert_eq!(order.len(), g.n());
        prop_assert!(order.check(&g, d).is_ok());
        if d > 0 {
            // the reported bound is attained
            prop_assert!(order.check(&g, d - 1).is_err());
        }
    }

    #[test]
    fn verification_matches_a_from_scratch_check(
        (g, side, k) in arb_graph(10).prop_flat_map(|g| {
            let s = arb_partition(&g);
            (Just(g), s, 3..=5usize)
        })
    ) {
        let d = Decomposition::from_membership(&side, k);
        prop_assert_eq!(verify_decomposition(&g, k, &d).unwrap(), rechecked(&g, k, &d));
    }

    #[test]
    fn graph_text_round_trips(g in arb_graph(20)) {
        let text = write_graph(&g);
        let again = parse_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&again), text);
        prop_assert_eq!(again.edges(), g.edges());
    }

    #[test]
    fn every_rule_shrinks_and_keeps_degree_three(n in 1..60usize, seed in any::<u64>()) {
        let g = gen_sparse_bounded(n, 3, seed);
        let mut wg = ReducibleGraph::new(&g).unwrap();
        while let Some(u) = wg.lowest_live() {
            let before = wg.live_count();
            wg.apply_first_rule(u).unwrap();
            prop_assert!(wg.live_count() < before);
            prop_assert!(wg.to_graph().max_degree() <= 3);
        }
    }

    #[test]
    fn subcubic_output_verifies(n in 1..80usize, seed in any::<u64>()) {
        let g = gen_sparse_bounded(n, 3, seed);
        let d = decompose_subcubic(&g).unwrap();
        prop_assert!(verify_decomposition(&g, 3, &d).unwrap());
    }

    #[test]
    fn greedy_is_maximal_and_starts_in_a(g in arb_bounded(14, 4), start in any::<prop::sample::Index>()) {
        let order = reverse_bfs_order(&g, start.index(g.n())).unwrap();
        let rest: Vec<Vertex> = g.vertices().filter(|v| !order.sequence.contains(v)).collect();
        let full = VertexOrder::from_sequence(&g, [order.sequence.clone(), rest].concat());
        let d = greedy_from_order(&g, &full, full.back_degree_bound.max(2) + 1).unwrap();
        let mut in_a = vec![false; g.n()];
        for &v in &d.a_set {
            in_a[v] = true;
        }
        prop_assert!(in_a[full.sequence[0]]);
        for &v in &d.b_set {
            prop_assert!(g.neighbours(v).iter().any(|&w| in_a[w]));
        }
    }

    #[test]
    fn decompositions_verify_and_refinement_shrinks(k in 3..=5usize, n in 6..40usize, seed in any::<u64>()) {
        let g = gen_random_regular(k, n + (n * k) % 2, seed);
        prop_assume!(g.is_ok());
        let g = g.unwrap();
        prop_assume!(no_forbidden_clique(&g, k));
        let (d, trace) = decompose_k_traced(&g, k, Execution::Sequential).unwrap();
        prop_assert!(verify_decomposition(&g, k, &d).unwrap());
        let refine_sizes: Vec<usize> = trace
            .events
            .iter()
            .filter(|e| e.case == "refine")
            .map(|e| e.component_size)
            .collect();
        prop_assert!(refine_sizes.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn strong_pairs_meet_every_component(g in arb_bounded(12, 4), pick in any::<prop::sample::Index>()) {
        let u = pick.index(g.n());
        let v = g.neighbours(u).iter().flat_map(|&y| g.neighbours(y).iter().copied()).find(|&z| z != u && !g.has_edge(u, z));
        prop_assume!(v.is_some());
        let v = v.unwrap();
        let witness = probe_pair(&g, u, v).unwrap();
        let common: Vec<Vertex> = g.neighbours(u).iter().copied().filter(|&z| g.has_edge(v, z)).collect();
        let mut seen = vec![false; g.n()];
        seen[u] = true;
        seen[v] = true;
        let mut every_component_hit = true;
        for s in g.vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in g.neighbours(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            every_component_hit &= comp.iter().any(|z| common.contains(z));
        }
        prop_assert_eq!(witness.kind == PairKind::Strong, every_component_hit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn paths_validate_and_reverse(g in arb_connected(3, 12, 3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let alpha = gen_random_colouring(&g, 4, s1).unwrap();
        let beta = gen_random_colouring(&g, 4, s2).unwrap();
        if let Some(path) = find_path(&g, 4, &alpha, &beta).unwrap() {
            prop_assert!(validate_path(&g, 4, &alpha, &path, &beta));
            prop_assert!(path.len() <= 20 * g.n() * g.n());
            let back = reverse_path(&path, &alpha).unwrap();
            prop_assert!(validate_path(&g, 4, &beta, &back, &alpha));
            prop_assert_eq!(reverse_path(&back, &beta).unwrap(), path);
        }
    }

    #[test]
    fn compaction_strictly_shrinks_the_top_class(delta in 3..=5usize, g in (6..14usize, any::<u64>()), seed in any::<u64>()) {
        let g = gen_connected_bounded(g.0, delta, 3 * g.0, g.1);
        prop_assume!(g.max_degree() == delta);
        let c = gen_random_colouring(&g, delta + 1, seed).unwrap();
        match compact(&g, &c, delta) {
            Ok((path, after)) => {
                prop_assert!(validate_path(&g, delta + 1, &c, &path, &after));
                prop_assert!(after.top_class().len() < c.top_class().len());
            }
            Err(Error::EmptyTopClass | Error::Frozen | Error::ForbiddenClique { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn status_classes_nest(g in arb_connected(2, 12, 4), seed in any::<u64>()) {
        let c = gen_random_colouring(&g, 5, seed).unwrap();
        let report = classify(&g, &c, 4).unwrap();
        for v in g.vertices() {
            let distinct: std::collections::BTreeSet<usize> = g.neighbours(v).iter().map(|&w| c.colour[w]).collect();
            let locked = distinct.len() == 4;
            prop_assert_eq!(report.status[v] == Status::Locked, locked);
        }
        prop_assert_eq!(report.l_set, c.top_class());
    }

    #[test]
    fn brute_paths_are_shortest_and_valid(g in arb_connected(2, 6, 3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let alpha = gen_random_colouring(&g, 4, s1).unwrap();
        let beta = gen_random_colouring(&g, 4, s2).unwrap();
        let brute = brute_reconfig_path(&g, 4, &alpha, &beta).unwrap();
        let ours = find_path(&g, 4, &alpha, &beta).unwrap();
        prop_assert_eq!(brute.is_some(), ours.is_some());
        if let (Some(b), Some(o)) = (brute, ours) {
            prop_assert!(validate_path(&g, 4, &alpha, &b, &beta));
            let differing = alpha.colour.iter().zip(&beta.colour).filter(|(x, y)| x != y).count();
            prop_assert!(differing <= b.len() && b.len() <= o.len());
        }
    }

    #[test]
    fn brute_decompositions_verify(g in arb_bounded(12, 4), k in 3..=5usize) {
        prop_assume!(g.max_degree() <= k);
        if let Some(d) = brute_decompose(&g, k).unwrap() {
            prop_assert!(verify_decomposition(&g, k, &d).unwrap());
        }
    }

    #[test]
    fn random_regular_graphs_are_regular(k in 1..=6usize, n in 2..40usize, seed in any::<u64>()) {
        if let Ok(g) = gen_random_regular(k, n, seed) {
            prop_assert!(g.vertices().all(|v| g.degree(v) == k));
            prop_assert_eq!(g.m() * 2, n * k);
            prop_assert_eq!(gen_random_regular(k, n, seed).unwrap().edges(), g.edges());
        }
    }

    #[test]
    fn gadget_reductions_are_deterministic(k in 3..=5usize, vars in 5..=8usize, m in 1..=10usize, seed in any::<u64>()) {
        use rand::{seq::index::sample, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let clauses: Vec<Vec<usize>> = (0..m).map(|_| sample(&mut r, vars, k).into_iter().map(|x| x + 1).collect()).collect();
        let inst = CnfInstance::new(vars, k, clauses).unwrap();
        let a = build_reduction(&inst, k).unwrap();
        let b = build_reduction(&inst, k).unwrap();
        prop_assert_eq!(a.graph.edges(), b.graph.edges());
        prop_assert_eq!(a.labels(), b.labels());
        prop_assert_eq!(a.graph.m(), reduction_edge_count(k, vars, m));
    }

    #[test]
    fn colourings_and_paths_round_trip(g in arb_connected(2, 12, 3), seed in any::<u64>()) {
        let alpha = gen_random_colouring(&g, 4, seed).unwrap();
        prop_assert_eq!(parse_colouring(&write_colouring(&alpha)).unwrap(), alpha.clone());
        let beta = gen_random_colouring(&g, 4, seed ^ 1).unwrap();
        if let Some(p) = find_path(&g, 4, &alpha, &beta).unwrap() {
            prop_assert_eq!(parse_path(&path_to_json(&p).to_string()).unwrap(), p);
        }
    }
}
