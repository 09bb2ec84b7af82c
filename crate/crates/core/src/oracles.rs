//! Brute-force reference implementations and seeded instance generators.
//!
//! Everything here is deliberately naive: exhaustive subset search, BFS over
//! the full reconfiguration graph, and plain rejection sampling.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gadgets::CnfInstance;
use crate::graph::{Decomposition, Graph, Vertex};
use crate::recolour::{Colouring, RecolourPath, RecolourStep};

/// Limits beyond which the oracles refuse to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices_for_subset_search: usize,
    pub max_state_count_for_reconfig_bfs: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices_for_subset_search: 22,
            max_state_count_for_reconfig_bfs: 5_000_000,
        }
    }
}

const MAX_REGULAR_REJECTIONS: usize = 10_000;

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbours(v).iter().fold(0u64, |m, &w| m | (1 << w)))
        .collect()
}

/// Whether the subgraph induced by `set` peels down to nothing removing
/// vertices of degree at most `d`.
fn mask_is_degenerate(adj: &[u64], mut set: u64, d: usize) -> bool {
    while set != 0 {
        let mut rest = set;
        let mut removed = false;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (adj[v] & set).count_ones() as usize <= d {
                set &= !(1 << v);
                removed = true;
            }
        }
        if !removed {
            return false;
        }
    }
    true
}

/// First subset `A` in ascending bitmask order (bit `i` = vertex `i`) that is
/// independent with `G - A` being `(k-2)`-degenerate.
pub fn brute_decompose(g: &Graph, k: usize) -> Result<Option<Decomposition>> {
    brute_decompose_with(g, k, &OracleBudget::default())
}

pub fn brute_decompose_with(
    g: &Graph,
    k: usize,
    budget: &OracleBudget,
) -> Result<Option<Decomposition>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 2, got {k}"
        )));
    }
    let n = g.n();
    if n > budget.max_vertices_for_subset_search.min(63) {
        return Err(Error::Budget(format!(
            "{n} vertices exceed the subset-search budget of {}",
            budget.max_vertices_for_subset_search
        )));
    }
    let adj = adjacency_masks(g);
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    for a in 0..=full {
        let mut bits = a;
        let mut independent = true;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if adj[v] & a != 0 {
                independent = false;
                break;
            }
        }
        if independent && mask_is_degenerate(&adj, full & !a, k - 2) {
            let in_a: Vec<bool> = (0..n).map(|v| a >> v & 1 == 1).collect();
            return Ok(Some(Decomposition::from_membership(&in_a, k)));
        }
    }
    Ok(None)
}

/// Shortest recolouring path by BFS over all proper `k`-colourings.
pub fn brute_reconfig_path(
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    beta: &Colouring,
) -> Result<Option<RecolourPath>> {
    brute_reconfig_path_with(g, k, alpha, beta, &OracleBudget::default())
}

pub fn brute_reconfig_path_with(
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    beta: &Colouring,
    budget: &OracleBudget,
) -> Result<Option<RecolourPath>> {
    for c in [alpha, beta] {
        if c.k != k {
            return Err(Error::InvalidParameter(format!(
                "colouring has {} colours, expected {k}",
                c.k
            )));
        }
        c.check_proper(g)?;
    }
    let n = g.n();
    let states = (k as u64)
        .checked_pow(n as u32)
        .filter(|&s| s <= budget.max_state_count_for_reconfig_bfs);
    let states = states.ok_or_else(|| {
        Error::Budget(format!(
            "{k}^{n} colourings exceed the BFS budget of {}",
            budget.max_state_count_for_reconfig_bfs
        ))
    })? as usize;
    let mut place = vec![1usize; n];
    for v in 1..n {
        place[v] = place[v - 1] * k;
    }
    let encode = |c: &[usize]| {
        c.iter()
            .zip(&place)
            .map(|(&x, &p)| (x - 1) * p)
            .sum::<usize>()
    };
    let start = encode(&alpha.colour);
    let goal = encode(&beta.colour);
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; states];
    parent[start] = start as u32;
    let mut queue = VecDeque::from([start]);
    let mut col = vec![0usize; n];
    while let Some(code) = queue.pop_front() {
        if code == goal {
            break;
        }
        for (v, slot) in col.iter_mut().enumerate() {
            *slot = code / place[v] % k + 1;
        }
        for v in 0..n {
            for to in 1..=k {
                if to == col[v] || g.neighbours(v).iter().any(|&w| col[w] == to) {
                    continue;
                }
                let next = code + (to - 1) * place[v] - (col[v] - 1) * place[v];
                if parent[next] == UNSEEN {
                    parent[next] = code as u32;
                    queue.push_back(next);
                }
            }
        }
    }
    if parent[goal] == UNSEEN {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut cur = goal;
    while cur != start {
        let prev = parent[cur] as usize;
        let v = (0..n)
            .find(|&v| cur / place[v] % k != prev / place[v] % k)
            .expect("consecutive states differ");
        steps.push(RecolourStep {
            v,
            to: cur / place[v] % k + 1,
        });
        cur = prev;
    }
    steps.reverse();
    Ok(Some(RecolourPath { steps }))
}

/// First assignment in ascending bitmask order (bit `i` = variable `i + 1`)
/// making exactly one variable true in every clause.
pub fn brute_1_in_k_sat(inst: &CnfInstance) -> Result<Option<Vec<bool>>> {
    brute_1_in_k_sat_with(inst, &OracleBudget::default())
}

pub fn brute_1_in_k_sat_with(
    inst: &CnfInstance,
    budget: &OracleBudget,
) -> Result<Option<Vec<bool>>> {
    let n = inst.num_vars;
    if n > budget.max_vertices_for_subset_search.min(63) {
        return Err(Error::Budget(format!(
            "{n} variables exceed the subset-search budget"
        )));
    }
    let clause_masks: Vec<u64> = inst
        .clauses
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &x| m | 1 << (x - 1)))
        .collect();
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    for bits in 0..=full {
        if clause_masks.iter().all(|&c| (c & bits).count_ones() == 1) {
            return Ok(Some((0..n).map(|i| bits >> i & 1 == 1).collect()));
        }
    }
    Ok(None)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish simple `k`-regular graph by the configuration model with full
/// rejection of loops and parallel edges.
pub fn gen_random_regular(k: usize, n: usize, seed: u64) -> Result<Graph> {
    if n <= k || !(n * k).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "no {k}-regular graph on {n} vertices (need n > k and n*k even)"
        )));
    }
    let mut r = rng(seed);
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::with_capacity(k); n];
    'attempt: for _ in 0..MAX_REGULAR_REJECTIONS {
        points.shuffle(&mut r);
        adj.iter_mut().for_each(Vec::clear);
        let mut edges = Vec::with_capacity(n * k / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || adj[u].contains(&v) {
                continue 'attempt;
            }
            adj[u].push(v);
            adj[v].push(u);
            edges.push((u, v));
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::Budget(format!(
        "no simple {k}-regular graph on {n} vertices after {MAX_REGULAR_REJECTIONS} rejections"
    )))
}

/// Erdős–Rényi `G(n, p)` with a degree cap: candidate pairs are visited in a
/// random order and an edge is kept only if both ends are below the cap.
pub fn gen_random_bounded(n: usize, max_degree: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs: Vec<(Vertex, Vertex)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(&mut r);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (u, v) in pairs {
        if r.random_bool(p) && deg[u] < max_degree && deg[v] < max_degree {
            deg[u] += 1;
            deg[v] += 1;
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("distinct pairs form a simple graph")
}

/// Connected graph of maximum degree at most `max_degree` (at least 2): a
/// random tree under the cap, relabelled at random, plus up to `extra`
/// random edges that respect the cap.
pub fn gen_connected_bounded(n: usize, max_degree: usize, extra: usize, seed: u64) -> Graph {
    assert!(
        max_degree >= 2 || n <= 2,
        "a connected graph needs degree 2 beyond two vertices"
    );
    let mut r = rng(seed);
    let mut label: Vec<Vertex> = (0..n).collect();
    label.shuffle(&mut r);
    let mut deg = vec![0; n];
    let mut edges = Vec::with_capacity(n + extra);
    for v in 1..n {
        let open: Vec<Vertex> = (0..v).filter(|&u| deg[u] < max_degree).collect();
        let u = open[r.random_range(0..open.len())];
        deg[u] += 1;
        deg[v] += 1;
        edges.push((label[u], label[v]));
    }
    let mut ldeg = vec![0; n];
    let mut present: std::collections::HashSet<(Vertex, Vertex)> = std::collections::HashSet::new();
    for &(u, v) in &edges {
        ldeg[u] += 1;
        ldeg[v] += 1;
        present.insert((u.min(v), u.max(v)));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = r.random_range(0..n);
            let v = r.random_range(0..n);
            let key = (u.min(v), u.max(v));
            if u != v && ldeg[u] < max_degree && ldeg[v] < max_degree && present.insert(key) {
                ldeg[u] += 1;
                ldeg[v] += 1;
                edges.push(key);
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generator keeps the graph simple")
}

/// Large sparse graph of maximum degree at most `d`: `d` stubs per vertex
/// paired at random, dropping loops and repeated pairs. Components that are
/// complete on `d + 1` vertices lose one edge.
pub fn gen_sparse_bounded(n: usize, d: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    points.shuffle(&mut r);
    let mut edges: Vec<(Vertex, Vertex)> = points
        .chunks_exact(2)
        .filter(|p| p[0] != p[1])
        .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let g = Graph::from_edges(n, &edges).expect("deduplicated edges");
    let (_, offenders) = crate::graph::components_and_forbidden_clique_check(&g, d);
    if offenders.is_empty() {
        return g;
    }
    let comps = g.components();
    let mut drop = std::collections::HashSet::new();
    for i in offenders {
        let c = &comps[i];
        drop.insert((c[0], c[1]));
    }
    edges.retain(|e| !drop.contains(e));
    Graph::from_edges(n, &edges).expect("subset of a simple graph")
}

/// Random proper colouring with colours `1..=k`: vertices in random order,
/// each taking a uniformly random colour unused by its coloured neighbours.
/// Restarts on dead ends, up to 100 attempts.
pub fn gen_random_colouring(g: &Graph, k: usize, seed: u64) -> Result<Colouring> {
    let mut r = rng(seed);
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    'attempt: for _ in 0..100 {
        order.shuffle(&mut r);
        let mut colour = vec![0usize; n];
        for &v in &order {
            let open: Vec<usize> = (1..=k)
                .filter(|&c| g.neighbours(v).iter().all(|&w| colour[w] != c))
                .collect();
            if open.is_empty() {
                continue 'attempt;
            }
            colour[v] = open[r.random_range(0..open.len())];
        }
        return Ok(Colouring::new(k, colour));
    }
    Err(Error::Budget(format!(
        "no proper {k}-colouring found by random greedy"
    )))
}
