//! Simple undirected graphs on dense vertex ids, traversal orders, degeneracy
//! peeling and decomposition checks.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A simple undirected graph with sorted adjacency lists.
///
/// Vertices are `0..n`. Every neighbour list is sorted ascending, so every
/// traversal that walks a list explores neighbours by increasing id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge {}-{}",
                    u.min(w[0]),
                    u.max(w[0])
                )));
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and repeated pairs.
    pub fn from_edges_dedup(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut m2 = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Graph { adj, m: m2 / 2 }
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph::from_edges(n, &edges).expect("complete graph is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.vertices() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// The subgraph induced by `vertices`, relabelled `0..vertices.len()` in
    /// the given order. Returns the subgraph and the map back to original ids.
    pub fn induced(&self, vertices: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); vertices.len()];
        let mut m2 = 0;
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if local[w] != usize::MAX {
                    adj[i].push(local[w]);
                }
            }
            adj[i].sort_unstable();
            m2 += adj[i].len();
        }
        (Graph { adj, m: m2 / 2 }, vertices.to_vec())
    }

    /// Connected components, each sorted ascending, listed by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components().len() == 1
    }

    /// Breadth-first discovery order from `start`, skipping vertices for
    /// which `blocked` returns true.
    pub fn bfs_order_avoiding(
        &self,
        start: Vertex,
        blocked: impl Fn(Vertex) -> bool,
    ) -> Vec<Vertex> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &self.adj[v] {
                if !seen[w] && !blocked(w) {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        order
    }
}

/// A sequence of distinct vertices together with the largest number of
/// earlier neighbours any of them has.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrder {
    pub sequence: Vec<Vertex>,
    pub back_degree_bound: usize,
}

impl VertexOrder {
    /// Wraps a sequence, computing its back-degree bound by a scan over the
    /// subgraph induced by the sequence.
    pub fn from_sequence(g: &Graph, sequence: Vec<Vertex>) -> Self {
        let back_degree_bound = back_degrees(g, &sequence).into_iter().max().unwrap_or(0);
        VertexOrder {
            sequence,
            back_degree_bound,
        }
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Checks that the sequence has no repeats and that every vertex has at
    /// most `bound` earlier neighbours.
    pub fn check(&self, g: &Graph, bound: usize) -> Result<()> {
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in self.sequence.iter().enumerate() {
            g.check_vertex(v)?;
            if pos[v] != usize::MAX {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v} repeated in order"
                )));
            }
            pos[v] = i;
        }
        for (i, &v) in self.sequence.iter().enumerate() {
            let earlier = g.neighbours(v).iter().filter(|&&w| pos[w] < i).count();
            if earlier > bound {
                return Err(Error::NotDegenerateOrder { bound, position: i });
            }
        }
        Ok(())
    }
}

/// Number of earlier neighbours (within the sequence) of each position.
pub fn back_degrees(g: &Graph, sequence: &[Vertex]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &v) in sequence.iter().enumerate() {
        pos[v] = i;
    }
    sequence
        .iter()
        .enumerate()
        .map(|(i, &v)| g.neighbours(v).iter().filter(|&&w| pos[w] < i).count())
        .collect()
}

/// The component of `start` in reverse breadth-first discovery order.
///
/// Every vertex except the last one (which is `start`) has its BFS parent
/// later in the order, so if the component has maximum degree at most `k`
/// and `start` has degree at most `k - 1`, the order is `(k-1)`-degenerate.
pub fn reverse_bfs_order(g: &Graph, start: Vertex) -> Result<VertexOrder> {
    g.check_vertex(start)?;
    let mut seq = g.bfs_order_avoiding(start, |_| false);
    seq.reverse();
    Ok(VertexOrder::from_sequence(g, seq))
}

/// Iterated minimum-degree removal. Returns the degeneracy and the reversed
/// removal sequence, which is a degeneracy-degenerate order.
pub fn peel_degeneracy(g: &Graph) -> (usize, VertexOrder) {
    let n = g.n();
    if n == 0 {
        return (
            0,
            VertexOrder {
                sequence: Vec::new(),
                back_degree_bound: 0,
            },
        );
    }
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let maxd = g.max_degree();
    let mut buckets: Vec<Vec<Vertex>> = vec![Vec::new(); maxd + 1];
    for v in (0..n).rev() {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    while removal.len() < n {
        // stale entries are skipped lazily
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().unwrap();
            if !removed[v] && deg[v] == low {
                break v;
            }
        };
        removed[v] = true;
        degeneracy = degeneracy.max(deg[v]);
        removal.push(v);
        for &w in g.neighbours(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                if deg[w] < low {
                    low = deg[w];
                }
            }
        }
    }
    removal.reverse();
    (
        degeneracy,
        VertexOrder {
            sequence: removal,
            back_degree_bound: degeneracy,
        },
    )
}

/// A partition `(A, B)` of the vertex set, meant to satisfy: `A` independent
/// and `G[B]` is `(k-2)`-degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub a_set: Vec<Vertex>,
    pub b_set: Vec<Vertex>,
    pub k: usize,
}

impl Decomposition {
    /// Sorts both sides.
    pub fn new(mut a_set: Vec<Vertex>, mut b_set: Vec<Vertex>, k: usize) -> Self {
        a_set.sort_unstable();
        b_set.sort_unstable();
        Decomposition { a_set, b_set, k }
    }

    /// Builds the decomposition from a per-vertex membership flag.
    pub fn from_membership(in_a: &[bool], k: usize) -> Self {
        let (a, b): (Vec<Vertex>, Vec<Vertex>) = (0..in_a.len()).partition(|&v| in_a[v]);
        Decomposition {
            a_set: a,
            b_set: b,
            k,
        }
    }

    /// Per-vertex membership in `A`; fails if the two sides do not partition
    /// `0..n`.
    pub fn membership(&self, n: usize) -> Result<Vec<bool>> {
        let mut seen = vec![0u8; n];
        let mut in_a = vec![false; n];
        for (side, set) in [(1u8, &self.a_set), (2u8, &self.b_set)] {
            for &v in set.iter() {
                if v >= n {
                    return Err(Error::NotAPartition(format!("vertex {v} out of range")));
                }
                if seen[v] != 0 {
                    return Err(Error::NotAPartition(format!("vertex {v} listed twice")));
                }
                seen[v] = side;
                in_a[v] = side == 1;
            }
        }
        if let Some(v) = seen.iter().position(|&s| s == 0) {
            return Err(Error::NotAPartition(format!("vertex {v} missing")));
        }
        Ok(in_a)
    }
}

/// True iff `A` is independent and `G[B]` is `(k-2)`-degenerate.
///
/// Input that is not a partition of the vertex set is an error, not `false`.
pub fn verify_decomposition(g: &Graph, k: usize, d: &Decomposition) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 2, got {k}"
        )));
    }
    let in_a = d.membership(g.n())?;
    for &v in &d.a_set {
        if g.neighbours(v).iter().any(|&w| in_a[w]) {
            return Ok(false);
        }
    }
    let (gb, _) = g.induced(&d.b_set);
    let (deg, _) = peel_degeneracy(&gb);
    Ok(deg <= k - 2)
}

/// Like [`verify_decomposition`] but explains the first violation found.
pub fn explain_decomposition(g: &Graph, k: usize, d: &Decomposition) -> Result<()> {
    let in_a = d.membership(g.n())?;
    for &v in &d.a_set {
        if let Some(&w) = g.neighbours(v).iter().find(|&&w| in_a[w]) {
            return Err(Error::InvalidDecomposition(format!(
                "A contains the edge {v}-{w}"
            )));
        }
    }
    let (gb, _) = g.induced(&d.b_set);
    let (deg, _) = peel_degeneracy(&gb);
    if deg + 2 > k {
        return Err(Error::InvalidDecomposition(format!(
            "G[B] is {deg}-degenerate, need at most {}",
            k.saturating_sub(2)
        )));
    }
    Ok(())
}

/// Connected components plus the indices of those isomorphic to `K_{k+1}`.
pub fn components_and_forbidden_clique_check(
    g: &Graph,
    k: usize,
) -> (Vec<Vec<Vertex>>, Vec<usize>) {
    let comps = g.components();
    let offenders = comps
        .iter()
        .enumerate()
        .filter(|(_, c)| is_clique_component(g, c, k + 1))
        .map(|(i, _)| i)
        .collect();
    (comps, offenders)
}

fn is_clique_component(g: &Graph, comp: &[Vertex], size: usize) -> bool {
    comp.len() == size && comp.iter().all(|&v| g.degree(v) == size - 1)
}

/// Fails with [`Error::ForbiddenClique`] if some component is `K_{k+1}`.
pub fn reject_forbidden_cliques(g: &Graph, k: usize) -> Result<()> {
    let (comps, offenders) = components_and_forbidden_clique_check(g, k);
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(Error::ForbiddenClique {
            clique_size: k + 1,
            components: offenders.into_iter().map(|i| comps[i].clone()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn prism() -> Graph {
        // triangles {0,1,2} and {3,4,5}, matching i -- i+3
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap()
    }

    fn k33() -> Graph {
        let mut e = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                e.push((a, b));
            }
        }
        Graph::from_edges(6, &e).unwrap()
    }

    #[test]
    fn rejects_non_simple_input() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn reverse_bfs_on_path_and_star() {
        let p = Graph::path(3);
        assert_eq!(reverse_bfs_order(&p, 0).unwrap().sequence, vec![2, 1, 0]);

        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let o = reverse_bfs_order(&star, 0).unwrap();
        assert_eq!(o.sequence, vec![3, 2, 1, 0]);
        let bd = back_degrees(&star, &o.sequence);
        assert_eq!(bd, vec![0, 0, 0, 3]);
        assert!(reverse_bfs_order(&star, 9).is_err());
    }

    #[test]
    fn reverse_bfs_on_c5_has_later_neighbours() {
        let c5 = Graph::cycle(5);
        for s in 0..5 {
            let o = reverse_bfs_order(&c5, s).unwrap();
            let bd = back_degrees(&c5, &o.sequence);
            // only the final vertex (the start) sees both of its neighbours
            assert!(bd[..4].iter().all(|&d| d <= 1));
            assert_eq!(bd[4], 2);
            assert_eq!(o.back_degree_bound, 2);
        }
    }

    #[test]
    fn degeneracy_of_small_graphs() {
        assert_eq!(peel_degeneracy(&Graph::empty(0)).0, 0);
        assert_eq!(peel_degeneracy(&Graph::empty(3)).0, 0);
        assert_eq!(peel_degeneracy(&Graph::path(5)).0, 1);
        assert_eq!(peel_degeneracy(&Graph::complete(4)).0, 3);
        assert_eq!(peel_degeneracy(&Graph::cycle(5)).0, 2);
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let (d, o) = peel_degeneracy(&star);
        assert_eq!(d, 1);
        o.check(&star, 1).unwrap();
    }

    #[test]
    fn verify_prism_k4_k33() {
        let p = prism();
        // one vertex from each triangle, not matched to each other
        let d = Decomposition::new(vec![0, 4], vec![1, 2, 3, 5], 3);
        assert!(verify_decomposition(&p, 3, &d).unwrap());

        let k4 = Graph::complete(4);
        let all = Decomposition::new(vec![], vec![0, 1, 2, 3], 3);
        assert!(!verify_decomposition(&k4, 3, &all).unwrap());
        for a in 0..4 {
            let b: Vec<_> = (0..4).filter(|&v| v != a).collect();
            let d = Decomposition::new(vec![a], b, 3);
            assert!(!verify_decomposition(&k4, 3, &d).unwrap());
        }

        let d = Decomposition::new(vec![0, 1, 2], vec![3, 4, 5], 3);
        assert!(verify_decomposition(&k33(), 3, &d).unwrap());
    }

    #[test]
    fn verify_rejects_non_partitions() {
        let g = Graph::path(3);
        let missing = Decomposition::new(vec![0], vec![1], 3);
        assert!(matches!(
            verify_decomposition(&g, 3, &missing),
            Err(Error::NotAPartition(_))
        ));
        let twice = Decomposition::new(vec![0, 1], vec![1, 2], 3);
        assert!(matches!(
            verify_decomposition(&g, 3, &twice),
            Err(Error::NotAPartition(_))
        ));
    }

    #[test]
    fn forbidden_clique_detection() {
        // K4 plus a disjoint P3
        let mut e: Vec<_> = Graph::complete(4).edges();
        e.extend([(4, 5), (5, 6)]);
        let g = Graph::from_edges(7, &e).unwrap();
        let (comps, off) = components_and_forbidden_clique_check(&g, 3);
        assert_eq!(comps.len(), 2);
        assert_eq!(off, vec![0]);

        let (_, off) = components_and_forbidden_clique_check(&Graph::complete(5), 4);
        assert_eq!(off, vec![0]);
        let (_, off) = components_and_forbidden_clique_check(&Graph::complete(5), 3);
        assert!(off.is_empty());
    }
}
