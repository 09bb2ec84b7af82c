//! Decompositions into an independent set and a `(k-2)`-degenerate graph for
//! graphs of maximum degree at most `k`.
//!
//! Non-regular components are handled by a greedy pass over a reverse BFS
//! order. Connected `k`-regular components run a pair-refinement loop that
//! ends in one of four constructions: a strong pair, a clique minus an edge,
//! a `k`-clique with a two-vertex neighbourhood, or a lock.

use serde::Serialize;

use crate::batch::{self, Execution};
use crate::error::{internal, Error, Result};
use crate::graph::{reject_forbidden_cliques, Decomposition, Graph, Vertex, VertexOrder};

const FREE: u8 = 0;
const IN_A: u8 = 1;
const IN_B: u8 = 2;

/// Result of probing a good pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PairKind {
    Strong,
    GoodWithComponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub u: Vertex,
    pub v: Vertex,
    pub kind: PairKind,
    /// A component of `G - {u, v}`; present iff the pair is not strong.
    pub component: Option<Vec<Vertex>>,
}

/// A `(u,v)`-lock: `N(c_set) = {u, v}`, `t` is adjacent to both `u` and `v`,
/// `w` and `x` each to exactly one of them, and `G[c_set]` is complete except
/// for `wt` and `xt`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LockWitness {
    pub c_set: Vec<Vertex>,
    pub u: Vertex,
    pub v: Vertex,
    pub t: Vertex,
    pub w: Vertex,
    pub x: Vertex,
}

/// How the common neighbours of the current pair were distributed when a new
/// pair was chosen inside the component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RefineCase {
    /// A common neighbour outside the component, or at least three inside.
    Unconstrained,
    /// Exactly two common neighbours, both inside; another good pair exists.
    TwoCommon,
    /// Exactly two common neighbours and they form the only good pair.
    TwoCommonOnlyPair,
    /// Exactly one common neighbour, inside the component.
    OneCommon,
}

/// Outcome of one refinement step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Refinement {
    Pair {
        u: Vertex,
        v: Vertex,
        case: RefineCase,
    },
    Lock(LockWitness),
}

/// The construction branches taken while decomposing one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Branch {
    NonRegular,
    StrongPair,
    QuasiClique { delegated: bool, both_in_b: bool },
    Clique { other_in_a: bool },
    Lock { same_side: bool },
    Refine { case: RefineCase },
}

/// One iteration of the pair-refinement loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub iter: usize,
    pub u: Vertex,
    pub v: Vertex,
    pub case: &'static str,
    pub component_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub branches: Vec<Branch>,
    pub events: Vec<TraceEvent>,
}

impl Trace {
    fn absorb(&mut self, other: Trace, map: &[Vertex]) {
        self.branches.extend(other.branches);
        self.events.extend(other.events.into_iter().map(|mut e| {
            e.u = map[e.u];
            e.v = map[e.v];
            e
        }));
    }
}

/// The greedy assignment over `order`: a vertex joins `A` unless an earlier
/// neighbour is already in `A`.
pub fn greedy_from_order(g: &Graph, order: &VertexOrder, k: usize) -> Result<Decomposition> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 2, got {k}"
        )));
    }
    if order.len() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "order lists {} of {} vertices",
            order.len(),
            g.n()
        )));
    }
    order.check(g, k - 1)?;
    let mut side = vec![FREE; g.n()];
    greedy(g, &order.sequence, &mut side, None);
    Ok(to_decomposition(&side, k))
}

fn greedy(g: &Graph, seq: &[Vertex], side: &mut [u8], extra: Option<(Vertex, Vertex)>) {
    for &v in seq {
        let mut blocked = g.neighbours(v).iter().any(|&w| side[w] == IN_A);
        if let Some((a, b)) = extra {
            blocked |= (v == a && side[b] == IN_A) || (v == b && side[a] == IN_A);
        }
        side[v] = if blocked { IN_B } else { IN_A };
    }
}

fn to_decomposition(side: &[u8], k: usize) -> Decomposition {
    let in_a: Vec<bool> = side.iter().map(|&s| s == IN_A).collect();
    Decomposition::from_membership(&in_a, k)
}

/// Breadth-first discovery order from `start`, never entering `blocked`
/// vertices, optionally treating `extra` as an additional edge.
fn bfs(
    g: &Graph,
    start: Vertex,
    blocked: &[bool],
    extra: Option<(Vertex, Vertex)>,
    seen: &mut [bool],
) -> Vec<Vertex> {
    let mut order = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let bonus = match extra {
            Some((a, b)) if v == a => Some(b),
            Some((a, b)) if v == b => Some(a),
            _ => None,
        };
        for &w in g.neighbours(v).iter().chain(bonus.iter()) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

fn common_neighbours(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let (a, b) = (g.neighbours(u), g.neighbours(v));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Components of `G - {u, v}`, each sorted, listed by smallest member.
fn components_without(g: &Graph, u: Vertex, v: Vertex) -> Vec<Vec<Vertex>> {
    let mut blocked = vec![false; g.n()];
    blocked[u] = true;
    blocked[v] = true;
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if !seen[s] && !blocked[s] {
            let mut comp = bfs(g, s, &blocked, None, &mut seen);
            comp.sort_unstable();
            out.push(comp);
        }
    }
    out
}

fn mask(n: usize, set: &[Vertex]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

fn inner_degree(g: &Graph, v: Vertex, in_set: &[bool]) -> usize {
    g.neighbours(v).iter().filter(|&&w| in_set[w]).count()
}

/// If `set` induces a clique minus exactly one edge, the missing pair.
fn missing_edge_of_quasiclique(g: &Graph, set: &[Vertex]) -> Option<(Vertex, Vertex)> {
    let in_set = mask(g.n(), set);
    let full = set.len() - 1;
    let short: Vec<Vertex> = set
        .iter()
        .copied()
        .filter(|&s| inner_degree(g, s, &in_set) != full)
        .collect();
    if short.len() == 2
        && !g.has_edge(short[0], short[1])
        && short
            .iter()
            .all(|&s| inner_degree(g, s, &in_set) == full - 1)
    {
        Some((short[0], short[1]))
    } else {
        None
    }
}

fn is_clique(g: &Graph, set: &[Vertex]) -> bool {
    let in_set = mask(g.n(), set);
    set.iter()
        .all(|&s| inner_degree(g, s, &in_set) == set.len() - 1)
}

fn outside_neighbours(g: &Graph, set: &[Vertex]) -> Vec<Vertex> {
    let in_set = mask(g.n(), set);
    let mut out: Vec<Vertex> = set
        .iter()
        .flat_map(|&s| g.neighbours(s).iter().copied())
        .filter(|&w| !in_set[w])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Lock detection for a component `c` of `G - {u, v}`.
fn detect_lock(g: &Graph, k: usize, u: Vertex, v: Vertex, c: &[Vertex]) -> Option<LockWitness> {
    if c.len() != k + 1 {
        return None;
    }
    let in_c = mask(g.n(), c);
    let mut t = None;
    let mut short = Vec::new();
    for &s in c {
        match k - inner_degree(g, s, &in_c) {
            0 => {}
            1 => short.push(s),
            2 if t.is_none() => t = Some(s),
            _ => return None,
        }
    }
    let t = t?;
    if short.len() != 2 || !g.has_edge(t, u) || !g.has_edge(t, v) {
        return None;
    }
    let (w, x) = (short[0], short[1]);
    if g.has_edge(t, w) || g.has_edge(t, x) {
        return None;
    }
    let one_side = |a: Vertex| g.has_edge(a, u) != g.has_edge(a, v);
    if !one_side(w) || !one_side(x) {
        return None;
    }
    Some(LockWitness {
        c_set: c.to_vec(),
        u,
        v,
        t,
        w,
        x,
    })
}

fn check_regular_connected(g: &Graph, k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    if let Some(v) = g.vertices().find(|&v| g.degree(v) != k) {
        return Err(Error::Precondition(format!(
            "vertex {v} has degree {} in a graph required to be {k}-regular",
            g.degree(v)
        )));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

struct Solver<'a> {
    g: &'a Graph,
    k: usize,
    trace: Trace,
}

impl<'a> Solver<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        Solver {
            g,
            k,
            trace: Trace::default(),
        }
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn strong_pair(&mut self, u: Vertex, v: Vertex) -> Vec<u8> {
        self.trace.branches.push(Branch::StrongPair);
        let g = self.g;
        let n = self.n();
        let mut blocked = vec![false; n];
        blocked[u] = true;
        blocked[v] = true;
        let is_common = mask(n, &common_neighbours(g, u, v));
        let mut side = vec![FREE; n];
        // u and v stand for the identified vertex, which goes first
        side[u] = IN_A;
        side[v] = IN_A;
        let mut seen = vec![false; n];
        for comp in components_without(g, u, v) {
            let root = comp
                .iter()
                .copied()
                .find(|&c| is_common[c])
                .unwrap_or(comp[0]);
            let mut seq = bfs(g, root, &blocked, None, &mut seen);
            seq.reverse();
            greedy(g, &seq, &mut side, None);
        }
        side
    }

    fn quasiclique(&mut self, set: &[Vertex], a: Vertex, b: Vertex) -> Result<Vec<u8>> {
        let g = self.g;
        let n = self.n();
        let in_set = mask(n, set);
        let outside = |s: Vertex| g.neighbours(s).iter().copied().find(|&z| !in_set[z]);
        let (t, w) = match (outside(a), outside(b)) {
            (Some(t), Some(w)) => (t, w),
            _ => {
                return Err(internal(
                    "quasi-clique endpoint without an outside neighbour",
                ))
            }
        };
        if t == w {
            self.trace.branches.push(Branch::QuasiClique {
                delegated: true,
                both_in_b: false,
            });
            return Ok(self.strong_pair(a, b));
        }
        let mut seen = vec![false; n];
        let mut seq = bfs(g, t, &in_set, None, &mut seen);
        seq.reverse();
        if !seen[w] {
            let mut more = bfs(g, w, &in_set, None, &mut seen);
            more.reverse();
            seq.extend(more);
        }
        let mut side = vec![FREE; n];
        greedy(g, &seq, &mut side, None);
        if seq.len() + set.len() != n {
            return Err(internal(
                "graph minus the quasi-clique has a component missing both attachments",
            ));
        }
        let both_in_b = side[t] == IN_B && side[w] == IN_B;
        self.trace.branches.push(Branch::QuasiClique {
            delegated: false,
            both_in_b,
        });
        if both_in_b {
            for &s in set {
                side[s] = if s == a || s == b { IN_A } else { IN_B };
            }
        } else {
            let x = set
                .iter()
                .copied()
                .find(|&s| s != a && s != b)
                .expect("k >= 3");
            for &s in set {
                side[s] = if s == x { IN_A } else { IN_B };
            }
        }
        Ok(side)
    }

    fn clique(&mut self, c: &[Vertex]) -> Result<Vec<u8>> {
        let g = self.g;
        let n = self.n();
        let in_c = mask(n, c);
        let nb = outside_neighbours(g, c);
        if nb.len() != 2 {
            return Err(internal("clique without a two-vertex neighbourhood"));
        }
        let (p, q) = (nb[0], nb[1]);
        let hits = |z: Vertex| inner_degree(g, z, &in_c);
        let (hp, hq) = (hits(p), hits(q));
        let root = if hq > hp { q } else { p };
        let extra = Some((p, q));
        let mut seen = vec![false; n];
        let mut seq = bfs(g, root, &in_c, extra, &mut seen);
        if seq.len() + c.len() != n {
            return Err(internal(
                "graph minus the clique plus the joining edge is disconnected",
            ));
        }
        seq.reverse();
        let mut side = vec![FREE; n];
        greedy(g, &seq, &mut side, extra);
        let (sp, sq) = (side[p], side[q]);
        let (anchor, other_in_a) = match (sp, sq) {
            (IN_B, IN_A) => (p, true),
            (IN_A, IN_B) => (q, true),
            (IN_B, IN_B) => (if hp >= 2 { p } else { q }, false),
            _ => return Err(internal("both clique attachments ended in A")),
        };
        self.trace.branches.push(Branch::Clique { other_in_a });
        let t = c
            .iter()
            .copied()
            .find(|&z| g.has_edge(z, anchor))
            .ok_or_else(|| internal("chosen attachment has no neighbour in the clique"))?;
        for &z in c {
            side[z] = if z == t { IN_A } else { IN_B };
        }
        Ok(side)
    }

    fn lock(&mut self, lock: &LockWitness) -> Result<Vec<u8>> {
        let g = self.g;
        let n = self.n();
        let side_of = |z: Vertex| {
            if g.has_edge(z, lock.u) {
                lock.u
            } else {
                lock.v
            }
        };
        if side_of(lock.w) == side_of(lock.x) {
            self.trace.branches.push(Branch::Lock { same_side: true });
            let rest: Vec<Vertex> = lock
                .c_set
                .iter()
                .copied()
                .filter(|&z| z != lock.t)
                .collect();
            return self.clique(&rest);
        }
        self.trace.branches.push(Branch::Lock { same_side: false });
        let mut blocked = mask(n, &lock.c_set);
        blocked[lock.t] = false;
        let mut seen = vec![false; n];
        let mut seq = bfs(g, lock.u, &blocked, None, &mut seen);
        seq.reverse();
        seq.retain(|&z| z != lock.t);
        seq.insert(0, lock.t);
        let mut side = vec![FREE; n];
        greedy(g, &seq, &mut side, None);
        for &z in &lock.c_set {
            if z != lock.t {
                side[z] = if z == lock.w { IN_A } else { IN_B };
            }
        }
        Ok(side)
    }

    /// Smallest good pair `(a, b)` with `a < b` inside `c` accepted by `keep`.
    fn lowest_good_pair(
        &self,
        c: &[Vertex],
        in_c: &[bool],
        keep: impl Fn(Vertex, Vertex) -> bool,
    ) -> Option<(Vertex, Vertex)> {
        let g = self.g;
        for &a in c {
            let mut best: Option<Vertex> = None;
            for &y in g.neighbours(a) {
                for &b in g.neighbours(y) {
                    if b > a
                        && in_c[b]
                        && best.is_none_or(|m| b < m)
                        && !g.has_edge(a, b)
                        && keep(a, b)
                    {
                        best = Some(b);
                    }
                }
            }
            if let Some(b) = best {
                return Some((a, b));
            }
        }
        None
    }

    fn refine(&mut self, u: Vertex, v: Vertex, c: &[Vertex]) -> Result<Refinement> {
        let g = self.g;
        let in_c = mask(self.n(), c);
        let common = common_neighbours(g, u, v);
        let inside: Vec<Vertex> = common.iter().copied().filter(|&z| in_c[z]).collect();
        let outside = common.len() > inside.len();
        let refinement = if outside || inside.len() >= 3 {
            self.lowest_good_pair(c, &in_c, |_, _| true)
                .map(|(a, b)| (a, b, RefineCase::Unconstrained))
        } else if inside.len() == 2 {
            let (t1, t2) = (inside[0], inside[1]);
            self.lowest_good_pair(c, &in_c, |a, b| (a, b) != (t1, t2))
                .map(|(a, b)| (a, b, RefineCase::TwoCommon))
                .or(Some((t1, t2, RefineCase::TwoCommonOnlyPair)))
        } else if inside.len() == 1 {
            let t = inside[0];
            match self.lowest_good_pair(c, &in_c, |a, b| a != t && b != t) {
                Some((a, b)) => Some((a, b, RefineCase::OneCommon)),
                None => {
                    return detect_lock(g, self.k, u, v, c)
                        .map(Refinement::Lock)
                        .ok_or_else(|| {
                            internal(
                                "single common neighbour without an alternative pair or a lock",
                            )
                        });
                }
            }
        } else {
            return Err(internal(
                "refinement called on a pair without common neighbours",
            ));
        };
        let (a, b, case) = refinement
            .ok_or_else(|| internal("component of a non-terminal pair has no good pair"))?;
        self.trace.branches.push(Branch::Refine { case });
        Ok(Refinement::Pair { u: a, v: b, case })
    }

    fn initial_pair(&self) -> Result<(Vertex, Vertex)> {
        let g = self.g;
        let u = 0;
        let mut best = None;
        for &y in g.neighbours(u) {
            for &z in g.neighbours(y) {
                if z != u && !g.has_edge(u, z) && best.is_none_or(|b| z < b) {
                    best = Some(z);
                }
            }
        }
        best.map(|v| (u, v))
            .ok_or_else(|| internal("regular connected graph without a good pair"))
    }

    fn event(&mut self, u: Vertex, v: Vertex, case: &'static str, size: usize) {
        let iter = self.trace.events.len();
        self.trace.events.push(TraceEvent {
            iter,
            u,
            v,
            case,
            component_size: size,
        });
    }

    /// Pair-probing loop on a connected `k`-regular graph.
    fn regular(&mut self) -> Result<Vec<u8>> {
        let g = self.g;
        let k = self.k;
        let (mut u, mut v) = self.initial_pair()?;
        let mut previous: Option<(Vertex, Vec<Vertex>)> = None;
        loop {
            let comps = components_without(g, u, v);
            let is_common = mask(self.n(), &common_neighbours(g, u, v));
            if comps.iter().all(|c| c.iter().any(|&z| is_common[z])) {
                self.event(u, v, "strong", self.n() - 2);
                return Ok(self.strong_pair(u, v));
            }
            let c = match &previous {
                None => comps
                    .iter()
                    .filter_map(|c| c.iter().copied().find(|&z| is_common[z]).map(|z| (z, c)))
                    .min_by_key(|&(z, _)| z)
                    .map(|(_, c)| c.clone())
                    .ok_or_else(|| internal("good pair without a common neighbour"))?,
                Some((anchor, prev)) => {
                    let c = comps
                        .iter()
                        .find(|c| c.binary_search(anchor).is_err())
                        .cloned()
                        .ok_or_else(|| internal("every component contains the previous pair"))?;
                    let prev_mask = mask(self.n(), prev);
                    if c.len() >= prev.len() || c.iter().any(|&z| !prev_mask[z]) {
                        return Err(internal(
                            "refined component is not strictly inside the previous one",
                        ));
                    }
                    c
                }
            };

            let mut candidates: Vec<Vec<Vertex>> = Vec::new();
            if c.len() == k {
                candidates.push(sorted_with(&c, &[u]));
                candidates.push(sorted_with(&c, &[v]));
            }
            if c.len() + 1 == k {
                candidates.push(sorted_with(&c, &[u, v]));
            }
            for set in candidates {
                if let Some((a, b)) = missing_edge_of_quasiclique(g, &set) {
                    self.event(u, v, "quasiclique", c.len());
                    return self.quasiclique(&set, a, b);
                }
            }
            if c.len() == k && is_clique(g, &c) {
                self.event(u, v, "clique", c.len());
                return self.clique(&c);
            }
            if let Some(lock) = detect_lock(g, k, u, v, &c) {
                self.event(u, v, "lock", c.len());
                return self.lock(&lock);
            }
            self.event(u, v, "refine", c.len());
            match self.refine(u, v, &c)? {
                Refinement::Pair { u: a, v: b, .. } => {
                    previous = Some((u, c));
                    u = a;
                    v = b;
                }
                Refinement::Lock(lock) => return self.lock(&lock),
            }
        }
    }

    fn non_regular(&mut self) -> Vec<u8> {
        self.trace.branches.push(Branch::NonRegular);
        let g = self.g;
        let start = g
            .vertices()
            .find(|&v| g.degree(v) < self.k)
            .expect("non-regular component has a low-degree vertex");
        let mut seen = vec![false; g.n()];
        let mut seq = bfs(g, start, &vec![false; g.n()], None, &mut seen);
        seq.reverse();
        let mut side = vec![FREE; g.n()];
        greedy(g, &seq, &mut side, None);
        side
    }

    /// Solves one connected component.
    fn component(&mut self) -> Result<Vec<u8>> {
        let g = self.g;
        if g.vertices().all(|v| g.degree(v) == self.k) {
            self.regular()
        } else {
            Ok(self.non_regular())
        }
    }
}

fn sorted_with(c: &[Vertex], extra: &[Vertex]) -> Vec<Vertex> {
    let mut s = c.to_vec();
    s.extend_from_slice(extra);
    s.sort_unstable();
    s
}

fn finish(g: &Graph, k: usize, side: Vec<u8>) -> Result<Decomposition> {
    let d = to_decomposition(&side, k);
    debug_assert!(
        crate::graph::verify_decomposition(g, k, &d).unwrap_or(false),
        "construction produced an invalid decomposition"
    );
    Ok(d)
}

/// Decomposition from a strong pair of a connected `k`-regular graph; `u`
/// and `v` end up in `A`.
pub fn via_strong_pair(g: &Graph, k: usize, u: Vertex, v: Vertex) -> Result<Decomposition> {
    check_regular_connected(g, k)?;
    let w = probe_pair(g, u, v)?;
    if w.kind != PairKind::Strong {
        return Err(Error::Precondition(format!(
            "{{{u}, {v}}} is not a strong pair"
        )));
    }
    let side = Solver::new(g, k).strong_pair(u, v);
    finish(g, k, side)
}

/// Decomposition of a connected `k`-regular graph containing a set of `k+1`
/// vertices inducing a clique minus the edge `uv`.
pub fn via_quasiclique(
    g: &Graph,
    k: usize,
    c_set: &[Vertex],
    u: Vertex,
    v: Vertex,
) -> Result<Decomposition> {
    check_regular_connected(g, k)?;
    for &z in c_set {
        g.check_vertex(z)?;
    }
    let set = sorted_with(c_set, &[]);
    let (a, b) = (u.min(v), u.max(v));
    if set.len() != k + 1
        || set.windows(2).any(|w| w[0] == w[1])
        || missing_edge_of_quasiclique(g, &set) != Some((a, b))
    {
        return Err(Error::Precondition(format!(
            "set does not induce K_{} minus the edge {u}-{v}",
            k + 1
        )));
    }
    let side = Solver::new(g, k).quasiclique(&set, a, b)?;
    finish(g, k, side)
}

/// Decomposition of a connected `k`-regular graph containing a `k`-clique
/// with exactly two outside neighbours.
pub fn via_clique(g: &Graph, k: usize, c_set: &[Vertex]) -> Result<Decomposition> {
    check_regular_connected(g, k)?;
    for &z in c_set {
        g.check_vertex(z)?;
    }
    let set = sorted_with(c_set, &[]);
    if set.len() != k || set.windows(2).any(|w| w[0] == w[1]) || !is_clique(g, &set) {
        return Err(Error::Precondition(format!(
            "set is not a clique on {k} vertices"
        )));
    }
    let nb = outside_neighbours(g, &set);
    if nb.len() != 2 {
        return Err(Error::Precondition(format!(
            "clique has {} outside neighbours, need exactly 2",
            nb.len()
        )));
    }
    let side = Solver::new(g, k).clique(&set)?;
    finish(g, k, side)
}

/// Decomposition of a connected `k`-regular graph containing a lock.
pub fn via_lock(g: &Graph, k: usize, lock: &LockWitness) -> Result<Decomposition> {
    check_regular_connected(g, k)?;
    for &z in lock.c_set.iter().chain([lock.u, lock.v].iter()) {
        g.check_vertex(z)?;
    }
    let set = sorted_with(&lock.c_set, &[]);
    let nb = outside_neighbours(g, &set);
    let (lo, hi) = (lock.u.min(lock.v), lock.u.max(lock.v));
    let found = detect_lock(g, k, lo, hi, &set);
    let matches = found
        .is_some_and(|f| f.t == lock.t && [f.w, f.x] == [lock.w.min(lock.x), lock.w.max(lock.x)]);
    if nb != [lo, hi] || !matches {
        return Err(Error::Precondition("lock invariants do not hold".into()));
    }
    let side = Solver::new(g, k).lock(lock)?;
    finish(g, k, side)
}

/// Classifies a good pair as strong, or returns the component of `G - {u,v}`
/// containing the smallest common neighbour.
pub fn probe_pair(g: &Graph, u: Vertex, v: Vertex) -> Result<PairWitness> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let common = common_neighbours(g, u, v);
    if u == v || g.has_edge(u, v) || common.is_empty() {
        return Err(Error::Precondition(format!(
            "{{{u}, {v}}} is not a good pair"
        )));
    }
    let is_common = mask(g.n(), &common);
    let comps = components_without(g, u, v);
    if comps.iter().all(|c| c.iter().any(|&z| is_common[z])) {
        return Ok(PairWitness {
            u,
            v,
            kind: PairKind::Strong,
            component: None,
        });
    }
    let component = comps
        .into_iter()
        .find(|c| c.binary_search(&common[0]).is_ok());
    Ok(PairWitness {
        u,
        v,
        kind: PairKind::GoodWithComponent,
        component,
    })
}

/// One refinement step: a good pair inside `c` that keeps `u` and `v`
/// connected, or the lock the component turns out to be.
pub fn refine_pair(g: &Graph, k: usize, u: Vertex, v: Vertex, c: &[Vertex]) -> Result<Refinement> {
    check_regular_connected(g, k)?;
    let w = probe_pair(g, u, v)?;
    let set = sorted_with(c, &[]);
    if !components_without(g, u, v).contains(&set) || w.kind == PairKind::Strong {
        return Err(Error::Precondition(
            "c is not a component of G - {u, v} for a non-strong pair".into(),
        ));
    }
    Solver::new(g, k).refine(u, v, &set)
}

/// Decomposition of a graph of maximum degree at most `k` with no `K_{k+1}`
/// component: `A` independent and `G[B]` `(k-2)`-degenerate.
pub fn decompose_k(g: &Graph, k: usize) -> Result<Decomposition> {
    decompose_k_traced(g, k, Execution::default()).map(|(d, _)| d)
}

/// As [`decompose_k`], also returning the branches taken, with components
/// processed according to `exec`.
pub fn decompose_k_traced(g: &Graph, k: usize, exec: Execution) -> Result<(Decomposition, Trace)> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k must be at least 3, got {k}"
        )));
    }
    let found = g.max_degree();
    if found > k {
        return Err(Error::DegreeTooLarge { found, bound: k });
    }
    reject_forbidden_cliques(g, k)?;
    let comps = g.components();
    if comps.len() == 1 {
        let mut solver = Solver::new(g, k);
        let side = solver.component()?;
        return Ok((finish(g, k, side)?, solver.trace));
    }
    let solved = batch::map(exec, &comps, |comp| -> Result<(Vec<u8>, Trace)> {
        let (sub, _) = g.induced(comp);
        let mut solver = Solver::new(&sub, k);
        let side = solver.component()?;
        Ok((side, solver.trace))
    });
    let mut side = vec![FREE; g.n()];
    let mut trace = Trace::default();
    for (comp, res) in comps.iter().zip(solved) {
        let (local, t) = res?;
        for (i, &v) in comp.iter().enumerate() {
            side[v] = local[i];
        }
        trace.absorb(t, comp);
    }
    Ok((finish(g, k, side)?, trace))
}

/// Moves vertices of `B` with no neighbour in `A` into `A`, in ascending id
/// order, until `A` is a maximal independent set.
pub fn maximalize_a(g: &Graph, d: &Decomposition) -> Result<Decomposition> {
    if !crate::graph::verify_decomposition(g, d.k, d)? {
        return Err(Error::InvalidDecomposition(
            "input decomposition is not valid".into(),
        ));
    }
    let mut in_a = d.membership(g.n())?;
    for &b in &d.b_set {
        if !g.neighbours(b).iter().any(|&w| in_a[w]) {
            in_a[b] = true;
        }
    }
    Ok(Decomposition::from_membership(&in_a, d.k))
}
