//! Reconfiguration of `(Δ+1)`-colourings.
//!
//! [`compact`] moves a colouring to one with fewer vertices on the top colour
//! `Δ+1`. [`find_path`] compacts both endpoints down to `Δ` colours, parks an
//! independent set on the top colour and recurses on the rest with one colour
//! fewer.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{internal, Error, Result};
use crate::graph::{reject_forbidden_cliques, Graph, Vertex};
use crate::kdegen::{decompose_k, maximalize_a};
use crate::oracles::{brute_reconfig_path_with, OracleBudget};

/// Default constant in the `C·n²` path-length guard.
pub const DEFAULT_LENGTH_FACTOR: usize = 20;

/// A colouring with colours `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub k: usize,
    pub colour: Vec<usize>,
}

impl Colouring {
    pub fn new(k: usize, colour: Vec<usize>) -> Self {
        Colouring { k, colour }
    }

    pub fn n(&self) -> usize {
        self.colour.len()
    }

    /// First monochromatic edge or out-of-range colour, if any.
    pub fn check_proper(&self, g: &Graph) -> Result<()> {
        if self.colour.len() != g.n() {
            return Err(Error::ImproperColouring(format!(
                "{} colours for {} vertices",
                self.colour.len(),
                g.n()
            )));
        }
        if let Some(v) = (0..g.n()).find(|&v| self.colour[v] == 0 || self.colour[v] > self.k) {
            return Err(Error::ImproperColouring(format!(
                "vertex {v} has colour {} outside 1..={}",
                self.colour[v], self.k
            )));
        }
        if let Some((u, v)) = g
            .edges()
            .into_iter()
            .find(|&(u, v)| self.colour[u] == self.colour[v])
        {
            return Err(Error::ImproperColouring(format!(
                "edge {u}-{v} is monochromatic"
            )));
        }
        Ok(())
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.check_proper(g).is_ok()
    }

    /// Vertices carrying the top colour `k`.
    pub fn top_class(&self) -> Vec<Vertex> {
        (0..self.n())
            .filter(|&v| self.colour[v] == self.k)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecolourStep {
    pub v: Vertex,
    pub to: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecolourPath {
    pub steps: Vec<RecolourStep>,
}

impl RecolourPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the steps to `start` without checking them.
    pub fn apply(&self, start: &Colouring) -> Colouring {
        let mut c = start.clone();
        for s in &self.steps {
            c.colour[s.v] = s.to;
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Locked,
    Free,
    Superfree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusReport {
    pub status: Vec<Status>,
    pub l_set: Vec<Vertex>,
}

fn bit(c: usize) -> u64 {
    1u64 << c
}

fn nbr_mask(g: &Graph, col: &[usize], v: Vertex) -> u64 {
    g.neighbours(v).iter().fold(0, |m, &w| m | bit(col[w]))
}

/// Colours `1..=delta` as a mask.
fn palette(delta: usize) -> u64 {
    ((1u64 << (delta + 1)) - 1) & !1
}

fn status_of(g: &Graph, col: &[usize], delta: usize, v: Vertex) -> Status {
    let nm = nbr_mask(g, col, v);
    if nm.count_ones() as usize >= delta {
        Status::Locked
    } else if palette(delta) & !(nm | bit(col[v])) != 0 {
        Status::Superfree
    } else {
        Status::Free
    }
}

fn check_colouring(g: &Graph, c: &Colouring, delta: usize) -> Result<()> {
    if delta >= 63 {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} is too large"
        )));
    }
    if c.k != delta + 1 {
        return Err(Error::InvalidParameter(format!(
            "colouring uses {} colours, expected delta + 1 = {}",
            c.k,
            delta + 1
        )));
    }
    let found = g.max_degree();
    if found > delta {
        return Err(Error::DegreeTooLarge {
            found,
            bound: delta,
        });
    }
    c.check_proper(g)
}

/// Locked / free / superfree status of every vertex with respect to a
/// `(delta+1)`-colouring.
pub fn classify(g: &Graph, c: &Colouring, delta: usize) -> Result<StatusReport> {
    check_colouring(g, c, delta)?;
    let status: Vec<Status> = g
        .vertices()
        .map(|v| status_of(g, &c.colour, delta, v))
        .collect();
    Ok(StatusReport {
        status,
        l_set: c.top_class(),
    })
}

/// True iff no vertex can be recoloured, i.e. every vertex is locked.
pub fn is_frozen(g: &Graph, c: &Colouring, delta: usize) -> bool {
    g.vertices()
        .all(|v| nbr_mask(g, &c.colour, v).count_ones() as usize >= delta)
}

fn kempe_order(g: &Graph, col: &[usize], v: Vertex, j: usize, l: usize) -> Vec<Vertex> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![v];
    seen[v] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &w in g.neighbours(x) {
            if !seen[w] && (col[w] == j || col[w] == l) {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

/// The connected `{j, l}`-coloured component containing `v`, sorted.
pub fn kempe_component(
    g: &Graph,
    c: &Colouring,
    v: Vertex,
    j: usize,
    l: usize,
) -> Result<Vec<Vertex>> {
    g.check_vertex(v)?;
    if j == l || (c.colour[v] != j && c.colour[v] != l) {
        return Err(Error::Precondition(format!(
            "vertex {v} has colour {}, not one of {j}, {l}",
            c.colour[v]
        )));
    }
    let mut comp = kempe_order(g, &c.colour, v, j, l);
    comp.sort_unstable();
    Ok(comp)
}

/// Swaps colours `j` and `l` on a `(j,l)`-component through the spare top
/// colour: `j` to top, `l` to `j`, top to `l`.
pub fn swap_via_spare(
    g: &Graph,
    c: &Colouring,
    d_comp: &[Vertex],
    j: usize,
    l: usize,
) -> Result<(RecolourPath, Colouring)> {
    c.check_proper(g)?;
    let mut work = Work::new(g, c.colour.clone(), c.k - 1);
    let mut order = d_comp.to_vec();
    order.sort_unstable();
    let start = order
        .first()
        .copied()
        .ok_or_else(|| Error::Precondition("empty component".into()))?;
    let mut comp = kempe_component(g, c, start, j, l)?;
    comp.sort_unstable();
    if comp != order {
        return Err(Error::Precondition(
            "set is not a full (j,l)-component".into(),
        ));
    }
    work.swap(&order, j, l)?;
    let out = Colouring::new(c.k, work.col);
    Ok((RecolourPath { steps: work.steps }, out))
}

/// Checks that `path` is a valid walk from `alpha` to `beta` in the
/// reconfiguration graph.
pub fn validate_path(
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    path: &RecolourPath,
    beta: &Colouring,
) -> bool {
    let ok_end = |c: &Colouring| c.k == k && c.is_proper(g);
    if !ok_end(alpha) || !ok_end(beta) {
        return false;
    }
    let mut col = alpha.colour.clone();
    for s in &path.steps {
        if s.v >= g.n() || s.to == 0 || s.to > k || col[s.v] == s.to {
            return false;
        }
        if g.neighbours(s.v).iter().any(|&w| col[w] == s.to) {
            return false;
        }
        col[s.v] = s.to;
    }
    col == beta.colour
}

/// The path walked backwards, from the end of `path` to `alpha`.
pub fn reverse_path(path: &RecolourPath, alpha: &Colouring) -> Result<RecolourPath> {
    let mut col = alpha.colour.clone();
    let mut back = Vec::with_capacity(path.len());
    for s in &path.steps {
        if s.v >= col.len() {
            return Err(Error::VertexOutOfRange(s.v));
        }
        if col[s.v] == s.to {
            return Err(Error::Precondition(format!(
                "step recolours {} to its current colour",
                s.v
            )));
        }
        back.push(RecolourStep {
            v: s.v,
            to: col[s.v],
        });
        col[s.v] = s.to;
    }
    back.reverse();
    Ok(RecolourPath { steps: back })
}

/// Which way a two-good-paths compaction went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GoodPathsOutcome {
    LockedNeighbour,
    FreeNeighbour,
    SameTop,
}

/// Mutable colouring plus the steps taken so far.
struct Work<'a> {
    g: &'a Graph,
    col: Vec<usize>,
    delta: usize,
    top: usize,
    steps: Vec<RecolourStep>,
}

impl<'a> Work<'a> {
    fn new(g: &'a Graph, col: Vec<usize>, delta: usize) -> Self {
        Work {
            g,
            col,
            delta,
            top: delta + 1,
            steps: Vec::new(),
        }
    }

    fn set(&mut self, v: Vertex, to: usize) -> Result<()> {
        if self.col[v] == to || self.g.neighbours(v).iter().any(|&w| self.col[w] == to) {
            return Err(internal(format!(
                "recolouring {v} to {to} is not a valid move"
            )));
        }
        self.steps.push(RecolourStep { v, to });
        self.col[v] = to;
        Ok(())
    }

    fn status(&self, v: Vertex) -> Status {
        status_of(self.g, &self.col, self.delta, v)
    }

    fn locked(&self, v: Vertex) -> bool {
        self.status(v) == Status::Locked
    }

    fn superfree(&self, v: Vertex) -> bool {
        self.status(v) == Status::Superfree
    }

    /// Smallest colour other than top absent from the closed neighbourhood.
    fn spare_colour(&self, v: Vertex) -> Option<usize> {
        let used = nbr_mask(self.g, &self.col, v) | bit(self.col[v]);
        (1..=self.delta).find(|&c| used & bit(c) == 0)
    }

    fn recolour_spare(&mut self, v: Vertex) -> Result<()> {
        let c = self
            .spare_colour(v)
            .ok_or_else(|| internal(format!("vertex {v} expected to have a spare colour")))?;
        self.set(v, c)
    }

    fn top_class(&self) -> Vec<Vertex> {
        (0..self.col.len())
            .filter(|&v| self.col[v] == self.top)
            .collect()
    }

    fn top_neighbour(&self, v: Vertex) -> Option<Vertex> {
        self.g
            .neighbours(v)
            .iter()
            .copied()
            .find(|&w| self.col[w] == self.top)
    }

    /// The unique neighbour of `u` with colour `j` (under the lock-property).
    fn coloured_neighbour(&self, u: Vertex, j: usize) -> Result<Vertex> {
        self.g
            .neighbours(u)
            .iter()
            .copied()
            .find(|&w| self.col[w] == j)
            .ok_or_else(|| internal(format!("locked vertex {u} has no neighbour coloured {j}")))
    }

    fn swap(&mut self, comp: &[Vertex], first: usize, second: usize) -> Result<()> {
        let top = self.top;
        if let Some(&v) = comp.iter().find(|&&v| {
            self.col[v] == first && self.g.neighbours(v).iter().any(|&w| self.col[w] == top)
        }) {
            return Err(Error::Precondition(format!(
                "vertex {v} coloured {first} is adjacent to the top colour"
            )));
        }
        let movers: Vec<Vertex> = comp
            .iter()
            .copied()
            .filter(|&v| self.col[v] == first)
            .collect();
        let others: Vec<Vertex> = comp
            .iter()
            .copied()
            .filter(|&v| self.col[v] == second)
            .collect();
        for &v in &movers {
            self.set(v, top)?;
        }
        for &v in &others {
            self.set(v, first)?;
        }
        for &v in &movers {
            self.set(v, second)?;
        }
        Ok(())
    }

    fn swap_checked(&mut self, comp: &[Vertex], first: usize, second: usize) -> Result<()> {
        self.swap(comp, first, second)
            .map_err(|e| internal(format!("component swap failed inside compaction: {e}")))
    }

    /// A vertex of `N[u]` that is free, for some `u` on the top colour.
    fn lock_property_witness(&self) -> Option<(Vertex, Vertex)> {
        for u in self.top_class() {
            if !self.locked(u) {
                return Some((u, u));
            }
            if let Some(&v) = self.g.neighbours(u).iter().find(|&&v| !self.locked(v)) {
                return Some((u, v));
            }
        }
        None
    }

    fn recolour_via_unlocked(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        if u == v {
            return self.recolour_spare(u);
        }
        let old = self.col[v];
        self.recolour_spare(v)?;
        self.set(u, old)
    }

    fn try_unlocked_neighbour(&mut self) -> Result<bool> {
        match self.lock_property_witness() {
            Some((u, v)) => self.recolour_via_unlocked(u, v).map(|_| true),
            None => Ok(false),
        }
    }

    /// Component order walked as a path from `start`, or `None` if the
    /// component is not a path with `start` as an end.
    fn as_path(&self, comp: &[Vertex], start: Vertex, j: usize, k: usize) -> Option<Vec<Vertex>> {
        let inside = |w: Vertex| self.col[w] == j || self.col[w] == k;
        let deg = |v: Vertex| self.g.neighbours(v).iter().filter(|&&w| inside(w)).count();
        if comp.iter().any(|&v| deg(v) > 2) || deg(start) > 1 {
            return None;
        }
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = self
                .g
                .neighbours(cur)
                .iter()
                .copied()
                .find(|&w| inside(w) && w != prev);
            match next {
                Some(w) if order.len() < comp.len() => {
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
        (order.len() == comp.len()).then_some(order)
    }

    /// A path with locked ends and no superfree vertex.
    fn good_path(&self, comp: &[Vertex], start: Vertex, j: usize, k: usize) -> Option<Vec<Vertex>> {
        let path = self.as_path(comp, start, j, k)?;
        let ends_locked = self.locked(path[0]) && self.locked(*path.last().unwrap());
        (ends_locked && !comp.iter().any(|&v| self.superfree(v))).then_some(path)
    }

    fn component_from(&self, u: Vertex, j: usize, k: usize) -> Result<(Vertex, Vec<Vertex>)> {
        let v = self.coloured_neighbour(u, j)?;
        Ok((v, kempe_order(self.g, &self.col, v, j, k)))
    }

    /// Compacts through the `(j,k)`-component of the `j`-neighbour of `u`,
    /// unless that component is a good path.
    fn try_kempe_component(&mut self, u: Vertex, j: usize, k: usize) -> Result<bool> {
        let (v, comp) = self.component_from(u, j, k)?;
        if self.good_path(&comp, v, j, k).is_some() {
            return Ok(false);
        }
        if let Some(&w) = comp.iter().find(|&&w| self.superfree(w)) {
            self.recolour_spare(w)?;
            let rest = kempe_order(self.g, &self.col, v, j, k);
            self.swap_checked(&rest, k, j)?;
        } else {
            self.swap_checked(&comp, k, j)?;
        }
        self.set(u, j)?;
        Ok(true)
    }

    /// Compacts when the `(j,k)`- and `(k,j)`-components at `u` are distinct
    /// good paths and the first has at least three vertices.
    fn compact_two_good_paths(
        &mut self,
        u: Vertex,
        j: usize,
        k: usize,
    ) -> Result<GoodPathsOutcome> {
        let (v, comp) = self.component_from(u, j, k)?;
        let path = self
            .good_path(&comp, v, j, k)
            .ok_or_else(|| internal("two-good-paths step entered without a good path"))?;
        let (v2, comp2) = self.component_from(u, k, j)?;
        if self.good_path(&comp2, v2, k, j).is_some() {
            let mut on_first = vec![false; self.g.n()];
            for &z in &comp {
                on_first[z] = true;
            }
            if let Some(&z) = comp2.iter().find(|&&z| on_first[z] && !self.locked(z)) {
                return Err(internal(format!(
                    "two distinct good paths share the free vertex {z}"
                )));
            }
        }
        if path.len() < 3 {
            return Err(internal(
                "two-good-paths step needs a path on at least three vertices",
            ));
        }
        let mut index = vec![usize::MAX; self.g.n()];
        for (i, &z) in path.iter().enumerate() {
            index[z] = i;
        }
        let s = path[1];
        let t = self
            .g
            .neighbours(s)
            .iter()
            .copied()
            .find(|&w| index[w] == usize::MAX)
            .ok_or_else(|| internal("inner path vertex without an outside neighbour"))?;
        let c = self.col[t];
        if self.locked(t) {
            let h = self
                .top_neighbour(t)
                .ok_or_else(|| internal("locked vertex without a top-coloured neighbour"))?;
            if h == u {
                // t is then the c-neighbour of u and the (c,k)-component at u
                // contains the free vertex s; it cannot be a good path
                if self.try_kempe_component(u, c, k)? {
                    return Ok(GoodPathsOutcome::SameTop);
                }
                return Err(internal(
                    "two-good-paths step: two good paths share a free vertex",
                ));
            }
            self.set(s, self.top)?;
            self.set(v, k)?;
            let to = if self.g.has_edge(t, v) { j } else { k };
            self.set(t, to)?;
            self.recolour_spare(u)?;
            self.recolour_spare(h)?;
            return Ok(GoodPathsOutcome::LockedNeighbour);
        }
        let e = *path.last().unwrap();
        let l = self
            .top_neighbour(e)
            .ok_or_else(|| internal("locked path end without a top-coloured neighbour"))?;
        if l == u {
            return Err(internal(
                "two-good-paths free branch: both path ends see the same top vertex",
            ));
        }
        let on_path: Vec<usize> = self
            .g
            .neighbours(t)
            .iter()
            .filter(|&&w| index[w] != usize::MAX)
            .map(|&w| index[w])
            .collect();
        let lo = *on_path.iter().min().unwrap();
        let hi = *on_path.iter().max().unwrap();
        let (z1, z2) = (path[lo], path[hi]);
        if z1 != z2 && self.g.has_edge(z1, z2) {
            return Err(internal(
                "two-good-paths free branch: the two path neighbours of t are adjacent",
            ));
        }
        self.set(t, self.top)?;
        self.set(z1, c)?;
        if z2 != z1 {
            self.set(z2, c)?;
        }
        let head = path[..lo].to_vec();
        let tail = path[hi + 1..].to_vec();
        if !head.is_empty() {
            let second = self.col[head[0]];
            let first = if second == j { k } else { j };
            self.swap_checked(&head, first, second)?;
        }
        if !tail.is_empty() {
            let second = self.col[*tail.last().unwrap()];
            let first = if second == j { k } else { j };
            self.swap_checked(&tail, first, second)?;
        }
        self.recolour_spare(u)?;
        self.recolour_spare(l)?;
        Ok(GoodPathsOutcome::FreeNeighbour)
    }

    /// Both Kempe-component attempts on colours `(a, b)` at `u`, then the
    /// two-good-paths step.
    fn try_colour_pair(&mut self, u: Vertex, a: usize, b: usize) -> Result<bool> {
        if self.try_kempe_component(u, a, b)? || self.try_kempe_component(u, b, a)? {
            return Ok(true);
        }
        let (_, mut ab) = self.component_from(u, a, b)?;
        let (_, mut ba) = self.component_from(u, b, a)?;
        ab.sort_unstable();
        ba.sort_unstable();
        if ab != ba {
            self.compact_two_good_paths(u, a, b)?;
            return Ok(true);
        }
        Ok(false)
    }

    /// First free vertex reached by a breadth-first search from the top
    /// class, with its BFS parent and grandparent.
    fn nearest_free(&self) -> Result<(Vertex, Vertex, Vertex)> {
        let n = self.g.n();
        let mut parent = vec![usize::MAX; n];
        let mut queue: VecDeque<Vertex> = VecDeque::new();
        for u in self.top_class() {
            parent[u] = u;
            queue.push_back(u);
        }
        while let Some(v) = queue.pop_front() {
            for &w in self.g.neighbours(v) {
                if parent[w] != usize::MAX {
                    continue;
                }
                parent[w] = v;
                if !self.locked(w) {
                    let m = v;
                    let u = parent[m];
                    if parent[u] != u || m == u {
                        return Err(internal(
                            "nearest free vertex is not at distance two from the top class",
                        ));
                    }
                    return Ok((u, m, w));
                }
                queue.push_back(w);
            }
        }
        Err(Error::Frozen)
    }

    fn compact(&mut self) -> Result<()> {
        let before = self.top_class().len();
        if before == 0 {
            return Err(Error::EmptyTopClass);
        }
        self.compact_inner()?;
        let after = self.top_class().len();
        if after >= before {
            return Err(internal(format!(
                "compaction left {after} top vertices (was {before})"
            )));
        }
        Ok(())
    }

    fn compact_inner(&mut self) -> Result<()> {
        if self.try_unlocked_neighbour()? {
            return Ok(());
        }
        let (u, m, x) = self.nearest_free()?;
        let (a, b) = (self.col[m], self.col[x]);
        if self.try_colour_pair(u, a, b)? {
            return Ok(());
        }
        let c = (1..=self.delta)
            .find(|&c| c != a && c != b)
            .ok_or_else(|| internal("fewer than three colours below the top"))?;

        let h = kempe_order(self.g, &self.col, x, b, c);
        let inside = |col: &[usize], w: Vertex| col[w] == b || col[w] == c;
        let hub = h.iter().copied().find(|&w| {
            self.g
                .neighbours(w)
                .iter()
                .filter(|&&z| inside(&self.col, z))
                .count()
                >= 3
        });
        if let Some(w) = hub {
            if !self.superfree(w) {
                return Err(internal(
                    "branching vertex of the (b,c)-component is not superfree",
                ));
            }
            self.recolour_spare(w)?;
            if self.try_unlocked_neighbour()? || self.try_colour_pair(u, a, b)? {
                return Ok(());
            }
        }

        let h = kempe_order(self.g, &self.col, x, b, c);
        let path = self
            .as_path(&h, x, b, c)
            .ok_or_else(|| internal("(b,c)-component at the free vertex is not a path"))?;
        let x_end = *path.last().unwrap();
        let (first, second) = if self.col[x_end] == b { (c, b) } else { (b, c) };
        let mark = self.steps.len();
        let saved = self.col.clone();
        self.swap_checked(&path, first, second)?;
        if self.try_unlocked_neighbour()? || self.try_colour_pair(u, a, b)? {
            return Ok(());
        }

        // roll the swap back and finish on the (a,c)-component
        self.steps.truncate(mark);
        self.col = saved;
        if self.try_kempe_component(u, a, c)? {
            return Ok(());
        }
        Err(internal("compaction case analysis exhausted"))
    }
}

/// Recolours towards a colouring with strictly fewer top-coloured vertices.
pub fn compact(g: &Graph, c: &Colouring, delta: usize) -> Result<(RecolourPath, Colouring)> {
    check_colouring(g, c, delta)?;
    if delta < 3 {
        return Err(Error::InvalidParameter(format!(
            "compaction needs delta >= 3, got {delta}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    reject_forbidden_cliques(g, delta)?;
    if c.top_class().is_empty() {
        return Err(Error::EmptyTopClass);
    }
    if is_frozen(g, c, delta) {
        return Err(Error::Frozen);
    }
    let mut work = Work::new(g, c.colour.clone(), delta);
    work.compact()?;
    let out = Colouring::new(c.k, work.col);
    Ok((RecolourPath { steps: work.steps }, out))
}

fn regime(k: usize, delta: usize) -> String {
    if k <= 3 {
        format!("k = {k} <= 3 with max degree {delta}: polynomial regime not implemented here")
    } else if delta + 2 <= k {
        format!(
            "max degree {delta} <= k - 2 = {}: polynomial regime not implemented here",
            k - 2
        )
    } else {
        format!("k = {k} >= 4 and max degree {delta} >= k: PSPACE-hard regime")
    }
}

/// A recolouring path from `alpha` to `beta` with `k = Δ + 1` colours, or
/// `None` when one does not exist.
pub fn find_path(
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    beta: &Colouring,
) -> Result<Option<RecolourPath>> {
    find_path_bounded(g, k, alpha, beta, DEFAULT_LENGTH_FACTOR)
}

/// [`find_path`] with an explicit constant for the `C·n²` length guard.
pub fn find_path_bounded(
    g: &Graph,
    k: usize,
    alpha: &Colouring,
    beta: &Colouring,
    length_factor: usize,
) -> Result<Option<RecolourPath>> {
    let delta = g.max_degree();
    if k != delta + 1 {
        return Err(Error::Unsupported(regime(k, delta)));
    }
    for c in [alpha, beta] {
        if c.k != k {
            return Err(Error::InvalidParameter(format!(
                "colouring has {} colours, expected {k}",
                c.k
            )));
        }
        check_colouring(g, c, delta)?;
    }
    let mut steps = Vec::new();
    for comp in g.components() {
        let (h, ids) = g.induced(&comp);
        let a: Vec<usize> = ids.iter().map(|&v| alpha.colour[v]).collect();
        let b: Vec<usize> = ids.iter().map(|&v| beta.colour[v]).collect();
        if a == b {
            continue;
        }
        let fa = is_frozen(&h, &Colouring::new(k, a.clone()), delta);
        let fb = is_frozen(&h, &Colouring::new(k, b.clone()), delta);
        if fa || fb {
            return Ok(None);
        }
        let local = solve_connected(&h, delta, a, b)?;
        steps.extend(local.into_iter().map(|s| RecolourStep {
            v: ids[s.v],
            to: s.to,
        }));
    }
    let bound = length_factor * g.n() * g.n();
    if steps.len() > bound {
        return Err(Error::PathTooLong {
            length: steps.len(),
            bound,
        });
    }
    let path = RecolourPath { steps };
    if !validate_path(g, k, alpha, &path, beta) {
        return Err(internal("assembled recolouring path does not validate"));
    }
    Ok(Some(path))
}

fn solve_components(
    g: &Graph,
    delta: usize,
    a: Vec<usize>,
    b: Vec<usize>,
) -> Result<Vec<RecolourStep>> {
    let mut steps = Vec::new();
    for comp in g.components() {
        let (h, ids) = g.induced(&comp);
        let la: Vec<usize> = ids.iter().map(|&v| a[v]).collect();
        let lb: Vec<usize> = ids.iter().map(|&v| b[v]).collect();
        if la == lb {
            continue;
        }
        let local = solve_connected(&h, delta, la, lb)?;
        steps.extend(local.into_iter().map(|s| RecolourStep {
            v: ids[s.v],
            to: s.to,
        }));
    }
    Ok(steps)
}

/// Compacts repeatedly until the top colour is unused.
fn compact_all(
    g: &Graph,
    delta: usize,
    col: Vec<usize>,
) -> Result<(Vec<RecolourStep>, Vec<usize>)> {
    let mut work = Work::new(g, col, delta);
    while !work.top_class().is_empty() {
        work.compact()?;
    }
    Ok((work.steps, work.col))
}

fn solve_connected(
    g: &Graph,
    delta: usize,
    a: Vec<usize>,
    b: Vec<usize>,
) -> Result<Vec<RecolourStep>> {
    if a == b {
        return Ok(Vec::new());
    }
    if delta <= 2 {
        return base_case(g, delta, a, b);
    }
    if is_frozen(g, &Colouring::new(delta + 1, a.clone()), delta) {
        return Err(internal("frozen colouring inside the recursion"));
    }
    let top = delta + 1;
    let (to_gamma1, gamma1) = compact_all(g, delta, a)?;
    let (to_gamma2, gamma2) = compact_all(g, delta, b.clone())?;
    let d = maximalize_a(g, &decompose_k(g, delta)?)?;

    let mut steps = to_gamma1;
    steps.extend(d.a_set.iter().map(|&v| RecolourStep { v, to: top }));
    let (h, ids) = g.induced(&d.b_set);
    let ha: Vec<usize> = ids.iter().map(|&v| gamma1[v]).collect();
    let hb: Vec<usize> = ids.iter().map(|&v| gamma2[v]).collect();
    let inner = solve_components(&h, delta - 1, ha, hb)?;
    steps.extend(inner.into_iter().map(|s| RecolourStep {
        v: ids[s.v],
        to: s.to,
    }));
    steps.extend(
        d.a_set
            .iter()
            .rev()
            .map(|&v| RecolourStep { v, to: gamma2[v] }),
    );

    let back = reverse_path(&RecolourPath { steps: to_gamma2 }, &Colouring::new(top, b))?;
    steps.extend(back.steps);
    Ok(steps)
}

/// Graphs of maximum degree at most two with at most three colours: paths are
/// fixed vertex by vertex from one end, anything else goes to the oracle.
fn base_case(g: &Graph, delta: usize, a: Vec<usize>, b: Vec<usize>) -> Result<Vec<RecolourStep>> {
    let k = delta + 1;
    let n = g.n();
    let ends: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) <= 1).collect();
    if g.m() + 1 != n || ends.is_empty() || k < 3 {
        let budget = OracleBudget::default();
        let path =
            brute_reconfig_path_with(g, k, &Colouring::new(k, a), &Colouring::new(k, b), &budget)?;
        return path
            .map(|p| p.steps)
            .ok_or_else(|| internal("no recolouring path in the base case"));
    }
    let mut order = vec![ends[0]];
    while order.len() < n {
        let last = *order.last().unwrap();
        let prev = if order.len() > 1 {
            order[order.len() - 2]
        } else {
            usize::MAX
        };
        let next = g
            .neighbours(last)
            .iter()
            .copied()
            .find(|&w| w != prev)
            .unwrap();
        order.push(next);
    }
    let mut work = Work::new(g, a, delta);
    for i in 0..n {
        let v = order[i];
        let target = b[v];
        if work.col[v] == target {
            continue;
        }
        clear_colour(&mut work, &order, i + 1, target)?;
        work.set(v, target)?;
    }
    Ok(work.steps)
}

/// Moves `order[i]` off colour `avoid`, pushing further along the path when
/// its only escape colour is taken by the next vertex.
fn clear_colour(work: &mut Work<'_>, order: &[Vertex], i: usize, avoid: usize) -> Result<()> {
    if i >= order.len() || work.col[order[i]] != avoid {
        return Ok(());
    }
    let v = order[i];
    let left = work.col[order[i - 1]];
    let escape = (1..=work.top)
        .find(|&c| c != avoid && c != left)
        .ok_or_else(|| internal("no escape colour on a path"))?;
    clear_colour(work, order, i + 1, escape)?;
    work.set(v, escape)
}
