//! Linear-time near-bipartite decomposition of subcubic graphs.
//!
//! The graph is reduced to nothing by a fixed list of local reduction rules,
//! each of which touches only a constant-radius ball around the pivot vertex.
//! Every application is recorded; replaying the records backwards rebuilds
//! the graph while extending a 2-colouring in which colour 1 is independent
//! and colour 2 induces a forest.

use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::graph::{reject_forbidden_cliques, Decomposition, Graph, Vertex};

const NONE: Vertex = Vertex::MAX;

/// Largest possible radius-4 ball in a subcubic graph.
pub const BALL_LIMIT: usize = 1 + 3 + 9 + 27 + 81;

/// Which structure a rule removed; determines how the colouring is extended
/// when the rule is undone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// A single vertex of degree at most two.
    Vertex,
    Diamond,
    Twins,
    Prism,
    Triangle,
    H1,
    H2,
    H3,
    /// A claw centre together with its three claw-centre neighbours.
    ClawStar,
}

/// One applied reduction rule, with enough information to undo it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub rule: u8,
    pub pivot: Vertex,
    pub shape: Shape,
    /// Removed vertices in removal order, each with its neighbours at the
    /// moment it was removed.
    pub removed: Vec<(Vertex, Vec<Vertex>)>,
    pub added_edges: Vec<(Vertex, Vertex)>,
    pub roles: Vec<(&'static str, Vertex)>,
}

impl RuleRecord {
    pub fn role(&self, name: &str) -> Option<Vertex> {
        self.roles.iter().find(|(r, _)| *r == name).map(|&(_, v)| v)
    }

    fn require(&self, name: &str) -> Result<Vertex> {
        self.role(name)
            .ok_or_else(|| internal(format!("rule {} record lacks role {name}", self.rule)))
    }
}

/// A partial 2-colouring: 0 = uncoloured, 1 = independent side, 2 = forest side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NbColouring {
    pub colour: Vec<u8>,
}

impl NbColouring {
    pub fn uncoloured(n: usize) -> Self {
        NbColouring { colour: vec![0; n] }
    }
}

/// A subcubic graph with vertex tombstoning, the mutable substrate the rules
/// operate on.
#[derive(Debug, Clone)]
pub struct ReducibleGraph {
    slots: Vec<Slot>,
    live: usize,
    cursor: usize,
    epoch: u32,
}

/// Per-vertex state kept in one record so a visit touches a single cache line.
#[derive(Debug, Clone, Copy)]
struct Slot {
    nbrs: [Vertex; 3],
    stamp: u32,
    deg: u8,
    dist: u8,
    alive: bool,
}

struct Plan {
    rule: u8,
    pivot: Vertex,
    shape: Shape,
    remove: Vec<Vertex>,
    add: Vec<(Vertex, Vertex)>,
    roles: Vec<(&'static str, Vertex)>,
}

impl Plan {
    fn new(rule: u8, pivot: Vertex, shape: Shape) -> Self {
        Plan {
            rule,
            pivot,
            shape,
            remove: Vec::new(),
            add: Vec::new(),
            roles: Vec::new(),
        }
    }
}

struct Pattern {
    labels: &'static [&'static str],
    edges: &'static [(usize, usize)],
}

const PRISM: Pattern = Pattern {
    labels: &["a0", "a1", "a2", "b0", "b1", "b2"],
    edges: &[
        (0, 1),
        (0, 2),
        (1, 2),
        (0, 3),
        (1, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 5),
    ],
};

const H1: Pattern = Pattern {
    labels: &["u", "u1", "u2", "v1", "v2", "v3", "w"],
    edges: &[
        (0, 1),
        (0, 2),
        (1, 3),
        (1, 4),
        (2, 4),
        (2, 5),
        (3, 6),
        (4, 6),
        (5, 6),
        (3, 5),
    ],
};

const H2: Pattern = Pattern {
    labels: &["u", "u1", "u2", "u3", "t1", "t2", "t3", "t4"],
    edges: &[
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 4),
        (1, 5),
        (2, 5),
        (2, 6),
        (3, 6),
        (3, 7),
        (4, 6),
        (5, 7),
        (4, 7),
    ],
};

const H3: Pattern = Pattern {
    labels: &["u", "u1", "u2", "u3", "t1", "t2", "t3", "t4"],
    edges: &[
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 4),
        (1, 5),
        (2, 5),
        (2, 6),
        (3, 4),
        (3, 6),
        (4, 7),
        (5, 7),
        (6, 7),
    ],
};

impl ReducibleGraph {
    /// Copies a graph of maximum degree at most three.
    pub fn new(g: &Graph) -> Result<Self> {
        let n = g.n();
        let found = g.max_degree();
        if found > 3 {
            return Err(Error::DegreeTooLarge { found, bound: 3 });
        }
        let slots = (0..n)
            .map(|v| {
                let list = g.neighbours(v);
                let mut nbrs = [NONE; 3];
                nbrs[..list.len()].copy_from_slice(list);
                Slot {
                    nbrs,
                    stamp: 0,
                    deg: list.len() as u8,
                    dist: 0,
                    alive: true,
                }
            })
            .collect();
        Ok(ReducibleGraph {
            slots,
            live: n,
            cursor: 0,
            epoch: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.slots[v].alive
    }

    #[inline]
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        let slot = &self.slots[v];
        &slot.nbrs[..slot.deg as usize]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.slots[v].deg as usize
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.neighbours(a).contains(&b)
    }

    /// The live part as a plain graph on the original ids (dead vertices are
    /// isolated).
    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for v in 0..self.n() {
            for &w in self.neighbours(v) {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        Graph::from_edges(self.n(), &edges).expect("working graph stays simple")
    }

    /// Lowest-id live vertex.
    pub fn lowest_live(&mut self) -> Option<Vertex> {
        while self.cursor < self.n() && !self.slots[self.cursor].alive {
            self.cursor += 1;
        }
        (self.cursor < self.n()).then_some(self.cursor)
    }

    fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<()> {
        if a == b || self.has_edge(a, b) {
            return Err(internal(format!(
                "rule would add a loop or parallel edge {a}-{b}"
            )));
        }
        for (x, y) in [(a, b), (b, a)] {
            let d = self.slots[x].deg as usize;
            if d == 3 {
                return Err(internal(format!("adding {a}-{b} exceeds degree 3 at {x}")));
            }
            let row = &mut self.slots[x].nbrs;
            let mut i = d;
            while i > 0 && row[i - 1] > y {
                row[i] = row[i - 1];
                i -= 1;
            }
            row[i] = y;
            self.slots[x].deg += 1;
        }
        Ok(())
    }

    fn remove_edge(&mut self, a: Vertex, b: Vertex) {
        for (x, y) in [(a, b), (b, a)] {
            let d = self.slots[x].deg as usize;
            let row = &mut self.slots[x].nbrs;
            let i = row[..d].iter().position(|&w| w == y).expect("edge present");
            row.copy_within(i + 1..d, i);
            row[d - 1] = NONE;
            self.slots[x].deg -= 1;
        }
    }

    fn kill(&mut self, v: Vertex) -> Vec<Vertex> {
        let list = self.neighbours(v).to_vec();
        for &w in &list {
            self.remove_edge(v, w);
        }
        self.slots[v].alive = false;
        self.live -= 1;
        list
    }

    fn revive(&mut self, v: Vertex, list: &[Vertex]) -> Result<()> {
        self.slots[v].alive = true;
        self.live += 1;
        for &w in list {
            self.add_edge(v, w)?;
        }
        Ok(())
    }

    /// Breadth-first ball of the given radius; afterwards `in_ball` answers
    /// distance queries for it.
    fn ball(&mut self, centre: Vertex, radius: u8) -> Vec<Vertex> {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.slots.iter_mut().for_each(|s| s.stamp = 0);
            self.epoch = 1;
        }
        let mut out = vec![centre];
        self.slots[centre].stamp = self.epoch;
        self.slots[centre].dist = 0;
        let mut head = 0;
        while head < out.len() {
            let v = out[head];
            head += 1;
            if self.slots[v].dist == radius {
                continue;
            }
            for i in 0..self.slots[v].deg as usize {
                let w = self.slots[v].nbrs[i];
                if self.slots[w].stamp != self.epoch {
                    self.slots[w].stamp = self.epoch;
                    self.slots[w].dist = self.slots[v].dist + 1;
                    out.push(w);
                }
            }
        }
        debug_assert!(out.len() <= BALL_LIMIT);
        out
    }

    #[inline]
    fn in_ball(&self, v: Vertex, radius: u8) -> bool {
        self.slots[v].stamp == self.epoch && self.slots[v].dist <= radius
    }

    fn in_triangle(&self, v: Vertex) -> bool {
        let nb = self.neighbours(v);
        (0..nb.len()).any(|i| (i + 1..nb.len()).any(|j| self.has_edge(nb[i], nb[j])))
    }

    fn is_claw_centre(&self, v: Vertex) -> bool {
        self.degree(v) == 3 && !self.in_triangle(v)
    }

    /// First (lexicographic in pattern order) embedding of `pat` with pattern
    /// vertex 0 mapped to `anchor`. Only pattern edges are checked.
    fn match_pattern(&self, pat: &Pattern, anchor: Vertex) -> Option<Vec<Vertex>> {
        let k = pat.labels.len();
        let mut image = vec![NONE; k];
        image[0] = anchor;
        if self.extend_match(pat, &mut image, 1) {
            Some(image)
        } else {
            None
        }
    }

    fn extend_match(&self, pat: &Pattern, image: &mut Vec<Vertex>, i: usize) -> bool {
        if i == image.len() {
            return true;
        }
        let earlier: Vec<usize> = pat
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if b == i && a < i {
                    Some(a)
                } else if a == i && b < i {
                    Some(b)
                } else {
                    None
                }
            })
            .collect();
        let parent = *earlier
            .iter()
            .min()
            .expect("pattern vertices are listed in BFS order");
        for &cand in self.neighbours(image[parent]) {
            if image[..i].contains(&cand) {
                continue;
            }
            if earlier.iter().all(|&e| self.has_edge(cand, image[e])) {
                image[i] = cand;
                if self.extend_match(pat, image, i + 1) {
                    return true;
                }
            }
        }
        image[i] = NONE;
        false
    }

    fn plan_from_pattern(
        &self,
        rule: u8,
        pivot: Vertex,
        shape: Shape,
        pat: &Pattern,
        image: Vec<Vertex>,
    ) -> Plan {
        let mut plan = Plan::new(rule, pivot, shape);
        plan.roles = pat
            .labels
            .iter()
            .copied()
            .zip(image.iter().copied())
            .collect();
        plan.remove = image;
        plan
    }

    /// Rules 1 to 6 with pivot `p`.
    fn rules_one_to_six(&mut self, p: Vertex) -> Result<Option<Plan>> {
        if self.degree(p) <= 2 {
            let mut plan = Plan::new(1, p, Shape::Vertex);
            plan.remove.push(p);
            plan.roles.push(("v", p));
            return Ok(Some(plan));
        }

        let mut ball = self.ball(p, 3);
        ball.sort_unstable();
        if let Some(&v) = ball.iter().find(|&&v| self.degree(v) <= 2) {
            let mut plan = Plan::new(2, p, Shape::Vertex);
            plan.remove.push(v);
            plan.roles.push(("v", v));
            return Ok(Some(plan));
        }

        // every vertex within distance 3 of p now has degree exactly 3
        for &v in &ball {
            for &w in self.neighbours(v) {
                if w < v || !self.in_ball(w, 3) {
                    continue;
                }
                let common: Vec<Vertex> = self
                    .neighbours(v)
                    .iter()
                    .copied()
                    .filter(|&c| c != w && self.has_edge(w, c))
                    .collect();
                if common.len() != 2 {
                    continue;
                }
                let (x, y) = (common[0], common[1]);
                if self.has_edge(x, y) || !self.in_ball(x, 3) || !self.in_ball(y, 3) {
                    continue;
                }
                let outside = |a: Vertex| {
                    self.neighbours(a)
                        .iter()
                        .copied()
                        .find(|&z| z != v && z != w)
                        .unwrap_or(NONE)
                };
                let mut plan = Plan::new(3, p, Shape::Diamond);
                plan.remove = vec![v, w, x, y];
                plan.roles = vec![
                    ("v", v),
                    ("w", w),
                    ("x", x),
                    ("y", y),
                    ("x'", outside(x)),
                    ("y'", outside(y)),
                ];
                return Ok(Some(plan));
            }
        }

        for &a in &ball {
            if !self.in_ball(a, 2) {
                continue;
            }
            let first = self.neighbours(a)[0];
            for &b in self.neighbours(first) {
                if b <= a || !self.in_ball(b, 2) || self.has_edge(a, b) {
                    continue;
                }
                if self.neighbours(a) == self.neighbours(b) {
                    let shared = self.neighbours(a).to_vec();
                    let mut plan = Plan::new(4, p, Shape::Twins);
                    plan.remove = vec![a, b];
                    plan.remove.extend(&shared);
                    plan.roles = vec![("twin1", a), ("twin2", b)];
                    for (name, &s) in ["shared1", "shared2", "shared3"].iter().zip(&shared) {
                        plan.roles.push((name, s));
                    }
                    return Ok(Some(plan));
                }
            }
        }

        if self.component_is_prism(p) {
            let image = self
                .match_pattern(&PRISM, p)
                .ok_or_else(|| internal("prism component without a prism embedding"))?;
            return Ok(Some(self.plan_from_pattern(
                5,
                p,
                Shape::Prism,
                &PRISM,
                image,
            )));
        }

        let nb = self.neighbours(p).to_vec();
        let tri = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .find(|&(i, j)| self.has_edge(nb[i], nb[j]));
        if let Some((i, j)) = tri {
            let t = [p, nb[i], nb[j]];
            let mut ext = [NONE; 3];
            for (slot, &a) in t.iter().enumerate() {
                let mut out = self
                    .neighbours(a)
                    .iter()
                    .copied()
                    .filter(|z| !t.contains(z));
                ext[slot] = out
                    .next()
                    .ok_or_else(|| internal("triangle vertex without an outside neighbour"))?;
                if out.next().is_some() {
                    return Err(internal("triangle vertex with two outside neighbours"));
                }
            }
            if ext[0] == ext[1] || ext[0] == ext[2] || ext[1] == ext[2] {
                return Err(internal(
                    "triangle outside neighbours coincide although no diamond was found",
                ));
            }
            let mut order = [0usize, 1, 2];
            order.sort_by_key(|&s| ext[s]);
            let pair = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .map(|(a, b)| (order[a], order[b]))
                .find(|&(a, b)| !self.has_edge(ext[a], ext[b]))
                .ok_or_else(|| {
                    internal("triangle outside neighbours pairwise adjacent outside a prism")
                })?;
            let third = 3 - pair.0 - pair.1;
            let mut plan = Plan::new(6, p, Shape::Triangle);
            plan.remove = t.to_vec();
            plan.add = vec![(ext[pair.0], ext[pair.1])];
            plan.roles = vec![
                ("x", t[pair.0]),
                ("y", t[pair.1]),
                ("u", t[third]),
                ("x'", ext[pair.0]),
                ("y'", ext[pair.1]),
                ("u'", ext[third]),
            ];
            return Ok(Some(plan));
        }
        Ok(None)
    }

    fn component_is_prism(&mut self, p: Vertex) -> bool {
        let comp = self.ball(p, 3);
        if comp.len() != 6
            || comp.iter().any(|&v| {
                self.degree(v) != 3 || self.neighbours(v).iter().any(|&w| !comp.contains(&w))
            })
        {
            return false;
        }
        // a cubic graph on six vertices is the prism or K_{3,3}
        self.in_triangle(p)
    }

    fn find_plan(&mut self, u: Vertex) -> Result<Plan> {
        if let Some(plan) = self.rules_one_to_six(u)? {
            return Ok(plan);
        }
        // u has degree 3 and lies in no triangle, so it is a claw centre
        let nb = self.neighbours(u).to_vec();
        if let Some(&v) = nb.iter().find(|&&v| self.in_triangle(v)) {
            return self.rules_one_to_six(v)?.ok_or_else(|| {
                internal(format!(
                    "no rule among 1-6 applies to {v} after dispatch from {u}"
                ))
            });
        }
        for (pat, shape) in [(&H1, Shape::H1), (&H2, Shape::H2), (&H3, Shape::H3)] {
            if let Some(image) = self.match_pattern(pat, u) {
                return Ok(self.plan_from_pattern(8, u, shape, pat, image));
            }
        }
        if nb.len() != 3 || !nb.iter().all(|&v| self.is_claw_centre(v)) {
            return Err(internal(format!("no reduction rule applies at vertex {u}")));
        }
        let mut plan = Plan::new(9, u, Shape::ClawStar);
        plan.remove = vec![u, nb[0], nb[1], nb[2]];
        plan.roles = vec![("u", u), ("u1", nb[0]), ("u2", nb[1]), ("u3", nb[2])];
        for &ui in &nb {
            let ends: Vec<Vertex> = self
                .neighbours(ui)
                .iter()
                .copied()
                .filter(|&z| z != u)
                .collect();
            plan.add.push((ends[0], ends[1]));
        }
        let e = &plan.add;
        if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
            return Err(internal(format!("rule 9 at {u} would add a repeated edge")));
        }
        Ok(plan)
    }

    fn execute(&mut self, plan: Plan) -> Result<RuleRecord> {
        let removed: Vec<(Vertex, Vec<Vertex>)> =
            plan.remove.iter().map(|&v| (v, self.kill(v))).collect();
        for &(a, b) in &plan.add {
            self.add_edge(a, b)?;
        }
        for &(a, b) in &plan.add {
            if self.edge_in_k4(a, b) {
                return Err(internal(format!(
                    "rule {} created a K_4 through {a}-{b}",
                    plan.rule
                )));
            }
        }
        Ok(RuleRecord {
            rule: plan.rule,
            pivot: plan.pivot,
            shape: plan.shape,
            removed,
            added_edges: plan.add,
            roles: plan.roles,
        })
    }

    fn edge_in_k4(&self, a: Vertex, b: Vertex) -> bool {
        let common: Vec<Vertex> = self
            .neighbours(a)
            .iter()
            .copied()
            .filter(|&c| c != b && self.has_edge(b, c))
            .collect();
        common.len() == 2 && self.has_edge(common[0], common[1])
    }

    /// Applies the first applicable rule with pivot `u`.
    pub fn apply_first_rule(&mut self, u: Vertex) -> Result<RuleRecord> {
        if u >= self.n() {
            return Err(Error::VertexOutOfRange(u));
        }
        if !self.slots[u].alive {
            return Err(Error::DeadVertex(u));
        }
        let before = self.live;
        let plan = self.find_plan(u)?;
        let record = self.execute(plan)?;
        debug_assert!(self.live < before);
        Ok(record)
    }

    /// Reverts `record`, which must be the most recent unreverted rule, and
    /// colours the restored vertices.
    fn undo(&mut self, record: &RuleRecord, c: &mut NbColouring) -> Result<()> {
        for &(a, b) in &record.added_edges {
            self.remove_edge(a, b);
        }
        for (v, list) in record.removed.iter().rev() {
            self.revive(*v, list)?;
        }
        let removed: Vec<Vertex> = record.removed.iter().map(|&(v, _)| v).collect();
        let col = &c.colour;
        let whites = match record.shape {
            Shape::Vertex => {
                let v = removed[0];
                let one = self.neighbours(v).iter().any(|&w| col[w] == 1);
                if one {
                    vec![]
                } else {
                    vec![v]
                }
            }
            Shape::Diamond => {
                let ext_two = |r: &str| record.role(r).is_none_or(|z| z == NONE || col[z] == 2);
                if ext_two("x'") && ext_two("y'") {
                    vec![record.require("x")?, record.require("y")?]
                } else {
                    vec![record.require("v")?]
                }
            }
            Shape::Twins => vec![record.require("twin1")?, record.require("twin2")?],
            Shape::Prism => vec![record.require("a0")?, record.require("b1")?],
            Shape::Triangle => {
                let (x, y, u) = (
                    record.require("x")?,
                    record.require("y")?,
                    record.require("u")?,
                );
                let (xo, yo, uo) = (
                    record.require("x'")?,
                    record.require("y'")?,
                    record.require("u'")?,
                );
                let white = match (col[xo], col[yo]) {
                    (2, 2) if col[uo] == 2 => u,
                    (2, 2) => x,
                    (1, _) => y,
                    (_, 1) => x,
                    _ => return Err(internal("triangle outside neighbours are uncoloured")),
                };
                vec![white]
            }
            Shape::H1 => vec![record.require("v2")?, record.require("v3")?],
            Shape::H2 => vec![
                record.require("u3")?,
                record.require("t1")?,
                record.require("t2")?,
            ],
            Shape::H3 => vec![
                record.require("u1")?,
                record.require("u2")?,
                record.require("u3")?,
            ],
            Shape::ClawStar => vec![record.require("u")?],
        };
        for &v in &removed {
            c.colour[v] = if whites.contains(&v) { 1 } else { 2 };
        }
        Ok(())
    }
}

/// Checks that every live vertex is coloured, colour 1 is independent and
/// colour 2 induces a forest.
pub fn check_nb_colouring(g: &ReducibleGraph, c: &NbColouring) -> Result<()> {
    let n = g.n();
    if c.colour.len() != n {
        return Err(Error::InvalidParameter(format!(
            "colouring has {} entries for {n} vertices",
            c.colour.len()
        )));
    }
    let mut parent: Vec<Vertex> = (0..n).collect();
    fn find(parent: &mut [Vertex], mut v: Vertex) -> Vertex {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for v in 0..n {
        if !g.is_alive(v) {
            continue;
        }
        let cv = c.colour[v];
        if cv != 1 && cv != 2 {
            return Err(Error::InvalidDecomposition(format!(
                "vertex {v} has colour {cv}"
            )));
        }
        for &w in g.neighbours(v) {
            if w < v {
                continue;
            }
            match (cv, c.colour[w]) {
                (1, 1) => {
                    return Err(Error::InvalidDecomposition(format!(
                        "colour 1 on both ends of {v}-{w}"
                    )))
                }
                (2, 2) => {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                    if a == b {
                        return Err(Error::InvalidDecomposition(format!(
                            "colour 2 closes a cycle at {v}-{w}"
                        )));
                    }
                    parent[a] = b;
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Applies the first applicable rule at `u`, returning the reduced graph
/// (as a fresh copy) and the record.
pub fn apply_first_rule(g: &ReducibleGraph, u: Vertex) -> Result<(ReducibleGraph, RuleRecord)> {
    let mut next = g.clone();
    let record = next.apply_first_rule(u)?;
    Ok((next, record))
}

/// Undoes `record` on `g` (the graph right after the rule was applied) and
/// extends `c` to the restored vertices. `c` is validated first.
pub fn undo_and_extend(
    g: &mut ReducibleGraph,
    record: &RuleRecord,
    c: &mut NbColouring,
) -> Result<()> {
    check_nb_colouring(g, c)?;
    for &(a, b) in &record.added_edges {
        if !g.has_edge(a, b) {
            return Err(Error::Precondition(format!(
                "added edge {a}-{b} is not present"
            )));
        }
    }
    for (v, _) in &record.removed {
        if g.is_alive(*v) {
            return Err(Error::Precondition(format!(
                "vertex {v} of the record is alive"
            )));
        }
    }
    g.undo(record, c)?;
    check_nb_colouring(g, c).map_err(|e| {
        internal(format!(
            "rule {} undo broke the colouring: {e}",
            record.rule
        ))
    })
}

/// Reduces `g` to the empty graph, always pivoting on the lowest live id.
pub fn reduce_to_empty(g: &Graph) -> Result<Vec<RuleRecord>> {
    reject_forbidden_cliques(g, 3)?;
    let mut wg = ReducibleGraph::new(g)?;
    reduce(&mut wg)
}

fn reduce(wg: &mut ReducibleGraph) -> Result<Vec<RuleRecord>> {
    let mut records = Vec::new();
    while let Some(u) = wg.lowest_live() {
        records.push(wg.apply_first_rule(u)?);
    }
    Ok(records)
}

/// Near-bipartite decomposition (A independent, G[B] a forest) of a graph of
/// maximum degree three with no K_4 component.
pub fn decompose_subcubic(g: &Graph) -> Result<Decomposition> {
    decompose_subcubic_with_records(g).map(|(d, _)| d)
}

/// As [`decompose_subcubic`], also returning the applied rule records in
/// application order.
pub fn decompose_subcubic_with_records(g: &Graph) -> Result<(Decomposition, Vec<RuleRecord>)> {
    reject_forbidden_cliques(g, 3)?;
    let mut wg = ReducibleGraph::new(g)?;
    let records = reduce(&mut wg)?;
    let mut c = NbColouring::uncoloured(g.n());
    for record in records.iter().rev() {
        wg.undo(record, &mut c)?;
    }
    debug_assert!(check_nb_colouring(&wg, &c).is_ok());
    let in_a: Vec<bool> = c.colour.iter().map(|&x| x == 1).collect();
    Ok((Decomposition::from_membership(&in_a, 3), records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_decomposition;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges).unwrap()
    }

    fn prism() -> Graph {
        graph(
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
    }

    fn k33() -> Graph {
        let e: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        graph(6, &e)
    }

    #[test]
    fn rule_one_on_path_middle() {
        let mut wg = ReducibleGraph::new(&Graph::path(3)).unwrap();
        let r = wg.apply_first_rule(1).unwrap();
        assert_eq!((r.rule, r.removed[0].0), (1, 1));
        assert_eq!(wg.live_count(), 2);
    }

    #[test]
    fn prism_fires_rule_five() {
        for u in 0..6 {
            let mut wg = ReducibleGraph::new(&prism()).unwrap();
            let r = wg.apply_first_rule(u).unwrap();
            assert_eq!(r.rule, 5);
            assert_eq!(wg.live_count(), 0);
        }
    }

    #[test]
    fn k33_fires_rule_four() {
        for u in 0..6 {
            let mut wg = ReducibleGraph::new(&k33()).unwrap();
            let r = wg.apply_first_rule(u).unwrap();
            assert_eq!(r.rule, 4);
            assert_eq!(r.removed.len(), 5);
        }
    }

    #[test]
    fn triangle_reduces_by_rule_one() {
        let recs = reduce_to_empty(&Graph::cycle(3)).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.rule == 1));
        assert!(reduce_to_empty(&Graph::empty(0)).unwrap().is_empty());
    }

    #[test]
    fn k4_is_rejected() {
        assert!(matches!(
            decompose_subcubic(&Graph::complete(4)),
            Err(Error::ForbiddenClique { .. })
        ));
        assert!(matches!(
            reduce_to_empty(&Graph::complete(4)),
            Err(Error::ForbiddenClique { .. })
        ));
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(matches!(
            decompose_subcubic(&star),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn rule_one_undo_colours_by_neighbours() {
        let g = Graph::path(3);
        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(1).unwrap();
        let mut c = NbColouring {
            colour: vec![2, 0, 2],
        };
        undo_and_extend(&mut wg, &r, &mut c).unwrap();
        assert_eq!(c.colour, vec![2, 1, 2]);

        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(1).unwrap();
        let mut c = NbColouring {
            colour: vec![1, 0, 2],
        };
        undo_and_extend(&mut wg, &r, &mut c).unwrap();
        assert_eq!(c.colour[1], 2);
    }

    #[test]
    fn prism_undo_picks_one_per_triangle() {
        let g = prism();
        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(0).unwrap();
        let mut c = NbColouring::uncoloured(6);
        undo_and_extend(&mut wg, &r, &mut c).unwrap();
        let ones: Vec<_> = (0..6).filter(|&v| c.colour[v] == 1).collect();
        assert_eq!(ones.len(), 2);
        assert!(ones.iter().filter(|&&v| v < 3).count() == 1);
    }

    #[test]
    fn undo_rejects_invalid_prior_colouring() {
        let g = Graph::path(4);
        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(0).unwrap();
        let mut c = NbColouring {
            colour: vec![0, 1, 1, 2],
        };
        assert!(undo_and_extend(&mut wg, &r, &mut c).is_err());
    }

    #[test]
    fn triangle_rule_undo_all_outside_forest() {
        // triangle 0,1,2 with pendant paths so every vertex near the triangle
        // has degree 3: outside neighbours 3,4,5 joined into a 6-cycle-ish host
        let g = graph(
            12,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (0, 3),
                (1, 4),
                (2, 5),
                (3, 6),
                (3, 7),
                (4, 8),
                (4, 9),
                (5, 10),
                (5, 11),
                (6, 8),
                (7, 10),
                (9, 11),
                (6, 9),
                (7, 11),
                (8, 10),
            ],
        );
        assert_eq!(g.max_degree(), 3);
        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(0).unwrap();
        assert_eq!(r.rule, 6);
        let mut c = NbColouring::uncoloured(12);
        for v in 3..12 {
            c.colour[v] = 2;
        }
        // a valid prior colouring: pick an independent set covering all cycles
        let prior = wg.to_graph();
        let d = crate::oracles::brute_decompose(&induced_live(&prior, 3), 3)
            .unwrap()
            .unwrap();
        for &a in &d.a_set {
            c.colour[a + 3] = 1;
        }
        let (xo, yo, uo) = (
            r.role("x'").unwrap(),
            r.role("y'").unwrap(),
            r.role("u'").unwrap(),
        );
        undo_and_extend(&mut wg, &r, &mut c).unwrap();
        if c.colour[xo] == 2 && c.colour[yo] == 2 && c.colour[uo] == 2 {
            assert_eq!(c.colour[r.role("u").unwrap()], 1);
        }
        let d = Decomposition::from_membership(
            &c.colour.iter().map(|&x| x == 1).collect::<Vec<_>>(),
            3,
        );
        assert!(verify_decomposition(&g, 3, &d).unwrap());
    }

    fn induced_live(g: &Graph, from: usize) -> Graph {
        let keep: Vec<_> = (from..g.n()).collect();
        g.induced(&keep).0
    }

    #[test]
    fn fixtures_decompose() {
        let petersen = graph(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (0, 4),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        );
        for g in [prism(), k33(), petersen, Graph::cycle(7), Graph::path(5)] {
            let d = decompose_subcubic(&g).unwrap();
            assert!(verify_decomposition(&g, 3, &d).unwrap());
        }
        let d = decompose_subcubic(&prism()).unwrap();
        assert_eq!(d.a_set.len(), 2);
    }

    fn pattern_graph(p: &Pattern) -> Graph {
        graph(p.labels.len(), p.edges)
    }

    #[test]
    fn rule_eight_shapes_reduce_whole() {
        for (p, shape) in [(&H2, Shape::H2), (&H3, Shape::H3)] {
            let g = pattern_graph(p);
            let mut wg = ReducibleGraph::new(&g).unwrap();
            let r = wg.apply_first_rule(0).unwrap();
            assert_eq!((r.rule, r.shape), (8, shape));
            assert_eq!(wg.live_count(), 0);
            let d = decompose_subcubic(&g).unwrap();
            assert!(verify_decomposition(&g, 3, &d).unwrap());
        }
    }

    #[test]
    fn rule_nine_on_large_girth_host() {
        // Heawood graph: cubic, girth 6, no twins, no triangles
        let mut e = Vec::new();
        for i in 0..14 {
            e.push((i, (i + 1) % 14));
        }
        for i in (0..14).step_by(2) {
            e.push((i, (i + 5) % 14));
        }
        let g = Graph::from_edges_dedup(14, &e);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        let mut wg = ReducibleGraph::new(&g).unwrap();
        let r = wg.apply_first_rule(0).unwrap();
        assert_eq!(r.rule, 9);
        assert_eq!(r.added_edges.len(), 3);
        let d = decompose_subcubic(&g).unwrap();
        assert!(verify_decomposition(&g, 3, &d).unwrap());
    }
}
