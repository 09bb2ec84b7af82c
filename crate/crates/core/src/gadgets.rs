//! Hardness gadgets: the block `H(a, B, D)`, the recursive tower `H^q` and the
//! reduction from positive 1-in-k-SAT to k-degenerate decomposition at
//! maximum degree `2k - 2`.
//!
//! Vertex ids are laid out tower by tower (variable-major), each tower in
//! `(level, block, role)` order with roles `a`, then `B`, then `D`; clause
//! vertices follow, clause-major.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{verify_decomposition, Decomposition, Graph, Vertex};

/// Positive 1-in-k-SAT instance; variables are numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub k: usize,
    pub clauses: Vec<Vec<usize>>,
}

impl CnfInstance {
    pub fn new(num_vars: usize, k: usize, mut clauses: Vec<Vec<usize>>) -> Result<Self> {
        for (j, c) in clauses.iter_mut().enumerate() {
            Self::check_clause(c, num_vars, k)
                .map_err(|msg| Error::InvalidParameter(format!("clause {}: {msg}", j + 1)))?;
            c.sort_unstable();
        }
        Ok(CnfInstance {
            num_vars,
            k,
            clauses,
        })
    }

    /// Arity, range and distinctness of one clause.
    pub fn check_clause(
        clause: &[usize],
        num_vars: usize,
        k: usize,
    ) -> std::result::Result<(), String> {
        if clause.len() != k {
            return Err(format!(
                "clause has {} literals, expected {k}",
                clause.len()
            ));
        }
        if let Some(&x) = clause.iter().find(|&&x| x == 0 || x > num_vars) {
            return Err(format!("variable {x} outside 1..={num_vars}"));
        }
        let mut sorted = clause.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err("repeated variable in a clause".into());
        }
        Ok(())
    }

    /// True iff exactly one variable of every clause is set.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().filter(|&&x| assignment[x - 1]).count() == 1)
    }
}

/// Role of a vertex inside one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    A,
    B(usize),
    D(usize),
}

/// Position of a vertex inside a tower: `level`, 1-based `block` and role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TowerCoord {
    pub level: usize,
    pub block: usize,
    pub role: Role,
}

impl TowerCoord {
    /// Label in the `a^i_j`, `ℓb^i_j`, `ℓd^i_j` notation, written ASCII.
    pub fn label(&self) -> String {
        match self.role {
            Role::A => format!("a^{}_{}", self.level, self.block),
            Role::B(l) => format!("{l}b^{}_{}", self.level, self.block),
            Role::D(l) => format!("{l}d^{}_{}", self.level, self.block),
        }
    }
}

/// One block `H(a, B, D)`.
#[derive(Debug, Clone)]
pub struct Block {
    pub graph: Graph,
    pub a: Vertex,
    pub b_set: Vec<Vertex>,
    pub d_set: Vec<Vertex>,
}

fn check_k(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "gadgets need k >= 3, got {k}"
        )));
    }
    Ok(())
}

fn block_edges(a: Vertex, b_set: &[Vertex], d_set: &[Vertex], edges: &mut Vec<(Vertex, Vertex)>) {
    for (i, &b) in b_set.iter().enumerate() {
        edges.push((a, b));
        edges.extend(b_set[i + 1..].iter().map(|&c| (b, c)));
        edges.extend(d_set.iter().map(|&d| (b, d)));
    }
}

/// `a` joined to a `(k-1)`-clique `B`, which is joined completely to an
/// independent `(k-1)`-set `D`.
pub fn build_block(k: usize) -> Result<Block> {
    check_k(k)?;
    let b_set: Vec<Vertex> = (1..k).collect();
    let d_set: Vec<Vertex> = (k..2 * k - 1).collect();
    let mut edges = Vec::new();
    block_edges(0, &b_set, &d_set, &mut edges);
    Ok(Block {
        graph: Graph::from_edges(2 * k - 1, &edges)?,
        a: 0,
        b_set,
        d_set,
    })
}

/// One tower block as `(a, B, D)`.
pub type BlockSlots = (Vertex, Vec<Vertex>, Vec<Vertex>);

/// The tower `H^i` with every vertex labelled.
#[derive(Debug, Clone)]
pub struct Tower {
    pub graph: Graph,
    pub height: usize,
    /// Label of every vertex, indexed by id.
    pub coords: Vec<TowerCoord>,
    /// `blocks[i][j]` = (a, B, D) of block `j + 1` on level `i`.
    pub blocks: Vec<Vec<BlockSlots>>,
}

impl Tower {
    /// The D-sets of the top level, left to right.
    pub fn leaves(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.blocks[self.height].iter().map(|(_, _, d)| d)
    }
}

/// Vertex count of `H^i`: `1 + 2(k-1) · Σ_{l ≤ i} (k-1)^l`.
pub fn tower_size(k: usize, i: usize) -> usize {
    let mut blocks = 0;
    let mut width = 1;
    for _ in 0..=i {
        blocks += width;
        width *= k - 1;
    }
    1 + 2 * (k - 1) * blocks
}

fn tower_layout(
    k: usize,
    height: usize,
    offset: usize,
    coords: &mut Vec<TowerCoord>,
    edges: &mut Vec<(Vertex, Vertex)>,
) -> Vec<Vec<BlockSlots>> {
    let mut next = offset;
    let mut fresh = |coord: TowerCoord, coords: &mut Vec<TowerCoord>| {
        coords.push(coord);
        next += 1;
        next - 1
    };
    let root = fresh(
        TowerCoord {
            level: 0,
            block: 1,
            role: Role::A,
        },
        coords,
    );
    let mut levels: Vec<Vec<BlockSlots>> = Vec::new();
    for level in 0..=height {
        let width = (k - 1).pow(level as u32);
        let mut row = Vec::with_capacity(width);
        for j in 1..=width {
            let a = if level == 0 {
                root
            } else {
                let parent = &levels[level - 1][(j - 1) / (k - 1)];
                parent.2[(j - 1) % (k - 1)]
            };
            let b_set: Vec<Vertex> = (1..k)
                .map(|l| {
                    fresh(
                        TowerCoord {
                            level,
                            block: j,
                            role: Role::B(l),
                        },
                        coords,
                    )
                })
                .collect();
            let d_set: Vec<Vertex> = (1..k)
                .map(|l| {
                    fresh(
                        TowerCoord {
                            level,
                            block: j,
                            role: Role::D(l),
                        },
                        coords,
                    )
                })
                .collect();
            block_edges(a, &b_set, &d_set, edges);
            row.push((a, b_set, d_set));
        }
        levels.push(row);
    }
    levels
}

/// Builds `H^i`: level-`i` block `(k-1)(j-1)+l` hangs off the `l`-th
/// D-vertex of level-`(i-1)` block `j`.
pub fn build_tower(k: usize, i: usize) -> Result<Tower> {
    check_k(k)?;
    if (k - 1).checked_pow(i as u32).is_none_or(|w| w > 1 << 20) {
        return Err(Error::InvalidParameter(format!(
            "tower height {i} is too large for k = {k}"
        )));
    }
    let mut coords = Vec::new();
    let mut edges = Vec::new();
    let blocks = tower_layout(k, i, 0, &mut coords, &mut edges);
    let graph = Graph::from_edges(coords.len(), &edges)?;
    Ok(Tower {
        graph,
        height: i,
        coords,
        blocks,
    })
}

/// Output of [`build_reduction`].
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub k: usize,
    pub q: usize,
    /// `var_tower[h][coord]` for variable `h + 1`.
    pub var_tower: Vec<BTreeMap<TowerCoord, Vertex>>,
    /// `clause_vertex[j]` maps each variable of clause `j + 1` to its vertex.
    pub clause_vertex: Vec<BTreeMap<usize, Vertex>>,
    /// Per variable, the level-`q` D-sets of its tower, left to right.
    pub leaves: Vec<Vec<Vec<Vertex>>>,
    /// Per variable, every block's D-set.
    pub d_sets: Vec<Vec<(TowerCoord, Vec<Vertex>)>>,
    /// Per variable, every block's B-set.
    pub b_sets: Vec<Vec<(TowerCoord, Vec<Vertex>)>>,
}

/// Sidecar label map, with 1-indexed vertex ids as in the graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetLabels {
    pub towers: BTreeMap<String, BTreeMap<String, usize>>,
    pub clauses: BTreeMap<String, BTreeMap<String, usize>>,
}

impl GadgetGraph {
    pub fn labels(&self) -> GadgetLabels {
        let towers = self
            .var_tower
            .iter()
            .enumerate()
            .map(|(h, map)| {
                let inner = map.iter().map(|(c, &v)| (c.label(), v + 1)).collect();
                (format!("x{}", h + 1), inner)
            })
            .collect();
        let clauses = self
            .clause_vertex
            .iter()
            .enumerate()
            .map(|(j, map)| {
                let inner = map
                    .iter()
                    .map(|(&x, &v)| (format!("x{x}"), v + 1))
                    .collect();
                (format!("C{}", j + 1), inner)
            })
            .collect();
        GadgetLabels { towers, clauses }
    }
}

/// Smallest `q` with `m <= (k-1)^q`.
pub fn tower_height(k: usize, m: usize) -> usize {
    let mut q = 0;
    let mut width = 1;
    while width < m {
        width *= k - 1;
        q += 1;
    }
    q
}

pub fn build_reduction(inst: &CnfInstance, k: usize) -> Result<GadgetGraph> {
    check_k(k)?;
    if inst.k != k {
        return Err(Error::InvalidParameter(format!(
            "instance has clause arity {}, expected {k}",
            inst.k
        )));
    }
    let inst = CnfInstance::new(inst.num_vars, k, inst.clauses.clone())?;
    let m = inst.clauses.len();
    if m == 0 {
        return Err(Error::InvalidParameter(
            "the reduction needs at least one clause".into(),
        ));
    }
    let q = tower_height(k, m);
    let per_tower = tower_size(k, q);
    let mut coords = Vec::new();
    let mut edges = Vec::new();
    let mut var_tower = Vec::with_capacity(inst.num_vars);
    let mut leaves = Vec::with_capacity(inst.num_vars);
    let mut d_sets = Vec::with_capacity(inst.num_vars);
    let mut b_sets = Vec::with_capacity(inst.num_vars);
    for h in 0..inst.num_vars {
        let offset = h * per_tower;
        let start = coords.len();
        let levels = tower_layout(k, q, offset, &mut coords, &mut edges);
        var_tower.push(
            coords[start..]
                .iter()
                .enumerate()
                .map(|(i, &c)| (c, offset + i))
                .collect::<BTreeMap<_, _>>(),
        );
        leaves.push(
            levels[q]
                .iter()
                .map(|(_, _, d)| d.clone())
                .collect::<Vec<_>>(),
        );
        let coord_of = |level: usize, j: usize| TowerCoord {
            level,
            block: j + 1,
            role: Role::A,
        };
        d_sets.push(
            levels
                .iter()
                .enumerate()
                .flat_map(|(level, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, b)| (coord_of(level, j), b.2.clone()))
                })
                .collect(),
        );
        b_sets.push(
            levels
                .iter()
                .enumerate()
                .flat_map(|(level, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(j, b)| (coord_of(level, j), b.1.clone()))
                })
                .collect(),
        );
    }
    let mut next = coords.len();
    let mut clause_vertex = Vec::with_capacity(m);
    for (j, clause) in inst.clauses.iter().enumerate() {
        let ids: Vec<Vertex> = (next..next + k).collect();
        next += k;
        for (i, &u) in ids.iter().enumerate() {
            edges.extend(ids[i + 1..].iter().map(|&w| (u, w)));
        }
        for (&x, &u) in clause.iter().zip(&ids) {
            edges.extend(leaves[x - 1][j].iter().map(|&d| (u, d)));
        }
        clause_vertex.push(clause.iter().copied().zip(ids).collect());
    }
    let graph = Graph::from_edges(next, &edges)?;
    let gg = GadgetGraph {
        graph,
        k,
        q,
        var_tower,
        clause_vertex,
        leaves,
        d_sets,
        b_sets,
    };
    let found = gg.graph.max_degree();
    if found != 2 * k - 2 {
        return Err(crate::error::internal(format!(
            "gadget graph has maximum degree {found}, expected {}",
            2 * k - 2
        )));
    }
    Ok(gg)
}

/// Edge count from the per-class formula: per block `(k-1) + C(k-1,2) +
/// (k-1)^2`, per clause `C(k,2) + k(k-1)`.
pub fn reduction_edge_count(k: usize, num_vars: usize, m: usize) -> usize {
    let q = tower_height(k, m);
    let blocks: usize = (0..=q).map(|i| (k - 1).pow(i as u32)).sum();
    let per_block = (k - 1) + (k - 1) * (k - 2) / 2 + (k - 1) * (k - 1);
    num_vars * blocks * per_block + m * (k * (k - 1) / 2 + k * (k - 1))
}

/// One failed structural observation, with its location.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub observation: String,
    pub location: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub towers_checked: usize,
    pub clauses_checked: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural observations a valid decomposition of a gadget
/// graph must satisfy:
/// - `d_set_side`: every D-set lies on one side, and all top-level D-sets of a tower
///   lie on the same side;
/// - `b_set_outside_a`: every B-set has a vertex outside `A`;
/// - `clause_one_in_a`: each clause clique has exactly one vertex in `A`;
/// - `variable_side`: all clause vertices of one variable lie on the same side.
pub fn audit_observations(gg: &GadgetGraph, d: &Decomposition) -> Result<AuditReport> {
    if !verify_decomposition(&gg.graph, gg.k, d)? {
        return Err(Error::InvalidDecomposition(
            "audit needs a valid decomposition".into(),
        ));
    }
    audit_unchecked(gg, d)
}

/// The same checks as [`audit_observations`] without validating `d` first.
pub fn audit_unchecked(gg: &GadgetGraph, d: &Decomposition) -> Result<AuditReport> {
    let in_a = d.membership(gg.graph.n())?;
    let mut report = AuditReport::default();
    let mut flag = |obs: &str, loc: String| {
        report.violations.push(Violation {
            observation: obs.into(),
            location: loc,
        })
    };
    for (h, sets) in gg.d_sets.iter().enumerate() {
        for (coord, set) in sets {
            let on_a = set.iter().filter(|&&v| in_a[v]).count();
            if on_a != 0 && on_a != set.len() {
                flag(
                    "d_set_side",
                    format!(
                        "x{} D-set at level {} block {}",
                        h + 1,
                        coord.level,
                        coord.block
                    ),
                );
            }
        }
        let sides: Vec<bool> = gg.leaves[h].iter().flatten().map(|&v| in_a[v]).collect();
        if sides.windows(2).any(|w| w[0] != w[1]) {
            flag(
                "d_set_side",
                format!("x{} top-level D-sets split between A and B", h + 1),
            );
        }
        for (coord, set) in &gg.b_sets[h] {
            if set.iter().all(|&v| in_a[v]) {
                flag(
                    "b_set_outside_a",
                    format!(
                        "x{} B-set at level {} block {}",
                        h + 1,
                        coord.level,
                        coord.block
                    ),
                );
            }
        }
    }
    let mut side_of_var: BTreeMap<usize, (bool, usize)> = BTreeMap::new();
    for (j, clause) in gg.clause_vertex.iter().enumerate() {
        let on_a = clause.values().filter(|&&v| in_a[v]).count();
        if on_a != 1 {
            flag(
                "clause_one_in_a",
                format!("clause C{} has {on_a} vertices in A", j + 1),
            );
        }
        for (&x, &v) in clause {
            match side_of_var.get(&x) {
                None => {
                    side_of_var.insert(x, (in_a[v], j));
                }
                Some(&(side, first)) if side != in_a[v] => {
                    flag(
                        "variable_side",
                        format!("x{x} in clauses C{} and C{}", first + 1, j + 1),
                    );
                }
                Some(_) => {}
            }
        }
    }
    report.towers_checked = gg.d_sets.len();
    report.clauses_checked = gg.clause_vertex.len();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_shapes() {
        let b = build_block(3).unwrap();
        assert_eq!((b.graph.n(), b.graph.m()), (5, 7));
        let degrees: Vec<usize> = b.graph.vertices().map(|v| b.graph.degree(v)).collect();
        assert_eq!(degrees, vec![2, 4, 4, 2, 2]);
        let b4 = build_block(4).unwrap();
        assert_eq!((b4.graph.n(), b4.graph.m()), (7, 15));
        assert!(build_block(2).is_err());
    }

    #[test]
    fn tower_sizes() {
        for (k, i, n) in [(3, 0, 5), (3, 1, 13), (3, 2, 29), (4, 1, 25)] {
            let t = build_tower(k, i).unwrap();
            assert_eq!(t.graph.n(), n, "k={k} i={i}");
            assert_eq!(tower_size(k, i), n);
            assert_eq!(t.leaves().count(), (k - 1).pow(i as u32));
        }
    }

    #[test]
    fn tower_labels_identify_parents() {
        let t = build_tower(3, 1).unwrap();
        let (a, _, _) = &t.blocks[1][1];
        assert_eq!(t.coords[*a].label(), "2d^0_1");
    }

    #[test]
    fn reduction_heights() {
        assert_eq!(tower_height(3, 1), 0);
        assert_eq!(tower_height(3, 3), 2);
        assert_eq!(tower_height(4, 3), 1);
    }

    #[test]
    fn single_clause_k3() {
        let inst = CnfInstance::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        let gg = build_reduction(&inst, 3).unwrap();
        assert_eq!(gg.q, 0);
        assert_eq!(gg.graph.n(), 18);
        assert_eq!(gg.graph.max_degree(), 4);
        assert_eq!(gg.graph.m(), reduction_edge_count(3, 3, 1));
    }

    #[test]
    fn arity_mismatch() {
        let inst = CnfInstance::new(4, 4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(build_reduction(&inst, 3).is_err());
        assert!(CnfInstance::new(3, 3, vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn audit_flags_clause_and_leaf_violations() {
        let inst = CnfInstance::new(3, 3, vec![vec![1, 2, 3]]).unwrap();
        let gg = build_reduction(&inst, 3).unwrap();
        let clause: Vec<Vertex> = gg.clause_vertex[0].values().copied().collect();
        let d = Decomposition::new(vec![clause[0], clause[1]], Vec::new(), 3);
        let mut all: Vec<Vertex> = gg.graph.vertices().collect();
        all.retain(|v| !d.a_set.contains(v));
        let d = Decomposition::new(d.a_set.clone(), all, 3);
        let r = audit_unchecked(&gg, &d).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| v.observation == "clause_one_in_a"));

        let leaf = &gg.leaves[0][0];
        let a_set = vec![leaf[0]];
        let b_set: Vec<Vertex> = gg.graph.vertices().filter(|v| !a_set.contains(v)).collect();
        let r = audit_unchecked(&gg, &Decomposition::new(a_set, b_set, 3)).unwrap();
        assert!(r.violations.iter().any(|v| v.observation == "d_set_side"));
    }
}
