//! The essential dual graph: a loopless connected multigraph, its subset
//! combinatorics (boundary counts, connected subsets), per-vertex flow
//! functions, and edge subdivisions.

use crate::error::{Error, Result};

/// Hard cap on vertex counts so subsets fit in a `u32` bitmask.
pub const MAX_VERTICES: usize = 32;

/// A set of vertices encoded as a bitmask; bit `i` is vertex `i` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn full(p: usize) -> Self {
        if p >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << p) - 1)
        }
    }

    /// Build from 0-based vertex indices.
    pub fn from_vertices<I: IntoIterator<Item = usize>>(vs: I) -> Self {
        let mut mask = 0u32;
        for v in vs {
            mask |= 1 << v;
        }
        VertexSet(mask)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, p: usize) -> Self {
        VertexSet(!self.0 & Self::full(p).0)
    }

    pub fn is_proper_nonempty(self, p: usize) -> bool {
        self.0 != 0 && self.0 != Self::full(p).0 && self.0 & !Self::full(p).0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }
}

impl std::fmt::Display for VertexSet {
    /// Renders 1-based, e.g. `{1,4}`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (n, v) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "}}")
    }
}

/// A proper nonempty connected vertex subset together with the number of
/// edges crossing its boundary.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cut {
    pub set: VertexSet,
    pub boundary: u32,
}

/// Loopless connected multigraph. Edges are stored in a canonical order:
/// each as `(a, b)` with `a < b`, the list sorted lexicographically, so
/// parallel edges occupy consecutive positions. The position in this list
/// is the edge's identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    mult: Vec<Vec<u32>>,
    degree: Vec<u32>,
    neighbor_mask: Vec<u32>,
}

impl DualGraph {
    /// Build from an explicit edge list. Validates looplessness,
    /// connectivity and the vertex-count bounds.
    pub fn from_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count < 2 {
            return Err(Error::TooFewVertices {
                found: vertex_count,
            });
        }
        if vertex_count > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                found: vertex_count,
                max: MAX_VERTICES,
            });
        }
        let mut canonical = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= vertex_count {
                return Err(Error::BadVertexIndex {
                    index: a,
                    vertex_count,
                });
            }
            if b >= vertex_count {
                return Err(Error::BadVertexIndex {
                    index: b,
                    vertex_count,
                });
            }
            if a == b {
                return Err(Error::LoopEdge { vertex: a });
            }
            canonical.push((a.min(b), a.max(b)));
        }
        canonical.sort_unstable();

        let mut mult = vec![vec![0u32; vertex_count]; vertex_count];
        for &(a, b) in &canonical {
            mult[a][b] += 1;
            mult[b][a] += 1;
        }
        let degree: Vec<u32> = mult.iter().map(|row| row.iter().sum()).collect();
        let neighbor_mask: Vec<u32> = mult
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(_, &m)| m > 0)
                    .fold(0u32, |acc, (j, _)| acc | 1 << j)
            })
            .collect();

        let g = DualGraph {
            vertex_count,
            edges: canonical,
            mult,
            degree,
            neighbor_mask,
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Build the multigraph from a symmetric intersection matrix. The
    /// off-diagonal entries are the edge multiplicities; the diagonal is
    /// validated against minus the row sum of the off-diagonal entries and
    /// otherwise ignored.
    pub fn from_intersection_matrix(matrix: &[Vec<i64>]) -> Result<Self> {
        let p = matrix.len();
        if p < 2 {
            return Err(Error::TooFewVertices { found: p });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != p {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: p,
                });
            }
        }
        for i in 0..p {
            for j in (i + 1)..p {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::AsymmetricMatrix {
                        row: i,
                        col: j,
                        a: matrix[i][j],
                        b: matrix[j][i],
                    });
                }
                if matrix[i][j] < 0 {
                    return Err(Error::NegativeMultiplicity {
                        row: i,
                        col: j,
                        value: matrix[i][j],
                    });
                }
            }
        }
        for i in 0..p {
            let off_sum: i64 = (0..p).filter(|&j| j != i).map(|j| matrix[i][j]).sum();
            if matrix[i][i] != -off_sum {
                return Err(Error::BadDiagonal {
                    vertex: i,
                    found: matrix[i][i],
                    expected: -off_sum,
                });
            }
        }
        let mut edges = Vec::new();
        for i in 0..p {
            for j in (i + 1)..p {
                for _ in 0..matrix[i][j] {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(p, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonically ordered edge list; the index in this slice is the edge id.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_ends(&self, id: usize) -> Result<(usize, usize)> {
        self.edges.get(id).copied().ok_or(Error::BadEdgeIndex {
            index: id,
            edge_count: self.edges.len(),
        })
    }

    /// The end of edge `id` that is not `v`.
    pub fn other_end(&self, id: usize, v: usize) -> Result<usize> {
        let (a, b) = self.edge_ends(id)?;
        Ok(if v == a { b } else { a })
    }

    pub fn multiplicity(&self, i: usize, j: usize) -> u32 {
        self.mult[i][j]
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degree[v]
    }

    /// Label for reports, 1-based, with a `#k` suffix distinguishing
    /// parallel edges: `2-3#1`, `2-3#2`.
    pub fn edge_label(&self, id: usize) -> String {
        let (a, b) = self.edges[id];
        if self.mult[a][b] > 1 {
            let first = self.edges.iter().position(|&e| e == (a, b)).unwrap();
            format!("{}-{}#{}", a + 1, b + 1, id - first + 1)
        } else {
            format!("{}-{}", a + 1, b + 1)
        }
    }

    /// The intersection matrix with the canonical diagonal.
    pub fn to_intersection_matrix(&self) -> Vec<Vec<i64>> {
        let p = self.vertex_count;
        let mut m = vec![vec![0i64; p]; p];
        for i in 0..p {
            for j in 0..p {
                m[i][j] = if i == j {
                    -(self.degree[i] as i64)
                } else {
                    self.mult[i][j] as i64
                };
            }
        }
        m
    }

    fn is_connected(&self) -> bool {
        let mut seen = 1u32;
        loop {
            let mut next = seen;
            for v in VertexSet(seen).iter() {
                next |= self.neighbor_mask[v];
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        seen == VertexSet::full(self.vertex_count).0
    }

    /// Number of edges with exactly one end in `set`, with multiplicity.
    pub fn boundary_count(&self, set: VertexSet) -> Result<u32> {
        if !set.is_proper_nonempty(self.vertex_count) {
            return Err(Error::EmptyOrFullSubset);
        }
        let mut crossing = 0;
        for &(a, b) in &self.edges {
            if set.contains(a) != set.contains(b) {
                crossing += 1;
            }
        }
        Ok(crossing)
    }

    /// The flow function of `v`: edge multiplicity towards each other
    /// vertex, and minus the total at `v` itself. Values sum to zero.
    pub fn vertex_flow(&self, v: usize) -> Result<VertexFlow> {
        if v >= self.vertex_count {
            return Err(Error::BadVertexIndex {
                index: v,
                vertex_count: self.vertex_count,
            });
        }
        let mut values: Vec<i64> = (0..self.vertex_count)
            .map(|j| self.mult[v][j] as i64)
            .collect();
        values[v] = -(self.degree[v] as i64);
        Ok(VertexFlow { values })
    }

    /// All proper nonempty vertex subsets inducing a connected subgraph,
    /// in ascending bitmask order.
    pub fn connected_subsets(&self) -> Vec<VertexSet> {
        self.connected_cuts().iter().map(|c| c.set).collect()
    }

    /// Connected proper nonempty subsets paired with their boundary edge
    /// counts, ascending by bitmask.
    pub(crate) fn connected_cuts(&self) -> Vec<Cut> {
        let mut out = Vec::new();
        for root in 0..self.vertex_count {
            self.grow(
                VertexSet::singleton(root),
                VertexSet((1u32 << root) - 1),
                self.degree[root],
                &mut out,
            );
        }
        out.sort_unstable_by_key(|c| c.set.0);
        out
    }

    /// Each connected subset containing exactly the vertices reachable while
    /// extending `set` by non-banned neighbors is emitted once: candidates
    /// are consumed in ascending order and banned for the remaining branches.
    fn grow(&self, set: VertexSet, banned: VertexSet, boundary: u32, out: &mut Vec<Cut>) {
        if set.0 != VertexSet::full(self.vertex_count).0 {
            out.push(Cut { set, boundary });
        }
        let mut frontier = 0u32;
        for v in set.iter() {
            frontier |= self.neighbor_mask[v];
        }
        frontier &= !set.0 & !banned.0;
        let mut local_banned = banned;
        for x in VertexSet(frontier).iter() {
            let into_set: u32 = set.iter().map(|s| self.mult[x][s]).sum();
            self.grow(
                set.with(x),
                local_banned,
                boundary + self.degree[x] - 2 * into_set,
                out,
            );
            local_banned = local_banned.with(x);
        }
    }

    /// Replace every edge by a chain of `depth + 1` edges through `depth`
    /// fresh vertices.
    pub fn subdivide(&self, depth: usize) -> Result<SubdividedGraph> {
        let p = self.vertex_count;
        let mut edges = Vec::new();
        if depth == 0 {
            edges = self.edges.clone();
        } else {
            for (id, &(a, b)) in self.edges.iter().enumerate() {
                let first = p + id * depth;
                let mut prev = a;
                for j in 0..depth {
                    edges.push((prev, first + j));
                    prev = first + j;
                }
                edges.push((prev, b));
            }
        }
        let graph = DualGraph::from_edges(p + depth * self.edges.len(), edges)?;
        Ok(SubdividedGraph {
            base: self.clone(),
            depth,
            graph,
        })
    }
}

/// Integer flow function on the vertices of a graph; values sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFlow {
    values: Vec<i64>,
}

impl VertexFlow {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn get(&self, v: usize) -> i64 {
        self.values[v]
    }
}

/// Position of an exceptional vertex on the chain subdividing a base edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSlot {
    /// Base edge id the chain replaces.
    pub edge: usize,
    /// 0-based position along the chain, counted from the smaller end.
    pub position: usize,
    /// The base end this vertex sits nearer to (ties resolved to the
    /// smaller end).
    pub nearer_end: usize,
    /// The other base end.
    pub far_end: usize,
}

/// A graph with every base edge replaced by a chain of exceptional
/// vertices; keeps the base graph and per-chain bookkeeping. Original
/// vertices keep their indices; the exceptional vertex at position `j`
/// of the chain over edge `e` is `p + e*depth + j`.
#[derive(Debug, Clone)]
pub struct SubdividedGraph {
    base: DualGraph,
    depth: usize,
    graph: DualGraph,
}

impl SubdividedGraph {
    pub fn base(&self) -> &DualGraph {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The subdivided graph itself.
    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn original_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn exceptional_count(&self) -> usize {
        self.graph.vertex_count() - self.base.vertex_count()
    }

    pub fn is_exceptional(&self, v: usize) -> bool {
        v >= self.base.vertex_count()
    }

    /// Index of the exceptional vertex at `position` on the chain over
    /// `edge`.
    pub fn exceptional_vertex(&self, edge: usize, position: usize) -> usize {
        debug_assert!(position < self.depth);
        self.base.vertex_count() + edge * self.depth + position
    }

    /// Chain bookkeeping for an exceptional vertex; `None` for originals.
    pub fn chain_slot(&self, v: usize) -> Option<ChainSlot> {
        let p = self.base.vertex_count();
        if v < p || self.depth == 0 {
            return None;
        }
        let edge = (v - p) / self.depth;
        let position = (v - p) % self.depth;
        let (a, b) = self.base.edges()[edge];
        // position j is j+1 steps from a and depth-j steps from b
        let (nearer_end, far_end) = if position < self.depth - position {
            (a, b)
        } else {
            (b, a)
        };
        Some(ChainSlot {
            edge,
            position,
            nearer_end,
            far_end,
        })
    }
}
