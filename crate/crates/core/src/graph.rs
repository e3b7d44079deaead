//! Graph representation, ingestion, cleanup, inner products, and cut
//! bookkeeping.
//!
//! Graphs are simple (no self-loops, no parallel edges), undirected, and
//! weighted with nonnegative weights. The adjacency is stored in compressed
//! sparse row form with every edge present in both directions, so row access
//! is O(1) and a full pass over edges is O(|E|).

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use crate::scalar::{pairwise_sum, Scalar};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: cannot parse edge entry: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: edge weight must be positive, got {value}")]
    InvalidWeight { line: usize, value: f64 },
    #[error("line {line}: duplicate undirected edge {i} {j} (use a merge policy to combine)")]
    DuplicateInFile { line: usize, i: u64, j: u64 },
    #[error("duplicate undirected edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("self-loop at vertex {i}")]
    SelfLoop { i: usize },
    #[error("vertex {i} out of range for graph with {n} vertices")]
    VertexOutOfRange { i: usize, n: usize },
    #[error("negative edge weight on edge ({i}, {j})")]
    NegativeWeight { i: usize, j: usize },
    #[error("graph has no vertices")]
    Empty,
    #[error("operation requires an unweighted graph (all weights 1)")]
    WeightedGraph,
    #[error("node function has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node function is not binary (+1/-1 valued)")]
    NonBinary,
    #[error("node function is zero")]
    ZeroFunction,
}

/// How to resolve duplicate undirected edges during construction or loading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MergePolicy {
    /// Reject the input (graphs are assumed simple).
    #[default]
    Error,
    /// Add the weights of the duplicates.
    Sum,
    /// Keep the largest weight among the duplicates.
    Max,
}

/// Immutable simple undirected weighted graph in CSR form.
#[derive(Clone, Debug)]
pub struct Graph<S> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    weights: Vec<S>,
    degrees: Vec<S>,
    /// For the slot holding (i, j), the slot holding (j, i).
    reverse_slot: Vec<usize>,
}

impl<S: Scalar> Graph<S> {
    /// Build a graph from undirected edges `(i, j, w)` on vertices `0..n`.
    ///
    /// Zero-weight entries are treated as absent edges and dropped.
    pub fn from_edges<I>(n: usize, edges: I, merge: MergePolicy) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, S)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut dedup: HashMap<(usize, usize), S> = HashMap::new();
        for (a, b, w) in edges {
            if a >= n {
                return Err(GraphError::VertexOutOfRange { i: a, n });
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange { i: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { i: a });
            }
            if w < S::zero() {
                return Err(GraphError::NegativeWeight { i: a, j: b });
            }
            if w == S::zero() {
                continue;
            }
            let key = (a.min(b), a.max(b));
            match dedup.entry(key) {
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(w);
                }
                std::collections::hash_map::Entry::Occupied(mut slot) => match merge {
                    MergePolicy::Error => {
                        return Err(GraphError::DuplicateEdge { i: key.0, j: key.1 })
                    }
                    MergePolicy::Sum => *slot.get_mut() += w,
                    MergePolicy::Max => {
                        if w > *slot.get() {
                            *slot.get_mut() = w;
                        }
                    }
                },
            }
        }

        let mut rows: Vec<Vec<(usize, S)>> = vec![Vec::new(); n];
        for (&(a, b), &w) in &dedup {
            rows[a].push((b, w));
            rows[b].push((a, w));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(2 * dedup.len());
        let mut weights = Vec::with_capacity(2 * dedup.len());
        row_ptr.push(0);
        for row in rows.iter_mut() {
            row.sort_unstable_by_key(|&(j, _)| j);
            for &(j, w) in row.iter() {
                col_idx.push(j);
                weights.push(w);
            }
            row_ptr.push(col_idx.len());
        }

        let degrees = (0..n)
            .map(|i| pairwise_sum(&weights[row_ptr[i]..row_ptr[i + 1]]))
            .collect();

        let mut reverse_slot = vec![usize::MAX; col_idx.len()];
        for i in 0..n {
            for s in row_ptr[i]..row_ptr[i + 1] {
                let j = col_idx[s];
                let row_j = &col_idx[row_ptr[j]..row_ptr[j + 1]];
                let pos = row_j
                    .binary_search(&i)
                    .expect("symmetric CSR must contain the reverse edge");
                reverse_slot[s] = row_ptr[j] + pos;
            }
        }

        Ok(Self {
            n,
            row_ptr,
            col_idx,
            weights,
            degrees,
            reverse_slot,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.col_idx.len() / 2
    }

    /// Number of stored directed slots, `2 |E|`.
    pub fn slot_count(&self) -> usize {
        self.col_idx.len()
    }

    pub fn degree(&self, i: usize) -> S {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[S] {
        &self.degrees
    }

    pub fn min_degree(&self) -> S {
        self.degrees
            .iter()
            .copied()
            .fold(S::infinity(), |a, b| a.min(b))
    }

    pub fn max_degree(&self) -> S {
        self.degrees
            .iter()
            .copied()
            .fold(S::zero(), |a, b| a.max(b))
    }

    /// Sum of weights over undirected edges, `sum_{i<j} w_ij`.
    pub fn total_weight(&self) -> S {
        let uppers: Vec<S> = self.undirected_edges().map(|(_, _, w)| w).collect();
        pairwise_sum(&uppers)
    }

    /// Neighbor indices and weights of vertex `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[S]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.weights[span])
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_ptr[i]..self.row_ptr[i + 1]
    }

    pub fn slot_target(&self, slot: usize) -> usize {
        self.col_idx[slot]
    }

    pub fn slot_weight(&self, slot: usize) -> S {
        self.weights[slot]
    }

    /// Slot of the reversed edge for CSR-aligned edge functions.
    pub fn reverse_slot(&self, slot: usize) -> usize {
        self.reverse_slot[slot]
    }

    /// Iterate each undirected edge once as `(i, j, w)` with `i < j`.
    pub fn undirected_edges(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, ws) = self.row(i);
            cols.iter()
                .zip(ws.iter())
                .filter(move |&(&j, _)| i < j)
                .map(move |(&j, &w)| (i, j, w))
        })
    }

    /// True when every stored weight is exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == S::one())
    }

    /// Check the structural invariants; used by generators and tests.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        for i in 0..self.n {
            for s in self.row_range(i) {
                let j = self.col_idx[s];
                if i == j {
                    return Err(GraphError::SelfLoop { i });
                }
                let r = self.reverse_slot[s];
                if self.col_idx[r] != i || self.weights[r] != self.weights[s] {
                    return Err(GraphError::DuplicateEdge { i, j });
                }
            }
            let recomputed = pairwise_sum(&self.weights[self.row_range(i)]);
            if (recomputed - self.degrees[i]).abs()
                > S::from_f64_lit(1e-12) * S::one().max(recomputed.abs())
            {
                return Err(GraphError::NegativeWeight { i, j: i });
            }
        }
        Ok(())
    }

    /// Drop all vertices of degree zero, returning the cleaned graph and the
    /// surviving original indices. Cut sizes of the remaining structure are
    /// unchanged.
    pub fn remove_isolated_nodes(&self) -> Result<(Self, Vec<usize>), GraphError> {
        let kept: Vec<usize> = (0..self.n)
            .filter(|&i| self.degrees[i] > S::zero())
            .collect();
        if kept.is_empty() {
            return Err(GraphError::Empty);
        }
        if kept.len() == self.n {
            return Ok((self.clone(), kept));
        }
        let mut remap = vec![usize::MAX; self.n];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let edges = self
            .undirected_edges()
            .map(|(i, j, w)| (remap[i], remap[j], w));
        let graph = Self::from_edges(kept.len(), edges, MergePolicy::Error)?;
        Ok((graph, kept))
    }

    // Structured fixtures.

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, S::one())));
        Self::from_edges(n, edges, MergePolicy::Error).expect("complete graph is valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|i| (i, (i + 1) % n, S::one()));
        Self::from_edges(n, edges, MergePolicy::Error).expect("cycle graph is valid")
    }

    pub fn path(n: usize) -> Self {
        assert!(n >= 2, "path needs at least 2 vertices");
        let edges = (0..n - 1).map(|i| (i, i + 1, S::one()));
        Self::from_edges(n, edges, MergePolicy::Error).expect("path graph is valid")
    }

    /// Complete bipartite graph `K_{a,b}` with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(move |i| (0..b).map(move |j| (i, a + j, S::one())));
        Self::from_edges(a + b, edges, MergePolicy::Error).expect("bipartite graph is valid")
    }

    /// Connected component count and per-vertex component label.
    pub fn connected_components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            stack.push(start);
            while let Some(v) = stack.pop() {
                let (cols, _) = self.row(v);
                for &j in cols {
                    if label[j] == usize::MAX {
                        label[j] = count;
                        stack.push(j);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().0 == 1
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let edges = self
            .undirected_edges()
            .chain(
                other
                    .undirected_edges()
                    .map(|(i, j, w)| (i + self.n, j + self.n, w)),
            )
            .collect::<Vec<_>>();
        Self::from_edges(n, edges, MergePolicy::Error).expect("union of valid graphs is valid")
    }
}

/// Dense real vector indexed by vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeFunction<S> {
    values: Vec<S>,
}

impl<S: Scalar> NodeFunction<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self { values: vec![c; n] }
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, S::zero())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    pub fn norm_inf(&self) -> S {
        self.values.iter().fold(S::zero(), |a, &b| a.max(b.abs()))
    }

    pub fn norm_euclidean(&self) -> S {
        self.values
            .iter()
            .map(|&x| x * x)
            .fold(S::zero(), |a, b| a + b)
            .sqrt()
    }

    /// True when every entry is within `tol` of +1 or -1.
    pub fn is_binary(&self, tol: S) -> bool {
        self.values
            .iter()
            .all(|&x| (x - S::one()).abs() <= tol || (x + S::one()).abs() <= tol)
    }

    pub fn check_len(&self, graph: &Graph<S>) -> Result<(), GraphError> {
        if self.len() == graph.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::LengthMismatch {
                expected: graph.vertex_count(),
                got: self.len(),
            })
        }
    }
}

impl<S: Scalar> From<Vec<S>> for NodeFunction<S> {
    fn from(values: Vec<S>) -> Self {
        Self::new(values)
    }
}

impl<S> std::ops::Index<usize> for NodeFunction<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.values[i]
    }
}

/// A binary partition together with its cut size.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut<S> {
    /// +1 / -1 side assignment per vertex.
    pub side: Vec<i8>,
    /// Sum of weights of edges crossing the partition.
    pub size: S,
}

impl<S: Scalar> Cut<S> {
    pub fn to_node_function(&self) -> NodeFunction<S> {
        NodeFunction::new(
            self.side
                .iter()
                .map(|&s| if s > 0 { S::one() } else { -S::one() })
                .collect(),
        )
    }

    pub fn complement(&self) -> Self {
        Self {
            side: self.side.iter().map(|&s| -s).collect(),
            size: self.size,
        }
    }
}

/// Cut size by direct edge scan, with per-row pairwise accumulation.
pub(crate) fn cut_size_edge_scan<S: Scalar>(graph: &Graph<S>, side: &[i8]) -> S {
    let mut row_sums = Vec::with_capacity(graph.vertex_count());
    for i in 0..graph.vertex_count() {
        let (cols, ws) = graph.row(i);
        let mut acc = S::zero();
        for (&j, &w) in cols.iter().zip(ws) {
            if i < j && side[i] != side[j] {
                acc += w;
            }
        }
        row_sums.push(acc);
    }
    pairwise_sum(&row_sums)
}

/// Partition induced by a node function: `u_i > 0` goes to side +1,
/// `u_i <= 0` to side -1 (the thresholding convention).
pub fn cut_from_function<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>) -> Cut<S> {
    assert_eq!(
        u.len(),
        graph.vertex_count(),
        "node function length mismatch"
    );
    let side: Vec<i8> = u
        .values()
        .iter()
        .map(|&x| if x > S::zero() { 1 } else { -1 })
        .collect();
    let size = cut_size_edge_scan(graph, &side);
    Cut { side, size }
}

/// Cut size through the Laplacian quadratic form, `s(C) = <u, L_r u>_V / 4`.
///
/// Independent of `r` and equal to the edge-scan size for every binary `u`;
/// this is the algebraic route used to cross-check the direct scan.
pub fn cut_size_via_laplacian<S: Scalar>(
    graph: &Graph<S>,
    u: &NodeFunction<S>,
    r: f64,
) -> Result<S, GraphError> {
    u.check_len(graph)?;
    if !u.is_binary(S::from_f64_lit(1e-12)) {
        return Err(GraphError::NonBinary);
    }
    let kind = crate::operators::OperatorKind::standard(r);
    let lu = crate::operators::apply(kind, graph, u);
    let quarter = S::from_f64_lit(0.25);
    Ok(quarter * inner_product_v(graph, u, &lu, r))
}

/// Degree-weighted vertex inner product `<u, v>_V = sum_i u_i v_i d_i^r`.
pub fn inner_product_v<S: Scalar>(
    graph: &Graph<S>,
    u: &NodeFunction<S>,
    v: &NodeFunction<S>,
    r: f64,
) -> S {
    debug_assert_eq!(u.len(), graph.vertex_count());
    debug_assert_eq!(v.len(), graph.vertex_count());
    let terms: Vec<S> = (0..graph.vertex_count())
        .map(|i| u[i] * v[i] * graph.degree(i).powf64(r))
        .collect();
    pairwise_sum(&terms)
}

pub fn norm_v<S: Scalar>(graph: &Graph<S>, u: &NodeFunction<S>, r: f64) -> S {
    inner_product_v(graph, u, u, r).sqrt()
}

/// Fraction of vertices at each integer degree, `P(j) = |{i : d_i = j}| / n`.
///
/// Only defined for unweighted graphs, where degrees are integers.
pub fn degree_distribution<S: Scalar>(graph: &Graph<S>) -> Result<BTreeMap<u64, S>, GraphError> {
    if !graph.is_unweighted() {
        return Err(GraphError::WeightedGraph);
    }
    let n = S::from_f64_lit(graph.vertex_count() as f64);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &d in graph.degrees() {
        let j = d.to_f64().expect("degree fits f64").round() as u64;
        *counts.entry(j).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(j, c)| (j, S::from_f64_lit(c as f64) / n))
        .collect())
}

/// A graph loaded from an edge-list stream plus the original vertex ids in
/// dense-index order (first appearance wins).
#[derive(Clone, Debug)]
pub struct LoadedGraph<S> {
    pub graph: Graph<S>,
    pub original_ids: Vec<u64>,
}

/// Parse a whitespace-separated edge list.
///
/// Each non-comment line is `i j` or `i j w` with nonnegative integer ids and
/// a positive weight (defaulting to 1). Lines starting with `#` or `%` are
/// ignored. Self-loops are dropped; duplicate undirected edges are resolved
/// per `merge`. Ids are remapped to `0..n-1` in first-appearance order.
pub fn load_edge_list<S: Scalar, R: BufRead>(
    reader: R,
    merge: MergePolicy,
) -> Result<LoadedGraph<S>, GraphError> {
    let mut id_map: HashMap<u64, usize> = HashMap::new();
    let mut original_ids: Vec<u64> = Vec::new();
    let mut dedup: HashMap<(usize, usize), S> = HashMap::new();

    let intern = |id: u64, id_map: &mut HashMap<u64, usize>, ids: &mut Vec<u64>| -> usize {
        *id_map.entry(id).or_insert_with(|| {
            ids.push(id);
            ids.len() - 1
        })
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| GraphError::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let a: u64 = tokens
            .next()
            .ok_or_else(|| GraphError::Parse {
                line: line_no,
                msg: "missing source id".into(),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line: line_no,
                msg: format!("bad vertex id: {e}"),
            })?;
        let b: u64 = tokens
            .next()
            .ok_or_else(|| GraphError::Parse {
                line: line_no,
                msg: "missing target id".into(),
            })?
            .parse()
            .map_err(|e| GraphError::Parse {
                line: line_no,
                msg: format!("bad vertex id: {e}"),
            })?;
        let w: f64 = match tokens.next() {
            Some(tok) => tok.parse().map_err(|e| GraphError::Parse {
                line: line_no,
                msg: format!("bad weight: {e}"),
            })?,
            None => 1.0,
        };
        if tokens.next().is_some() {
            return Err(GraphError::Parse {
                line: line_no,
                msg: "expected 2 or 3 fields".into(),
            });
        }
        if !(w > 0.0) {
            return Err(GraphError::InvalidWeight {
                line: line_no,
                value: w,
            });
        }

        let ia = intern(a, &mut id_map, &mut original_ids);
        let ib = intern(b, &mut id_map, &mut original_ids);
        if ia == ib {
            continue; // self-loops do not change any cut
        }
        let key = (ia.min(ib), ia.max(ib));
        match dedup.entry(key) {
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(S::from_f64_lit(w));
            }
            std::collections::hash_map::Entry::Occupied(mut slot) => match merge {
                MergePolicy::Error => {
                    return Err(GraphError::DuplicateInFile {
                        line: line_no,
                        i: a,
                        j: b,
                    })
                }
                MergePolicy::Sum => *slot.get_mut() += S::from_f64_lit(w),
                MergePolicy::Max => {
                    let w = S::from_f64_lit(w);
                    if w > *slot.get() {
                        *slot.get_mut() = w;
                    }
                }
            },
        }
    }

    if original_ids.is_empty() {
        return Err(GraphError::Empty);
    }
    let n = original_ids.len();
    let graph = Graph::from_edges(
        n,
        dedup.into_iter().map(|((i, j), w)| (i, j, w)),
        MergePolicy::Error,
    )?;
    Ok(LoadedGraph {
        graph,
        original_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use proptest::prelude::*;
    use std::io::Cursor;

    fn k3() -> Graph<f64> {
        Graph::complete(3)
    }

    #[test]
    fn load_two_edge_path() {
        let loaded: LoadedGraph<f64> =
            load_edge_list(Cursor::new("0 1\n1 2\n"), MergePolicy::Error).unwrap();
        assert_eq!(loaded.graph.vertex_count(), 3);
        assert_eq!(loaded.graph.edge_count(), 2);
        assert!(loaded.graph.is_unweighted());
    }

    #[test]
    fn load_drops_self_loop_keeps_vertex() {
        let loaded: LoadedGraph<f64> =
            load_edge_list(Cursor::new("5 5\n5 6\n"), MergePolicy::Error).unwrap();
        assert_eq!(loaded.graph.vertex_count(), 2);
        assert_eq!(loaded.graph.edge_count(), 1);
        assert_eq!(loaded.original_ids, vec![5, 6]);
    }

    #[test]
    fn load_reports_line_numbers() {
        let err =
            load_edge_list::<f64, _>(Cursor::new("0 1\nx 2\n"), MergePolicy::Error).unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err =
            load_edge_list::<f64, _>(Cursor::new("0 1 -2.0\n"), MergePolicy::Error).unwrap_err();
        assert!(matches!(err, GraphError::InvalidWeight { line: 1, .. }));
    }

    #[test]
    fn load_merge_policies() {
        let text = "0 1 2.0\n1 0 3.0\n";
        let err = load_edge_list::<f64, _>(Cursor::new(text), MergePolicy::Error).unwrap_err();
        assert!(matches!(err, GraphError::DuplicateInFile { line: 2, .. }));
        let sum: LoadedGraph<f64> = load_edge_list(Cursor::new(text), MergePolicy::Sum).unwrap();
        assert_eq!(sum.graph.total_weight(), 5.0);
        let max: LoadedGraph<f64> = load_edge_list(Cursor::new(text), MergePolicy::Max).unwrap();
        assert_eq!(max.graph.total_weight(), 3.0);
    }

    #[test]
    fn load_comments_and_weights() {
        let text = "# header\n% other comment\n0 1 0.5\n\n2 3\n";
        let loaded: LoadedGraph<f64> =
            load_edge_list(Cursor::new(text), MergePolicy::Error).unwrap();
        assert_eq!(loaded.graph.vertex_count(), 4);
        assert_eq!(loaded.graph.edge_count(), 2);
        assert_eq!(loaded.graph.total_weight(), 1.5);
    }

    #[test]
    fn remove_isolated_drops_only_isolated() {
        let g: Graph<f64> =
            Graph::from_edges(4, vec![(0, 1, 1.0), (1, 2, 1.0)], MergePolicy::Error).unwrap();
        let (cleaned, kept) = g.remove_isolated_nodes().unwrap();
        assert_eq!(cleaned.vertex_count(), 3);
        assert_eq!(cleaned.edge_count(), 2);
        assert_eq!(kept, vec![0, 1, 2]);

        let (same, kept) = cleaned.remove_isolated_nodes().unwrap();
        assert_eq!(same.vertex_count(), 3);
        assert_eq!(kept.len(), 3);
    }

    #[test]
    fn remove_isolated_empty_graph_errors() {
        let g: Graph<f64> = Graph::from_edges(2, vec![(0, 1, 1.0)], MergePolicy::Error).unwrap();
        // zero-weight edge is dropped, so both vertices are isolated
        let g0: Graph<f64> = Graph::from_edges(2, vec![(0, 1, 0.0)], MergePolicy::Error).unwrap();
        assert!(g.remove_isolated_nodes().is_ok());
        assert!(matches!(g0.remove_isolated_nodes(), Err(GraphError::Empty)));
    }

    #[test]
    fn triangle_cut_from_function() {
        let g = k3();
        let cut = cut_from_function(&g, &NodeFunction::new(vec![1.0, 1.0, -1.0]));
        assert_eq!(cut.size, 2.0);
        assert_eq!(cut.side, vec![1, 1, -1]);
    }

    #[test]
    fn all_plus_one_is_empty_cut() {
        let g = k3();
        let cut = cut_from_function(&g, &NodeFunction::constant(3, 1.0));
        assert_eq!(cut.size, 0.0);
    }

    #[test]
    fn odd_cycle_near_alternating_cut() {
        let g: Graph<f64> = Graph::cycle(5);
        let u = NodeFunction::new(vec![1.0, -1.0, 1.0, -1.0, -1.0]);
        assert_eq!(cut_from_function(&g, &u).size, 4.0);
    }

    #[test]
    fn threshold_zero_maps_to_minus_one() {
        let g: Graph<f64> = Graph::path(2);
        let cut = cut_from_function(&g, &NodeFunction::new(vec![0.0, 1.0]));
        assert_eq!(cut.side, vec![-1, 1]);
    }

    #[test]
    fn laplacian_cut_size_triangle_and_k2() {
        let g = k3();
        let u = NodeFunction::new(vec![1.0, 1.0, -1.0]);
        let s = cut_size_via_laplacian(&g, &u, 0.0).unwrap();
        assert!((s - 2.0).abs() < 1e-12);

        let k2: Graph<f64> = Graph::path(2);
        let u2 = NodeFunction::new(vec![1.0, -1.0]);
        for r in [0.0, 0.3, 0.5, 1.0] {
            let s = cut_size_via_laplacian(&k2, &u2, r).unwrap();
            assert!((s - 1.0).abs() < 1e-12, "r={r} gave {s}");
        }
    }

    #[test]
    fn laplacian_cut_size_rejects_non_binary() {
        let g = k3();
        let u = NodeFunction::new(vec![0.5, 1.0, -1.0]);
        assert!(matches!(
            cut_size_via_laplacian(&g, &u, 1.0),
            Err(GraphError::NonBinary)
        ));
    }

    #[test]
    fn inner_product_v_examples() {
        let k2: Graph<f64> = Graph::path(2);
        let ones = NodeFunction::constant(2, 1.0);
        assert_eq!(inner_product_v(&k2, &ones, &ones, 0.0), 2.0);
        assert_eq!(inner_product_v(&k2, &ones, &ones, 1.0), 2.0);
        let g = k3();
        let ones3 = NodeFunction::constant(3, 1.0);
        assert_eq!(inner_product_v(&g, &ones3, &ones3, 1.0), 6.0);
    }

    #[test]
    fn degree_distribution_examples() {
        let k4: Graph<f64> = Graph::complete(4);
        let dist = degree_distribution(&k4).unwrap();
        assert_eq!(dist.len(), 1);
        assert_eq!(dist[&3], 1.0);

        let p3: Graph<f64> = Graph::path(3);
        let dist = degree_distribution(&p3).unwrap();
        assert!((dist[&1] - 2.0 / 3.0).abs() < 1e-15);
        assert!((dist[&2] - 1.0 / 3.0).abs() < 1e-15);
        let total: f64 = dist.values().sum();
        assert!((total - 1.0).abs() < 1e-12);

        let mut weighted: Vec<(usize, usize, f64)> = vec![(0, 1, 2.0)];
        let g = Graph::from_edges(2, weighted.drain(..), MergePolicy::Error).unwrap();
        assert!(matches!(
            degree_distribution(&g),
            Err(GraphError::WeightedGraph)
        ));
    }

    #[test]
    fn duplicate_edges_rejected_by_constructor() {
        let err = Graph::<f64>::from_edges(3, vec![(0, 1, 1.0), (1, 0, 1.0)], MergePolicy::Error)
            .unwrap_err();
        assert!(matches!(err, GraphError::DuplicateEdge { .. }));
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph<f64> {
        crate::generators::erdos_renyi(n, p, seed)
    }

    #[test]
    fn cut_identity_random_graphs() {
        // Edge-scan oracle vs the Laplacian quadratic-form route.
        for seed in 0..20u64 {
            let g = random_graph(12, 0.5, seed);
            if g.max_degree() == 0.0 {
                continue;
            }
            let (g, _) = g.remove_isolated_nodes().unwrap();
            let rng = CounterRng::new(seed ^ 0xC0FFEE);
            let u = NodeFunction::new(rng.sign_vector(g.vertex_count()));
            let scan = cut_from_function(&g, &u).size;
            for r in [0.0, 0.5, 1.0] {
                let alg = cut_size_via_laplacian(&g, &u, r).unwrap();
                let tol = 1e-10 * scan.abs().max(1.0);
                assert!(
                    (alg - scan).abs() <= tol,
                    "seed {seed} r {r}: {alg} vs {scan}"
                );
            }
        }
    }

    #[test]
    fn total_edge_weight_conservation() {
        for seed in 0..10u64 {
            let g = random_graph(30, 0.3, seed);
            let degree_sum: f64 = g.degrees().iter().sum();
            let double_weight = 2.0 * g.total_weight();
            assert!(
                (degree_sum - double_weight).abs() <= 1e-12 * double_weight.max(1.0),
                "seed {seed}"
            );
        }
    }

    proptest! {
        #[test]
        fn inner_product_is_symmetric(
            seed in 0u64..1000,
            n in 2usize..20,
            r in 0.0f64..=1.0,
        ) {
            let g = random_graph(n, 0.6, seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.substream(1).unit_vector(n));
            let v = NodeFunction::new(rng.substream(2).unit_vector(n));
            let uv = inner_product_v(&g, &u, &v, r);
            let vu = inner_product_v(&g, &v, &u, r);
            prop_assert_eq!(uv, vu);
            prop_assert!(inner_product_v(&g, &u, &u, r) >= 0.0);
        }

        #[test]
        fn cut_complement_symmetry(seed in 0u64..1000, n in 2usize..24) {
            let g = random_graph(n, 0.4, seed);
            let rng = CounterRng::new(seed);
            let u = NodeFunction::new(rng.sign_vector::<f64>(n));
            let neg = NodeFunction::new(u.values().iter().map(|&x| -x).collect::<Vec<_>>());
            let a = cut_from_function(&g, &u).size;
            let b = cut_from_function(&g, &neg).size;
            prop_assert_eq!(a, b);
        }
    }
}
