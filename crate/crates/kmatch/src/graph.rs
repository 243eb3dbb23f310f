//! Multigraph data model (loops and parallel edges allowed) plus the
//! structural queries the matching conditions are stated in: degrees,
//! cut sizes, neighborhoods, component counts, edge connectivity,
//! regularity and bipartiteness.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {index} out of range for graph on {n} vertices")]
    InvalidVertex { index: usize, n: usize },
    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("operation requires at least {needed} vertices, graph has {n}")]
    TooFewVertices { needed: usize, n: usize },
}

/// One normalized edge record: an unordered endpoint pair (`u == v` is a
/// loop) with a positive multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub mult: usize,
}

impl EdgeRecord {
    /// Creates a record with endpoints stored in ascending order.
    pub fn new(u: usize, v: usize, mult: usize) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        EdgeRecord { u, v, mult }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`. For a loop both endpoints coincide.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn empty() -> Self {
        VertexSet(Vec::new())
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&max) if max >= n => Err(GraphError::InvalidVertex { index: max, n }),
            _ => Ok(()),
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Connected-component breakdown of a graph.
///
/// `isolated` counts bare vertices (no incident edge at all), `odd` counts
/// every odd-order component, and `odd_nontrivial` counts odd components
/// that contain at least one edge. On loop-free graphs the nontrivial odd
/// components are exactly those of order at least three; a loop makes a
/// single vertex nontrivial, which is the reading that keeps the deficiency
/// conditions exact on multigraphs with loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    pub components: Vec<VertexSet>,
    pub isolated: usize,
    pub odd: usize,
    pub odd_nontrivial: usize,
}

impl ComponentSummary {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Result of deleting a vertex set: the induced subgraph plus maps back to
/// the host graph's vertex and record indices.
#[derive(Debug, Clone)]
pub struct DeletedGraph {
    pub graph: Multigraph,
    /// New vertex index -> original vertex index.
    pub vertex_map: Vec<usize>,
    /// New record index -> original record index.
    pub record_map: Vec<usize>,
}

/// A finite multigraph on vertices `0..n` with loops and parallel edges.
///
/// The constructor normalizes input to one record per unordered endpoint
/// pair (multiplicities summed, records sorted by endpoints); record
/// indices are stable after construction so weight functions can refer to
/// them by position. Values are immutable once built and all queries are
/// pure.
#[derive(Debug, Clone)]
pub struct Multigraph {
    n: usize,
    records: Vec<EdgeRecord>,
    /// Record ids incident to each vertex (a loop appears once), ascending.
    adj: Vec<Vec<usize>>,
    /// Position in the constructor input -> normalized record index.
    input_map: Vec<usize>,
}

/// Equality is structural: same vertex count and normalized records. The
/// construction-order provenance in `input_map` does not participate.
impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.records == other.records
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    /// Builds a graph from raw edge records. Parallel records (same
    /// unordered endpoint pair) are merged with summed multiplicity;
    /// `input_map()` tells where each input position ended up.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = EdgeRecord>,
    ) -> Result<Self, GraphError> {
        let mut raw: Vec<(EdgeRecord, usize)> = Vec::new();
        for (pos, e) in edges.into_iter().enumerate() {
            if e.mult == 0 {
                return Err(GraphError::ZeroMultiplicity);
            }
            for index in [e.u, e.v] {
                if index >= n {
                    return Err(GraphError::InvalidVertex { index, n });
                }
            }
            raw.push((EdgeRecord::new(e.u, e.v, e.mult), pos));
        }
        raw.sort_by_key(|(e, pos)| (e.u, e.v, *pos));

        let mut records: Vec<EdgeRecord> = Vec::with_capacity(raw.len());
        let mut input_map = vec![0usize; raw.len()];
        for (e, pos) in raw {
            match records.last_mut() {
                Some(last) if last.u == e.u && last.v == e.v => {
                    last.mult += e.mult;
                }
                _ => records.push(e),
            }
            input_map[pos] = records.len() - 1;
        }
        Ok(Self::from_normalized(n, records, input_map))
    }

    /// Builds a simple-style graph from endpoint pairs, multiplicity 1 each.
    pub fn from_pairs(
        n: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        Self::new(
            n,
            pairs.into_iter().map(|(u, v)| EdgeRecord::new(u, v, 1)),
        )
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_normalized(n, Vec::new(), Vec::new())
    }

    /// Internal constructor for records already normalized and sorted.
    fn from_normalized(n: usize, records: Vec<EdgeRecord>, input_map: Vec<usize>) -> Self {
        debug_assert!(records.windows(2).all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        let mut adj = vec![Vec::new(); n];
        for (i, e) in records.iter().enumerate() {
            adj[e.u].push(i);
            if !e.is_loop() {
                adj[e.v].push(i);
            }
        }
        Multigraph {
            n,
            records,
            adj,
            input_map,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn records(&self) -> &[EdgeRecord] {
        &self.records
    }

    pub fn record_count(&self) -> usize {
        self.records.len()
    }

    /// Map from constructor-input position to normalized record index.
    pub fn input_map(&self) -> &[usize] {
        &self.input_map
    }

    /// Record ids incident to `v`, ascending; a loop appears once.
    pub fn incident(&self, v: usize) -> &[usize] {
        assert!(v < self.n, "vertex index {v} out of range");
        &self.adj[v]
    }

    pub fn record_between(&self, u: usize, v: usize) -> Option<usize> {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        self.records
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
    }

    /// Sum of all record multiplicities.
    pub fn total_multiplicity(&self) -> usize {
        self.records.iter().map(|e| e.mult).sum()
    }

    pub fn has_loops(&self) -> bool {
        self.records.iter().any(|e| e.is_loop())
    }

    /// Multiplicity-weighted degree; a loop contributes twice its
    /// multiplicity.
    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex index {v} out of range");
        self.adj[v]
            .iter()
            .map(|&i| {
                let e = &self.records[i];
                if e.is_loop() {
                    2 * e.mult
                } else {
                    e.mult
                }
            })
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Multiplicity-weighted count of edges joining `s` to `t`. Each record
    /// counts once per multiplicity unit when one endpoint lies in `s` and
    /// the other in `t`; a loop at `v` joins them only if `v` is in both.
    pub fn edges_between(&self, s: &VertexSet, t: &VertexSet) -> usize {
        s.validate(self.n).expect("set s out of range");
        t.validate(self.n).expect("set t out of range");
        self.records
            .iter()
            .filter(|e| {
                if e.is_loop() {
                    s.contains(e.u) && t.contains(e.u)
                } else {
                    (s.contains(e.u) && t.contains(e.v))
                        || (s.contains(e.v) && t.contains(e.u))
                }
            })
            .map(|e| e.mult)
            .sum()
    }

    /// All vertices adjacent to some vertex of `x`. A loop makes its vertex
    /// self-adjacent.
    pub fn neighborhood(&self, x: &VertexSet) -> VertexSet {
        x.validate(self.n).expect("set out of range");
        let mut out = Vec::new();
        for e in &self.records {
            if x.contains(e.u) {
                out.push(e.v);
            }
            if x.contains(e.v) {
                out.push(e.u);
            }
        }
        VertexSet::new(out)
    }

    /// Induced subgraph on the complement of `s`, with index maps back to
    /// this graph. Deleting every vertex yields the empty graph.
    pub fn delete_vertices(&self, s: &VertexSet) -> DeletedGraph {
        s.validate(self.n).expect("set out of range");
        let mut new_index = vec![usize::MAX; self.n];
        let mut vertex_map = Vec::with_capacity(self.n - s.len());
        for v in 0..self.n {
            if !s.contains(v) {
                new_index[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let mut records = Vec::new();
        let mut record_map = Vec::new();
        for (i, e) in self.records.iter().enumerate() {
            if new_index[e.u] != usize::MAX && new_index[e.v] != usize::MAX {
                records.push(EdgeRecord::new(new_index[e.u], new_index[e.v], e.mult));
                record_map.push(i);
            }
        }
        // Relabeling is monotone, so the records stay sorted.
        let input_map = (0..records.len()).collect();
        DeletedGraph {
            graph: Multigraph::from_normalized(self.n - s.len(), records, input_map),
            vertex_map,
            record_map,
        }
    }

    pub fn component_summary(&self) -> ComponentSummary {
        self.component_summary_without(&VertexSet::empty())
    }

    /// Component summary of the graph minus `removed`, without
    /// materializing the subgraph; component vertex sets keep this graph's
    /// labels.
    pub fn component_summary_without(&self, removed: &VertexSet) -> ComponentSummary {
        removed.validate(self.n).expect("set out of range");
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut has_edge = vec![false; self.n];
        for e in &self.records {
            if removed.contains(e.u) || removed.contains(e.v) {
                continue;
            }
            let ru = find(&mut parent, e.u);
            let rv = find(&mut parent, e.v);
            let root = ru.min(rv);
            parent[ru] = root;
            parent[rv] = root;
            has_edge[root] = true;
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        let mut roots = Vec::new();
        for v in 0..self.n {
            if removed.contains(v) {
                continue;
            }
            let r = find(&mut parent, v);
            if members[r].is_empty() {
                roots.push(r);
            }
            members[r].push(v);
        }
        let mut components = Vec::with_capacity(roots.len());
        let mut isolated = 0;
        let mut odd = 0;
        let mut odd_nontrivial = 0;
        for r in roots {
            let comp = std::mem::take(&mut members[r]);
            let order = comp.len();
            if order % 2 == 1 {
                odd += 1;
                if has_edge[r] {
                    odd_nontrivial += 1;
                } else {
                    isolated += 1;
                }
            }
            components.push(VertexSet::new(comp));
        }
        ComponentSummary {
            components,
            isolated,
            odd,
            odd_nontrivial,
        }
    }

    /// Global edge connectivity: the minimum multiplicity-weighted cut over
    /// nontrivial bipartitions (Stoer–Wagner). Loops never contribute.
    /// Returns 0 exactly when the graph is disconnected.
    pub fn edge_connectivity(&self) -> Result<usize, GraphError> {
        if self.n < 2 {
            return Err(GraphError::TooFewVertices {
                needed: 2,
                n: self.n,
            });
        }
        let mut weight = vec![vec![0usize; self.n]; self.n];
        for e in &self.records {
            if !e.is_loop() {
                weight[e.u][e.v] += e.mult;
                weight[e.v][e.u] += e.mult;
            }
        }
        let mut active: Vec<usize> = (0..self.n).collect();
        let mut best = usize::MAX;
        while active.len() > 1 {
            // Maximum-adjacency order; ties broken toward lower index so
            // the run is reproducible.
            let mut attach = vec![0usize; active.len()];
            let mut added = vec![false; active.len()];
            let mut prev = usize::MAX;
            let mut last = usize::MAX;
            for _ in 0..active.len() {
                let mut pick = usize::MAX;
                for i in 0..active.len() {
                    if !added[i] && (pick == usize::MAX || attach[i] > attach[pick]) {
                        pick = i;
                    }
                }
                added[pick] = true;
                prev = last;
                last = pick;
                for i in 0..active.len() {
                    if !added[i] {
                        attach[i] += weight[active[pick]][active[i]];
                    }
                }
            }
            best = best.min(attach[last]);
            // Merge the last-added vertex into the one before it.
            let (keep, gone) = (active[prev], active[last]);
            for i in 0..self.n {
                weight[keep][i] += weight[gone][i];
                weight[i][keep] += weight[i][gone];
            }
            weight[keep][keep] = 0;
            active.remove(last);
        }
        Ok(best)
    }

    /// `Some(r)` when every vertex has degree exactly `r`.
    pub fn regularity(&self) -> Result<Option<usize>, GraphError> {
        if self.n == 0 {
            return Err(GraphError::TooFewVertices { needed: 1, n: 0 });
        }
        let r = self.degree(0);
        Ok((1..self.n).all(|v| self.degree(v) == r).then_some(r))
    }

    /// A proper 2-coloring if one exists. Loops make a graph non-bipartite.
    /// Isolated vertices are spread to balance the two side sizes.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        if self.records.iter().any(|e| e.is_loop()) {
            return None;
        }
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX || self.adj[start].is_empty() {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &i in &self.adj[v] {
                    let w = self.records[i].other(v);
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        let mut left: Vec<usize> = Vec::new();
        let mut right: Vec<usize> = Vec::new();
        for v in 0..self.n {
            match color[v] {
                0 => left.push(v),
                1 => right.push(v),
                _ => {
                    // Isolated vertex: join the currently smaller side.
                    if left.len() <= right.len() {
                        left.push(v);
                    } else {
                        right.push(v);
                    }
                }
            }
        }
        Some((VertexSet::new(left), VertexSet::new(right)))
    }
}
