//! Maximum matching: Edmonds' blossom algorithm for general graphs and an
//! augmenting-path matcher for bipartite graphs that extracts a Hall
//! violator when one side cannot be saturated.
//!
//! Both matchers are deterministic: vertices are tried in ascending order
//! and adjacency is scanned in record order, so a fixed graph always yields
//! the same edge set.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Multigraph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching requires a loop-free graph (record {0} is a loop)")]
    LoopPresent(usize),
    #[error("edge id {0} out of range")]
    InvalidEdgeId(usize),
    #[error("edges {0} and {1} share an endpoint")]
    SharedEndpoint(usize, usize),
    #[error("the given vertex sets do not form a bipartition of the graph")]
    NotBipartition,
}

/// A matching stored as a sorted set of record ids of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edge_ids: Vec<usize>,
}

impl Matching {
    /// Validates that the ids name loop-free, pairwise disjoint records.
    pub fn new(g: &Multigraph, mut edge_ids: Vec<usize>) -> Result<Self, MatchingError> {
        edge_ids.sort_unstable();
        edge_ids.dedup();
        let mut seen = vec![usize::MAX; g.n()];
        for &id in &edge_ids {
            let e = g
                .records()
                .get(id)
                .ok_or(MatchingError::InvalidEdgeId(id))?;
            if e.is_loop() {
                return Err(MatchingError::LoopPresent(id));
            }
            for x in [e.u, e.v] {
                if seen[x] != usize::MAX {
                    return Err(MatchingError::SharedEndpoint(seen[x], id));
                }
                seen[x] = id;
            }
        }
        Ok(Matching { edge_ids })
    }

    fn from_mates(g: &Multigraph, mate: &[Option<usize>]) -> Self {
        let mut edge_ids = Vec::new();
        for v in 0..g.n() {
            if let Some(u) = mate[v] {
                if v < u {
                    edge_ids.push(g.record_between(v, u).expect("mated pair has a record"));
                }
            }
        }
        edge_ids.sort_unstable();
        Matching { edge_ids }
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_ids
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.edge_ids.binary_search(&id).is_ok()
    }

    /// Per-vertex partner lookup.
    pub fn mates(&self, g: &Multigraph) -> Vec<Option<usize>> {
        let mut mate = vec![None; g.n()];
        for &id in &self.edge_ids {
            let e = g.records()[id];
            mate[e.u] = Some(e.v);
            mate[e.v] = Some(e.u);
        }
        mate
    }
}

/// True iff the matching covers every vertex.
pub fn is_perfect(g: &Multigraph, m: &Matching) -> bool {
    2 * m.len() == g.n()
}

/// A violated Hall condition: a vertex set whose whole neighborhood is
/// smaller than itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallWitness {
    pub x: VertexSet,
    pub nx: VertexSet,
}

struct BlossomSearch<'a> {
    adj: &'a [Vec<usize>],
    mate: &'a [Option<usize>],
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
}

impl BlossomSearch<'_> {
    /// BFS for an augmenting path from `root`, contracting blossoms as they
    /// appear. Returns the free endpoint when a path is found; `parent`
    /// then encodes the path.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.parent = vec![None; n];
        self.base = (0..n).collect();
        let mut used = vec![false; n];
        used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_even = to == root
                    || self
                        .mate[to]
                        .is_some_and(|m| self.parent[m].is_some());
                if to_is_even {
                    // Odd cycle between two even vertices: contract it.
                    let cur = self.lowest_common_base(v, to);
                    let mut blossom = vec![false; n];
                    self.mark_path(v, cur, to, &mut blossom);
                    self.mark_path(to, cur, v, &mut blossom);
                    for i in 0..n {
                        if blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            if !used[m] {
                                used[m] = true;
                                queue.push_back(m);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Base vertex where the alternating paths from `a` and `b` first meet.
    fn lowest_common_base(&self, a: usize, b: usize) -> usize {
        let mut marked = vec![false; self.adj.len()];
        let mut v = a;
        loop {
            v = self.base[v];
            marked[v] = true;
            match self.mate[v] {
                None => break,
                Some(m) => v = self.parent[m].expect("tree vertex has a parent"),
            }
        }
        let mut v = b;
        loop {
            v = self.base[v];
            if marked[v] {
                return v;
            }
            let m = self.mate[v].expect("path to root alternates");
            v = self.parent[m].expect("tree vertex has a parent");
        }
    }

    /// Walks from `v` down to blossom base `b`, marking traversed bases and
    /// rethreading parent pointers through `child`.
    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize, blossom: &mut [bool]) {
        while self.base[v] != b {
            let m = self.mate[v].expect("blossom path alternates");
            blossom[self.base[v]] = true;
            blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("tree vertex has a parent");
        }
    }
}

/// Maximum-cardinality matching in a loop-free multigraph (parallel
/// multiplicities are irrelevant and collapse to single edges). Runs in
/// O(V^3).
pub fn max_matching(g: &Multigraph) -> Result<Matching, MatchingError> {
    if let Some(i) = g.records().iter().position(|e| e.is_loop()) {
        return Err(MatchingError::LoopPresent(i));
    }
    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.records() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }

    let mut mate: Vec<Option<usize>> = vec![None; n];
    // Greedy seed keeps the number of augmenting phases small.
    for e in g.records() {
        if mate[e.u].is_none() && mate[e.v].is_none() {
            mate[e.u] = Some(e.v);
            mate[e.v] = Some(e.u);
        }
    }

    for root in 0..n {
        if mate[root].is_some() {
            continue;
        }
        let mut search = BlossomSearch {
            adj: &adj,
            mate: &mate,
            parent: Vec::new(),
            base: Vec::new(),
        };
        if let Some(finish) = search.find_path(root) {
            let parent = search.parent;
            // Flip matched/unmatched along the found path.
            let mut v = Some(finish);
            while let Some(cur) = v {
                let pv = parent[cur].expect("augmenting path reaches the root");
                let next = mate[pv];
                mate[cur] = Some(pv);
                mate[pv] = Some(cur);
                v = next;
            }
        }
    }
    Ok(Matching::from_mates(g, &mate))
}

/// Maximum matching of a bipartite graph with parts `u` and `w`; when `u`
/// cannot be saturated, also returns a Hall witness built from the
/// vertices of `u` reachable by alternating paths from the unmatched ones.
pub fn bipartite_max_matching(
    g: &Multigraph,
    u: &VertexSet,
    w: &VertexSet,
) -> Result<(Matching, Option<HallWitness>), MatchingError> {
    u.validate(g.n()).map_err(|_| MatchingError::NotBipartition)?;
    w.validate(g.n()).map_err(|_| MatchingError::NotBipartition)?;
    if u.len() + w.len() != g.n() || !u.is_disjoint(w) {
        return Err(MatchingError::NotBipartition);
    }
    for e in g.records() {
        let crossing = (u.contains(e.u) && w.contains(e.v)) || (u.contains(e.v) && w.contains(e.u));
        if !crossing {
            return Err(MatchingError::NotBipartition);
        }
    }

    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.records() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let mut mate: Vec<Option<usize>> = vec![None; n];

    fn try_augment(
        v: usize,
        adj: &[Vec<usize>],
        mate: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for &to in &adj[v] {
            if visited[to] {
                continue;
            }
            visited[to] = true;
            let free = match mate[to] {
                None => true,
                Some(m) => try_augment(m, adj, mate, visited),
            };
            if free {
                mate[v] = Some(to);
                mate[to] = Some(v);
                return true;
            }
        }
        false
    }

    for v in u.iter() {
        if mate[v].is_none() {
            let mut visited = vec![false; n];
            try_augment(v, &adj, &mut mate, &mut visited);
        }
    }
    let matching = Matching::from_mates(g, &mate);

    let unsaturated: Vec<usize> = u.iter().filter(|&v| mate[v].is_none()).collect();
    if unsaturated.is_empty() {
        return Ok((matching, None));
    }
    // Alternating BFS from every unmatched u-vertex: unmatched edges toward
    // w, matched edges back toward u.
    let mut in_x = vec![false; n];
    let mut queue: VecDeque<usize> = unsaturated.into();
    for &v in &queue {
        in_x[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &to in &adj[v] {
            if let Some(m) = mate[to] {
                if !in_x[m] {
                    in_x[m] = true;
                    queue.push_back(m);
                }
            }
        }
    }
    let x: VertexSet = (0..n).filter(|&v| in_x[v]).collect();
    let nx = g.neighborhood(&x);
    debug_assert!(nx.len() < x.len());
    Ok((matching, Some(HallWitness { x, nx })))
}
