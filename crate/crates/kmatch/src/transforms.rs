//! Graph reductions with invertible bookkeeping: k-fold edge
//! multiplication, the bipartite split graph behind perfect 2-matchings,
//! the degree-constrained-subgraph gadget behind k-factors, and the
//! normalization of a perfect 2-matching into a {K2, odd-cycle} factor.

use std::ops::Range;

use thiserror::Error;

use crate::graph::{EdgeRecord, Multigraph};
use crate::matching::{is_perfect, Matching};
use crate::solver::WeightFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("vertex {vertex} has degree {degree}, below the factor target k = {k}")]
    DegreeTooSmall {
        vertex: usize,
        degree: usize,
        k: usize,
    },
    #[error("matching is not perfect on the reduction graph")]
    NotPerfect,
    #[error("weight function is not a perfect 2-matching")]
    NotPerfectTwoMatching,
    #[error("record {0} is a loop with positive weight; normalization needs a loop-free support")]
    LoopWeight(usize),
    #[error("recovered selection violates the degree constraint; this is a bug")]
    Inconsistent,
}

/// `base` with every record's multiplicity scaled by `k`. Record indices
/// coincide with the base graph's, so no explicit map is needed.
#[derive(Debug, Clone)]
pub struct MultipliedGraph {
    pub base: Multigraph,
    pub graph: Multigraph,
    pub k: usize,
}

/// Replaces every edge by k parallel copies; degrees scale by k.
pub fn multiply_edges(g: &Multigraph, k: usize) -> MultipliedGraph {
    assert!(k >= 1, "multiplier must be positive");
    let records = g
        .records()
        .iter()
        .map(|e| EdgeRecord::new(e.u, e.v, e.mult * k));
    let graph = Multigraph::new(g.n(), records).expect("scaled records stay valid");
    debug_assert_eq!(graph.record_count(), g.record_count());
    MultipliedGraph {
        base: g.clone(),
        graph,
        k,
    }
}

/// Where a base record landed in the split graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitImage {
    /// Non-loop record (u,v): split records (u_L, v_R) and (v_L, u_R).
    Pair(usize, usize),
    /// Loop at v: the single split record (v_L, v_R).
    Loop(usize),
}

/// The bipartite double graph: left copies 0..n, right copies n..2n.
/// It has a perfect matching exactly when the base graph has a perfect
/// 2-matching.
#[derive(Debug, Clone)]
pub struct SplitGraph {
    pub base: Multigraph,
    pub graph: Multigraph,
    /// Per base record: its split record ids.
    pub edge_map: Vec<SplitImage>,
}

impl SplitGraph {
    pub fn left(&self, v: usize) -> usize {
        v
    }

    pub fn right(&self, v: usize) -> usize {
        self.base.n() + v
    }
}

/// Builds the split graph; multiplicities collapse to simple edges.
pub fn split_bipartite(g: &Multigraph) -> SplitGraph {
    let n = g.n();
    let mut pairs = Vec::new();
    for e in g.records() {
        if e.is_loop() {
            pairs.push((e.u, n + e.u));
        } else {
            pairs.push((e.u, n + e.v));
            pairs.push((e.v, n + e.u));
        }
    }
    let graph = Multigraph::from_pairs(2 * n, pairs).expect("split endpoints stay valid");
    let edge_map = g
        .records()
        .iter()
        .map(|e| {
            if e.is_loop() {
                SplitImage::Loop(graph.record_between(e.u, n + e.u).unwrap())
            } else {
                SplitImage::Pair(
                    graph.record_between(e.u, n + e.v).unwrap(),
                    graph.record_between(e.v, n + e.u).unwrap(),
                )
            }
        })
        .collect();
    SplitGraph {
        base: g.clone(),
        graph,
        edge_map,
    }
}

/// Reads a perfect 2-matching off a perfect matching of the split graph:
/// each record's weight is the number of matched split edges in its image.
pub fn two_matching_from_split(
    split: &SplitGraph,
    m: &Matching,
) -> Result<WeightFunction, TransformError> {
    if !is_perfect(&split.graph, m) {
        return Err(TransformError::NotPerfect);
    }
    let weights: Vec<usize> = split
        .edge_map
        .iter()
        .map(|image| match *image {
            SplitImage::Pair(a, b) => usize::from(m.contains(a)) + usize::from(m.contains(b)),
            SplitImage::Loop(a) => usize::from(m.contains(a)),
        })
        .collect();
    let f = WeightFunction::new(&split.base, 2, weights).expect("split weights fit in 0..=2");
    debug_assert!(crate::solver::verify_perfect(&split.base, &f));
    Ok(f)
}

/// A {K2, odd-cycle} factor: single edges plus odd cycles covering every
/// vertex exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoFactorDecomposition {
    /// Record ids carrying weight 2, each a K2 component.
    pub k2_edges: Vec<usize>,
    /// Each cycle as its record-id sequence, odd length >= 3.
    pub odd_cycles: Vec<Vec<usize>>,
}

/// Turns a loop-free perfect 2-matching into a {K2, odd-cycle} factor:
/// weight-2 edges stay as K2s, weight-1 edges form disjoint cycles, and
/// every even cycle is re-weighted into alternating K2s.
pub fn normalize_two_matching(
    g: &Multigraph,
    f2: &WeightFunction,
) -> Result<TwoFactorDecomposition, TransformError> {
    if f2.k() != 2 || !crate::solver::verify_perfect(g, f2) {
        return Err(TransformError::NotPerfectTwoMatching);
    }
    if let Some(id) = (0..g.record_count())
        .find(|&i| g.records()[i].is_loop() && f2.weight(i) > 0)
    {
        return Err(TransformError::LoopWeight(id));
    }

    let mut k2_edges: Vec<usize> = (0..g.record_count()).filter(|&i| f2.weight(i) == 2).collect();
    // Weight-1 edges give every touched vertex exactly two of them, so the
    // support is a disjoint union of simple cycles.
    let mut ones: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for i in 0..g.record_count() {
        if f2.weight(i) == 1 {
            let e = g.records()[i];
            ones[e.u].push(i);
            ones[e.v].push(i);
        }
    }
    let mut used = vec![false; g.record_count()];
    let mut odd_cycles = Vec::new();
    for start in 0..g.n() {
        if ones[start].is_empty() || ones[start].iter().all(|&i| used[i]) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut at = start;
        loop {
            // Lowest-index unused cycle edge at the current vertex.
            let &next = ones[at]
                .iter()
                .find(|&&i| !used[i])
                .expect("cycle walk always has a way forward");
            used[next] = true;
            cycle.push(next);
            at = g.records()[next].other(at);
            if at == start {
                break;
            }
        }
        if cycle.len() % 2 == 0 {
            // Alternate around the cycle, starting with the first edge.
            for (pos, &id) in cycle.iter().enumerate() {
                if pos % 2 == 0 {
                    k2_edges.push(id);
                }
            }
        } else {
            odd_cycles.push(cycle);
        }
    }
    k2_edges.sort_unstable();

    // The components must cover every vertex exactly once.
    let mut covered = vec![0usize; g.n()];
    for &id in &k2_edges {
        covered[g.records()[id].u] += 1;
        covered[g.records()[id].v] += 1;
    }
    for cycle in &odd_cycles {
        let mut at = {
            // Recover the cycle's starting vertex from its first two edges.
            let (a, b) = (g.records()[cycle[0]], g.records()[cycle[1]]);
            if b.touches(a.u) {
                a.v
            } else {
                a.u
            }
        };
        for &id in cycle.iter() {
            covered[at] += 1;
            at = g.records()[id].other(at);
        }
    }
    assert!(
        covered.iter().all(|&c| c == 1),
        "two-factor components must partition the vertex set"
    );
    Ok(TwoFactorDecomposition {
        k2_edges,
        odd_cycles,
    })
}

/// Gadget node ranges for one base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexGadget {
    /// One node per edge-endpoint slot (a loop copy occupies two).
    pub externals: Range<usize>,
    /// deg(v) - k nodes, joined to all of the vertex's externals.
    pub internals: Range<usize>,
}

/// The classical k-factor gadget: a simple graph with a perfect matching
/// exactly when the base multigraph has a k-factor.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    pub base: Multigraph,
    pub gadget: Multigraph,
    pub k: usize,
    pub vertex_gadgets: Vec<VertexGadget>,
    /// Per base record, per copy: the gadget record joining its two slots.
    pub copy_edges: Vec<Vec<usize>>,
}

/// Builds the gadget. Requires degree(v) >= k everywhere (otherwise no
/// k-factor exists and the caller short-circuits). The gadget has
/// sum(2 deg(v) - k) nodes, ordered canonically by vertex then slot.
pub fn factor_gadget(g: &Multigraph, k: usize) -> Result<GadgetMap, TransformError> {
    assert!(k >= 1, "factor target must be positive");
    let n = g.n();
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    if let Some(vertex) = (0..n).find(|&v| degrees[v] < k) {
        return Err(TransformError::DegreeTooSmall {
            vertex,
            degree: degrees[vertex],
            k,
        });
    }

    let mut vertex_gadgets = Vec::with_capacity(n);
    let mut offset = 0;
    for v in 0..n {
        let externals = offset..offset + degrees[v];
        let internals = offset + degrees[v]..offset + 2 * degrees[v] - k;
        offset = internals.end;
        vertex_gadgets.push(VertexGadget {
            externals,
            internals,
        });
    }

    let mut pairs = Vec::new();
    let mut next_slot = vec![0usize; n];
    let mut copy_slots: Vec<Vec<(usize, usize)>> = Vec::with_capacity(g.record_count());
    for e in g.records() {
        let mut slots = Vec::with_capacity(e.mult);
        for _ in 0..e.mult {
            let a = vertex_gadgets[e.u].externals.start + next_slot[e.u];
            next_slot[e.u] += 1;
            let b = vertex_gadgets[e.v].externals.start + next_slot[e.v];
            next_slot[e.v] += 1;
            slots.push((a, b));
            pairs.push((a, b));
        }
        copy_slots.push(slots);
    }
    debug_assert!((0..n).all(|v| next_slot[v] == degrees[v]));
    for vg in &vertex_gadgets {
        for i in vg.internals.clone() {
            for s in vg.externals.clone() {
                pairs.push((s, i));
            }
        }
    }
    let gadget = Multigraph::from_pairs(offset, pairs).expect("gadget nodes stay valid");
    let copy_edges = copy_slots
        .into_iter()
        .map(|slots| {
            slots
                .into_iter()
                .map(|(a, b)| gadget.record_between(a, b).unwrap())
                .collect()
        })
        .collect();
    Ok(GadgetMap {
        base: g.clone(),
        gadget,
        k,
        vertex_gadgets,
        copy_edges,
    })
}

/// A per-record copy count: a spanning subgraph given by taking c(e)
/// copies of each record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSelection {
    pub counts: Vec<usize>,
}

impl FactorSelection {
    /// Degree of the selected subgraph at `v`, loops counted twice.
    pub fn degree_at(&self, g: &Multigraph, v: usize) -> usize {
        g.incident(v)
            .iter()
            .map(|&i| {
                if g.records()[i].is_loop() {
                    2 * self.counts[i]
                } else {
                    self.counts[i]
                }
            })
            .sum()
    }
}

/// Reads a k-factor off a perfect matching of the gadget: each record's
/// count is the number of its copies whose gadget edge was matched. The
/// degree constraint is re-verified rather than trusted.
pub fn recover_factor(gm: &GadgetMap, m: &Matching) -> Result<FactorSelection, TransformError> {
    if !is_perfect(&gm.gadget, m) {
        return Err(TransformError::NotPerfect);
    }
    let counts: Vec<usize> = gm
        .copy_edges
        .iter()
        .map(|copies| copies.iter().filter(|&&id| m.contains(id)).count())
        .collect();
    let selection = FactorSelection { counts };
    for v in 0..gm.base.n() {
        if selection.degree_at(&gm.base, v) != gm.k {
            return Err(TransformError::Inconsistent);
        }
    }
    Ok(selection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::matching::max_matching;
    use crate::oracle;

    #[test]
    fn multiply_scales_degrees() {
        let k2 = Multigraph::from_pairs(2, [(0, 1)]).unwrap();
        let tripled = multiply_edges(&k2, 3);
        assert_eq!(tripled.graph.record_count(), 1);
        assert_eq!(tripled.graph.records()[0].mult, 3);

        let c3 = generate::cycle(3).unwrap();
        assert_eq!(multiply_edges(&c3, 1).graph, c3);
        let g5 = multiply_edges(&c3, 5).graph;
        for v in 0..3 {
            assert_eq!(g5.degree(v), 10);
        }
    }

    #[test]
    fn split_shapes() {
        let k2 = Multigraph::from_pairs(2, [(0, 1)]).unwrap();
        let s = split_bipartite(&k2);
        assert_eq!(s.graph.n(), 4);
        assert_eq!(s.graph.record_count(), 2);
        assert!(is_perfect(&s.graph, &max_matching(&s.graph).unwrap()));

        let loop_graph = Multigraph::new(1, [EdgeRecord::new(0, 0, 1)]).unwrap();
        let s = split_bipartite(&loop_graph);
        assert_eq!(s.graph.record_count(), 1);
        assert!(is_perfect(&s.graph, &max_matching(&s.graph).unwrap()));

        // K_{1,3} has no perfect 2-matching, so its split graph has no
        // perfect matching.
        let star = generate::star(3).unwrap();
        let s = split_bipartite(&star);
        assert_eq!(s.graph.record_count(), 6);
        assert!(!is_perfect(&s.graph, &max_matching(&s.graph).unwrap()));
        assert!(!oracle::oracle_solve(&star, 2, false, 1 << 20).unwrap().exists);
    }

    #[test]
    fn split_edge_counts() {
        let g = Multigraph::new(
            3,
            [
                EdgeRecord::new(0, 0, 2),
                EdgeRecord::new(0, 1, 3),
                EdgeRecord::new(1, 2, 1),
            ],
        )
        .unwrap();
        let s = split_bipartite(&g);
        // 2 per non-loop record + 1 per loop record, multiplicities collapse.
        assert_eq!(s.graph.record_count(), 2 * 2 + 1);
    }

    #[test]
    fn two_matching_recovery_on_c5() {
        let c5 = generate::cycle(5).unwrap();
        let s = split_bipartite(&c5);
        // The natural matching: walk the cycle 0 -> 1 -> ... -> 4 -> 0 and
        // take the split edge (i_L, (i+1)_R) of every step.
        let ids = (0..5)
            .map(|i| s.graph.record_between(i, 5 + (i + 1) % 5).unwrap())
            .collect();
        let m = Matching::new(&s.graph, ids).unwrap();
        assert!(is_perfect(&s.graph, &m));
        let f2 = two_matching_from_split(&s, &m).unwrap();
        assert!(f2.weights().iter().all(|&w| w == 1));
    }

    #[test]
    fn two_matching_recovery_on_k2_and_loop() {
        let k2 = Multigraph::from_pairs(2, [(0, 1)]).unwrap();
        let s = split_bipartite(&k2);
        let m = max_matching(&s.graph).unwrap();
        let f2 = two_matching_from_split(&s, &m).unwrap();
        assert_eq!(f2.weights(), &[2]);

        let loop_graph = Multigraph::new(1, [EdgeRecord::new(0, 0, 1)]).unwrap();
        let s = split_bipartite(&loop_graph);
        let m = max_matching(&s.graph).unwrap();
        let f2 = two_matching_from_split(&s, &m).unwrap();
        assert_eq!(f2.weights(), &[1]);
        assert_eq!(crate::solver::vertex_load(&loop_graph, &f2, 0), 2);
    }

    #[test]
    fn imperfect_matching_rejected() {
        let star = generate::star(3).unwrap();
        let s = split_bipartite(&star);
        let m = max_matching(&s.graph).unwrap();
        assert_eq!(
            two_matching_from_split(&s, &m).unwrap_err(),
            TransformError::NotPerfect
        );
    }

    #[test]
    fn normalization_examples() {
        // Weight 2 on a perfect matching of C4 (records sort as (0,1),
        // (0,3), (1,2), (2,3)): two K2s.
        let c4 = generate::cycle(4).unwrap();
        let f = WeightFunction::new(&c4, 2, vec![2, 0, 0, 2]).unwrap();
        let d = normalize_two_matching(&c4, &f).unwrap();
        assert_eq!(d.k2_edges, vec![0, 3]);
        assert!(d.odd_cycles.is_empty());

        // All-ones on C5: a single odd cycle.
        let c5 = generate::cycle(5).unwrap();
        let f = WeightFunction::constant(&c5, 2, 1).unwrap();
        let d = normalize_two_matching(&c5, &f).unwrap();
        assert!(d.k2_edges.is_empty());
        assert_eq!(d.odd_cycles.len(), 1);
        assert_eq!(d.odd_cycles[0].len(), 5);

        // All-ones on C6 normalizes to three alternating K2s.
        let c6 = generate::cycle(6).unwrap();
        let f = WeightFunction::constant(&c6, 2, 1).unwrap();
        let d = normalize_two_matching(&c6, &f).unwrap();
        assert_eq!(d.k2_edges.len(), 3);
        assert!(d.odd_cycles.is_empty());
    }

    #[test]
    fn normalization_rejects_loop_weight() {
        let g = Multigraph::new(1, [EdgeRecord::new(0, 0, 1)]).unwrap();
        let f = WeightFunction::new(&g, 2, vec![1]).unwrap();
        assert_eq!(
            normalize_two_matching(&g, &f).unwrap_err(),
            TransformError::LoopWeight(0)
        );
    }

    #[test]
    fn gadget_shapes() {
        // K2, k = 1: the gadget is a single edge.
        let k2 = Multigraph::from_pairs(2, [(0, 1)]).unwrap();
        let gm = factor_gadget(&k2, 1).unwrap();
        assert_eq!(gm.gadget.n(), 2);
        assert_eq!(gm.gadget.record_count(), 1);
        assert!(is_perfect(&gm.gadget, &max_matching(&gm.gadget).unwrap()));

        // C3, k = 2: no internals, the gadget is a 6-cycle.
        let c3 = generate::cycle(3).unwrap();
        let gm = factor_gadget(&c3, 2).unwrap();
        assert_eq!(gm.gadget.n(), 6);
        assert!(gm.vertex_gadgets.iter().all(|vg| vg.internals.is_empty()));
        assert!(is_perfect(&gm.gadget, &max_matching(&gm.gadget).unwrap()));
    }

    #[test]
    fn gadget_node_count_formula() {
        let graphs = [
            generate::petersen(),
            multiply_edges(&generate::cycle(4).unwrap(), 3).graph,
            Multigraph::new(2, [EdgeRecord::new(0, 0, 2), EdgeRecord::new(0, 1, 3)]).unwrap(),
        ];
        for g in graphs {
            let k = 3;
            if (0..g.n()).any(|v| g.degree(v) < k) {
                continue;
            }
            let gm = factor_gadget(&g, k).unwrap();
            let expected: usize = (0..g.n()).map(|v| 2 * g.degree(v) - k).sum();
            assert_eq!(gm.gadget.n(), expected);
        }
    }

    #[test]
    fn gadget_rejects_low_degree() {
        let star = generate::star(3).unwrap();
        let err = factor_gadget(&star, 2).unwrap_err();
        assert_eq!(
            err,
            TransformError::DegreeTooSmall {
                vertex: 1,
                degree: 1,
                k: 2
            }
        );
    }

    #[test]
    fn odd_k_negative_case_c3() {
        // C3 multiplied by 3 is 6-regular, but it has no 3-factor because
        // C3 has no perfect 3-matching; the gadget must have no perfect
        // matching. Its node count is odd, and the brute-force k-factor
        // search agrees.
        let c3 = generate::cycle(3).unwrap();
        let g_star = multiply_edges(&c3, 3).graph;
        let gm = factor_gadget(&g_star, 3).unwrap();
        assert_eq!(gm.gadget.n() % 2, 1);
        assert!(!is_perfect(&gm.gadget, &max_matching(&gm.gadget).unwrap()));
        assert!(!oracle::oracle_kfactor(&g_star, 3, 1 << 22).unwrap());
    }

    #[test]
    fn recover_examples() {
        // K2 with multiplicity 3, k = 3: all three copies selected.
        let k2x3 = Multigraph::new(2, [EdgeRecord::new(0, 1, 3)]).unwrap();
        let gm = factor_gadget(&k2x3, 3).unwrap();
        let m = max_matching(&gm.gadget).unwrap();
        let sel = recover_factor(&gm, &m).unwrap();
        assert_eq!(sel.counts, vec![3]);

        // C4, k = 2: the cycle is its own 2-factor.
        let c4 = generate::cycle(4).unwrap();
        let gm = factor_gadget(&c4, 2).unwrap();
        let m = max_matching(&gm.gadget).unwrap();
        let sel = recover_factor(&gm, &m).unwrap();
        assert_eq!(sel.counts, vec![1, 1, 1, 1]);
    }

    #[test]
    fn recover_on_multiplied_c4() {
        // Every perfect gadget matching of (C4 tripled, k = 3) recovers a
        // 3-regular selection; the brute-force search confirms one exists.
        let c4 = generate::cycle(4).unwrap();
        let g_star = multiply_edges(&c4, 3).graph;
        assert!(oracle::oracle_kfactor(&g_star, 3, 1 << 22).unwrap());
        let gm = factor_gadget(&g_star, 3).unwrap();
        let m = max_matching(&gm.gadget).unwrap();
        let sel = recover_factor(&gm, &m).unwrap();
        for v in 0..4 {
            assert_eq!(sel.degree_at(&g_star, v), 3);
        }
    }

    #[test]
    fn gadget_completeness_small() {
        // All multigraphs on up to 4 vertices with bounded multiplicity:
        // gadget perfect matching iff the brute-force search finds a
        // k-factor.
        for n in 1..=4usize {
            let slots: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u..n).map(move |v| (u, v)))
                .collect();
            let per = 3usize; // multiplicities 0..2 per slot
            let total = per.pow(slots.len() as u32);
            for code in 0..total {
                let mut c = code;
                let mut records = Vec::new();
                for &(u, v) in &slots {
                    let mult = c % per;
                    c /= per;
                    if mult > 0 {
                        records.push(EdgeRecord::new(u, v, mult));
                    }
                }
                let g = Multigraph::new(n, records).unwrap();
                if g.total_multiplicity() > 8 {
                    continue;
                }
                for k in 1..=3usize {
                    let expected = oracle::oracle_kfactor(&g, k, 1 << 22).unwrap();
                    let got = match factor_gadget(&g, k) {
                        Err(TransformError::DegreeTooSmall { .. }) => false,
                        Err(e) => panic!("unexpected gadget error: {e}"),
                        Ok(gm) => {
                            let m = max_matching(&gm.gadget).unwrap();
                            if is_perfect(&gm.gadget, &m) {
                                // Round-trip: the recovered selection
                                // must verify.
                                recover_factor(&gm, &m).unwrap();
                                true
                            } else {
                                false
                            }
                        }
                    };
                    assert_eq!(got, expected, "n={n} code={code} k={k}");
                }
            }
        }
    }
}
