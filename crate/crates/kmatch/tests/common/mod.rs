//! Helpers shared by the integration suites: independent component
//! counting (separate from the library's implementation), exhaustive
//! graph enumeration, and seeded random families.

use kmatch::{EdgeRecord, Multigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Component counts of g minus a vertex mask, recomputed from raw records
/// with a plain BFS so the check does not share code with the library.
pub struct Counts {
    pub isolated: usize,
    pub odd_total: usize,
    pub odd_with_edges: usize,
}

pub fn counts_without(g: &Multigraph, removed_mask: u64) -> Counts {
    let n = g.n();
    let keep = |v: usize| removed_mask >> v & 1 == 0;
    let mut adj = vec![Vec::new(); n];
    let mut edged = vec![false; n];
    for e in g.records() {
        if keep(e.u) && keep(e.v) {
            edged[e.u] = true;
            edged[e.v] = true;
            if !e.is_loop() {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut counts = Counts {
        isolated: 0,
        odd_total: 0,
        odd_with_edges: 0,
    };
    for start in 0..n {
        if !keep(start) || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut order = 0;
        let mut has_edge = false;
        while let Some(v) = stack.pop() {
            order += 1;
            has_edge |= edged[v];
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if order % 2 == 1 {
            counts.odd_total += 1;
            if has_edge {
                counts.odd_with_edges += 1;
            } else {
                counts.isolated += 1;
            }
        }
    }
    counts
}

/// The even-k feasibility condition, evaluated independently:
/// i(G-S) <= |S| for every S.
pub fn bracket_even(g: &Multigraph) -> bool {
    (0..(1u64 << g.n())).all(|mask| {
        counts_without(g, mask).isolated <= mask.count_ones() as usize
    })
}

/// The odd-k feasibility condition, evaluated independently:
/// odd(G-S) + k*i(G-S) <= k|S| for every S, with odd counting the odd
/// components that contain an edge.
pub fn bracket_odd(g: &Multigraph, k: usize) -> bool {
    assert!(k % 2 == 1);
    (0..(1u64 << g.n())).all(|mask| {
        let c = counts_without(g, mask);
        c.odd_with_edges + k * c.isolated <= k * mask.count_ones() as usize
    })
}

/// All pair slots (including loops) on n vertices, in a fixed order.
pub fn pair_slots(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect()
}

/// Decodes a base-`levels` code into a multigraph over `pair_slots(n)`
/// with multiplicity `digit` per slot.
pub fn decode_multigraph(n: usize, slots: &[(usize, usize)], levels: usize, code: usize) -> Multigraph {
    let mut c = code;
    let mut records = Vec::new();
    for &(u, v) in slots {
        let mult = c % levels;
        c /= levels;
        if mult > 0 {
            records.push(EdgeRecord::new(u, v, mult));
        }
    }
    Multigraph::new(n, records).unwrap()
}

/// Connected simple graphs with `1 <= n <= max_n`, one representative per
/// isomorphism class (canonical = minimal adjacency bitmask over all
/// vertex relabelings).
pub fn connected_simple_reps(max_n: usize) -> Vec<Multigraph> {
    assert!(max_n <= 7);
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let bits = pairs.len();
        let bit_index = |u: usize, v: usize| {
            pairs
                .iter()
                .position(|&(a, b)| (a, b) == (u.min(v), u.max(v)))
                .unwrap()
        };
        // Per permutation, where each edge bit lands.
        let perms = permutations(n);
        let moves: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                (0..bits)
                    .map(|i| bit_index(p[pairs[i].0], p[pairs[i].1]))
                    .collect()
            })
            .collect();
        'mask: for mask in 0u32..(1 << bits) {
            for mv in &moves {
                let mut permuted = 0u32;
                for (i, &target) in mv.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        permuted |= 1 << target;
                    }
                }
                if permuted < mask {
                    continue 'mask; // not canonical
                }
            }
            let edge_list: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Multigraph::from_pairs(n, edge_list).unwrap();
            if g.component_summary().component_count() == 1 {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// A random bipartite graph with both sides of size `side`; vertices
/// 0..side on the left.
pub fn random_balanced_bipartite(side: usize, p: f64, seed: u64) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for a in 0..side {
        for b in side..2 * side {
            if rng.random::<f64>() < p {
                pairs.push((a, b));
            }
        }
    }
    Multigraph::from_pairs(2 * side, pairs).unwrap()
}

/// Disjoint union with relabeled second operand.
pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
    let mut records: Vec<EdgeRecord> = a.records().to_vec();
    records.extend(
        b.records()
            .iter()
            .map(|e| EdgeRecord::new(e.u + a.n(), e.v + a.n(), e.mult)),
    );
    Multigraph::new(a.n() + b.n(), records).unwrap()
}
