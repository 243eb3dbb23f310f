//! Brute-force ground truth: existence, construction and counting of
//! perfect k-matchings (and k-factors) by backtracking over record
//! weights. Exact but exponential; a work budget turns runaway instances
//! into an explicit error instead of a wrong or silent answer.

use thiserror::Error;

use crate::graph::{EdgeRecord, Multigraph};
use crate::solver::{verify_perfect, WeightFunction};

/// Default backtracking-node allowance.
pub const DEFAULT_WORK_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("work budget of {0} backtracking nodes exceeded")]
    BudgetExceeded(usize),
}

/// What the exhaustive search found.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub exists: bool,
    /// Number of perfect weight functions on normalized records, when
    /// counting was requested.
    pub count: Option<u64>,
    /// Lexicographically smallest witness in record order.
    pub witness: Option<WeightFunction>,
}

struct Backtrack<'a> {
    records: &'a [EdgeRecord],
    caps: &'a [usize],
    counting: bool,
    budget: usize,
    nodes: usize,
    /// Remaining load each vertex still needs.
    residual: Vec<usize>,
    /// Largest extra load the unassigned records could still deliver.
    capacity: Vec<usize>,
    /// Per vertex, its highest incident record index.
    last_record: Vec<Option<usize>>,
    weights: Vec<usize>,
    count: u64,
    witness: Option<Vec<usize>>,
}

impl Backtrack<'_> {
    fn prune_ok(&self, i: usize, v: usize) -> bool {
        if self.last_record[v] == Some(i) && self.residual[v] != 0 {
            return false;
        }
        self.residual[v] <= self.capacity[v]
    }

    /// Explores weights for record `i`; returns true when the search can
    /// stop (first witness found and counting is off).
    fn recurse(&mut self, i: usize) -> Result<bool, OracleError> {
        if i == self.records.len() {
            debug_assert!(self.residual.iter().all(|&r| r == 0));
            self.count += 1;
            if self.witness.is_none() {
                self.witness = Some(self.weights.clone());
            }
            return Ok(!self.counting);
        }
        let e = self.records[i];
        let max_w = if e.is_loop() {
            self.caps[i].min(self.residual[e.u] / 2)
        } else {
            self.caps[i].min(self.residual[e.u]).min(self.residual[e.v])
        };
        let unit = if e.is_loop() { 2 } else { 1 };
        self.capacity[e.u] -= self.caps[i] * unit;
        if !e.is_loop() {
            self.capacity[e.v] -= self.caps[i];
        }
        let mut stop = false;
        for w in 0..=max_w {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::BudgetExceeded(self.budget));
            }
            self.residual[e.u] -= w * unit;
            if !e.is_loop() {
                self.residual[e.v] -= w;
            }
            if self.prune_ok(i, e.u) && (e.is_loop() || self.prune_ok(i, e.v)) {
                self.weights[i] = w;
                stop = self.recurse(i + 1)?;
            }
            self.residual[e.u] += w * unit;
            if !e.is_loop() {
                self.residual[e.v] += w;
            }
            if stop {
                break;
            }
        }
        self.weights[i] = 0;
        self.capacity[e.u] += self.caps[i] * unit;
        if !e.is_loop() {
            self.capacity[e.v] += self.caps[i];
        }
        Ok(stop)
    }
}

/// Runs the shared backtracking engine with per-record weight caps.
fn search(
    g: &Multigraph,
    k: usize,
    caps: &[usize],
    counting: bool,
    budget: usize,
) -> Result<(u64, Option<Vec<usize>>), OracleError> {
    let mut capacity = vec![0usize; g.n()];
    let mut last_record = vec![None; g.n()];
    for (i, e) in g.records().iter().enumerate() {
        let unit = if e.is_loop() { 2 } else { 1 };
        capacity[e.u] += caps[i] * unit;
        last_record[e.u] = Some(i);
        if !e.is_loop() {
            capacity[e.v] += caps[i];
            last_record[e.v] = Some(i);
        }
    }
    // A vertex that cannot reach load k makes the whole instance
    // infeasible; this also covers vertices with no incident records.
    if capacity.iter().any(|&c| c < k) {
        return Ok((0, None));
    }
    let mut bt = Backtrack {
        records: g.records(),
        caps,
        counting,
        budget,
        nodes: 0,
        residual: vec![k; g.n()],
        capacity,
        last_record,
        weights: vec![0; g.record_count()],
        count: 0,
        witness: None,
    };
    bt.recurse(0)?;
    Ok((bt.count, bt.witness))
}

/// Exhaustive perfect-k-matching search; counts solutions per normalized
/// record when `count` is set, otherwise stops at the first witness.
pub fn oracle_solve(
    g: &Multigraph,
    k: usize,
    count: bool,
    budget: usize,
) -> Result<OracleResult, OracleError> {
    assert!(k >= 1, "k must be positive");
    let caps: Vec<usize> = g
        .records()
        .iter()
        .map(|e| if e.is_loop() { k / 2 } else { k })
        .collect();
    let (found, witness) = search(g, k, &caps, count, budget)?;
    let witness = witness.map(|w| {
        let f = WeightFunction::new(g, k, w).expect("search respects the weight bounds");
        assert!(verify_perfect(g, &f), "oracle witness must verify");
        f
    });
    Ok(OracleResult {
        exists: witness.is_some(),
        count: count.then_some(found),
        witness,
    })
}

/// True iff some copy-selection c(e) in 0..=mult(e) has degree exactly k
/// at every vertex (loops counted twice).
pub fn oracle_kfactor(g: &Multigraph, k: usize, budget: usize) -> Result<bool, OracleError> {
    assert!(k >= 1, "k must be positive");
    let caps: Vec<usize> = g
        .records()
        .iter()
        .map(|e| if e.is_loop() { e.mult.min(k / 2) } else { e.mult.min(k) })
        .collect();
    let (_, witness) = search(g, k, &caps, false, budget)?;
    Ok(witness.is_some())
}
