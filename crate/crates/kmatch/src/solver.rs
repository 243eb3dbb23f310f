//! Decision and construction of perfect k-matchings.
//!
//! Three routes, picked by k: k = 1 runs the blossom matcher directly,
//! even k goes through the bipartite split graph (a perfect 2-matching
//! scaled by k/2), and odd k >= 3 goes through the k-factor gadget on the
//! graph with every edge replaced by k parallel copies. Infeasible
//! instances get an exhaustively-found violator certificate when the graph
//! is small enough.

use thiserror::Error;

use crate::certificates::{find_violator, verify_certificate, Certificate};
use crate::graph::{GraphError, Multigraph, VertexSet};
use crate::matching::{bipartite_max_matching, is_perfect, max_matching};
use crate::transforms::{
    factor_gadget, multiply_edges, normalize_two_matching, recover_factor, split_bipartite,
    two_matching_from_split, TransformError, TwoFactorDecomposition,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("the regular-graph corollary check requires odd k")]
    EvenK,
    #[error("weight vector has {got} entries but the host graph has {expected} records")]
    HostMismatch { got: usize, expected: usize },
    #[error("weight {weight} on record {record} exceeds k = {k}")]
    WeightOutOfRange {
        record: usize,
        weight: usize,
        k: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An edge-weight assignment f: records -> 0..=k, the k-matching object.
/// A loop's weight counts twice toward its vertex's load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    k: usize,
    weights: Vec<usize>,
}

impl WeightFunction {
    pub fn new(g: &Multigraph, k: usize, weights: Vec<usize>) -> Result<Self, SolveError> {
        if k == 0 {
            return Err(SolveError::InvalidK);
        }
        if weights.len() != g.record_count() {
            return Err(SolveError::HostMismatch {
                got: weights.len(),
                expected: g.record_count(),
            });
        }
        if let Some(record) = weights.iter().position(|&w| w > k) {
            return Err(SolveError::WeightOutOfRange {
                record,
                weight: weights[record],
                k,
            });
        }
        Ok(WeightFunction { k, weights })
    }

    /// The constant assignment f ≡ w.
    pub fn constant(g: &Multigraph, k: usize, w: usize) -> Result<Self, SolveError> {
        Self::new(g, k, vec![w; g.record_count()])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub fn weight(&self, record: usize) -> usize {
        self.weights[record]
    }

    /// Record ids carrying positive weight (the induced-subgraph view).
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(i, _)| i)
    }

    /// Sum of all weights, the paper's notion of size.
    pub fn size(&self) -> usize {
        self.weights.iter().sum()
    }
}

/// Incident weight sum at `v`; a loop's weight counts twice.
pub fn vertex_load(g: &Multigraph, f: &WeightFunction, v: usize) -> usize {
    assert_eq!(
        f.weights.len(),
        g.record_count(),
        "weight function hosted on a different graph"
    );
    g.incident(v)
        .iter()
        .map(|&i| {
            if g.records()[i].is_loop() {
                2 * f.weights[i]
            } else {
                f.weights[i]
            }
        })
        .sum()
}

/// True iff the load equals k at every vertex. A perfect function also
/// satisfies the size identity 2·size = k·n, which is asserted.
pub fn verify_perfect(g: &Multigraph, f: &WeightFunction) -> bool {
    let perfect = (0..g.n()).all(|v| vertex_load(g, f, v) == f.k);
    if perfect {
        assert_eq!(2 * f.size(), f.k * g.n(), "size identity must hold");
    }
    perfect
}

/// Which reduction pipeline a solve ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    DirectMatching,
    EvenViaTwoMatching,
    OddViaKFactor,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::DirectMatching => "direct_matching",
            Route::EvenViaTwoMatching => "even_via_2matching",
            Route::OddViaKFactor => "odd_via_kfactor",
        }
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Deterministic size counters for the reduction that ran.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub reduction_vertices: usize,
    pub reduction_edges: usize,
    pub matching_size: usize,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Feasible {
        weights: WeightFunction,
        /// Only for even k when requested and the support is loop-free.
        two_factor: Option<TwoFactorDecomposition>,
    },
    Infeasible {
        certificate: Option<Certificate>,
        skipped_reason: Option<String>,
    },
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub route: Route,
    pub stats: SolveStats,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, Outcome::Feasible { .. })
    }

    pub fn weights(&self) -> Option<&WeightFunction> {
        match &self.outcome {
            Outcome::Feasible { weights, .. } => Some(weights),
            Outcome::Infeasible { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            Outcome::Feasible { .. } => None,
            Outcome::Infeasible { certificate, .. } => certificate.as_ref(),
        }
    }

    pub fn two_factor(&self) -> Option<&TwoFactorDecomposition> {
        match &self.outcome {
            Outcome::Feasible { two_factor, .. } => two_factor.as_ref(),
            Outcome::Infeasible { .. } => None,
        }
    }
}

pub const DEFAULT_CERT_BOUND: usize = 16;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Infeasible instances up to this many vertices get an exhaustively
    /// found, verified certificate.
    pub cert_bound: usize,
    /// For even k, also build the {K2, odd-cycle} factor (loop-free
    /// supports only).
    pub two_factor: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cert_bound: DEFAULT_CERT_BOUND,
            two_factor: false,
        }
    }
}

fn infeasible_outcome(g: &Multigraph, k: usize, opts: &SolveOptions) -> Outcome {
    if g.n() <= opts.cert_bound {
        match find_violator(g, k, opts.cert_bound) {
            Some(certificate) => {
                assert!(
                    verify_certificate(g, &certificate).unwrap_or(false),
                    "search returned a certificate that does not verify"
                );
                Outcome::Infeasible {
                    certificate: Some(certificate),
                    skipped_reason: None,
                }
            }
            // The characterization guarantees a violator exists; reaching
            // this branch would mean a bug, surfaced rather than hidden.
            None => Outcome::Infeasible {
                certificate: None,
                skipped_reason: Some(
                    "no violator found below the certificate bound; \
                     this contradicts the feasibility characterization"
                        .to_string(),
                ),
            },
        }
    } else {
        Outcome::Infeasible {
            certificate: None,
            skipped_reason: Some(format!(
                "certificate search skipped (n = {} > cert bound = {})",
                g.n(),
                opts.cert_bound
            )),
        }
    }
}

/// Decides whether `g` has a perfect k-matching and constructs a witness
/// or a certificate. Deterministic for fixed inputs and options.
pub fn solve(g: &Multigraph, k: usize, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    if k == 0 {
        return Err(SolveError::InvalidK);
    }
    let n = g.n();
    if k == 1 {
        // Loops can never carry weight at k = 1 and parallel copies do not
        // help cardinality matching.
        let mut pairs = Vec::new();
        let mut map = Vec::new();
        for (i, e) in g.records().iter().enumerate() {
            if !e.is_loop() {
                pairs.push((e.u, e.v));
                map.push(i);
            }
        }
        let stripped = Multigraph::from_pairs(n, pairs).expect("stripping keeps indices valid");
        let m = max_matching(&stripped).expect("stripped graph has no loops");
        let stats = SolveStats {
            reduction_vertices: stripped.n(),
            reduction_edges: stripped.record_count(),
            matching_size: m.len(),
        };
        let outcome = if is_perfect(&stripped, &m) {
            let mut weights = vec![0; g.record_count()];
            for &id in m.edge_ids() {
                weights[map[id]] = 1;
            }
            let f = WeightFunction::new(g, 1, weights)?;
            assert!(verify_perfect(g, &f));
            Outcome::Feasible {
                weights: f,
                two_factor: None,
            }
        } else {
            infeasible_outcome(g, 1, opts)
        };
        return Ok(SolveReport {
            outcome,
            route: Route::DirectMatching,
            stats,
        });
    }

    if k % 2 == 0 {
        let split = split_bipartite(g);
        let left: VertexSet = (0..n).collect();
        let right: VertexSet = (n..2 * n).collect();
        let (m, _) = bipartite_max_matching(&split.graph, &left, &right)
            .expect("the split graph is bipartite by construction");
        let stats = SolveStats {
            reduction_vertices: split.graph.n(),
            reduction_edges: split.graph.record_count(),
            matching_size: m.len(),
        };
        let outcome = if is_perfect(&split.graph, &m) {
            let f2 = two_matching_from_split(&split, &m).expect("matching verified perfect");
            let two_factor = if opts.two_factor {
                match normalize_two_matching(g, &f2) {
                    Ok(d) => Some(d),
                    Err(TransformError::LoopWeight(_)) => None,
                    Err(e) => panic!("two-factor normalization failed unexpectedly: {e}"),
                }
            } else {
                None
            };
            let weights = f2.weights().iter().map(|&w| w * (k / 2)).collect();
            let f = WeightFunction::new(g, k, weights)?;
            assert!(verify_perfect(g, &f));
            Outcome::Feasible {
                weights: f,
                two_factor,
            }
        } else {
            infeasible_outcome(g, k, opts)
        };
        return Ok(SolveReport {
            outcome,
            route: Route::EvenViaTwoMatching,
            stats,
        });
    }

    // Odd k >= 3: k-factor of the k-fold multiplied graph.
    let parity_blocked = (k * n) % 2 == 1;
    let dead_vertex = (0..n).any(|v| g.degree(v) == 0);
    if parity_blocked || dead_vertex {
        return Ok(SolveReport {
            outcome: infeasible_outcome(g, k, opts),
            route: Route::OddViaKFactor,
            stats: SolveStats::default(),
        });
    }
    let multiplied = multiply_edges(g, k);
    let gm = factor_gadget(&multiplied.graph, k)
        .expect("multiplied degrees are at least k once degree-0 vertices are excluded");
    let m = max_matching(&gm.gadget).expect("the gadget is simple and loop-free");
    let stats = SolveStats {
        reduction_vertices: gm.gadget.n(),
        reduction_edges: gm.gadget.record_count(),
        matching_size: m.len(),
    };
    let outcome = if is_perfect(&gm.gadget, &m) {
        let selection = recover_factor(&gm, &m).expect("perfect gadget matchings recover");
        // Multiplication preserves record indices, so the copy counts on
        // the multiplied graph are the weights on the base graph.
        let f = WeightFunction::new(g, k, selection.counts)?;
        assert!(verify_perfect(g, &f));
        Outcome::Feasible {
            weights: f,
            two_factor: None,
        }
    } else {
        infeasible_outcome(g, k, opts)
    };
    Ok(SolveReport {
        outcome,
        route: Route::OddViaKFactor,
        stats,
    })
}

/// Hypothesis-and-conclusion report for the edge-connectivity sufficient
/// condition on regular graphs (odd k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularCheck {
    /// Common degree when the graph is regular.
    pub r: Option<usize>,
    /// Edge connectivity (needs n >= 2).
    pub lambda: Option<usize>,
    /// Required connectivity: ceil(r/k) - 1 when ceil(r/k) and r have the
    /// same parity, ceil(r/k) otherwise.
    pub threshold: Option<usize>,
    /// k·n must be even for any perfect k-matching to exist; the stated
    /// hypothesis is only sufficient under this parity side condition.
    pub parity_ok: bool,
    pub hypothesis_met: bool,
    pub feasible: bool,
    /// Hypothesis met yet infeasible: impossible if the theorem holds.
    pub violation: bool,
}

/// Checks the regular-graph sufficient condition on one instance. With
/// `strict_lambda` the connectivity must equal the threshold exactly;
/// by default meeting or exceeding it counts, since extra connectivity
/// cannot weaken the hypothesis.
pub fn check_regular_corollary(
    g: &Multigraph,
    k: usize,
    strict_lambda: bool,
) -> Result<RegularCheck, SolveError> {
    if k % 2 == 0 {
        return Err(SolveError::EvenK);
    }
    let r = g.regularity()?;
    let lambda = if g.n() >= 2 {
        Some(g.edge_connectivity()?)
    } else {
        None
    };
    let threshold = r.filter(|&r| r >= 1).map(|r| {
        let ceil = r.div_ceil(k);
        if ceil % 2 == r % 2 {
            ceil - 1
        } else {
            ceil
        }
    });
    let parity_ok = (k * g.n()) % 2 == 0;
    let hypothesis_met = match (threshold, lambda) {
        (Some(t), Some(l)) => parity_ok && if strict_lambda { l == t } else { l >= t },
        _ => false,
    };
    let feasible = solve(g, k, &SolveOptions::default())?.is_feasible();
    Ok(RegularCheck {
        r,
        lambda,
        threshold,
        parity_ok,
        hypothesis_met,
        feasible,
        violation: hypothesis_met && !feasible,
    })
}
