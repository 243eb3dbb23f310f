//! Deterministic graph generators for tests, examples and the `gen`
//! command. Randomized families are seeded and reproducible across runs
//! and platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeRecord, Multigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("no simple {r}-regular graph found after {attempts} attempts")]
    RetriesExhausted { r: usize, attempts: usize },
}

/// The cycle C_n, n >= 3.
pub fn cycle(n: usize) -> Result<Multigraph, GenerateError> {
    if n < 3 {
        return Err(GenerateError::InvalidParameters(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let pairs = (0..n).map(|i| (i, (i + 1) % n));
    Ok(Multigraph::from_pairs(n, pairs).unwrap())
}

/// The complete graph K_n.
pub fn complete(n: usize) -> Result<Multigraph, GenerateError> {
    if n == 0 {
        return Err(GenerateError::InvalidParameters(
            "complete graph needs at least 1 vertex".into(),
        ));
    }
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Ok(Multigraph::from_pairs(n, pairs).unwrap())
}

/// The complete bipartite graph K_{a,b}; side a is 0..a, side b follows.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Multigraph, GenerateError> {
    if a == 0 || b == 0 {
        return Err(GenerateError::InvalidParameters(
            "complete-bipartite needs both sides nonempty".into(),
        ));
    }
    let pairs = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Ok(Multigraph::from_pairs(a + b, pairs).unwrap())
}

/// The star K_{1,leaves}: center 0 joined to `leaves` leaves.
pub fn star(leaves: usize) -> Result<Multigraph, GenerateError> {
    if leaves == 0 {
        return Err(GenerateError::InvalidParameters(
            "star needs at least 1 leaf".into(),
        ));
    }
    Ok(Multigraph::from_pairs(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap())
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes.
pub fn petersen() -> Multigraph {
    let mut pairs = Vec::with_capacity(15);
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
        pairs.push((5 + i, 5 + (i + 2) % 5));
        pairs.push((i, 5 + i));
    }
    Multigraph::from_pairs(10, pairs).unwrap()
}

/// Erdos-Renyi G(n, p), each pair kept independently with probability `p`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Multigraph, GenerateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenerateError::InvalidParameters(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    Ok(Multigraph::from_pairs(n, pairs).unwrap())
}

/// A uniform-ish simple r-regular graph via the configuration model with
/// rejection; errors when n*r is odd, r >= n, or retries run out.
pub fn random_regular(n: usize, r: usize, seed: u64) -> Result<Multigraph, GenerateError> {
    if n == 0 || r == 0 {
        return Err(GenerateError::InvalidParameters(
            "random-regular needs n >= 1 and r >= 1".into(),
        ));
    }
    if n * r % 2 == 1 || r >= n {
        return Err(GenerateError::InvalidParameters(format!(
            "no simple {r}-regular graph on {n} vertices exists"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 2000;
    'attempt: for _ in 0..ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, r)).collect();
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::BTreeSet::new();
        let mut pairs = Vec::with_capacity(n * r / 2);
        for chunk in stubs.chunks(2) {
            let (u, v) = (chunk[0].min(chunk[1]), chunk[0].max(chunk[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            pairs.push((u, v));
        }
        return Ok(Multigraph::from_pairs(n, pairs).unwrap());
    }
    Err(GenerateError::RetriesExhausted {
        r,
        attempts: ATTEMPTS,
    })
}

/// A random multigraph: `m` records with uniform endpoints (loops allowed)
/// and multiplicities in 1..=max_mult; parallel draws merge.
pub fn random_multigraph(
    n: usize,
    m: usize,
    max_mult: usize,
    seed: u64,
) -> Result<Multigraph, GenerateError> {
    if n == 0 || max_mult == 0 {
        return Err(GenerateError::InvalidParameters(
            "random-multigraph needs n >= 1 and max-mult >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..m).map(|_| {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let mult = rng.random_range(1..=max_mult);
        EdgeRecord::new(u, v, mult)
    });
    let records: Vec<_> = records.collect();
    Ok(Multigraph::new(n, records).unwrap())
}
