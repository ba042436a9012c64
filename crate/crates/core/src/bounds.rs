//! Closed-form bounds on α(G[k]), finite-k capacity estimates, and a
//! checker for the pivot/chunk decomposition of independent sets that
//! underlies the polynomial growth bound α(G[k]) = O(k^{α(G)-1}).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config_space::{self, binomial, ConfigError, Configuration};
use crate::graph::{construct_named, Family, Graph, GraphError};
use crate::mis_solver::{self, Budget, SolveReport, SolverError};
use crate::quotient::{self, QuotientError, QuotientGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("base parameter must be at least 1")]
    InvalidBase,
    #[error("binomial({0}, {1}) exceeds 128 bits")]
    Overflow(u64, u64),
    #[error("configurations {0} and {1} are adjacent or equal, set is not independent")]
    NotIndependent(Configuration, Configuration),
    #[error("malformed chunk: {0}")]
    MalformedChunk(String),
    #[error("k_max must be at least 2")]
    KMaxTooSmall,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn stars_and_bars(parts: u64, k: u64) -> Result<u128, BoundsError> {
    if parts == 0 {
        return Err(BoundsError::InvalidBase);
    }
    binomial(k + parts - 1, parts - 1).ok_or(BoundsError::Overflow(k + parts - 1, parts - 1))
}

/// `C(k + α - 1, α - 1)`: configurations supported on one maximum
/// independent set of the base graph are pairwise non-adjacent.
pub fn lower_bound(alpha_base: u64, k: u64) -> Result<u128, BoundsError> {
    stars_and_bars(alpha_base, k)
}

/// `C(k + θ - 1, θ - 1)`: two configurations with equal pebble totals on
/// every clique of a cover are adjacent (or equal).
pub fn upper_bound_theta(theta_base: u64, k: u64) -> Result<u128, BoundsError> {
    stars_and_bars(theta_base, k)
}

/// `⌊5(k+2)(k+1) / (2(k+5))⌋`, the 5-cycle specific bound.
pub fn c5_upper_bound(k: u64) -> u64 {
    let k = k as u128;
    (5 * (k + 2) * (k + 1) / (2 * (k + 5))) as u64
}

/// True when `g` is the 5-cycle with the canonical labeling.
pub fn is_c5(g: &Graph) -> bool {
    construct_named(Family::Cycle, 5).is_ok_and(|c5| &c5 == g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactAlpha {
    pub alpha: u64,
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub k: u32,
    pub alpha_base: u64,
    pub theta_base: u64,
    pub lower: u128,
    pub upper_theta: u128,
    pub upper_c5: Option<u64>,
    pub alpha_exact: Option<ExactAlpha>,
}

impl BoundsReport {
    pub const CSV_HEADER: &'static str = "k,lower,alpha,optimal,upper_c5,upper_theta,ratio";

    /// `ln α / ln k`, only for optimal α and `k >= 2`.
    pub fn ratio(&self) -> Option<f64> {
        match self.alpha_exact {
            Some(ExactAlpha {
                alpha,
                optimal: true,
            }) if self.k >= 2 => Some((alpha as f64).ln() / (self.k as f64).ln()),
            _ => None,
        }
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.k,
            self.lower,
            opt(self.alpha_exact.map(|a| a.alpha.to_string())),
            opt(self.alpha_exact.map(|a| a.optimal.to_string())),
            opt(self.upper_c5.map(|u| u.to_string())),
            self.upper_theta,
            opt(self.ratio().map(|r| format!("{r:.6}"))),
        )
    }

    /// Checks the ordering invariants between the bounds and an optimal α.
    pub fn is_consistent(&self) -> bool {
        let mut ok = self.lower <= self.upper_theta;
        if let Some(ExactAlpha {
            alpha,
            optimal: true,
        }) = self.alpha_exact
        {
            ok &= self.lower <= alpha as u128 && alpha as u128 <= self.upper_theta;
            if let Some(c5) = self.upper_c5 {
                ok &= alpha <= c5;
            }
        }
        ok
    }
}

/// Base parameters α(G) and θ(G).
pub fn base_parameters(g: &Graph) -> Result<(u64, u64), BoundsError> {
    Ok((g.alpha_exact()? as u64, g.clique_cover_number()? as u64))
}

/// Largest number of base automorphisms handed to the symmetric solver.
pub const AUTOMORPHISM_LIMIT: usize = 5040;

/// Builds G[k] and solves it exactly, using the symmetry inherited from the
/// base graph.
pub fn solve_power(
    g: &Graph,
    k: u32,
    budget: &Budget,
) -> Result<(QuotientGraph, SolveReport), BoundsError> {
    let q = quotient::build_quotient(g, k)?;
    let auts = q.induced_automorphisms(AUTOMORPHISM_LIMIT);
    let r = mis_solver::solve_exact_symmetric(q.graph(), &auts, budget)?;
    Ok((q, r))
}

/// Bounds for one `k`. When `solve` is given, G[k] is built and solved
/// within that budget.
pub fn bounds_report(
    g: &Graph,
    k: u32,
    base: (u64, u64),
    solve: Option<&Budget>,
) -> Result<BoundsReport, BoundsError> {
    let (alpha_base, theta_base) = base;
    let alpha_exact = match solve {
        Some(budget) => {
            let (_, r) = solve_power(g, k, budget)?;
            Some(ExactAlpha {
                alpha: r.alpha as u64,
                optimal: r.optimal,
            })
        }
        None => None,
    };
    Ok(BoundsReport {
        k,
        alpha_base,
        theta_base,
        lower: lower_bound(alpha_base, k as u64)?,
        upper_theta: upper_bound_theta(theta_base, k as u64)?,
        upper_c5: is_c5(g).then(|| c5_upper_bound(k as u64)),
        alpha_exact,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacitySample {
    pub k: u32,
    pub alpha: u64,
    /// `ln α / ln k`
    pub ratio: f64,
    /// `α · (α(G) - 1)! / k^{α(G) - 1}`, exploratory only.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub samples: Vec<CapacitySample>,
    /// α(G) - 1
    pub target: u64,
    /// k values without an optimal solve (budget or vertex cap).
    pub skipped: Vec<u32>,
}

impl CapacityEstimate {
    pub fn sample(&self, k: u32) -> Option<&CapacitySample> {
        self.samples.iter().find(|s| s.k == k)
    }
}

/// Solves G[k] for `k` in `2..=k_max` and records `ln α(G[k]) / ln k` for
/// every optimal solve. Non-optimal or oversized `k` are listed in `skipped`.
pub fn estimate_capacity(
    g: &Graph,
    k_max: u32,
    budget: &Budget,
) -> Result<CapacityEstimate, BoundsError> {
    if k_max < 2 {
        return Err(BoundsError::KMaxTooSmall);
    }
    let alpha_base = g.alpha_exact()? as u64;
    let exponent = alpha_base as i32 - 1;
    let factorial: f64 = (1..alpha_base).map(|i| i as f64).product();
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for k in 2..=k_max {
        let r = match solve_power(g, k, budget) {
            Ok((_, r)) => r,
            Err(BoundsError::Quotient(QuotientError::VertexCapExceeded { .. })) => {
                skipped.push(k);
                continue;
            }
            Err(e) => return Err(e),
        };
        if !r.optimal {
            skipped.push(k);
            continue;
        }
        let alpha = r.alpha as u64;
        samples.push(CapacitySample {
            k,
            alpha,
            ratio: (alpha as f64).ln() / (k as f64).ln(),
            normalized: alpha as f64 * factorial / (k as f64).powi(exponent),
        });
    }
    Ok(CapacityEstimate {
        samples,
        target: alpha_base - 1,
        skipped,
    })
}

/// Cell of the pivot decomposition: pivot vertex `j` (heaviest, lowest id on
/// ties), total weight `m` on the closed neighbourhood of `j`, and for every
/// vertex the index `b_i` of the interval `[b_i k/(2n²), (b_i+1) k/(2n²))`
/// holding its weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChunkKey {
    pub j: usize,
    pub m: u32,
    pub b: Vec<u32>,
}

pub fn chunk_key(g: &Graph, f: &Configuration) -> ChunkKey {
    let w = f.weights();
    let n = w.len() as u64;
    let k = f.k() as u64;
    let top = *w.iter().max().expect("n >= 1");
    let j = w.iter().position(|&x| x == top).expect("max exists");
    let m = g.closed_neighborhood(j).iter().map(|v| w[v]).sum();
    // b·k <= 2n²·f_i < (b+1)·k, exactly in integers
    let b = w
        .iter()
        .map(|&x| (2 * n * n * x as u64).checked_div(k).unwrap_or(0) as u32)
        .collect();
    ChunkKey { j, m, b }
}

/// The largest number of distinct chunk keys possible: `n(k+1)(2n²+1)`.
pub fn max_chunk_count(n: usize, k: u32) -> u128 {
    let n = n as u128;
    n * (k as u128 + 1) * (2 * n * n + 1)
}

/// Verifies that `h` is a set of pairwise distinct, pairwise non-adjacent
/// weight-`k` configurations.
pub fn verify_independent(g: &Graph, k: u32, h: &[Configuration]) -> Result<(), BoundsError> {
    for f in h {
        if f.k() != k {
            return Err(ConfigError::WeightMismatch(f.k(), k).into());
        }
    }
    for (i, f) in h.iter().enumerate() {
        for t in &h[i + 1..] {
            if f == t || config_space::adjacent(g, f, t)? {
                return Err(BoundsError::NotIndependent(f.clone(), t.clone()));
            }
        }
    }
    Ok(())
}

pub fn chunk_partition(
    g: &Graph,
    k: u32,
    h: &[Configuration],
) -> Result<BTreeMap<ChunkKey, Vec<Configuration>>, BoundsError> {
    verify_independent(g, k, h)?;
    let mut chunks: BTreeMap<ChunkKey, Vec<Configuration>> = BTreeMap::new();
    for f in h {
        chunks.entry(chunk_key(g, f)).or_default().push(f.clone());
    }
    Ok(chunks)
}

/// Drops the weights on the closed neighbourhood of the pivot and checks
/// that the remaining weight-`(k - m)` configurations are pairwise distinct
/// and pairwise non-adjacent in the power of the remaining induced subgraph.
pub fn check_chunk_independence(
    g: &Graph,
    k: u32,
    key: &ChunkKey,
    chunk: &[Configuration],
) -> Result<bool, BoundsError> {
    for f in chunk {
        if f.k() != k {
            return Err(ConfigError::WeightMismatch(f.k(), k).into());
        }
        if f.n() != g.n() {
            return Err(ConfigError::LengthMismatch {
                got: f.n(),
                expected: g.n(),
            }
            .into());
        }
        let own = chunk_key(g, f);
        if &own != key {
            return Err(BoundsError::MalformedChunk(format!(
                "{f} has key (j={}, m={}), chunk key is (j={}, m={})",
                own.j, own.m, key.j, key.m
            )));
        }
    }
    if chunk.len() <= 1 {
        return Ok(true);
    }
    let mut keep = crate::bitset::Bitset::full(g.n());
    keep.difference_with(&g.closed_neighborhood(key.j));
    let Some((sub, old_ids)) = g.induced(&keep) else {
        // every projection is the empty configuration
        return Ok(false);
    };
    let projected: Vec<Configuration> = chunk
        .iter()
        .map(|f| Configuration::new(old_ids.iter().map(|&v| f.weights()[v]).collect()))
        .collect::<Result<_, _>>()?;
    for (i, a) in projected.iter().enumerate() {
        for b in &projected[i + 1..] {
            if a == b || config_space::adjacent(&sub, a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChunkAudit {
    pub k: u32,
    pub set_size: usize,
    pub chunks: usize,
    pub covered: usize,
    pub max_chunks: u128,
    pub failing_chunks: Vec<ChunkKey>,
}

impl ChunkAudit {
    pub fn ok(&self) -> bool {
        self.covered == self.set_size
            && self.failing_chunks.is_empty()
            && self.chunks as u128 <= self.max_chunks
    }
}

/// Partitions `h` and checks every chunk.
pub fn chunk_audit(g: &Graph, k: u32, h: &[Configuration]) -> Result<ChunkAudit, BoundsError> {
    let chunks = chunk_partition(g, k, h)?;
    let mut failing = Vec::new();
    for (key, chunk) in &chunks {
        if !check_chunk_independence(g, k, key, chunk)? {
            failing.push(key.clone());
        }
    }
    Ok(ChunkAudit {
        k,
        set_size: h.len(),
        chunks: chunks.len(),
        covered: chunks.values().map(Vec::len).sum(),
        max_chunks: max_chunk_count(g.n(), k),
        failing_chunks: failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn c5() -> Graph {
        construct_named(Family::Cycle, 5).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(lower_bound(2, 9).unwrap(), 10);
        assert_eq!(lower_bound(3, 4).unwrap(), 15);
        assert_eq!(upper_bound_theta(3, 3).unwrap(), 10);
        assert_eq!(upper_bound_theta(3, 9).unwrap(), 55);
        for k in 0..20 {
            assert_eq!(lower_bound(1, k).unwrap(), 1);
            assert_eq!(upper_bound_theta(1, k).unwrap(), 1);
        }
        assert_eq!(lower_bound(0, 3), Err(BoundsError::InvalidBase));
        assert!(matches!(
            lower_bound(200, 200),
            Err(BoundsError::Overflow(..))
        ));
    }

    #[test]
    fn c5_bound_values() {
        assert_eq!(c5_upper_bound(0), 1);
        assert_eq!(c5_upper_bound(1), 2);
        assert_eq!(c5_upper_bound(2), 4);
        assert_eq!(c5_upper_bound(9), 19);
        for k in 0..=10_000u64 {
            let slack = c5_upper_bound(k) as i64 - (k as i64 + 1);
            assert!(slack >= 0);
            assert_eq!(slack == 0, k <= 1, "k={k}");
        }
        for k in 1..=9u64 {
            assert!(c5_upper_bound(k) < upper_bound_theta(3, k).unwrap() as u64);
        }
        assert_eq!(c5_upper_bound(1_000_000), 2_499_995);
    }

    #[test]
    fn report_and_csv() {
        let g = c5();
        let r = bounds_report(&g, 3, (2, 3), Some(&Budget::default())).unwrap();
        assert_eq!(r.lower, 4);
        assert_eq!(r.upper_theta, 10);
        assert_eq!(r.upper_c5, Some(c5_upper_bound(3)));
        assert_eq!(
            r.alpha_exact,
            Some(ExactAlpha {
                alpha: 4,
                optimal: true
            })
        );
        assert!(r.is_consistent());
        assert!(r.to_csv_row().starts_with("3,4,4,true,6,10,1.26"));
        let p = construct_named(Family::Path, 3).unwrap();
        let r = bounds_report(&p, 2, (2, 2), None).unwrap();
        assert_eq!(r.upper_c5, None);
        assert_eq!(r.to_csv_row(), "2,3,,,,3,");
    }

    #[test]
    fn capacity_small_graphs() {
        let e2 = Graph::empty(2).unwrap();
        let est = estimate_capacity(&e2, 6, &Budget::default()).unwrap();
        assert_eq!(est.target, 1);
        for s in &est.samples {
            assert_eq!(s.alpha, s.k as u64 + 1);
        }
        let k3 = construct_named(Family::Complete, 3).unwrap();
        let est = estimate_capacity(&k3, 5, &Budget::default()).unwrap();
        assert!(est.samples.iter().all(|s| s.alpha == 1 && s.ratio == 0.0));
        assert_eq!(
            estimate_capacity(&k3, 1, &Budget::default()),
            Err(BoundsError::KMaxTooSmall)
        );
    }

    #[test]
    fn chunk_key_singleton() {
        let g = c5();
        let key = chunk_key(&g, &cfg("4,0,0,0,0"));
        assert_eq!(
            key,
            ChunkKey {
                j: 0,
                m: 4,
                b: vec![50, 0, 0, 0, 0]
            }
        );
        let key = chunk_key(&g, &cfg("0,0,0,0,0"));
        assert_eq!(
            key,
            ChunkKey {
                j: 0,
                m: 0,
                b: vec![0; 5]
            }
        );
        // tie on max weight: lowest id wins
        assert_eq!(chunk_key(&g, &cfg("0,2,0,2,0")).j, 1);
    }

    #[test]
    fn partition_of_supported_set() {
        let g = c5();
        // configurations supported on {v0, v2} with k = 4
        let h: Vec<Configuration> = (0..=4)
            .map(|a| Configuration::new(vec![a, 0, 4 - a, 0, 0]).unwrap())
            .collect();
        let chunks = chunk_partition(&g, 4, &h).unwrap();
        assert_eq!(chunks.values().map(Vec::len).sum::<usize>(), 5);
        assert!(chunks.keys().all(|k| k.j == 0 || k.j == 2));
        assert!(chunks.values().all(|c| !c.is_empty()));
        for (key, chunk) in &chunks {
            assert!(check_chunk_independence(&g, 4, key, chunk).unwrap());
        }
        assert!(chunks.len() as u128 <= max_chunk_count(5, 4));
    }

    #[test]
    fn partition_rejects_dependent_sets() {
        let g = c5();
        let h = vec![cfg("1,0,0,0,0"), cfg("0,1,0,0,0")];
        assert!(matches!(
            chunk_partition(&g, 1, &h),
            Err(BoundsError::NotIndependent(..))
        ));
    }

    #[test]
    fn corrupted_chunk_is_rejected() {
        let g = c5();
        let a = cfg("3,0,1,0,0");
        let b = cfg("3,1,0,0,0");
        let key = chunk_key(&g, &a);
        assert_ne!(key.m, chunk_key(&g, &b).m);
        assert!(matches!(
            check_chunk_independence(&g, 4, &key, &[a, b]),
            Err(BoundsError::MalformedChunk(_))
        ));
    }

    #[test]
    fn small_chunks_pass() {
        let g = c5();
        let f = cfg("2,1,0,0,1");
        let key = chunk_key(&g, &f);
        assert!(check_chunk_independence(&g, 4, &key, &[f]).unwrap());
        assert!(check_chunk_independence(&g, 4, &key, &[]).unwrap());
    }
}
