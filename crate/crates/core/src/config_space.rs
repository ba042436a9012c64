//! Pebble configurations: weak compositions of `k` into `n` parts, their
//! canonical enumeration and ranking, and the one-step transport relation
//! that defines adjacency in the symmetric power.
//!
//! Canonical order is lexicographically *decreasing* on the weight vector:
//! `(k,0,…,0)` has rank 0 and `(0,…,0,k)` has the last rank.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::Graph;
use crate::transport;

/// Upper bound on how many configurations [`enumerate_configurations`] will
/// materialize.
pub const DEFAULT_ENUMERATION_CAP: u64 = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("{count} configurations exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("configuration count for n={n}, k={k} overflows")]
    Overflow { n: usize, k: u32 },
    #[error("rank {rank} out of range (count {count})")]
    RankOutOfRange { rank: u64, count: u128 },
    #[error("weight mismatch: {0} vs {1}")]
    WeightMismatch(u32, u32),
    #[error("length mismatch: configuration has {got} entries, graph has {expected} vertices")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid configuration `{0}`")]
    Parse(String),
    #[error("configuration needs at least one vertex")]
    Empty,
}

/// Binomial coefficient, `None` on 128-bit overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k as u128 {
        let m = n as u128 - k as u128 + i;
        // r * m / i is exact; divide out gcd(r, i) first to keep r small.
        let g = gcd(r, i);
        r = (r / g).checked_mul(m / (i / g))?;
    }
    Some(r)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of weight-`k` configurations on `n` vertices.
pub fn configuration_count(n: usize, k: u32) -> Option<u128> {
    if n == 0 {
        return Some(0);
    }
    binomial(k as u64 + n as u64 - 1, n as u64 - 1)
}

/// A vertex of the symmetric power: pebble counts per base vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    weights: Vec<u32>,
    k: u32,
}

impl Configuration {
    pub fn new(weights: Vec<u32>) -> Result<Self, ConfigError> {
        if weights.is_empty() {
            return Err(ConfigError::Empty);
        }
        let k = weights
            .iter()
            .try_fold(0u32, |acc, &w| acc.checked_add(w))
            .ok_or_else(|| ConfigError::Parse(format!("{weights:?}")))?;
        Ok(Configuration { weights, k })
    }

    /// All `k` pebbles on vertex `v` of an `n`-vertex graph.
    pub fn point(n: usize, v: usize, k: u32) -> Self {
        let mut weights = vec![0; n];
        weights[v] = k;
        Configuration { weights, k }
    }

    #[inline]
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Position in the canonical order.
    pub fn rank(&self) -> u64 {
        rank(self)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Configuration {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let weights = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ConfigError::Parse(s.to_string()))?;
        Configuration::new(weights)
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn enumerate_configurations(n: usize, k: u32) -> Result<Vec<Configuration>, ConfigError> {
    enumerate_configurations_capped(n, k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_configurations_capped(
    n: usize,
    k: u32,
    cap: u64,
) -> Result<Vec<Configuration>, ConfigError> {
    if n == 0 {
        return Err(ConfigError::Empty);
    }
    let count = configuration_count(n, k).ok_or(ConfigError::Overflow { n, k })?;
    if count > cap as u128 {
        return Err(ConfigError::CapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0u32; n];
    fill(&mut cur, 0, k, &mut out);
    debug_assert_eq!(out.len() as u128, count);
    Ok(out)
}

fn fill(cur: &mut [u32], pos: usize, rest: u32, out: &mut Vec<Configuration>) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(Configuration {
            weights: cur.to_vec(),
            k: cur.iter().sum(),
        });
        return;
    }
    for w in (0..=rest).rev() {
        cur[pos] = w;
        fill(cur, pos + 1, rest - w, out);
    }
    cur[pos] = 0;
}

/// Rank in the canonical order via the combinatorial number system.
///
/// At position `i` with `r` pebbles left and `p = n - i - 1` later parts,
/// the configurations placed earlier are those with more than `w_i` pebbles
/// at `i`; by the hockey-stick identity there are `C(r - w_i - 1 + p, p)`.
pub fn rank(c: &Configuration) -> u64 {
    let n = c.n();
    let mut rest = c.k as u64;
    let mut r: u128 = 0;
    for (i, &w) in c.weights.iter().enumerate().take(n - 1) {
        let w = w as u64;
        let p = (n - i - 1) as u64;
        if rest > w {
            r += binomial(rest - w - 1 + p, p).expect("rank overflow");
        }
        rest -= w;
    }
    r as u64
}

pub fn unrank(n: usize, k: u32, rank: u64) -> Result<Configuration, ConfigError> {
    if n == 0 {
        return Err(ConfigError::Empty);
    }
    let count = configuration_count(n, k).ok_or(ConfigError::Overflow { n, k })?;
    if rank as u128 >= count {
        return Err(ConfigError::RankOutOfRange { rank, count });
    }
    let mut weights = vec![0u32; n];
    let mut rest = k as u64;
    let mut left = rank as u128;
    for (i, slot) in weights.iter_mut().enumerate().take(n - 1) {
        let p = (n - i - 1) as u64;
        // Blocks in decreasing w; the block for value w has C(rest - w + p - 1, p - 1) members.
        let mut w = rest;
        loop {
            let block = binomial(rest - w + p - 1, p - 1).expect("unrank overflow");
            if left < block {
                break;
            }
            left -= block;
            w -= 1;
        }
        *slot = w as u32;
        rest -= w;
    }
    weights[n - 1] = rest as u32;
    Ok(Configuration { weights, k })
}

/// `moves[u][v]` pebbles go from `u` to `v`; the diagonal counts pebbles
/// that stay put.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub moves: Vec<Vec<u32>>,
}

impl TransportPlan {
    /// Independent check of the plan invariants: support on loops or edges,
    /// row sums `from`, column sums `to`.
    pub fn is_valid(&self, g: &Graph, from: &Configuration, to: &Configuration) -> bool {
        let n = g.n();
        if self.moves.len() != n || from.n() != n || to.n() != n {
            return false;
        }
        if self.moves.iter().any(|row| row.len() != n) {
            return false;
        }
        for u in 0..n {
            for v in 0..n {
                if self.moves[u][v] > 0 && u != v && !g.has_edge(u, v) {
                    return false;
                }
            }
        }
        let rows_ok = (0..n).all(|u| {
            self.moves[u].iter().map(|&x| x as u64).sum::<u64>() == from.weights[u] as u64
        });
        let cols_ok = (0..n).all(|v| {
            self.moves.iter().map(|row| row[v] as u64).sum::<u64>() == to.weights[v] as u64
        });
        rows_ok && cols_ok
    }
}

fn check_pair(g: &Graph, f: &Configuration, t: &Configuration) -> Result<(), ConfigError> {
    for c in [f, t] {
        if c.n() != g.n() {
            return Err(ConfigError::LengthMismatch {
                got: c.n(),
                expected: g.n(),
            });
        }
    }
    if f.k != t.k {
        return Err(ConfigError::WeightMismatch(f.k, t.k));
    }
    Ok(())
}

/// A one-step pebble transport from `f` to `t`, if any: every pebble either
/// stays or crosses exactly one edge.
pub fn find_transport(
    g: &Graph,
    f: &Configuration,
    t: &Configuration,
) -> Result<Option<TransportPlan>, ConfigError> {
    check_pair(g, f, t)?;
    Ok(
        transport::solve(&f.weights, &t.weights, |u, v| u == v || g.has_edge(u, v))
            .map(|moves| TransportPlan { moves }),
    )
}

/// Adjacency in the symmetric power. Equal configurations are not adjacent.
pub fn adjacent(g: &Graph, f: &Configuration, t: &Configuration) -> Result<bool, ConfigError> {
    check_pair(g, f, t)?;
    if f == t {
        return Ok(false);
    }
    Ok(find_transport(g, f, t)?.is_some())
}
