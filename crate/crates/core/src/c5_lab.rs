//! Mechanical checks of the edge-configuration counting argument that bounds
//! α(C5[k]) by ⌊5(k+2)(k+1) / (2(k+5))⌋.
//!
//! Labeling: vertex `v_j` (1-indexed) is vertex `j - 1`; edge `e_j` joins
//! `v_j` and `v_{j+1}` (with `e_5` joining `v_5` and `v_1`) and is stored at
//! index `j - 1`, so edge `i` joins vertices `i` and `(i + 1) mod 5`.
//! The sets `S_j` are addressed 1-indexed, as `j ∈ 1..=5`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::Bitset;
use crate::bounds::{c5_upper_bound, BoundsError};
use crate::config_space::{self, binomial, ConfigError, Configuration};
use crate::graph::{construct_named, Family, Graph};
use crate::transport;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum C5Error {
    #[error("S_j index {0} outside 1..=5")]
    BadIndex(usize),
    #[error("expected a configuration on 5 vertices, got {0}")]
    NotC5(usize),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

pub fn c5() -> Graph {
    construct_named(Family::Cycle, 5).expect("C5 is constructible")
}

/// Endpoints of edge `e` (0-indexed).
#[inline]
pub fn edge_endpoints(e: usize) -> (usize, usize) {
    (e, (e + 1) % 5)
}

/// Pebbles on the five edges of C5.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeConfiguration(Configuration);

impl EdgeConfiguration {
    pub fn new(weights: [u32; 5]) -> Self {
        EdgeConfiguration(Configuration::new(weights.to_vec()).expect("five entries"))
    }

    pub fn weights(&self) -> &[u32] {
        self.0.weights()
    }

    pub fn k(&self) -> u32 {
        self.0.k()
    }

    pub fn rank(&self) -> u64 {
        self.0.rank()
    }
}

impl fmt::Display for EdgeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for EdgeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ψ({})", self.0)
    }
}

/// All `C(k+4, 4)` edge configurations in canonical order.
pub fn enumerate_edge_configs(k: u32) -> Result<Vec<EdgeConfiguration>, ConfigError> {
    Ok(config_space::enumerate_configurations(5, k)?
        .into_iter()
        .map(EdgeConfiguration)
        .collect())
}

/// The two edges that `S_j` leaves empty, 0-indexed.
fn s_zero_edges(j: usize) -> (usize, usize) {
    let e = j - 1;
    ((e + 4) % 5, (e + 1) % 5)
}

/// `S_j`: edge configurations with no pebbles on `e_{j-1}` and `e_{j+1}`,
/// in canonical order. Has `C(k+2, 2)` members.
pub fn s_set_members(j: usize, k: u32) -> Result<Vec<EdgeConfiguration>, C5Error> {
    if !(1..=5).contains(&j) {
        return Err(C5Error::BadIndex(j));
    }
    let (z1, z2) = s_zero_edges(j);
    let free: Vec<usize> = (0..5).filter(|&e| e != z1 && e != z2).collect();
    Ok(config_space::enumerate_configurations(3, k)?
        .into_iter()
        .map(|c| {
            let mut w = [0u32; 5];
            for (slot, &x) in free.iter().zip(c.weights()) {
                w[*slot] = x;
            }
            EdgeConfiguration::new(w)
        })
        .collect())
}

pub fn in_s_set(j: usize, psi: &EdgeConfiguration) -> bool {
    let (z1, z2) = s_zero_edges(j);
    psi.weights()[z1] == 0 && psi.weights()[z2] == 0
}

fn check_c5(f: &Configuration) -> Result<(), C5Error> {
    if f.n() != 5 {
        return Err(C5Error::NotC5(f.n()));
    }
    Ok(())
}

/// Whether `psi` arises from `f` by moving every pebble onto an edge incident
/// to its vertex. No pebble may stay put.
pub fn ve_adjacent(f: &Configuration, psi: &EdgeConfiguration) -> Result<bool, C5Error> {
    check_c5(f)?;
    if f.k() != psi.k() {
        return Err(ConfigError::WeightMismatch(f.k(), psi.k()).into());
    }
    Ok(transport::solve(f.weights(), psi.weights(), |v, e| {
        let (a, b) = edge_endpoints(e);
        v == a || v == b
    })
    .is_some())
}

/// `|{ψ ∈ S_j : ψ adjacent to f}|`; equals `f(v_{j+3 mod 5}) + 1`.
pub fn s_adjacent_count(f: &Configuration, j: usize) -> Result<u64, C5Error> {
    let mut count = 0;
    for psi in s_set_members(j, f.k())? {
        if ve_adjacent(f, &psi)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Edge configurations adjacent to `f`, each counted once per `S_j`
/// containing it; equals `k + 5`.
pub fn weighted_adjacent_count(f: &Configuration) -> Result<u64, C5Error> {
    check_c5(f)?;
    (1..=5).map(|j| s_adjacent_count(f, j)).sum()
}

/// Outcome of one audit at one `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditResult {
    pub k: u32,
    pub check: String,
    pub ok: bool,
    pub counterexamples: Vec<String>,
}

impl AuditResult {
    fn new(k: u32, check: &str, mut counterexamples: Vec<String>) -> Self {
        counterexamples.sort();
        AuditResult {
            k,
            check: check.to_string(),
            ok: counterexamples.is_empty(),
            counterexamples,
        }
    }
}

/// Every weight-`k` configuration has weighted count `k + 5`, and the `j`-th
/// summand is `f(v_{j+3 mod 5}) + 1`.
pub fn counting_audit(k: u32) -> Result<AuditResult, C5Error> {
    let mut bad = Vec::new();
    for f in config_space::enumerate_configurations(5, k)? {
        let mut total = 0;
        for j in 1..=5 {
            let c = s_adjacent_count(&f, j)?;
            // v_{j+3 mod 5} in 1-indexed terms is vertex (j + 2) mod 5
            let expected = f.weights()[(j + 2) % 5] as u64 + 1;
            if c != expected {
                bad.push(format!("f={f} j={j}: {c} != {expected}"));
            }
            total += c;
        }
        if total != k as u64 + 5 {
            bad.push(format!("f={f}: total {total} != {}", k + 5));
        }
    }
    Ok(AuditResult::new(k, "counting", bad))
}

/// `|S_j| = C(k+2, 2)` for each `j`, checked both on the generated members
/// and by filtering the full edge-configuration enumeration.
pub fn cardinality_audit(k: u32) -> Result<AuditResult, C5Error> {
    let expected = binomial(k as u64 + 2, 2).expect("small") as usize;
    let all = enumerate_edge_configs(k)?;
    let mut bad = Vec::new();
    let mut total = 0;
    for j in 1..=5 {
        let s = s_set_members(j, k)?;
        let filtered: Vec<&EdgeConfiguration> = all.iter().filter(|p| in_s_set(j, p)).collect();
        if s.len() != expected || filtered.len() != expected {
            bad.push(format!(
                "|S_{j}|: generated {}, filtered {}, expected {expected}",
                s.len(),
                filtered.len()
            ));
        } else if s.iter().zip(&filtered).any(|(a, b)| a != *b) {
            bad.push(format!(
                "S_{j}: generated members differ from filtered members"
            ));
        }
        total += filtered.len();
    }
    if total != 5 * expected {
        bad.push(format!("total {total} != {}", 5 * expected));
    }
    Ok(AuditResult::new(k, "cardinality", bad))
}

/// For each weight-`k` configuration, the set of ve-adjacent edge
/// configurations as a bitset over edge-configuration ranks.
fn edge_neighbourhoods(configs: &[Configuration], k: u32) -> Result<Vec<Bitset>, C5Error> {
    let psis = enumerate_edge_configs(k)?;
    configs
        .iter()
        .map(|f| {
            let mut s = Bitset::new(psis.len());
            for (r, psi) in psis.iter().enumerate() {
                if ve_adjacent(f, psi)? {
                    s.insert(r);
                }
            }
            Ok(s)
        })
        .collect()
}

pub fn midpoint_characterization_audit(k: u32) -> Result<AuditResult, C5Error> {
    let g = c5();
    midpoint_audit_with(k, |f, t| {
        config_space::adjacent(&g, f, t).expect("same n and k")
    })
}

/// For every ordered pair `f != g`: `adjacency(f, g)` holds iff some edge
/// configuration is ve-adjacent to both. `adjacency` is a parameter so a
/// deliberately faulty relation can be fed in to exercise the detector.
pub fn midpoint_audit_with(
    k: u32,
    adjacency: impl Fn(&Configuration, &Configuration) -> bool,
) -> Result<AuditResult, C5Error> {
    let configs = config_space::enumerate_configurations(5, k)?;
    let hoods = edge_neighbourhoods(&configs, k)?;
    let mut bad = Vec::new();
    for (i, f) in configs.iter().enumerate() {
        for (j, t) in configs.iter().enumerate() {
            if i == j {
                continue;
            }
            let adj = adjacency(f, t);
            let shared = hoods[i].intersects(&hoods[j]);
            if adj != shared {
                bad.push(format!(
                    "f={f} g={t}: adjacent={adj} shared_midpoint={shared}"
                ));
            }
        }
    }
    Ok(AuditResult::new(k, "midpoint", bad))
}

/// For an independent set `a` of C5[k]: no edge configuration is
/// ve-adjacent to two distinct members.
pub fn disjointness_audit(a: &[Configuration]) -> Result<AuditResult, C5Error> {
    let g = c5();
    let Some(first) = a.first() else {
        return Ok(AuditResult::new(0, "disjointness", Vec::new()));
    };
    let k = first.k();
    for f in a {
        check_c5(f)?;
    }
    crate::bounds::verify_independent(&g, k, a)?;
    let hoods = edge_neighbourhoods(a, k)?;
    let psis = enumerate_edge_configs(k)?;
    let mut owner: Vec<Option<usize>> = vec![None; psis.len()];
    let mut bad = Vec::new();
    for (i, hood) in hoods.iter().enumerate() {
        for r in hood.iter() {
            match owner[r] {
                Some(o) => bad.push(format!("{} shared by {} and {}", psis[r], a[o], a[i])),
                None => owner[r] = Some(i),
            }
        }
    }
    Ok(AuditResult::new(k, "disjointness", bad))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop1Audit {
    pub k: u32,
    /// The closed form `⌊5(k+2)(k+1) / (2(k+5))⌋`.
    pub bound: u64,
    /// `⌊5·C(k+2,2) / (k+5)⌋`, total `S` weight over per-configuration weight.
    pub recomputed: u64,
    /// `α ≤ recomputed`, when an optimal α was supplied.
    pub alpha_ok: Option<bool>,
}

impl Prop1Audit {
    pub fn ok(&self) -> bool {
        self.bound == self.recomputed && self.alpha_ok != Some(false)
    }
}

pub fn prop1_audit(k: u32, alpha: Option<u64>) -> Prop1Audit {
    let s_total = 5 * binomial(k as u64 + 2, 2).expect("k fits");
    let recomputed = (s_total / (k as u128 + 5)) as u64;
    Prop1Audit {
        k,
        bound: c5_upper_bound(k as u64),
        recomputed,
        alpha_ok: alpha.map(|a| a <= recomputed),
    }
}
