//! Explicit construction of the symmetric power `G[k]`, and an independent
//! reference construction as the orbit graph of the strong power `G^⊠k`
//! under coordinate permutations.
//!
//! Both constructions index vertices by configuration rank, so agreement is
//! checked by comparing adjacency bitsets directly.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::Bitset;
use crate::config_space::{self, ConfigError, Configuration};
use crate::graph::Graph;
use crate::mis_solver;

pub const DEFAULT_VERTEX_CAP: u64 = 100_000;
pub const DEFAULT_TUPLE_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("G[{k}] has {count} vertices, above the cap of {cap}")]
    VertexCapExceeded { k: u32, count: u128, cap: u64 },
    #[error("strong power has {count} tuples, above the cap of {cap}")]
    TupleCapExceeded { count: u128, cap: u64 },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientGraph {
    base: Graph,
    k: u32,
    configurations: Vec<Configuration>,
    graph: Graph,
}

impl QuotientGraph {
    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.configurations.len()
    }

    /// Configurations in rank order.
    pub fn configurations(&self) -> &[Configuration] {
        &self.configurations
    }

    pub fn configuration(&self, rank: usize) -> &Configuration {
        &self.configurations[rank]
    }

    /// `G[k]` as a plain graph on ranks.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn adjacency(&self) -> &[Bitset] {
        self.graph.adjacency()
    }

    pub fn to_edge_list(&self) -> String {
        self.graph.to_edge_list()
    }

    /// Automorphisms of the base graph (at most `limit`) acting on
    /// configurations by moving pebbles along the vertex permutation. Each
    /// returned permutation is on ranks and preserves `G[k]`.
    pub fn induced_automorphisms(&self, limit: usize) -> Vec<Vec<usize>> {
        self.base
            .automorphisms(limit)
            .iter()
            .map(|perm| {
                self.configurations
                    .iter()
                    .map(|c| {
                        let mut w = vec![0; perm.len()];
                        for (v, &x) in c.weights().iter().enumerate() {
                            w[perm[v]] = x;
                        }
                        Configuration::new(w).expect("nonempty weights").rank() as usize
                    })
                    .collect()
            })
            .collect()
    }

    /// `count` random maximal independent sets of `G[k]` as configurations,
    /// reproducible from `seed`.
    pub fn random_maximal_sets(&self, count: usize, seed: u64) -> Vec<Vec<Configuration>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                mis_solver::random_maximal_independent_set(&self.graph, &mut rng)
                    .members
                    .iter()
                    .map(|&r| self.configurations[r].clone())
                    .collect()
            })
            .collect()
    }

    /// Rank → configuration string mapping that accompanies the edge list.
    pub fn sidecar_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Sidecar<'a> {
            base_n: usize,
            k: u32,
            vertex_count: usize,
            configurations: BTreeMap<usize, &'a Configuration>,
        }
        serde_json::to_value(Sidecar {
            base_n: self.base.n(),
            k: self.k,
            vertex_count: self.vertex_count(),
            configurations: self.configurations.iter().enumerate().collect(),
        })
        .expect("sidecar serializes")
    }
}

pub fn build_quotient(g: &Graph, k: u32) -> Result<QuotientGraph, QuotientError> {
    build_quotient_capped(g, k, DEFAULT_VERTEX_CAP)
}

/// Pairwise construction: every unordered pair of configurations is tested
/// with the transport oracle. Rows are computed in parallel; the result does
/// not depend on scheduling.
pub fn build_quotient_capped(g: &Graph, k: u32, cap: u64) -> Result<QuotientGraph, QuotientError> {
    let count =
        config_space::configuration_count(g.n(), k).ok_or(ConfigError::Overflow { n: g.n(), k })?;
    if count > cap as u128 {
        return Err(QuotientError::VertexCapExceeded { k, count, cap });
    }
    let configurations = config_space::enumerate_configurations_capped(g.n(), k, cap)?;
    let m = configurations.len();
    let upper: Vec<Vec<usize>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .filter(|&j| {
                    config_space::adjacent(g, &configurations[i], &configurations[j])
                        .expect("configurations share n and k")
                })
                .collect()
        })
        .collect();
    let mut rows = vec![Bitset::new(m); m];
    for (i, js) in upper.into_iter().enumerate() {
        for j in js {
            rows[i].insert(j);
            rows[j].insert(i);
        }
    }
    let graph = Graph::from_adjacency(rows).expect("quotient adjacency is symmetric and loopless");
    Ok(QuotientGraph {
        base: g.clone(),
        k,
        configurations,
        graph,
    })
}

pub fn strong_power_quotient_oracle(g: &Graph, k: u32) -> Result<QuotientGraph, QuotientError> {
    strong_power_quotient_oracle_capped(g, k, DEFAULT_TUPLE_CAP)
}

/// Builds `G^⊠k` over all `n^k` coordinate tuples and collapses each tuple
/// to its multiset of coordinates. Two orbits are adjacent when they differ
/// and some pair of representatives is adjacent in the strong power.
/// Single-threaded; shares nothing with the transport oracle.
pub fn strong_power_quotient_oracle_capped(
    g: &Graph,
    k: u32,
    cap: u64,
) -> Result<QuotientGraph, QuotientError> {
    let n = g.n();
    let count = (n as u128).checked_pow(k).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(QuotientError::TupleCapExceeded { count, cap });
    }
    let tuples = count as usize;
    let k_us = k as usize;

    let decode = |mut idx: usize| -> Vec<usize> {
        let mut t = vec![0usize; k_us];
        for slot in t.iter_mut().rev() {
            *slot = idx % n;
            idx /= n;
        }
        t
    };
    let orbit_of = |t: &[usize]| -> usize {
        let mut w = vec![0u32; n];
        for &x in t {
            w[x] += 1;
        }
        Configuration::new(w).expect("n >= 1").rank() as usize
    };
    // closed neighbourhoods in the base graph
    let closed: Vec<Vec<usize>> = (0..n)
        .map(|v| g.closed_neighborhood(v).iter().collect())
        .collect();

    let orbit: Vec<usize> = (0..tuples).map(|i| orbit_of(&decode(i))).collect();
    let configurations = config_space::enumerate_configurations_capped(n, k, u64::MAX)?;
    let m = configurations.len();
    let mut rows = vec![Bitset::new(m); m];

    let mut digits = vec![0usize; k_us];
    for x in 0..tuples {
        let tuple = decode(x);
        let ox = orbit[x];
        // odometer over the product of closed neighbourhoods
        digits.fill(0);
        'odometer: loop {
            let y = digits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &d)| acc * n + closed[tuple[i]][d]);
            let oy = orbit[y];
            if y != x && oy != ox {
                rows[ox].insert(oy);
                rows[oy].insert(ox);
            }
            let mut pos = k_us;
            loop {
                if pos == 0 {
                    break 'odometer;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < closed[tuple[pos]].len() {
                    continue 'odometer;
                }
                digits[pos] = 0;
            }
        }
    }
    let graph = Graph::from_adjacency(rows).expect("orbit adjacency is symmetric and loopless");
    Ok(QuotientGraph {
        base: g.clone(),
        k,
        configurations,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{construct_named, Family};

    #[test]
    fn k1_recovers_base() {
        let c5 = construct_named(Family::Cycle, 5).unwrap();
        let q = build_quotient(&c5, 1).unwrap();
        assert_eq!(q.vertex_count(), 5);
        // unit configuration on v has rank v
        for v in 0..5 {
            assert_eq!(Configuration::point(5, v, 1).rank(), v as u64);
        }
        assert_eq!(q.graph(), &c5);
        assert_eq!(strong_power_quotient_oracle(&c5, 1).unwrap(), q);
    }

    #[test]
    fn sizes_and_extremes() {
        let c5 = construct_named(Family::Cycle, 5).unwrap();
        assert_eq!(build_quotient(&c5, 2).unwrap().vertex_count(), 15);
        for k in 0..=6 {
            let q = build_quotient(&construct_named(Family::Complete, 3).unwrap(), k).unwrap();
            let m = q.vertex_count();
            assert_eq!(q.graph().edge_count(), m * (m - 1) / 2);
            let e = build_quotient(&Graph::empty(3).unwrap(), k).unwrap();
            assert_eq!(e.graph().edge_count(), 0);
        }
    }

    #[test]
    fn single_edge_oracle() {
        let k2 = construct_named(Family::Complete, 2).unwrap();
        let o = strong_power_quotient_oracle(&k2, 2).unwrap();
        assert_eq!(o.vertex_count(), 3);
        assert_eq!(o.graph().edge_count(), 3);
        assert_eq!(o, build_quotient(&k2, 2).unwrap());
    }

    #[test]
    fn path_oracle_matches() {
        let p3 = construct_named(Family::Path, 3).unwrap();
        assert_eq!(
            strong_power_quotient_oracle(&p3, 2).unwrap().adjacency(),
            build_quotient(&p3, 2).unwrap().adjacency()
        );
    }

    #[test]
    fn k0_is_a_single_vertex() {
        let c5 = construct_named(Family::Cycle, 5).unwrap();
        let a = build_quotient(&c5, 0).unwrap();
        let b = strong_power_quotient_oracle(&c5, 0).unwrap();
        assert_eq!(a.vertex_count(), 1);
        assert_eq!(a, b);
    }

    #[test]
    fn caps() {
        let c5 = construct_named(Family::Cycle, 5).unwrap();
        assert!(matches!(
            build_quotient_capped(&c5, 9, 100),
            Err(QuotientError::VertexCapExceeded { count: 715, .. })
        ));
        assert!(matches!(
            strong_power_quotient_oracle_capped(&c5, 4, 100),
            Err(QuotientError::TupleCapExceeded { count: 625, .. })
        ));
    }

    #[test]
    fn sidecar_maps_ranks() {
        let k2 = construct_named(Family::Complete, 2).unwrap();
        let q = build_quotient(&k2, 2).unwrap();
        let s = q.sidecar_json();
        assert_eq!(s["configurations"]["0"], "2,0");
        assert_eq!(s["configurations"]["2"], "0,2");
        assert_eq!(q.to_edge_list(), "3 3\n0 1\n0 2\n1 2\n");
    }
}
