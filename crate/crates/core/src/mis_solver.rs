//! Maximum independent set: an exact bitset branch-and-bound and a seeded
//! iterated local search for instances beyond exact reach.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency row {row} has width {width}, expected {expected}")]
    RaggedAdjacency {
        row: usize,
        width: usize,
        expected: usize,
    },
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error("initial set is not independent")]
    InitialNotIndependent,
    #[error("permutation {0} is not an automorphism")]
    NotAutomorphism(usize),
}

/// Search limits. Exceeding either one stops the search with `optimal = false`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: 100_000_000,
            max_time: Duration::from_secs(600),
        }
    }
}

/// A set of pairwise non-adjacent vertex ids, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSetCertificate {
    pub members: Vec<usize>,
}

impl IndependentSetCertificate {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        IndependentSetCertificate { members }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub alpha: usize,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    pub certificate: IndependentSetCertificate,
}

#[derive(Serialize, Deserialize)]
struct SolveReportWire {
    alpha: usize,
    optimal: bool,
    nodes: u64,
    elapsed_ms: u64,
    certificate: Vec<usize>,
}

impl Serialize for SolveReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SolveReportWire {
            alpha: self.alpha,
            optimal: self.optimal,
            nodes: self.nodes_explored,
            elapsed_ms: self.elapsed.as_millis() as u64,
            certificate: self.certificate.members.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SolveReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SolveReportWire::deserialize(d)?;
        Ok(SolveReport {
            alpha: w.alpha,
            optimal: w.optimal,
            nodes_explored: w.nodes,
            elapsed: Duration::from_millis(w.elapsed_ms),
            certificate: IndependentSetCertificate::new(w.certificate),
        })
    }
}

fn check_adjacency(adj: &[Bitset]) -> Result<(), SolverError> {
    for (v, row) in adj.iter().enumerate() {
        if row.len() != adj.len() {
            return Err(SolverError::RaggedAdjacency {
                row: v,
                width: row.len(),
                expected: adj.len(),
            });
        }
        if row.contains(v) {
            return Err(SolverError::SelfLoop(v));
        }
    }
    Ok(())
}

/// Branching rule of the exact solver. Both use a greedy clique cover of
/// the residual graph as the upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Vertices are renumbered by ascending degree; each node partitions the
    /// residual into greedy cliques and branches only on vertices whose
    /// clique index can still beat the incumbent, highest index first.
    #[default]
    CliqueCoverOrder,
    /// Binary branching on a maximum residual-degree vertex (lowest id on
    /// ties) after degree-0/degree-1 inclusion rules.
    MaxDegree,
}

pub fn solve_exact(g: &Graph, budget: &Budget) -> Result<SolveReport, SolverError> {
    solve_exact_adjacency(g.adjacency(), budget, Strategy::default())
}

pub fn solve_exact_with(
    g: &Graph,
    budget: &Budget,
    strategy: Strategy,
) -> Result<SolveReport, SolverError> {
    solve_exact_adjacency(g.adjacency(), budget, strategy)
}

/// Exact solve that also exploits symmetry. `automorphisms` are vertex
/// permutations preserving `g` (any subset of the group is fine, the
/// identity may be omitted).
///
/// Orbital branching: for an orbit `O` of the current group on the
/// candidates, either some member of `O` is in the set, and then by symmetry
/// its least member `r` may be assumed to be, with the stabiliser of `r` as
/// the group below; or no member is, and `O` is deleted. Once the group acts
/// trivially the ordinary clique-cover search takes over.
pub fn solve_exact_symmetric(
    g: &Graph,
    automorphisms: &[Vec<usize>],
    budget: &Budget,
) -> Result<SolveReport, SolverError> {
    let adj = g.adjacency();
    check_adjacency(adj)?;
    let n = adj.len();
    for (i, perm) in automorphisms.iter().enumerate() {
        let mut seen = vec![false; n];
        let bijective = perm.len() == n
            && perm
                .iter()
                .all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
        if !bijective
            || (0..n)
                .any(|u| Bitset::from_indices(n, adj[u].iter().map(|v| perm[v])) != adj[perm[u]])
        {
            return Err(SolverError::NotAutomorphism(i));
        }
    }
    let start = Instant::now();
    let order = peel_order(adj);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let renumbered: Vec<Bitset> = order
        .iter()
        .map(|&v| Bitset::from_indices(n, adj[v].iter().map(|u| pos[u])))
        .collect();
    let group: Vec<Vec<usize>> = automorphisms
        .iter()
        .map(|perm| order.iter().map(|&v| pos[perm[v]]).collect())
        .collect();
    let mut search = Search {
        adj: &renumbered,
        best: greedy_min_degree(&renumbered),
        current: Vec::new(),
        nodes: 0,
        budget,
        start,
        aborted: false,
    };
    search.orbital(Bitset::full(n), &group);
    let certificate =
        IndependentSetCertificate::new(search.best.iter().map(|&v| order[v]).collect());
    Ok(SolveReport {
        alpha: certificate.size(),
        optimal: !search.aborted,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
        certificate,
    })
}

/// Orbits of the group generated by `group` on `p`, as bitsets.
fn orbits(p: &Bitset, group: &[Vec<usize>]) -> Vec<Bitset> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..p.len()).collect();
    for perm in group {
        for v in p.iter() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, perm[v]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Bitset> = Vec::new();
    let mut slot = vec![usize::MAX; p.len()];
    for v in p.iter() {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(Bitset::new(p.len()));
        }
        classes[slot[root]].insert(v);
    }
    classes
}

/// Branch-and-bound over bitset adjacency rows.
pub fn solve_exact_adjacency(
    adj: &[Bitset],
    budget: &Budget,
    strategy: Strategy,
) -> Result<SolveReport, SolverError> {
    check_adjacency(adj)?;
    let start = Instant::now();
    let n = adj.len();

    // ascending degree, ties by id
    let mut order: Vec<usize> = (0..n).collect();
    if strategy == Strategy::CliqueCoverOrder {
        order = peel_order(adj);
    }
    let renumbered: Vec<Bitset>;
    let adj_used: &[Bitset] = if strategy == Strategy::CliqueCoverOrder {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        renumbered = order
            .iter()
            .map(|&v| Bitset::from_indices(n, adj[v].iter().map(|u| pos[u])))
            .collect();
        &renumbered
    } else {
        adj
    };

    let best = greedy_min_degree(adj_used);
    let mut search = Search {
        adj: adj_used,
        best,
        current: Vec::new(),
        nodes: 0,
        budget,
        start,
        aborted: false,
    };
    match strategy {
        Strategy::CliqueCoverOrder => search.expand(Bitset::full(n)),
        Strategy::MaxDegree => search.recurse(Bitset::full(n)),
    }
    let certificate =
        IndependentSetCertificate::new(search.best.iter().map(|&v| order[v]).collect());
    Ok(SolveReport {
        alpha: certificate.size(),
        optimal: !search.aborted,
        nodes_explored: search.nodes,
        elapsed: start.elapsed(),
        certificate,
    })
}

struct Search<'a> {
    adj: &'a [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: &'a Budget,
    start: Instant,
    aborted: bool,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes & 0x3ff == 0 && self.start.elapsed() > self.budget.max_time)
        {
            self.aborted = true;
        }
        self.aborted
    }

    fn recurse(&mut self, mut p: Bitset) {
        if self.aborted || self.out_of_budget() {
            return;
        }
        let mark = self.current.len();
        self.reduce(&mut p);

        if p.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
        } else if self.current.len() + self.clique_cover_bound(&p) > self.best.len() {
            let v = p
                .iter()
                .max_by_key(|&v| (self.adj[v].intersection_count(&p), std::cmp::Reverse(v)))
                .expect("nonempty residual");

            let mut with = p.clone();
            with.difference_with(&self.adj[v]);
            with.remove(v);
            self.current.push(v);
            self.recurse(with);
            self.current.pop();

            p.remove(v);
            self.recurse(p);
        }
        self.current.truncate(mark);
    }

    fn orbital(&mut self, mut p: Bitset, group: &[Vec<usize>]) {
        loop {
            if self.aborted || self.out_of_budget() {
                return;
            }
            if p.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
                return;
            }
            if self.current.len() + self.clique_cover_bound(&p) <= self.best.len() {
                return;
            }
            let all = orbits(&p, group);
            if all.iter().all(|o| o.count() == 1) {
                self.expand(p);
                return;
            }
            // largest orbit, earliest on ties
            let orbit = all
                .into_iter()
                .rev()
                .max_by_key(Bitset::count)
                .expect("nonempty residual");
            let r = orbit.first().expect("nonempty orbit");
            let stabiliser: Vec<Vec<usize>> = group.iter().filter(|g| g[r] == r).cloned().collect();
            let mut next = p.clone();
            next.difference_with(&self.adj[r]);
            next.remove(r);
            self.current.push(r);
            self.orbital(next, &stabiliser);
            self.current.pop();
            p.difference_with(&orbit);
        }
    }

    fn expand(&mut self, mut p: Bitset) {
        if self.aborted || self.out_of_budget() {
            return;
        }
        let candidates = self.cover_classes(&p);
        for (v, class) in candidates.into_iter().rev() {
            if self.current.len() + class <= self.best.len() {
                return;
            }
            let mut next = p.clone();
            next.difference_with(&self.adj[v]);
            next.remove(v);
            self.current.push(v);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.aborted {
                return;
            }
            p.remove(v);
        }
    }

    /// Greedy clique partition of `p` in id order. Returns `(vertex, class)`
    /// with 1-based class index, ascending, for the vertices whose class is
    /// large enough to matter for the incumbent.
    ///
    /// Once the first `floor` classes are built, every leftover vertex is
    /// offered a re-numbering: it may join a low class whose members are all
    /// its neighbours, or one where it has a single non-neighbour `w` that can
    /// itself move to a later low class.
    fn cover_classes(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let floor = self.best.len().saturating_sub(self.current.len());
        let mut rest = p.clone();
        let mut low: Vec<Bitset> = Vec::with_capacity(floor);
        while low.len() < floor && !rest.is_empty() {
            let mut class = Bitset::new(p.len());
            let mut cand = rest.clone();
            while let Some(v) = cand.first() {
                rest.remove(v);
                cand.remove(v);
                cand.intersect_with(&self.adj[v]);
                class.insert(v);
            }
            low.push(class);
        }
        if low.len() == floor && floor > 0 {
            let leftovers: Vec<usize> = rest.iter().collect();
            for v in leftovers {
                if self.renumber(v, &mut low) {
                    rest.remove(v);
                }
            }
        }
        let mut out = Vec::new();
        let mut class = low.len();
        while !rest.is_empty() {
            class += 1;
            let mut cand = rest.clone();
            while let Some(v) = cand.first() {
                rest.remove(v);
                cand.remove(v);
                cand.intersect_with(&self.adj[v]);
                out.push((v, class));
            }
        }
        out
    }

    /// Members of `class` other than `x` that are not adjacent to `x`: the
    /// count, capped at 2, and the first one.
    fn conflicts(&self, class: &Bitset, x: usize) -> (usize, Option<usize>) {
        let row = self.adj[x].words();
        let mut count = 0;
        let mut first = None;
        for (i, (&c, &a)) in class.words().iter().zip(row).enumerate() {
            let mut w = c & !a;
            if i == x >> 6 {
                w &= !(1 << (x & 63));
            }
            if w != 0 {
                first.get_or_insert(i * 64 + w.trailing_zeros() as usize);
                count += w.count_ones() as usize;
                if count > 1 {
                    return (2, first);
                }
            }
        }
        (count, first)
    }

    fn renumber(&self, v: usize, low: &mut [Bitset]) -> bool {
        for i in 0..low.len() {
            match self.conflicts(&low[i], v) {
                (0, _) => {
                    low[i].insert(v);
                    return true;
                }
                (1, Some(w)) => {
                    if let Some(j) = (i + 1..low.len()).find(|&j| self.conflicts(&low[j], w).0 == 0)
                    {
                        low[i].remove(w);
                        low[j].insert(w);
                        low[i].insert(v);
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }

    /// Vertices of residual degree 0 or 1 belong to some maximum independent
    /// set of the residual, so they are taken without branching.
    fn reduce(&mut self, p: &mut Bitset) {
        loop {
            let pick = p.iter().find(|&v| self.adj[v].intersection_count(p) <= 1);
            match pick {
                Some(v) => {
                    self.current.push(v);
                    p.difference_with(&self.adj[v]);
                    p.remove(v);
                }
                None => return,
            }
        }
    }

    /// Number of cliques in a greedy cover of `p` (id order). Stops early once
    /// the count already rules out pruning.
    fn clique_cover_bound(&self, p: &Bitset) -> usize {
        let need = self.best.len() + 1 - self.current.len().min(self.best.len() + 1);
        let mut rest = p.clone();
        let mut cliques = 0;
        while let Some(v) = rest.first() {
            rest.remove(v);
            let mut cand = rest.clone();
            cand.intersect_with(&self.adj[v]);
            while let Some(u) = cand.first() {
                rest.remove(u);
                cand.remove(u);
                cand.intersect_with(&self.adj[u]);
            }
            cliques += 1;
            if cliques >= need {
                return cliques;
            }
        }
        cliques
    }
}

/// Repeatedly moves a vertex of maximum residual degree (lowest id on ties)
/// to the back of the order.
fn peel_order(adj: &[Bitset]) -> Vec<usize> {
    let n = adj.len();
    let mut left = Bitset::full(n);
    let mut back = Vec::with_capacity(n);
    while !left.is_empty() {
        let v = left
            .iter()
            .max_by_key(|&v| (adj[v].intersection_count(&left), std::cmp::Reverse(v)))
            .expect("nonempty");
        left.remove(v);
        back.push(v);
    }
    back.reverse();
    back
}

fn greedy_min_degree(adj: &[Bitset]) -> Vec<usize> {
    let mut p = Bitset::full(adj.len());
    let mut out = Vec::new();
    while !p.is_empty() {
        let v = p
            .iter()
            .min_by_key(|&v| (adj[v].intersection_count(&p), v))
            .expect("nonempty");
        out.push(v);
        p.difference_with(&adj[v]);
        p.remove(v);
    }
    out
}

/// True iff the members are in range, duplicate-free, and pairwise
/// non-adjacent.
pub fn verify_certificate(g: &Graph, c: &IndependentSetCertificate) -> bool {
    let n = g.n();
    let mut seen = Bitset::new(n);
    for &v in &c.members {
        if v >= n || seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    g.is_independent(&seen)
}

/// Greedy maximal independent set over a uniformly random vertex order.
pub fn random_maximal_independent_set<R: Rng>(g: &Graph, rng: &mut R) -> IndependentSetCertificate {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut free = Bitset::full(g.n());
    let mut out = Vec::new();
    for v in order {
        if free.contains(v) {
            out.push(v);
            free.difference_with(g.neighbors(v));
            free.remove(v);
        }
    }
    IndependentSetCertificate::new(out)
}

pub fn heuristic_search(
    g: &Graph,
    seed: u64,
    iterations: u64,
) -> Result<IndependentSetCertificate, SolverError> {
    heuristic_search_from(g, seed, iterations, &[])
}

/// Iterated local search: each round perturbs the incumbent (drop a few
/// members, force in a random outsider), refills greedily in random order,
/// and then applies (1,2)-swaps until none improves. Deterministic in
/// `(g, seed, iterations, initial)`.
pub fn heuristic_search_from(
    g: &Graph,
    seed: u64,
    iterations: u64,
    initial: &[usize],
) -> Result<IndependentSetCertificate, SolverError> {
    if iterations == 0 {
        return Err(SolverError::NoIterations);
    }
    let init = IndependentSetCertificate::new(initial.to_vec());
    if !verify_certificate(g, &init) {
        return Err(SolverError::InitialNotIndependent);
    }
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current = Bitset::from_indices(n, init.members.iter().copied());
    fill_random(g, &mut current, &mut rng);
    improve_two_swaps(g, &mut current);
    let mut best = current.clone();

    for _ in 0..iterations {
        let mut trial = current.clone();
        let members: Vec<usize> = trial.iter().collect();
        let drop = rng.gen_range(1..=2.min(members.len().max(1)));
        for &v in members.choose_multiple(&mut rng, drop) {
            trial.remove(v);
        }
        let outsiders: Vec<usize> = (0..n).filter(|&v| !trial.contains(v)).collect();
        if let Some(&v) = outsiders.choose(&mut rng) {
            trial.difference_with(g.neighbors(v));
            trial.insert(v);
        }
        fill_random(g, &mut trial, &mut rng);
        improve_two_swaps(g, &mut trial);

        if trial.count() >= current.count() {
            current = trial;
        }
        if current.count() > best.count() {
            best = current.clone();
        } else if current.count() + 1 < best.count() {
            current = best.clone();
        }
    }
    Ok(IndependentSetCertificate::new(best.iter().collect()))
}

fn fill_random<R: Rng>(g: &Graph, s: &mut Bitset, rng: &mut R) {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    for v in order {
        if !s.contains(v) && !g.neighbors(v).intersects(s) {
            s.insert(v);
        }
    }
}

/// Repeatedly replaces one member by two non-adjacent outsiders whose only
/// neighbour in the set is that member.
fn improve_two_swaps(g: &Graph, s: &mut Bitset) {
    'restart: loop {
        let members: Vec<usize> = s.iter().collect();
        for x in members {
            let solo: Vec<usize> = g
                .neighbors(x)
                .iter()
                .filter(|&u| !s.contains(u) && g.neighbors(u).intersection_count(s) == 1)
                .collect();
            for (i, &u) in solo.iter().enumerate() {
                if let Some(&w) = solo[i + 1..].iter().find(|&&w| !g.has_edge(u, w)) {
                    s.remove(x);
                    s.insert(u);
                    s.insert(w);
                    // any vertex now free can join as well
                    for v in 0..g.n() {
                        if !s.contains(v) && !g.neighbors(v).intersects(s) {
                            s.insert(v);
                        }
                    }
                    continue 'restart;
                }
            }
        }
        return;
    }
}

#[cfg(test)]
mod tests {
    use super::Strategy;
    use super::*;
    use crate::graph::{construct_named, Family};
    use proptest::prelude::*;
    use rand::Rng;

    /// Subset enumeration, independent of the solver.
    fn brute_alpha(g: &Graph) -> usize {
        let n = g.n();
        let masks: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
            .collect();
        (0u32..1 << n)
            .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || masks[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        Graph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn complete_graphs() {
        for n in 1..8 {
            let g = construct_named(Family::Complete, n).unwrap();
            let r = solve_exact(&g, &Budget::default()).unwrap();
            assert_eq!((r.alpha, r.optimal), (1, true));
            assert!(verify_certificate(&g, &r.certificate));
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        for seed in 0..60 {
            let n = 4 + (seed as usize % 17);
            let p = [0.1, 0.3, 0.5, 0.8][seed as usize % 4];
            let g = random_graph(n, p, seed);
            let r = solve_exact(&g, &Budget::default()).unwrap();
            assert!(r.optimal);
            assert_eq!(r.alpha, brute_alpha(&g), "seed {seed}");
            let d = solve_exact_with(&g, &Budget::default(), Strategy::MaxDegree).unwrap();
            assert!(d.optimal);
            assert_eq!(d.alpha, r.alpha);
            assert!(verify_certificate(&g, &d.certificate));
            assert!(verify_certificate(&g, &r.certificate));
            let h = heuristic_search(&g, seed, 20).unwrap();
            assert!(verify_certificate(&g, &h));
            assert!(h.size() <= r.alpha);
        }
    }

    #[test]
    fn budget_degrades() {
        let g = random_graph(60, 0.2, 3);
        let r = solve_exact(
            &g,
            &Budget {
                max_nodes: 5,
                max_time: Duration::from_secs(60),
            },
        )
        .unwrap();
        assert!(!r.optimal);
        assert!(verify_certificate(&g, &r.certificate));
        assert_eq!(r.alpha, r.certificate.size());
    }

    #[test]
    fn loop_rejected() {
        let mut row = Bitset::new(1);
        row.insert(0);
        assert_eq!(
            solve_exact_adjacency(&[row], &Budget::default(), Strategy::default()),
            Err(SolverError::SelfLoop(0))
        );
    }

    #[test]
    fn certificate_checks() {
        let k2 = construct_named(Family::Complete, 2).unwrap();
        assert!(!verify_certificate(
            &k2,
            &IndependentSetCertificate::new(vec![0, 1])
        ));
        let e = Graph::empty(3).unwrap();
        assert!(!verify_certificate(
            &e,
            &IndependentSetCertificate {
                members: vec![1, 1]
            }
        ));
        assert!(!verify_certificate(
            &e,
            &IndependentSetCertificate::new(vec![3])
        ));
        assert!(verify_certificate(
            &e,
            &IndependentSetCertificate::new(vec![])
        ));
    }

    #[test]
    fn heuristic_contract() {
        let e = Graph::empty(7).unwrap();
        assert_eq!(heuristic_search(&e, 1, 1).unwrap().size(), 7);
        let g = random_graph(40, 0.3, 9);
        assert_eq!(heuristic_search(&g, 5, 50), heuristic_search(&g, 5, 50));
        assert_eq!(heuristic_search(&g, 5, 0), Err(SolverError::NoIterations));
        assert_eq!(
            heuristic_search_from(
                &construct_named(Family::Complete, 3).unwrap(),
                0,
                1,
                &[0, 1]
            ),
            Err(SolverError::InitialNotIndependent)
        );
    }

    #[test]
    fn report_json_shape() {
        let g = construct_named(Family::Cycle, 5).unwrap();
        let r = solve_exact(&g, &Budget::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["alpha"], 2);
        assert_eq!(v["optimal"], true);
        assert!(v["nodes"].is_u64() && v["elapsed_ms"].is_u64());
        assert_eq!(v["certificate"].as_array().unwrap().len(), 2);
        let back: SolveReport = serde_json::from_value(v).unwrap();
        assert_eq!(back.certificate, r.certificate);
    }

    proptest! {
        #[test]
        fn random_maximal_sets_are_maximal(n in 1usize..25, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = random_graph(n, p, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = random_maximal_independent_set(&g, &mut rng);
            prop_assert!(verify_certificate(&g, &c));
            let s = Bitset::from_indices(n, c.members.iter().copied());
            for v in 0..n {
                prop_assert!(s.contains(v) || g.neighbors(v).intersects(&s));
            }
        }
    }

    #[test]
    fn symmetric_solver_agrees_on_symmetric_graphs() {
        let graphs = [
            construct_named(Family::Cycle, 4).unwrap(),
            construct_named(Family::Cycle, 5).unwrap(),
            construct_named(Family::Cycle, 7).unwrap(),
            construct_named(Family::Complete, 4).unwrap(),
            construct_named(Family::Path, 4).unwrap(),
            construct_named(Family::Petersen, 10).unwrap(),
        ];
        for g in &graphs {
            for k in 1..=3 {
                let q = crate::build_quotient(g, k).unwrap();
                let auts = q.induced_automorphisms(usize::MAX);
                let sym = solve_exact_symmetric(q.graph(), &auts, &Budget::default()).unwrap();
                let plain = solve_exact(q.graph(), &Budget::default()).unwrap();
                assert!(sym.optimal && plain.optimal);
                assert_eq!(sym.alpha, plain.alpha, "{g:?} k={k}");
                assert!(verify_certificate(q.graph(), &sym.certificate));
            }
        }
    }

    #[test]
    fn symmetric_solver_rejects_non_automorphisms() {
        let g = construct_named(Family::Path, 3).unwrap();
        let swap_end = vec![1, 0, 2];
        assert_eq!(
            solve_exact_symmetric(&g, &[vec![0, 1, 2], swap_end], &Budget::default()),
            Err(SolverError::NotAutomorphism(1))
        );
        assert_eq!(
            solve_exact_symmetric(&g, &[vec![0, 0, 2]], &Budget::default()),
            Err(SolverError::NotAutomorphism(0))
        );
        let r = solve_exact_symmetric(&g, &[vec![2, 1, 0]], &Budget::default()).unwrap();
        assert_eq!(r.alpha, 2);
    }
}
