//! Finite simple undirected graphs with bitset adjacency, the named families
//! used throughout the crate, text parsing, and the exact base parameters
//! α(G) (independence number) and θ(G) (clique cover number).
//!
//! Vertices are 0-indexed. For the 5-cycle the vertex `v_j` of the usual
//! 1-indexed labeling is vertex `j - 1` here, and edge `e_j` joins vertices
//! `j - 1` and `j mod 5`.

use std::fmt;

use thiserror::Error;

use crate::bitset::Bitset;
use crate::mis_solver::{self, Budget};

/// A set of vertices of a particular graph.
pub type VertexSet = Bitset;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("{family} requires size >= {min}, got {size}")]
    TooSmall {
        family: &'static str,
        size: usize,
        min: usize,
    },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("exact computation exceeded its budget")]
    BudgetExhausted,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Bitset>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        Ok(Graph {
            n,
            adjacency: vec![Bitset::new(n); n],
        })
    }

    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for (i, (u, v)) in edges.into_iter().enumerate() {
            g.add_edge_checked(u, v, i + 1)?;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, validating symmetry and looplessness.
    pub fn from_adjacency(adjacency: Vec<Bitset>) -> Result<Self, GraphError> {
        let n = adjacency.len();
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        for (u, row) in adjacency.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::Malformed {
                    line: u + 1,
                    msg: format!("adjacency row has width {}, expected {n}", row.len()),
                });
            }
            if row.contains(u) {
                return Err(GraphError::SelfLoop {
                    line: u + 1,
                    vertex: u,
                });
            }
            if let Some(v) = row.iter().find(|&v| !adjacency[v].contains(u)) {
                return Err(GraphError::Malformed {
                    line: u + 1,
                    msg: format!("asymmetric adjacency between {u} and {v}"),
                });
            }
        }
        Ok(Graph { n, adjacency })
    }

    fn add_edge_checked(&mut self, u: usize, v: usize, line: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    line,
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { line, vertex: u });
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn adjacency(&self) -> &[Bitset] {
        &self.adjacency
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adjacency[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bitset::count).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| {
                self.adjacency[u]
                    .iter()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .collect()
    }

    pub fn complement(&self) -> Graph {
        let adjacency = (0..self.n)
            .map(|u| {
                let mut row = Bitset::full(self.n);
                row.difference_with(&self.adjacency[u]);
                row.remove(u);
                row
            })
            .collect();
        Graph {
            n: self.n,
            adjacency,
        }
    }

    /// `{v}` together with every neighbour of `v`.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adjacency[v].clone();
        s.insert(v);
        s
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| !self.adjacency[v].intersects(s))
    }

    /// Subgraph induced on `keep`, with vertices renumbered in increasing
    /// order. The second component maps new ids to old ids. Returns `None`
    /// when `keep` is empty.
    pub fn induced(&self, keep: &VertexSet) -> Option<(Graph, Vec<usize>)> {
        let old: Vec<usize> = keep.iter().collect();
        if old.is_empty() {
            return None;
        }
        let mut g = Graph::empty(old.len()).ok()?;
        for (a, &u) in old.iter().enumerate() {
            for (b, &v) in old.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.adjacency[a].insert(b);
                    g.adjacency[b].insert(a);
                }
            }
        }
        Some((g, old))
    }

    /// Serializes to the `n m` edge-list format.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Exact independence number.
    pub fn alpha_exact(&self) -> Result<usize, GraphError> {
        let report = mis_solver::solve_exact(self, &Budget::default())
            .map_err(|_| GraphError::BudgetExhausted)?;
        if report.optimal {
            Ok(report.alpha)
        } else {
            Err(GraphError::BudgetExhausted)
        }
    }

    /// Exact clique cover number, computed as the chromatic number of the
    /// complement.
    pub fn clique_cover_number(&self) -> Result<usize, GraphError> {
        chromatic_number(&self.complement(), DEFAULT_COLORING_NODES)
    }

    /// Automorphisms as vertex permutations (`perm[v]` is the image of `v`),
    /// identity first, at most `limit` of them. Plain backtracking, meant for
    /// small base graphs.
    pub fn automorphisms(&self, limit: usize) -> Vec<Vec<usize>> {
        fn extend(
            g: &Graph,
            perm: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<usize>>,
            limit: usize,
        ) {
            if out.len() >= limit {
                return;
            }
            let v = perm.len();
            if v == g.n {
                out.push(perm.clone());
                return;
            }
            for img in 0..g.n {
                if used[img] || g.degree(img) != g.degree(v) {
                    continue;
                }
                if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(perm[u], img)) {
                    continue;
                }
                used[img] = true;
                perm.push(img);
                extend(g, perm, used, out, limit);
                perm.pop();
                used[img] = false;
            }
        }
        let mut out = Vec::new();
        extend(
            self,
            &mut Vec::with_capacity(self.n),
            &mut vec![false; self.n],
            &mut out,
            limit,
        );
        out
    }
}

const DEFAULT_COLORING_NODES: u64 = 50_000_000;

/// Graph families accepted by [`construct_named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Path,
    Complete,
    Empty,
    Petersen,
}

impl std::str::FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "complete" => Ok(Family::Complete),
            "empty" => Ok(Family::Empty),
            "petersen" => Ok(Family::Petersen),
            _ => Err(GraphError::UnknownFamily(s.to_string())),
        }
    }
}

pub fn construct_named(family: Family, size: usize) -> Result<Graph, GraphError> {
    let min = match family {
        Family::Cycle => 3,
        Family::Petersen => 0,
        _ => 1,
    };
    if family != Family::Petersen && size < min {
        return Err(GraphError::TooSmall {
            family: family_name(family),
            size,
            min,
        });
    }
    match family {
        Family::Cycle => Graph::from_edges(size, (0..size).map(|i| (i, (i + 1) % size))),
        Family::Path => Graph::from_edges(size, (1..size).map(|i| (i - 1, i))),
        Family::Complete => Graph::from_edges(
            size,
            (0..size).flat_map(|u| (u + 1..size).map(move |v| (u, v))),
        ),
        Family::Empty => Graph::empty(size),
        Family::Petersen => {
            // Kneser graph K(5,2): 2-subsets of {0..4}, adjacent when disjoint.
            let pairs: Vec<(usize, usize)> = (0..5)
                .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
                .collect();
            let mut edges = Vec::new();
            for (i, p) in pairs.iter().enumerate() {
                for (j, q) in pairs.iter().enumerate().skip(i + 1) {
                    if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(10, edges)
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Cycle => "cycle",
        Family::Path => "path",
        Family::Complete => "complete",
        Family::Empty => "empty",
        Family::Petersen => "petersen",
    }
}

/// Parses either the `n m` edge-list format or DIMACS `.col`.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty());
    match first.and_then(|l| l.split_whitespace().next()) {
        Some("c") | Some("p") => parse_dimacs(text),
        Some(_) => parse_edge_list(text),
        None => Err(GraphError::Malformed {
            line: 1,
            msg: "empty input".into(),
        }),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Malformed {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::Malformed {
        line,
        msg: format!("invalid {what} `{tok}`"),
    })
}

fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(GraphError::Malformed {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next(), hl, "vertex count")?;
    let m = parse_usize(toks.next(), hl, "edge count")?;
    if toks.next().is_some() {
        return Err(GraphError::Malformed {
            line: hl,
            msg: "header must be `n m`".into(),
        });
    }
    let mut g = Graph::empty(n)?;
    let mut seen = 0;
    for (ln, l) in lines {
        let mut toks = l.split_whitespace();
        let u = parse_usize(toks.next(), ln, "endpoint")?;
        let v = parse_usize(toks.next(), ln, "endpoint")?;
        if toks.next().is_some() {
            return Err(GraphError::Malformed {
                line: ln,
                msg: "edge line must be `u v`".into(),
            });
        }
        g.add_edge_checked(u, v, ln)?;
        seen += 1;
    }
    if seen != m {
        return Err(GraphError::Malformed {
            line: hl,
            msg: format!("header declares {m} edges, found {seen}"),
        });
    }
    Ok(g)
}

fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut g: Option<Graph> = None;
    let mut declared = 0;
    let mut seen = 0;
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let mut toks = l.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if g.is_some() {
                    return Err(GraphError::Malformed {
                        line: ln,
                        msg: "duplicate problem line".into(),
                    });
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => {
                        return Err(GraphError::Malformed {
                            line: ln,
                            msg: format!("unsupported problem type {other:?}"),
                        })
                    }
                }
                let n = parse_usize(toks.next(), ln, "vertex count")?;
                declared = parse_usize(toks.next(), ln, "edge count")?;
                g = Some(Graph::empty(n)?);
            }
            Some("e") => {
                let g = g.as_mut().ok_or(GraphError::Malformed {
                    line: ln,
                    msg: "edge before problem line".into(),
                })?;
                let u = parse_usize(toks.next(), ln, "endpoint")?;
                let v = parse_usize(toks.next(), ln, "endpoint")?;
                if u == 0 || v == 0 {
                    return Err(GraphError::VertexOutOfRange {
                        line: ln,
                        vertex: 0,
                        n: g.n,
                    });
                }
                g.add_edge_checked(u - 1, v - 1, ln)?;
                seen += 1;
            }
            Some(tok) => {
                return Err(GraphError::Malformed {
                    line: ln,
                    msg: format!("unknown line type `{tok}`"),
                })
            }
        }
    }
    let g = g.ok_or(GraphError::Malformed {
        line: 1,
        msg: "missing problem line".into(),
    })?;
    if seen != declared {
        return Err(GraphError::Malformed {
            line: 1,
            msg: format!("problem line declares {declared} edges, found {seen}"),
        });
    }
    Ok(g)
}

/// Exact chromatic number by DSATUR branch-and-bound, seeded with a greedy
/// clique lower bound and a DSATUR upper bound.
pub fn chromatic_number(g: &Graph, max_nodes: u64) -> Result<usize, GraphError> {
    let n = g.n();
    let lower = greedy_clique(g);
    let mut colors = vec![usize::MAX; n];
    let upper = dsatur_greedy(g, &mut colors);
    if lower == upper {
        return Ok(upper);
    }
    let mut state = ColoringSearch {
        g,
        colors: vec![usize::MAX; n],
        best: upper,
        lower,
        nodes: 0,
        max_nodes,
    };
    state.search(0, 0)?;
    Ok(state.best)
}

fn greedy_clique(g: &Graph) -> usize {
    (0..g.n())
        .map(|start| {
            let mut cand = g.neighbors(start).clone();
            let mut size = 1;
            while let Some(u) = cand.iter().max_by_key(|&u| {
                (
                    g.neighbors(u).intersection_count(&cand),
                    std::cmp::Reverse(u),
                )
            }) {
                size += 1;
                cand.intersect_with(g.neighbors(u));
            }
            size
        })
        .max()
        .unwrap_or(0)
}

fn saturation(g: &Graph, colors: &[usize], v: usize) -> usize {
    let mut used: Vec<usize> = g
        .neighbors(v)
        .iter()
        .filter_map(|u| (colors[u] != usize::MAX).then_some(colors[u]))
        .collect();
    used.sort_unstable();
    used.dedup();
    used.len()
}

fn pick_dsatur(g: &Graph, colors: &[usize]) -> Option<usize> {
    (0..g.n())
        .filter(|&v| colors[v] == usize::MAX)
        .max_by_key(|&v| (saturation(g, colors, v), g.degree(v), std::cmp::Reverse(v)))
}

fn dsatur_greedy(g: &Graph, colors: &mut [usize]) -> usize {
    let mut used = 0;
    while let Some(v) = pick_dsatur(g, colors) {
        let c = (0..)
            .find(|&c| g.neighbors(v).iter().all(|u| colors[u] != c))
            .unwrap();
        colors[v] = c;
        used = used.max(c + 1);
    }
    used
}

struct ColoringSearch<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    best: usize,
    lower: usize,
    nodes: u64,
    max_nodes: u64,
}

impl ColoringSearch<'_> {
    fn search(&mut self, colored: usize, used: usize) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(GraphError::BudgetExhausted);
        }
        if colored == self.g.n() {
            self.best = self.best.min(used);
            return Ok(());
        }
        let v = pick_dsatur(self.g, &self.colors).expect("uncolored vertex remains");
        for c in 0..=used {
            if used.max(c + 1) >= self.best {
                break;
            }
            if self.g.neighbors(v).iter().any(|u| self.colors[u] == c) {
                continue;
            }
            self.colors[v] = c;
            self.search(colored + 1, used.max(c + 1))?;
            self.colors[v] = usize::MAX;
            if self.best == self.lower {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c5() -> Graph {
        construct_named(Family::Cycle, 5).unwrap()
    }

    #[test]
    fn named_constructors() {
        let g = c5();
        assert_eq!(g.edges(), vec![(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        assert!((0..5).all(|v| g.degree(v) == 2));
        let k1 = construct_named(Family::Complete, 1).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        let p = construct_named(Family::Petersen, 0).unwrap();
        assert_eq!((p.n(), p.edge_count()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
    }

    #[test]
    fn named_errors() {
        assert_eq!(
            construct_named(Family::Cycle, 2),
            Err(GraphError::TooSmall {
                family: "cycle",
                size: 2,
                min: 3
            })
        );
        assert!(matches!(
            "hypercube".parse::<Family>(),
            Err(GraphError::UnknownFamily(_))
        ));
        assert!(matches!(
            construct_named(Family::Empty, 0),
            Err(GraphError::TooSmall { .. })
        ));
    }

    #[test]
    fn parse_formats() {
        let p3 = parse_graph("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p3, construct_named(Family::Path, 3).unwrap());
        let dimacs = "c five cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";
        assert_eq!(parse_graph(dimacs).unwrap(), c5());
        assert_eq!(
            parse_graph("2 1\n0 0"),
            Err(GraphError::SelfLoop { line: 2, vertex: 0 })
        );
        assert!(matches!(
            parse_graph("2 1\n0 2"),
            Err(GraphError::VertexOutOfRange { vertex: 2, .. })
        ));
        assert!(matches!(
            parse_graph("2 1\n0 x"),
            Err(GraphError::Malformed { .. })
        ));
        // duplicates collapse
        let g = parse_graph("2 2\n0 1\n1 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn complement_cases() {
        let k4 = construct_named(Family::Complete, 4).unwrap();
        assert_eq!(k4.complement(), Graph::empty(4).unwrap());
        let cc5 = c5().complement();
        assert_eq!(cc5.edge_count(), 5);
        assert!((0..5).all(|v| cc5.degree(v) == 2));
        // relabel v -> 2v mod 5 maps C5 onto its complement
        assert!(c5()
            .edges()
            .iter()
            .all(|&(u, v)| cc5.has_edge(2 * u % 5, 2 * v % 5)));
        assert_eq!(cc5.complement(), c5());
    }

    #[test]
    fn base_parameters() {
        assert_eq!(c5().alpha_exact().unwrap(), 2);
        assert_eq!(c5().clique_cover_number().unwrap(), 3);
        let p = construct_named(Family::Petersen, 0).unwrap();
        assert_eq!(p.alpha_exact().unwrap(), 4);
        assert_eq!(p.clique_cover_number().unwrap(), 5);
        for n in 1..6 {
            let k = construct_named(Family::Complete, n).unwrap();
            assert_eq!(k.clique_cover_number().unwrap(), 1);
            assert_eq!(k.alpha_exact().unwrap(), 1);
            let e = Graph::empty(n).unwrap();
            assert_eq!(e.clique_cover_number().unwrap(), n);
            assert_eq!(e.alpha_exact().unwrap(), n);
        }
    }

    #[test]
    fn independence_and_neighborhoods() {
        let g = c5();
        assert!(g.is_independent(&VertexSet::from_indices(5, [0, 2])));
        assert!(!g.is_independent(&VertexSet::from_indices(5, [0, 1])));
        assert!(g.is_independent(&VertexSet::new(5)));
        assert_eq!(
            g.closed_neighborhood(0).iter().collect::<Vec<_>>(),
            vec![0, 1, 4]
        );
        let k4 = construct_named(Family::Complete, 4).unwrap();
        assert_eq!(k4.closed_neighborhood(2).count(), 4);
        let e = Graph::empty(3).unwrap();
        assert_eq!(e.closed_neighborhood(1).iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn induced_subgraph() {
        let g = c5();
        let keep = VertexSet::from_indices(5, [2, 3]);
        let (h, map) = g.induced(&keep).unwrap();
        assert_eq!(map, vec![2, 3]);
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert!(g.induced(&VertexSet::new(5)).is_none());
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn preserves(g: &Graph, p: &[usize]) -> bool {
        let mut mapped: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .map(|(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
            .collect();
        mapped.sort();
        mapped == g.edges()
    }

    #[test]
    fn automorphism_groups() {
        let g = c5();
        let auts = g.automorphisms(usize::MAX);
        assert_eq!(auts.len(), 10);
        assert_eq!(auts[0], vec![0, 1, 2, 3, 4]);
        let pet = construct_named(Family::Petersen, 10).unwrap();
        let auts = pet.automorphisms(usize::MAX);
        assert_eq!(auts.len(), 120);
        assert!(auts.iter().all(|p| preserves(&pet, p)));
        assert_eq!(pet.automorphisms(7).len(), 7);
    }

    #[test]
    fn automorphisms_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let mut expected: Vec<Vec<usize>> = all_permutations(n)
                .into_iter()
                .filter(|p| preserves(&g, p))
                .collect();
            expected.sort();
            let mut got = g.automorphisms(usize::MAX);
            got.sort();
            assert_eq!(got, expected);
        }
    }
}
