//! Integer transportation feasibility: given supplies, demands and a
//! support predicate, find a nonnegative integer matrix with those marginals
//! that is zero outside the support, or report that none exists.
//!
//! Solved as max flow (BFS augmenting paths) on a source / supply / demand /
//! sink network. Capacities are integral, so the flow found is integral.

use std::collections::VecDeque;

/// Returns `plan[i][j]` with row sums `supply`, column sums `demand`, and
/// `plan[i][j] > 0` only where `allowed(i, j)`. `None` when infeasible or the
/// totals differ.
pub fn solve(
    supply: &[u32],
    demand: &[u32],
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<Vec<Vec<u32>>> {
    let total: u64 = supply.iter().map(|&x| x as u64).sum();
    if total != demand.iter().map(|&x| x as u64).sum::<u64>() {
        return None;
    }
    let (a, b) = (supply.len(), demand.len());
    let nodes = a + b + 2;
    let (src, sink) = (a + b, a + b + 1);
    let inf = total as i64 + 1;
    let mut cap = vec![vec![0i64; nodes]; nodes];
    for (i, &s) in supply.iter().enumerate() {
        cap[src][i] = s as i64;
    }
    for (j, &d) in demand.iter().enumerate() {
        cap[a + j][sink] = d as i64;
    }
    for i in 0..a {
        if supply[i] == 0 {
            continue;
        }
        for j in 0..b {
            if demand[j] > 0 && allowed(i, j) {
                cap[i][a + j] = inf;
            }
        }
    }
    let original = cap.clone();

    let mut flow = 0i64;
    let mut parent = vec![usize::MAX; nodes];
    let mut queue = VecDeque::with_capacity(nodes);
    loop {
        parent.fill(usize::MAX);
        parent[src] = src;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for v in 0..nodes {
                if parent[v] == usize::MAX && cap[u][v] > 0 {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        let mut push = i64::MAX;
        let mut v = sink;
        while v != src {
            let u = parent[v];
            push = push.min(cap[u][v]);
            v = u;
        }
        let mut v = sink;
        while v != src {
            let u = parent[v];
            cap[u][v] -= push;
            cap[v][u] += push;
            v = u;
        }
        flow += push;
    }

    if flow != total as i64 {
        return None;
    }
    let plan = (0..a)
        .map(|i| {
            (0..b)
                .map(|j| {
                    if original[i][a + j] > 0 {
                        (original[i][a + j] - cap[i][a + j]) as u32
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    Some(plan)
}
