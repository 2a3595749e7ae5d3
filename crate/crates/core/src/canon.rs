//! Exact canonical codes for rooted, vertex-colored, edge-labeled balls.
//!
//! Two balls receive the same code if and only if there is an isomorphism
//! between them that maps root to root, preserves edge labels and edge
//! multiplicities, and preserves vertex colors. Codes are plain ASCII
//! strings so they can serve directly as JSON map keys.
//!
//! Trees (the typical ball shape once the girth exceeds `2r + 1`) are
//! encoded by the classical sorted-subtree construction, which is fast even
//! for highly symmetric stars. Balls with cycles go through partition
//! refinement followed by individualization search for the lexicographically
//! least encoding; this is exponential in the worst case but cheap for the
//! bounded-degree, small-radius balls this crate produces.

use crate::graph::{LabeledMultigraph, RootedBall};

/// Canonical code of a rooted ball. Pure and deterministic.
pub fn canonical_code(ball: &RootedBall) -> String {
    let g = &ball.graph;
    if g.num_vertices() == 0 {
        return "E".to_string();
    }
    if g.is_connected() && g.is_acyclic() {
        let mut out = String::from("T");
        tree_code(g, ball.vertex_colors.as_deref(), ball.root, usize::MAX, &mut out);
        out
    } else {
        search_code(ball)
    }
}

fn color_tag(colors: Option<&[usize]>, v: usize) -> String {
    match colors {
        Some(c) => c[v].to_string(),
        None => "-".to_string(),
    }
}

fn tree_code(
    g: &LabeledMultigraph,
    colors: Option<&[usize]>,
    v: usize,
    parent_edge: usize,
    out: &mut String,
) {
    let mut children: Vec<(usize, String)> = g
        .incidences(v)
        .filter(|&(_, e)| e != parent_edge)
        .map(|(y, e)| {
            let mut sub = String::new();
            tree_code(g, colors, y, e, &mut sub);
            (g.edges()[e].label, sub)
        })
        .collect();
    children.sort();
    out.push('(');
    out.push_str(&color_tag(colors, v));
    for (label, sub) in children {
        out.push('[');
        out.push_str(&label.to_string());
        out.push(':');
        out.push_str(&sub);
        out.push(']');
    }
    out.push(')');
}

/// Ordered partition of the vertices; cell order is canonical (determined by
/// isomorphism-invariant data only).
type Cells = Vec<Vec<usize>>;

fn search_code(ball: &RootedBall) -> String {
    let g = &ball.graph;
    let n = g.num_vertices();
    let dist = bfs_distances(g, ball.root);
    let colors = ball.vertex_colors.as_deref();

    // Initial cells group by (distance from root, color); cell order follows
    // the sorted keys, so the root's singleton cell comes first.
    let mut keyed: Vec<(usize, i64, usize)> = (0..n)
        .map(|v| (dist[v], colors.map_or(-1, |c| c[v] as i64), v))
        .collect();
    keyed.sort();
    let mut cells: Cells = Vec::new();
    for (d, c, v) in keyed {
        match cells.last_mut() {
            Some(last) if {
                let w = last[0];
                dist[w] == d && colors.map_or(-1, |col| col[w] as i64) == c
            } =>
            {
                last.push(v);
            }
            _ => cells.push(vec![v]),
        }
    }
    refine(g, &mut cells);

    let mut best: Option<String> = None;
    descend(g, colors, cells, &mut best);
    let mut out = String::from("G");
    out.push_str(&best.expect("search always reaches a discrete partition"));
    out
}

fn descend(g: &LabeledMultigraph, colors: Option<&[usize]>, cells: Cells, best: &mut Option<String>) {
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i));
    let Some((ti, tcell)) = target else {
        let code = encode_discrete(g, colors, &cells);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for &v in tcell {
        let mut next = cells.clone();
        let rest: Vec<usize> = next[ti].iter().copied().filter(|&w| w != v).collect();
        next[ti] = vec![v];
        next.insert(ti + 1, rest);
        refine(g, &mut next);
        descend(g, colors, next, best);
    }
}

/// Splits cells by the multiset of (label, neighbor-cell) pairs until stable.
fn refine(g: &LabeledMultigraph, cells: &mut Cells) {
    let n = g.num_vertices();
    let mut cell_of = vec![0usize; n];
    loop {
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        let mut next: Cells = Vec::new();
        let mut changed = false;
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, usize)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, usize)> = g
                        .incidences(v)
                        .map(|(y, e)| (g.edges()[e].label, cell_of[y]))
                        .collect();
                    s.sort();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|&(_, v)| v).collect());
                    if i - start != cell.len() {
                        changed = true;
                    }
                    start = i;
                }
            }
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

fn encode_discrete(g: &LabeledMultigraph, colors: Option<&[usize]>, cells: &Cells) -> String {
    let n = g.num_vertices();
    let mut pos = vec![0usize; n];
    for (i, cell) in cells.iter().enumerate() {
        debug_assert_eq!(cell.len(), 1);
        pos[cell[0]] = i;
    }
    let mut out = String::new();
    out.push('n');
    out.push_str(&n.to_string());
    out.push('|');
    for cell in cells {
        out.push_str(&color_tag(colors, cell[0]));
        out.push(',');
    }
    out.push('|');
    let mut edges: Vec<(usize, usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (pos[e.u], pos[e.v]);
            (a.min(b), a.max(b), e.label)
        })
        .collect();
    edges.sort();
    for (a, b, l) in edges {
        out.push_str(&format!("{a}-{b}-{l};"));
    }
    out
}

fn bfs_distances(g: &LabeledMultigraph, root: usize) -> Vec<usize> {
    let n = g.num_vertices();
    let mut dist = vec![n; n]; // n = unreachable sentinel
    dist[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for (y, _) in g.incidences(x) {
            if dist[y] == n {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}
