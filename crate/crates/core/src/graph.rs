//! Small undirected-graph toolkit shared by the kernel and PIP modules:
//! connectivity, components after vertex deletion, and rooted isomorphism.

use std::collections::{BTreeMap, VecDeque};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Vec<Vec<usize>>,
}

impl UndirectedGraph {
    /// Builds from adjacency lists; lists are sorted and deduplicated, and
    /// the relation must already be symmetric.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        debug_assert!(adj
            .iter()
            .enumerate()
            .all(|(u, l)| l.iter().all(|&v| adj[v].binary_search(&u).is_ok())));
        UndirectedGraph { adj }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        Self::from_adjacency(adj)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// BFS distances from `root` (`usize::MAX` if unreachable).
    pub fn distances(&self, root: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.distances(0).iter().all(|&d| d != usize::MAX)
    }

    /// Connected components of the graph with the `removed` vertices
    /// deleted, each sorted, ordered by smallest member.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.len() {
            if removed[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &v in &self.adj[u] {
                    if !removed[v] && comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Finds an isomorphism `g1 -> g2` mapping `root1` to `root2`, if one exists.
///
/// Colour refinement on the disjoint union, then individualization of one
/// vertex of the smallest ambiguous class with backtracking over its
/// candidates.
pub fn rooted_isomorphism(
    g1: &UndirectedGraph,
    root1: usize,
    g2: &UndirectedGraph,
    root2: usize,
) -> Option<Vec<usize>> {
    if g1.len() != g2.len() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let n = g1.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut colors = vec![0usize; 2 * n];
    colors[root1] = 1;
    colors[n + root2] = 1;
    search(g1, g2, colors)
}

fn union_neighbors<'a>(
    g1: &'a UndirectedGraph,
    g2: &'a UndirectedGraph,
    u: usize,
) -> Box<dyn Iterator<Item = usize> + 'a> {
    let n = g1.len();
    if u < n {
        Box::new(g1.neighbors(u).iter().copied())
    } else {
        Box::new(g2.neighbors(u - n).iter().map(move |&v| v + n))
    }
}

fn refine(g1: &UndirectedGraph, g2: &UndirectedGraph, mut colors: Vec<usize>) -> Vec<usize> {
    let total = colors.len();
    let mut classes = count_classes(&colors);
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..total)
            .map(|u| {
                let mut nb: Vec<usize> = union_neighbors(g1, g2, u).map(|v| colors[v]).collect();
                nb.sort_unstable();
                (colors[u], nb)
            })
            .collect();
        // Sorted signatures give ids that agree across both halves.
        let order: BTreeMap<&(usize, Vec<usize>), usize> = signatures
            .iter()
            .map(|s| (s, 0))
            .collect::<BTreeMap<_, _>>()
            .into_keys()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let next: Vec<usize> = signatures.iter().map(|s| order[s]).collect();
        let next_classes = order.len();
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn search(g1: &UndirectedGraph, g2: &UndirectedGraph, colors: Vec<usize>) -> Option<Vec<usize>> {
    let n = g1.len();
    let colors = refine(g1, g2, colors);
    let mut members: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (u, &c) in colors.iter().enumerate() {
        let e = members.entry(c).or_default();
        if u < n {
            e.0.push(u);
        } else {
            e.1.push(u - n);
        }
    }
    if members.values().any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let ambiguous = members
        .values()
        .filter(|(a, _)| a.len() > 1)
        .min_by_key(|(a, _)| a.len());
    match ambiguous {
        None => {
            let mut map = vec![0; n];
            for (a, b) in members.values() {
                map[a[0]] = b[0];
            }
            let ok = g1.edges().all(|(u, v)| g2.has_edge(map[u], map[v]));
            ok.then_some(map)
        }
        Some((a, b)) => {
            let fresh = colors.iter().max().unwrap() + 1;
            let v = a[0];
            for &w in b {
                let mut c = colors.clone();
                c[v] = fresh;
                c[n + w] = fresh;
                if let Some(map) = search(g1, g2, c) {
                    return Some(map);
                }
            }
            None
        }
    }
}
