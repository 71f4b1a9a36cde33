//! Path-level model: monotone paths, local moves, the transition kernel
//! graph `S_{m,n}` and its bottleneck partition.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::transfer::count_series;

/// A unit step. The derived order `E < N < S` is the canonical vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Step {
    E,
    N,
    S,
}

impl Step {
    pub fn is_vertical(self) -> bool {
        self != Step::E
    }

    fn dh(self) -> i64 {
        match self {
            Step::E => 0,
            Step::N => 1,
            Step::S => -1,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
            Step::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Step> {
        match c.to_ascii_uppercase() {
            'E' => Some(Step::E),
            'N' => Some(Step::N),
            'S' => Some(Step::S),
            _ => None,
        }
    }
}

/// Checks the strip and no-retrace constraints.
pub fn is_valid_steps(m: u32, steps: &[Step]) -> bool {
    let mut h: i64 = 0;
    let mut prev: Option<Step> = None;
    for &s in steps {
        if matches!(
            (prev, s),
            (Some(Step::N), Step::S) | (Some(Step::S), Step::N)
        ) {
            return false;
        }
        h += s.dh();
        if h < 0 || h > m as i64 {
            return false;
        }
        prev = Some(s);
    }
    true
}

/// A monotone path of length `steps.len()` in the strip of height `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotonePath {
    m: u32,
    steps: Vec<Step>,
}

impl MonotonePath {
    pub fn new(m: u32, steps: Vec<Step>) -> Result<Self> {
        if !is_valid_steps(m, &steps) {
            let s: String = steps.iter().map(|s| s.as_char()).collect();
            return Err(Error::InvalidInput(format!(
                "{s} is not a monotone path in the strip of height {m}"
            )));
        }
        Ok(MonotonePath { m, steps })
    }

    pub fn parse(m: u32, text: &str) -> Result<Self> {
        let steps = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                Step::from_char(c).ok_or_else(|| Error::InvalidInput(format!("unknown step {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, steps)
    }

    pub fn horizontal(m: u32, n: usize) -> Self {
        MonotonePath {
            m,
            steps: vec![Step::E; n],
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Node heights `h_0 = 0, h_1, ..., h_n`.
    pub fn heights(&self) -> Vec<u32> {
        let mut h = 0i64;
        let mut out = vec![0];
        for s in &self.steps {
            h += s.dh();
            out.push(h as u32);
        }
        out
    }

    /// Every move available here together with the path it produces.
    pub fn available_moves(&self) -> Vec<(Move, MonotonePath)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 1..n {
            if let Some(p) = self.apply(Move::CornerSwitch(i)) {
                out.push((Move::CornerSwitch(i), p));
            }
        }
        if let Some(&last) = self.steps.last() {
            let targets: &[Step] = if last.is_vertical() {
                &[Step::E]
            } else {
                &[Step::N, Step::S]
            };
            for &t in targets {
                if let Some(p) = self.apply(Move::EndFlip(t)) {
                    out.push((Move::EndFlip(t), p));
                }
            }
        }
        out
    }

    /// The path after `mv`, or `None` if the move is not available.
    pub fn apply(&self, mv: Move) -> Option<MonotonePath> {
        let n = self.len();
        let mut steps = self.steps.clone();
        match mv {
            Move::CornerSwitch(i) => {
                if i == 0 || i >= n || steps[i - 1] == steps[i] {
                    return None;
                }
                steps.swap(i - 1, i);
            }
            Move::EndFlip(t) => {
                let last = *steps.last()?;
                if last.is_vertical() == t.is_vertical() {
                    return None;
                }
                steps[n - 1] = t;
            }
        }
        is_valid_steps(self.m, &steps).then_some(MonotonePath { m: self.m, steps })
    }

    pub fn vertical_steps(&self) -> impl Iterator<Item = Step> + '_ {
        self.steps.iter().copied().filter(|s| s.is_vertical())
    }

    /// ASCII rendering, one text row per lattice level (top level first).
    pub fn render_ascii(&self) -> String {
        let width = self.steps.iter().filter(|&&s| s == Step::E).count();
        let rows = 2 * self.m as usize + 1;
        let cols = 2 * width + 1;
        let mut grid = vec![vec![' '; cols]; rows];
        for r in (0..rows).step_by(2) {
            for c in (0..cols).step_by(2) {
                grid[r][c] = '.';
            }
        }
        let row_of = |h: i64| 2 * (self.m as i64 - h) as usize;
        let (mut x, mut h) = (0usize, 0i64);
        grid[row_of(0)][0] = 'o';
        for &s in &self.steps {
            match s {
                Step::E => {
                    grid[row_of(h)][2 * x + 1] = '-';
                    x += 1;
                }
                Step::N | Step::S => {
                    let nh = h + s.dh();
                    grid[row_of(h).min(row_of(nh)) + 1][2 * x] = '|';
                    h = nh;
                }
            }
            grid[row_of(h)][2 * x] = '+';
        }
        grid[row_of(0)][0] = 'o';
        let mut out = String::new();
        for row in grid {
            out.push_str(row.iter().collect::<String>().trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for MonotonePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// A local move. Vertex `i` of a path sits between steps `i` and `i+1`
/// (1-based), so corner switches live at vertices `1..n-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Move {
    CornerSwitch(usize),
    EndFlip(Step),
}

impl Move {
    /// 1-based indices of the steps this move changes in a path of length `n`.
    pub fn involved_steps(self, n: usize) -> Vec<usize> {
        match self {
            Move::CornerSwitch(i) => vec![i, i + 1],
            Move::EndFlip(_) => vec![n],
        }
    }

    pub fn compatible(self, other: Move, n: usize) -> bool {
        let a = self.involved_steps(n);
        other.involved_steps(n).iter().all(|s| !a.contains(s))
    }

    pub fn is_end_flip(self) -> bool {
        matches!(self, Move::EndFlip(_))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::CornerSwitch(i) => write!(f, "switch@{i}"),
            Move::EndFlip(t) => write!(f, "flip->{}", t.as_char()),
        }
    }
}

/// Bottleneck class of a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VertexClass {
    /// At most one vertical step.
    Separator,
    /// Second vertical step points up.
    SideA,
    /// Second vertical step points down.
    SideB,
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexClass::Separator => "separator",
            VertexClass::SideA => "side_a",
            VertexClass::SideB => "side_b",
        };
        f.write_str(s)
    }
}

pub fn classify_vertex(path: &MonotonePath) -> VertexClass {
    match path.vertical_steps().nth(1) {
        None => VertexClass::Separator,
        Some(Step::S) => VertexClass::SideB,
        Some(_) => VertexClass::SideA,
    }
}

/// All monotone paths of length `n` in the strip of height `m`, in
/// lexicographic order with `E < N < S`.
pub fn enumerate_paths(m: u32, n: usize) -> Vec<MonotonePath> {
    fn rec(m: u32, n: usize, h: u32, steps: &mut Vec<Step>, out: &mut Vec<MonotonePath>) {
        if steps.len() == n {
            out.push(MonotonePath {
                m,
                steps: steps.clone(),
            });
            return;
        }
        let prev = steps.last().copied();
        for s in [Step::E, Step::N, Step::S] {
            let ok = match s {
                Step::E => true,
                Step::N => h < m && prev != Some(Step::S),
                Step::S => h > 0 && prev != Some(Step::N),
            };
            if ok {
                steps.push(s);
                let nh = (h as i64 + s.dh()) as u32;
                rec(m, n, nh, steps, out);
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(m, n, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// The transition kernel `S_{m,n}`: all paths, joined when one local move
/// turns one into the other.
#[derive(Clone, Debug)]
pub struct KernelGraph {
    pub m: u32,
    pub n: usize,
    pub vertices: Vec<MonotonePath>,
    /// Per vertex, the moves available there and the target vertex index.
    pub adjacency: Vec<Vec<(Move, usize)>>,
    pub classes: Vec<VertexClass>,
    index: HashMap<Vec<Step>, usize>,
}

pub fn build_kernel_graph(m: u32, n: usize) -> KernelGraph {
    let vertices = enumerate_paths(m, n);
    let index: HashMap<Vec<Step>, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, p)| (p.steps.clone(), i))
        .collect();
    let adjacency: Vec<Vec<(Move, usize)>> = vertices
        .par_iter()
        .map(|p| {
            p.available_moves()
                .into_iter()
                .map(|(mv, q)| (mv, index[&q.steps]))
                .collect()
        })
        .collect();
    let classes = vertices.iter().map(classify_vertex).collect();
    KernelGraph {
        m,
        n,
        vertices,
        adjacency,
        classes,
        index,
    }
}

impl KernelGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, path: &MonotonePath) -> Option<usize> {
        self.index.get(&path.steps).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Index of the all-horizontal path.
    pub fn root(&self) -> usize {
        0
    }

    pub fn graph(&self) -> UndirectedGraph {
        UndirectedGraph::from_adjacency(
            self.adjacency
                .iter()
                .map(|l| l.iter().map(|&(_, v)| v).collect())
                .collect(),
        )
    }

    pub fn class_members(&self, class: VertexClass) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| self.classes[v] == class)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph S_{}_{} {{\n", self.m, self.n);
        for (i, p) in self.vertices.iter().enumerate() {
            out.push_str(&format!(
                "  {i} [label=\"{p}\", class=\"{}\"];\n",
                self.classes[i]
            ));
        }
        for (u, list) in self.adjacency.iter().enumerate() {
            for &(mv, v) in list {
                if u < v {
                    out.push_str(&format!("  {u} -- {v} [label=\"{mv}\"];\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, p)| {
                serde_json::json!({
                    "id": i,
                    "steps": p.to_string(),
                    "class": self.classes[i].to_string(),
                    "degree": self.degree(i),
                })
            })
            .collect();
        let mut edges = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &(mv, v) in list {
                if u < v {
                    edges.push(serde_json::json!({
                        "source": u,
                        "target": v,
                        "move": mv.to_string(),
                    }));
                }
            }
        }
        serde_json::json!({
            "m": self.m,
            "n": self.n,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BottleneckReport {
    pub sep_size: usize,
    pub side_a_size: usize,
    pub side_b_size: usize,
    /// Sizes of the components left after deleting the separator.
    pub component_sizes: Vec<usize>,
}

/// Deletes the separator class and checks that exactly two components
/// remain, equal to the `SideA` and `SideB` classes.
pub fn verify_bottleneck(kernel: &KernelGraph) -> Result<BottleneckReport> {
    if kernel.m < 2 || kernel.n < 3 {
        return Err(Error::TooSmall(format!(
            "bottleneck needs m >= 2 and n >= 3, got m={}, n={}",
            kernel.m, kernel.n
        )));
    }
    let removed: Vec<bool> = kernel
        .classes
        .iter()
        .map(|&c| c == VertexClass::Separator)
        .collect();
    let comps = kernel.graph().components_without(&removed);
    let side_a = kernel.class_members(VertexClass::SideA);
    let side_b = kernel.class_members(VertexClass::SideB);
    let sep_size = kernel.len() - side_a.len() - side_b.len();
    if sep_size != kernel.n + 1 {
        return Err(Error::SeparationFailure(format!(
            "separator has {sep_size} vertices, expected {}",
            kernel.n + 1
        )));
    }
    let matches = comps.len() == 2
        && ((comps[0] == side_a && comps[1] == side_b)
            || (comps[0] == side_b && comps[1] == side_a));
    if !matches {
        return Err(Error::SeparationFailure(format!(
            "{} components of sizes {:?}; classes have sizes {} and {}",
            comps.len(),
            comps.iter().map(Vec::len).collect::<Vec<_>>(),
            side_a.len(),
            side_b.len()
        )));
    }
    Ok(BottleneckReport {
        sep_size,
        side_a_size: side_a.len(),
        side_b_size: side_b.len(),
        component_sizes: comps.iter().map(Vec::len).collect(),
    })
}

/// Exact number of paths whose second vertical step points down:
/// `sum_{k=3}^{n-1} (k-2) c_m(n-k-1) + (n-2)` for `n >= 2`, the last term
/// counting paths whose second vertical step is the final step.
pub fn side_b_count(m: u32, n: usize) -> BigUint {
    if n < 2 || m == 0 {
        return BigUint::zero();
    }
    let c = count_series(m, n);
    let mut total = BigUint::from(n - 2);
    for k in 3..n {
        total += BigUint::from(k - 2) * &c[n - k - 1];
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: u32, s: &str) -> MonotonePath {
        MonotonePath::parse(m, s).unwrap()
    }

    #[test]
    fn validity_rules() {
        assert!(MonotonePath::parse(2, "ENES").is_ok());
        assert!(MonotonePath::parse(2, "NS").is_err());
        assert!(MonotonePath::parse(2, "S").is_err());
        assert!(MonotonePath::parse(1, "NN").is_err());
        assert!(MonotonePath::parse(1, "NEEE").is_ok());
        assert!(MonotonePath::parse(1, "NX").is_err());
    }

    #[test]
    fn horizontal_path_has_one_move() {
        for n in 1..6 {
            let moves = MonotonePath::horizontal(2, n).available_moves();
            assert_eq!(moves.len(), 1);
            assert_eq!(moves[0].0, Move::EndFlip(Step::N));
        }
        assert!(MonotonePath::horizontal(0, 4).available_moves().is_empty());
    }

    #[test]
    fn corner_switch_into_retrace_is_rejected() {
        // both switches of N E S produce a retrace
        let path = p(2, "NES");
        assert!(path.apply(Move::CornerSwitch(1)).is_none());
        assert!(path.apply(Move::CornerSwitch(2)).is_none());
        let path = p(2, "NEN");
        assert_eq!(path.apply(Move::CornerSwitch(1)), Some(p(2, "ENN")));
    }

    #[test]
    fn enes_moves() {
        // switches at 2 and 3 would create N S adjacencies
        let moves: Vec<Move> = p(2, "ENES")
            .available_moves()
            .into_iter()
            .map(|(m, _)| m)
            .collect();
        assert_eq!(moves, [Move::CornerSwitch(1), Move::EndFlip(Step::E)]);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_vertex(&p(2, "ENES")), VertexClass::SideB);
        assert_eq!(classify_vertex(&p(2, "EEEE")), VertexClass::Separator);
        assert_eq!(classify_vertex(&p(2, "ENEE")), VertexClass::Separator);
        assert_eq!(classify_vertex(&p(2, "NENE")), VertexClass::SideA);
    }

    #[test]
    fn enumeration_is_sorted_and_counted() {
        let paths = enumerate_paths(2, 4);
        assert_eq!(paths.len(), 15);
        assert!(paths.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_paths(0, 5), vec![MonotonePath::horizontal(0, 5)]);
        assert_eq!(enumerate_paths(3, 0).len(), 1);
    }

    #[test]
    fn small_bottleneck_sizes() {
        let k = build_kernel_graph(2, 4);
        let r = verify_bottleneck(&k).unwrap();
        assert_eq!((r.sep_size, r.side_a_size, r.side_b_size), (5, 7, 3));
        let k = build_kernel_graph(2, 3);
        assert_eq!(verify_bottleneck(&k).unwrap().sep_size, 4);
        assert!(matches!(
            verify_bottleneck(&build_kernel_graph(1, 4)),
            Err(Error::TooSmall(_))
        ));
    }

    #[test]
    fn zero_height_kernel_is_a_point() {
        let k = build_kernel_graph(0, 5);
        assert_eq!(k.len(), 1);
        assert_eq!(k.edge_count(), 0);
    }

    #[test]
    fn ascii_render() {
        let art = p(2, "ENES").render_ascii();
        assert_eq!(art, ". . .\n\n. +-+\n  | |\no-+ +\n");
    }
}
