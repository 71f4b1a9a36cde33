//! Posets with inconsistent pairs, coral snakes and the coral PIP
//! `C_{m,n}`, consistent order ideals, and the rooted cube complex.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;

/// A finite poset with an inconsistency relation.
///
/// The full inconsistency relation is cached alongside the minimal pairs it
/// is generated from, since ideal enumeration queries it constantly.
#[derive(Clone, Debug)]
pub struct Pip {
    /// `down[x]` holds every `y < x`.
    down: Vec<FixedBitSet>,
    /// `up[x]` holds every `y > x`.
    up: Vec<FixedBitSet>,
    inconsistent: Vec<FixedBitSet>,
    minimal_pairs: Vec<(usize, usize)>,
}

impl Pip {
    /// Builds a PIP from a strict order `lt(x, y)` and a full inconsistency
    /// relation `inc(x, y)`, checking the order and PIP axioms.
    pub fn new(
        size: usize,
        lt: impl Fn(usize, usize) -> bool,
        inc: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        let mut inconsistent = vec![FixedBitSet::with_capacity(size); size];
        for x in 0..size {
            for y in 0..size {
                if lt(y, x) {
                    down[x].insert(y);
                    up[y].insert(x);
                }
                if inc(x, y) {
                    inconsistent[x].insert(y);
                }
            }
        }
        let pip = Pip::from_parts(down, up, inconsistent);
        pip.check_axioms()?;
        Ok(pip)
    }

    /// Builds a PIP from a strict order and its minimal inconsistent pairs;
    /// the full relation is their upward closure.
    pub fn from_minimal_pairs(
        size: usize,
        lt: impl Fn(usize, usize) -> bool,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let mut down = vec![FixedBitSet::with_capacity(size); size];
        let mut up = vec![FixedBitSet::with_capacity(size); size];
        for x in 0..size {
            for y in 0..size {
                if lt(y, x) {
                    down[x].insert(y);
                    up[y].insert(x);
                }
            }
        }
        let mut inconsistent = vec![FixedBitSet::with_capacity(size); size];
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::InvalidInput(format!("pair ({a}, {b}) out of range")));
            }
            let mut ua = up[a].clone();
            ua.insert(a);
            let mut ub = up[b].clone();
            ub.insert(b);
            for x in ua.ones() {
                inconsistent[x].union_with(&ub);
            }
            for y in ub.ones() {
                inconsistent[y].union_with(&ua);
            }
        }
        let pip = Pip::from_parts(down, up, inconsistent);
        pip.check_axioms()?;
        Ok(pip)
    }

    /// A chain `0 < 1 < ... < k-1` with no inconsistencies.
    pub fn chain(k: usize) -> Self {
        Pip::new(k, |x, y| x < y, |_, _| false).expect("a chain is a PIP")
    }

    pub fn empty() -> Self {
        Pip::chain(0)
    }

    fn from_parts(
        down: Vec<FixedBitSet>,
        up: Vec<FixedBitSet>,
        inconsistent: Vec<FixedBitSet>,
    ) -> Self {
        let size = down.len();
        let mut minimal_pairs = Vec::new();
        for x in 0..size {
            for y in inconsistent[x].ones().filter(|&y| x < y) {
                let below_x = down[x].ones().any(|x2| inconsistent[x2].contains(y));
                let below_y = down[y].ones().any(|y2| inconsistent[x].contains(y2));
                let below_both = down[x]
                    .ones()
                    .any(|x2| down[y].ones().any(|y2| inconsistent[x2].contains(y2)));
                if !(below_x || below_y || below_both) {
                    minimal_pairs.push((x, y));
                }
            }
        }
        Pip {
            down,
            up,
            inconsistent,
            minimal_pairs,
        }
    }

    fn check_axioms(&self) -> Result<()> {
        let size = self.len();
        for x in 0..size {
            if self.down[x].contains(x) {
                return Err(Error::AxiomViolation(format!("{x} < {x}")));
            }
            for y in self.down[x].ones() {
                if self.down[y].contains(x) {
                    return Err(Error::AxiomViolation(format!("{x} < {y} < {x}")));
                }
                if !self.down[y].is_subset(&self.down[x]) {
                    return Err(Error::AxiomViolation(format!(
                        "order is not transitive below {x}"
                    )));
                }
            }
            if self.inconsistent[x].contains(x) {
                return Err(Error::AxiomViolation(format!(
                    "{x} is inconsistent with itself"
                )));
            }
            for y in self.inconsistent[x].ones() {
                if !self.inconsistent[y].contains(x) {
                    return Err(Error::AxiomViolation(format!(
                        "inconsistency {x}, {y} is not symmetric"
                    )));
                }
                if self.up[x].contains(y) || self.up[y].contains(x) {
                    return Err(Error::AxiomViolation(format!(
                        "comparable pair {x}, {y} is inconsistent"
                    )));
                }
                if self.up[x].intersection(&self.up[y]).next().is_some() {
                    return Err(Error::AxiomViolation(format!(
                        "inconsistent pair {x}, {y} has a common upper bound"
                    )));
                }
                for x2 in self.up[x].ones() {
                    if !self.inconsistent[x2].contains(y) {
                        return Err(Error::AxiomViolation(format!(
                            "inconsistency {x}, {y} is not inherited by {x2}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn is_inconsistent(&self, x: usize, y: usize) -> bool {
        self.inconsistent[x].contains(y)
    }

    /// Minimal inconsistent pairs `(x, y)` with `x < y` as indices.
    pub fn minimal_pairs(&self) -> &[(usize, usize)] {
        &self.minimal_pairs
    }

    /// Cover relations `x < y` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.len() {
            for x in self.down[y].ones() {
                let between = self.up[x].intersection(&self.down[y]).next().is_some();
                if !between {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether `set` is downward closed and free of inconsistent pairs.
    pub fn is_consistent_ideal(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|x| {
            self.down[x].is_subset(set) && self.inconsistent[x].intersection(set).next().is_none()
        })
    }

    /// Elements of `ideal` with nothing above them in `ideal`.
    pub fn maximal_elements(&self, ideal: &FixedBitSet) -> Vec<usize> {
        ideal
            .ones()
            .filter(|&x| self.up[x].intersection(ideal).next().is_none())
            .collect()
    }

    /// Elements that can be added to `ideal` keeping it a consistent ideal.
    pub fn addable(&self, ideal: &FixedBitSet) -> Vec<usize> {
        (0..self.len())
            .filter(|&x| {
                !ideal.contains(x)
                    && self.down[x].is_subset(ideal)
                    && self.inconsistent[x].intersection(ideal).next().is_none()
            })
            .collect()
    }
}

/// Consistent order ideals with their Hasse graph (ideals joined when they
/// differ by one element). Index 0 is the empty ideal.
#[derive(Clone, Debug)]
pub struct IdealGraph {
    pub ideals: Vec<FixedBitSet>,
    pub graph: UndirectedGraph,
    index: HashMap<FixedBitSet, usize>,
}

impl IdealGraph {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn index_of(&self, ideal: &FixedBitSet) -> Option<usize> {
        self.index.get(ideal).copied()
    }
}

/// Enumerates all consistent ideals breadth-first by size from the empty
/// ideal, adding elements in index order. Frontiers expand in parallel and
/// merge in order, so indices do not depend on the thread count.
pub fn ideal_graph(pip: &Pip) -> IdealGraph {
    let empty = FixedBitSet::with_capacity(pip.len());
    let mut ideals = vec![empty.clone()];
    let mut index = HashMap::from([(empty, 0usize)]);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let children: Vec<Vec<FixedBitSet>> = frontier
            .par_iter()
            .map(|&i| {
                pip.addable(&ideals[i])
                    .into_iter()
                    .map(|x| {
                        let mut next = ideals[i].clone();
                        next.insert(x);
                        next
                    })
                    .collect()
            })
            .collect();
        let mut next_frontier = Vec::new();
        for (&parent, kids) in frontier.iter().zip(children) {
            for kid in kids {
                let id = match index.get(&kid) {
                    Some(&id) => id,
                    None => {
                        let id = ideals.len();
                        index.insert(kid.clone(), id);
                        ideals.push(kid);
                        next_frontier.push(id);
                        id
                    }
                };
                edges.push((parent, id));
            }
        }
        frontier = next_frontier;
    }
    let graph = UndirectedGraph::from_edges(ideals.len(), &edges);
    IdealGraph {
        ideals,
        graph,
        index,
    }
}

pub fn consistent_ideals(pip: &Pip) -> Vec<FixedBitSet> {
    ideal_graph(pip).ideals
}

/// A cube `C(I, L)`: the ideals `I \ L'` for `L' ⊆ L`, where `L` is a set
/// of maximal elements of `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    pub top: usize,
    pub removable: Vec<usize>,
}

impl Cube {
    pub fn dim(&self) -> usize {
        self.removable.len()
    }
}

#[derive(Clone, Debug)]
pub struct CubeComplex {
    pub ideals: IdealGraph,
    pub cubes: Vec<Cube>,
    max_elements: Vec<Vec<usize>>,
}

pub fn build_cube_complex(pip: &Pip) -> CubeComplex {
    let ideals = ideal_graph(pip);
    let max_elements: Vec<Vec<usize>> = ideals
        .ideals
        .iter()
        .map(|i| pip.maximal_elements(i))
        .collect();
    let mut cubes = Vec::new();
    for (top, maxes) in max_elements.iter().enumerate() {
        for mask in 0u64..(1u64 << maxes.len()) {
            let removable: Vec<usize> = (0..maxes.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| maxes[k])
                .collect();
            let cube = Cube { top, removable };
            if cube_vertices(&ideals, &cube).is_some() {
                cubes.push(cube);
            }
        }
    }
    CubeComplex {
        ideals,
        cubes,
        max_elements,
    }
}

/// Vertex indices of a cube, or `None` if one of them is not an ideal.
fn cube_vertices(ideals: &IdealGraph, cube: &Cube) -> Option<Vec<usize>> {
    let top = &ideals.ideals[cube.top];
    let k = cube.removable.len();
    (0u64..(1u64 << k))
        .map(|mask| {
            let mut v = top.clone();
            for (j, &x) in cube.removable.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    v.set(x, false);
                }
            }
            ideals.index_of(&v)
        })
        .collect()
}

/// An edge at a vertex `J`: either add or remove one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LinkVertex {
    Add(usize),
    Remove(usize),
}

impl CubeComplex {
    pub fn vertex_count(&self) -> usize {
        self.ideals.len()
    }

    pub fn cube_vertices(&self, cube: &Cube) -> Vec<usize> {
        cube_vertices(&self.ideals, cube).expect("stored cubes are valid")
    }

    /// Graph formed by the 1-dimensional cubes.
    pub fn one_skeleton(&self) -> UndirectedGraph {
        let edges: Vec<(usize, usize)> = self
            .cubes
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| {
                let v = self.cube_vertices(c);
                (v[0], v[1])
            })
            .collect();
        UndirectedGraph::from_edges(self.vertex_count(), &edges)
    }

    pub fn max_dim(&self) -> usize {
        self.cubes.iter().map(Cube::dim).max().unwrap_or(0)
    }

    fn link_vertices(&self, pip: &Pip, v: usize) -> Vec<LinkVertex> {
        let ideal = &self.ideals.ideals[v];
        let mut out: Vec<LinkVertex> = pip
            .addable(ideal)
            .into_iter()
            .map(LinkVertex::Add)
            .collect();
        out.extend(self.max_elements[v].iter().map(|&x| LinkVertex::Remove(x)));
        out
    }

    /// Whether the edges `set` at vertex `v` all lie in one cube containing `v`.
    fn spans_simplex(&self, v: usize, set: &[LinkVertex]) -> bool {
        let mut top = self.ideals.ideals[v].clone();
        let mut l = Vec::new();
        for lv in set {
            match *lv {
                LinkVertex::Add(x) => {
                    top.insert(x);
                    l.push(x);
                }
                LinkVertex::Remove(x) => l.push(x),
            }
        }
        let Some(t) = self.ideals.index_of(&top) else {
            return false;
        };
        l.iter().all(|x| self.max_elements[t].contains(x))
    }

    /// Whether the link of vertex `v` is a flag simplicial complex: every
    /// set of edges at `v` that pairwise span squares spans a cube.
    pub fn link_is_flag(&self, pip: &Pip, v: usize) -> bool {
        let lv = self.link_vertices(pip, v);
        let k = lv.len();
        assert!(k < 32, "link too large for subset scan");
        let mut pairwise = vec![vec![false; k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let ok = self.spans_simplex(v, &[lv[i], lv[j]]);
                pairwise[i][j] = ok;
                pairwise[j][i] = ok;
            }
        }
        (0u32..(1u32 << k))
            .filter(|m| m.count_ones() >= 3)
            .all(|mask| {
                let members: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                let clique = members
                    .iter()
                    .enumerate()
                    .all(|(a, &i)| members[a + 1..].iter().all(|&j| pairwise[i][j]));
                if !clique {
                    return true;
                }
                let set: Vec<LinkVertex> = members.iter().map(|&i| lv[i]).collect();
                self.spans_simplex(v, &set)
            })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph cube_complex {\n");
        for (i, ideal) in self.ideals.ideals.iter().enumerate() {
            let members: Vec<String> = ideal.ones().map(|x| x.to_string()).collect();
            out.push_str(&format!("  {i} [label=\"{{{}}}\"];\n", members.join(",")));
        }
        for (u, v) in self.one_skeleton().edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Step of a coral snake.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SnakeStep {
    Up,
    Down,
    Right,
}

impl SnakeStep {
    fn as_char(self) -> char {
        match self {
            SnakeStep::Up => 'U',
            SnakeStep::Down => 'D',
            SnakeStep::Right => 'R',
        }
    }
}

/// An oriented path of unit squares starting at the bottom-left cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoralSnake {
    steps: Vec<SnakeStep>,
    /// `(col, row)` positions.
    cells: Vec<(u32, u32)>,
}

impl CoralSnake {
    /// Validates steps against the strip of `m` cell rows and the corner
    /// rule.
    pub fn new(m: u32, steps: Vec<SnakeStep>) -> Result<Self> {
        let mut cells = vec![(0u32, 0u32)];
        let (mut col, mut row) = (0i64, 0i64);
        let mut prev: Option<SnakeStep> = None;
        for &s in &steps {
            if matches!(
                (prev, s),
                (Some(SnakeStep::Up), SnakeStep::Down) | (Some(SnakeStep::Down), SnakeStep::Up)
            ) {
                return Err(Error::InvalidInput("snake reverses direction".into()));
            }
            match s {
                SnakeStep::Up => row += 1,
                SnakeStep::Down => row -= 1,
                SnakeStep::Right => col += 1,
            }
            if row < 0 || row >= m as i64 {
                return Err(Error::InvalidInput(format!(
                    "snake leaves the {m} cell rows"
                )));
            }
            cells.push((col as u32, row as u32));
            prev = Some(s);
        }
        if !corner_rule_holds(&steps) {
            return Err(Error::InvalidInput(
                "snake breaks the corner colour rule".into(),
            ));
        }
        Ok(CoralSnake { steps, cells })
    }

    pub fn steps(&self) -> &[SnakeStep] {
        &self.steps
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    /// Number of cells.
    pub fn length(&self) -> usize {
        self.cells.len()
    }

    pub fn height(&self) -> usize {
        let mut rows: Vec<u32> = self.cells.iter().map(|c| c.1).collect();
        rows.sort_unstable();
        rows.dedup();
        rows.len()
    }

    pub fn width(&self) -> usize {
        self.cells.last().map_or(0, |c| c.0 as usize + 1)
    }

    /// Whether `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &CoralSnake) -> bool {
        other.steps.starts_with(&self.steps)
    }

    /// Step word such as `URR`; `.` for the single cell.
    pub fn code(&self) -> String {
        if self.steps.is_empty() {
            ".".into()
        } else {
            self.steps.iter().map(|s| s.as_char()).collect()
        }
    }
}

/// Corner colour rule. Cells are coloured by index parity. For every
/// vertical run, horizontal run, vertical run sequence, the corner cells
/// where the horizontal run starts and ends have the same colour exactly
/// when the two vertical runs point the same way. The first column counts
/// as an upward vertical run even when it is a single cell.
fn corner_rule_holds(steps: &[SnakeStep]) -> bool {
    // (is_vertical, direction, index of the last cell of the run)
    let mut runs: Vec<(bool, SnakeStep, usize)> = Vec::new();
    if steps.first() != Some(&SnakeStep::Up) {
        runs.push((true, SnakeStep::Up, 0));
    }
    for (k, &s) in steps.iter().enumerate() {
        let cell = k + 1;
        let vertical = s != SnakeStep::Right;
        match runs.last_mut() {
            Some(r) if r.1 == s => r.2 = cell,
            _ => runs.push((vertical, s, cell)),
        }
    }
    runs.windows(3).all(|w| {
        if !(w[0].0 && !w[1].0 && w[2].0) {
            return true;
        }
        let c1 = w[0].2;
        let c2 = w[1].2;
        let same_colour = (c2 - c1) % 2 == 0;
        same_colour == (w[0].1 == w[2].1)
    })
}

/// All coral snakes fitting `C_{m,n}`: at most `m` rows and
/// `length + width - 1 <= n`. Sorted by cell sequence.
pub fn enumerate_snakes(m: u32, n: usize) -> Vec<CoralSnake> {
    fn rec(
        m: u32,
        n: usize,
        row: u32,
        width: usize,
        steps: &mut Vec<SnakeStep>,
        out: &mut Vec<CoralSnake>,
    ) {
        if steps.len() + 1 + width - 1 > n {
            return;
        }
        if let Ok(s) = CoralSnake::new(m, steps.clone()) {
            out.push(s);
        }
        let prev = steps.last().copied();
        for s in [SnakeStep::Up, SnakeStep::Down, SnakeStep::Right] {
            let (ok, nrow, nwidth) = match s {
                SnakeStep::Up => (row + 1 < m && prev != Some(SnakeStep::Down), row + 1, width),
                SnakeStep::Down => (
                    row > 0 && prev != Some(SnakeStep::Up),
                    row.wrapping_sub(1),
                    width,
                ),
                SnakeStep::Right => (true, row, width + 1),
            };
            if ok {
                steps.push(s);
                rec(m, n, nrow, nwidth, steps, out);
                steps.pop();
            }
        }
    }
    let mut out = Vec::new();
    if m >= 1 && n >= 1 {
        rec(m, n, 0, 1, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| a.cells.cmp(&b.cells));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberedSnake {
    /// Index into [`CoralPip::snakes`].
    pub snake: usize,
    pub label: usize,
}

/// The coral PIP `C_{m,n}`: numbered snakes `(λ, s)` with
/// `(λ, s) <= (μ, t)` iff `λ` is a prefix of `μ` and `s >= t`, and
/// `(λ, s)`, `(μ, t)` inconsistent iff neither snake is a prefix of the
/// other.
#[derive(Clone, Debug)]
pub struct CoralPip {
    pub m: u32,
    pub n: usize,
    pub snakes: Vec<CoralSnake>,
    /// Sorted by snake, then by label descending.
    pub elements: Vec<NumberedSnake>,
    pub pip: Pip,
}

pub fn build_pip(m: u32, n: usize) -> Result<CoralPip> {
    let snakes = enumerate_snakes(m, n);
    let mut elements = Vec::new();
    for (i, s) in snakes.iter().enumerate() {
        let max_label = n + 1 - s.length() - s.width();
        for label in (0..=max_label).rev() {
            elements.push(NumberedSnake { snake: i, label });
        }
    }
    let prefix: Vec<Vec<bool>> = snakes
        .iter()
        .map(|a| snakes.iter().map(|b| a.is_prefix_of(b)).collect())
        .collect();
    let lt = |x: usize, y: usize| {
        let (a, b) = (&elements[x], &elements[y]);
        x != y && prefix[a.snake][b.snake] && a.label >= b.label
    };
    let inc = |x: usize, y: usize| {
        let (a, b) = (elements[x].snake, elements[y].snake);
        !prefix[a][b] && !prefix[b][a]
    };
    let direct = Pip::new(elements.len(), lt, inc)?;
    // The relation must also be the upward closure of its minimal pairs.
    let generated = Pip::from_minimal_pairs(elements.len(), lt, direct.minimal_pairs())?;
    if generated.inconsistent != direct.inconsistent {
        return Err(Error::AxiomViolation(
            "inconsistency is not generated by its minimal pairs".into(),
        ));
    }
    Ok(CoralPip {
        m,
        n,
        snakes,
        elements,
        pip: direct,
    })
}

/// Ideal classes around an inconsistent pair `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BottleneckPartition {
    pub sep: Vec<usize>,
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl CoralPip {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element_index(&self, steps: &[SnakeStep], label: usize) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| self.snakes[e.snake].steps == steps && e.label == label)
    }

    pub fn element_name(&self, x: usize) -> String {
        let e = &self.elements[x];
        format!("{}/{}", self.snakes[e.snake].code(), e.label)
    }

    /// `a` = vertical domino labelled `n-2`, `b` = horizontal domino
    /// labelled `n-3`.
    pub fn low_inconsistent_pair(&self) -> Result<(usize, usize)> {
        if self.m < 2 || self.n < 3 {
            return Err(Error::TooSmall(format!(
                "low inconsistent pair needs m >= 2 and n >= 3, got m={}, n={}",
                self.m, self.n
            )));
        }
        let a = self
            .element_index(&[SnakeStep::Up], self.n - 2)
            .expect("vertical domino exists");
        let b = self
            .element_index(&[SnakeStep::Right], self.n - 3)
            .expect("horizontal domino exists");
        Ok((a, b))
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph C_{}_{} {{\n  rankdir=BT;\n", self.m, self.n);
        for x in 0..self.len() {
            out.push_str(&format!("  {x} [label=\"{}\"];\n", self.element_name(x)));
        }
        for (x, y) in self.pip.covers() {
            out.push_str(&format!("  {x} -> {y};\n"));
        }
        for &(x, y) in self.pip.minimal_pairs() {
            out.push_str(&format!("  {x} -> {y} [style=dashed, dir=none];\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn bottleneck_partition(ideals: &[FixedBitSet], a: usize, b: usize) -> BottleneckPartition {
    let mut part = BottleneckPartition {
        sep: Vec::new(),
        side_a: Vec::new(),
        side_b: Vec::new(),
    };
    for (i, ideal) in ideals.iter().enumerate() {
        match (ideal.contains(a), ideal.contains(b)) {
            (true, _) => part.side_a.push(i),
            (false, true) => part.side_b.push(i),
            (false, false) => part.sep.push(i),
        }
    }
    part
}

impl fmt::Display for CoralSnake {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SnakeStep::*;

    #[test]
    fn corner_rule_examples() {
        assert!(corner_rule_holds(&[]));
        assert!(corner_rule_holds(&[Right]));
        // first column up, one right step, then up: odd gap needs opposite
        assert!(!corner_rule_holds(&[Right, Up]));
        assert!(corner_rule_holds(&[Right, Right, Up]));
        assert!(corner_rule_holds(&[Up, Right, Down]));
        assert!(!corner_rule_holds(&[Up, Right, Up]));
    }

    #[test]
    fn height_one_snakes_are_horizontal() {
        let s = enumerate_snakes(1, 6);
        assert!(s.iter().all(|x| x.steps.iter().all(|&t| t == Right)));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn c24_has_ten_elements() {
        let c = build_pip(2, 4).unwrap();
        assert_eq!(c.len(), 10);
    }

    #[test]
    fn smallest_pip() {
        let c = build_pip(3, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.pip.minimal_pairs().is_empty());
        assert_eq!(consistent_ideals(&c.pip).len(), 2);
    }

    #[test]
    fn empty_pip_has_one_ideal() {
        assert_eq!(consistent_ideals(&Pip::empty()).len(), 1);
    }

    #[test]
    fn chain_complex_is_a_path() {
        let p = Pip::chain(4);
        let cc = build_cube_complex(&p);
        assert_eq!(cc.vertex_count(), 5);
        assert_eq!(cc.one_skeleton().edge_count(), 4);
        assert_eq!(cc.max_dim(), 1);
    }

    #[test]
    fn axiom_violation_detected() {
        // 0 < 1 while 0 and 1 are inconsistent
        let r = Pip::new(2, |x, y| x == 0 && y == 1, |x, y| x != y);
        assert!(matches!(r, Err(Error::AxiomViolation(_))));
        // inconsistency not inherited upward: 0 < 2, 0 # 1 but not 2 # 1
        let r = Pip::new(
            3,
            |x, y| x == 0 && y == 2,
            |x, y| (x, y) == (0, 1) || (x, y) == (1, 0),
        );
        assert!(matches!(r, Err(Error::AxiomViolation(_))));
    }

    #[test]
    fn minimal_pairs_generate_relation() {
        let c = build_pip(2, 5).unwrap();
        let lt = |x, y| c.pip.lt(x, y);
        let g = Pip::from_minimal_pairs(c.len(), lt, c.pip.minimal_pairs()).unwrap();
        for x in 0..c.len() {
            for y in 0..c.len() {
                assert_eq!(g.is_inconsistent(x, y), c.pip.is_inconsistent(x, y));
            }
        }
    }

    #[test]
    fn low_pair_small_cases() {
        let c = build_pip(2, 3).unwrap();
        let (a, b) = c.low_inconsistent_pair().unwrap();
        assert_eq!(c.elements[b].label, 0);
        assert!(c.pip.is_inconsistent(a, b));
        assert!(matches!(
            build_pip(1, 5).unwrap().low_inconsistent_pair(),
            Err(Error::TooSmall(_))
        ));
    }

    #[test]
    fn c24_partition() {
        let c = build_pip(2, 4).unwrap();
        let (a, b) = c.low_inconsistent_pair().unwrap();
        let part = bottleneck_partition(&consistent_ideals(&c.pip), a, b);
        assert_eq!(
            (part.sep.len(), part.side_a.len(), part.side_b.len()),
            (5, 7, 3)
        );
    }
}
