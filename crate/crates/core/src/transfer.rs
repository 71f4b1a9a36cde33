//! Transfer-matrix enumeration of monotone paths in a strip.
//!
//! A path of length `n` is encoded by its successive height pairs
//! `(h_{i-1}, h_i)`, which are walks of length `n` from `(0,0)` in the
//! transfer graph `G_m`. Everything here is exact.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg;
use crate::poly::{IntPolynomial, RationalGF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HeightPair {
    pub prev: u32,
    pub cur: u32,
}

impl HeightPair {
    pub fn new(prev: u32, cur: u32) -> Self {
        debug_assert!(prev.abs_diff(cur) <= 1);
        HeightPair { prev, cur }
    }
}

/// The directed graph on height pairs with an edge `(i,j) -> (j,k)` unless
/// the step `j -> k` would retrace `i -> j`.
#[derive(Clone, Debug)]
pub struct TransferGraph {
    pub m: u32,
    /// Height pairs in lexicographic order; index 0 is `(0,0)`.
    pub vertices: Vec<HeightPair>,
    pub edges: Vec<(usize, usize)>,
    successors: Vec<Vec<usize>>,
}

pub fn build_transfer_graph(m: u32) -> TransferGraph {
    let mut vertices = Vec::with_capacity(3 * m as usize + 1);
    for i in 0..=m {
        if i >= 1 {
            vertices.push(HeightPair::new(i, i - 1));
        }
        vertices.push(HeightPair::new(i, i));
        if i < m {
            vertices.push(HeightPair::new(i, i + 1));
        }
    }
    let index = |hp: HeightPair| vertices.binary_search(&hp).ok();
    let mut edges = Vec::new();
    let mut successors = vec![Vec::new(); vertices.len()];
    for (u, &HeightPair { prev: i, cur: j }) in vertices.iter().enumerate() {
        let lo = j.saturating_sub(1);
        let hi = (j + 1).min(m);
        for k in lo..=hi {
            let retrace = j.abs_diff(i) == 1 && k == i;
            if retrace {
                continue;
            }
            let v = index(HeightPair::new(j, k)).expect("height pair in range");
            edges.push((u, v));
            successors[u].push(v);
        }
    }
    TransferGraph {
        m,
        vertices,
        edges,
        successors,
    }
}

impl TransferGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.successors[u]
    }

    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        let n = self.len();
        let mut a = vec![vec![0u8; n]; n];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
        }
        a
    }

    /// `I - x A` evaluated at an integer point, optionally with row `00`
    /// replaced by ones.
    fn i_minus_xa_at(&self, x: &BigInt, ones_row: bool) -> Vec<Vec<BigInt>> {
        let n = self.len();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        for &(u, v) in &self.edges {
            out[u][v] -= x;
        }
        if ones_row {
            out[0] = vec![BigInt::one(); n];
        }
        out
    }
}

/// `c_m(0), ..., c_m(n_max)` by iterated vector-matrix products from the
/// indicator of `(0,0)`.
pub fn count_series(m: u32, n_max: usize) -> Vec<BigUint> {
    let g = build_transfer_graph(m);
    let mut v = vec![BigUint::zero(); g.len()];
    v[0] = BigUint::one();
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(BigUint::one());
    for _ in 0..n_max {
        let mut next = vec![BigUint::zero(); g.len()];
        for (u, w) in v.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for &s in g.successors(u) {
                next[s] += w;
            }
        }
        v = next;
        out.push(v.iter().sum());
    }
    out
}

/// Number of monotone paths of length `n` in the strip of height `m`.
pub fn count_paths(m: u32, n: usize) -> BigUint {
    count_series(m, n).pop().expect("series is nonempty")
}

/// `a_m(x) = det(A_m - x I)` via the three-term recurrence.
pub fn charpoly(m: u32) -> IntPolynomial {
    let a0 = IntPolynomial::from_i64s(&[1, -1]);
    let a1 = IntPolynomial::from_i64s(&[-1, 0, 1, -2, 1]);
    if m == 0 {
        return a0;
    }
    let factor = IntPolynomial::from_i64s(&[-1, -1, 1, -1]);
    let x4 = IntPolynomial::monomial(BigInt::one(), 4);
    let (mut prev, mut cur) = (a0, a1);
    for _ in 2..=m {
        let next = &(&factor * &cur) - &(&x4 * &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `det(I - x A_m)` computed by evaluation at `3m+2` integer nodes and
/// exact interpolation.
pub fn det_i_minus_xa(m: u32) -> IntPolynomial {
    let g = build_transfer_graph(m);
    linalg::det_poly_by_interpolation(g.len(), |x| g.i_minus_xa_at(x, false))
}

/// `det` of `I - x A_m` with the row of `(0,0)` replaced by ones.
pub fn det_i_minus_xa_row00(m: u32) -> IntPolynomial {
    let g = build_transfer_graph(m);
    linalg::det_poly_by_interpolation(g.len(), |x| g.i_minus_xa_at(x, true))
}

/// `sum_n c_m(n) x^n` as a reduced rational function.
pub fn generating_function(m: u32) -> RationalGF {
    RationalGF::reduced(&det_i_minus_xa_row00(m), &det_i_minus_xa(m))
}

/// `u_m(n) = c_m(n-4) + 2 c_m(n-5) + ... + (n-3) c_m(0)`; zero for `n < 4`.
pub fn u_series(m: u32, n: usize) -> BigUint {
    if n < 4 {
        return BigUint::zero();
    }
    let c = count_series(m, n - 4);
    (0..=n - 4)
        .map(|j| BigUint::from(j + 1) * &c[n - 4 - j])
        .sum()
}
