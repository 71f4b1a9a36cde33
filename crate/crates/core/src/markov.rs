//! The symmetric chain `M_{m,n}` and the lazy simple chain `N^p_{m,n}` on
//! monotone paths: exact transition matrices, stationarity, spectra,
//! conductance, total-variation evolution, mixing-time lower bounds and
//! simulation.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{KernelGraph, MonotonePath, Move, Step, VertexClass};

/// Above this many states `lambda_max` switches from a dense eigensolver
/// to deflated power iteration.
pub const DENSE_LIMIT: usize = 5000;
/// Largest state space for the exhaustive conductance scan.
pub const EXACT_PHI_CAP: usize = 22;
/// Largest state space for which `d(t)` is maximised over every start.
pub const FULL_START_LIMIT: usize = 500;
pub const POWER_ITERATION_CAP: usize = 200_000;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainSpec {
    Symmetric,
    LazySimple {
        p: BigRational,
    },
    /// The simple walk without holding (`p = 1`); periodic, only for tests.
    #[doc(hidden)]
    NonLazyWalk,
}

impl ChainSpec {
    pub fn lazy(p: BigRational) -> Result<Self> {
        if !(p.is_positive() && p < BigRational::one()) {
            return Err(Error::DomainError(format!(
                "laziness p = {p} must lie in (0, 1)"
            )));
        }
        Ok(ChainSpec::LazySimple { p })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChainSpec::Symmetric => "sym",
            ChainSpec::LazySimple { .. } => "lazy",
            ChainSpec::NonLazyWalk => "walk",
        }
    }
}

/// Parses `1/2`, `0.25` or `1` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse {text:?} as a rational"));
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let num: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(num, den);
        Ok(if neg { -r } else { r })
    } else {
        t.parse::<BigRational>().map_err(|_| bad())
    }
}

/// Row-sparse transition matrix with exact entries.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    rows: Vec<Vec<(usize, BigRational)>>,
}

impl StochasticMatrix {
    /// Builds from `(column, weight)` lists; repeated columns are summed and
    /// zero entries dropped.
    pub fn from_rows(rows: Vec<Vec<(usize, BigRational)>>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| {
                let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (c, w) in r {
                    *acc.entry(c).or_insert_with(BigRational::zero) += w;
                }
                acc.into_iter().filter(|(_, w)| !w.is_zero()).collect()
            })
            .collect();
        StochasticMatrix { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, x: usize) -> &[(usize, BigRational)] {
        &self.rows[x]
    }

    pub fn get(&self, x: usize, y: usize) -> BigRational {
        match self.rows[x].binary_search_by_key(&y, |e| e.0) {
            Ok(k) => self.rows[x][k].1.clone(),
            Err(_) => BigRational::zero(),
        }
    }

    pub fn row_sum(&self, x: usize) -> BigRational {
        self.rows[x].iter().map(|e| &e.1).sum()
    }

    pub fn rows_sum_to_one(&self) -> bool {
        (0..self.len()).all(|x| self.row_sum(x).is_one())
            && self.rows.iter().flatten().all(|e| !e.1.is_negative())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|x| self.rows[x].iter().all(|(y, w)| self.get(*y, x) == *w))
    }

    pub fn float_rows(&self) -> Vec<Vec<(usize, f64)>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(c, w)| (*c, w.to_f64().unwrap())).collect())
            .collect()
    }

    /// Column lists `(row, weight)`, i.e. the transpose.
    fn columns(&self) -> Vec<Vec<(usize, BigRational)>> {
        let mut cols = vec![Vec::new(); self.len()];
        for (x, r) in self.rows.iter().enumerate() {
            for (y, w) in r {
                cols[*y].push((x, w.clone()));
            }
        }
        cols
    }

    /// `mu P` in exact arithmetic.
    pub fn apply_left(&self, mu: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.len()];
        for (x, r) in self.rows.iter().enumerate() {
            if mu[x].is_zero() {
                continue;
            }
            for (y, w) in r {
                out[*y] += &mu[x] * w;
            }
        }
        out
    }
}

/// Exact probability vector indexed by canonical vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    pub weights: Vec<BigRational>,
}

impl Distribution {
    pub fn uniform(n: usize) -> Self {
        Distribution {
            weights: vec![rat(1, n as i64); n],
        }
    }

    pub fn point(n: usize, x: usize) -> Self {
        let mut weights = vec![BigRational::zero(); n];
        weights[x] = BigRational::one();
        Distribution { weights }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(|w| w.to_f64().unwrap()).collect()
    }

    pub fn mass(&self, set: &[usize]) -> BigRational {
        set.iter().map(|&x| &self.weights[x]).sum()
    }
}

/// The `2n` equally likely outcomes of one step of the symmetric chain at
/// `x`: two per interior vertex (both the same corner switch), then the two
/// end-flip branches. Infeasible choices stay at `x`.
fn symmetric_outcomes(kernel: &KernelGraph, x: usize) -> Vec<usize> {
    let path: &MonotonePath = &kernel.vertices[x];
    let n = kernel.n;
    let target = |mv: Move| {
        kernel.adjacency[x]
            .iter()
            .find(|(m, _)| *m == mv)
            .map_or(x, |&(_, y)| y)
    };
    let mut out = Vec::with_capacity(2 * n);
    for i in 1..n {
        let y = target(Move::CornerSwitch(i));
        out.push(y);
        out.push(y);
    }
    let last = path.steps()[n - 1];
    if last.is_vertical() {
        out.push(target(Move::EndFlip(Step::E)));
        out.push(x);
    } else {
        out.push(target(Move::EndFlip(Step::N)));
        out.push(target(Move::EndFlip(Step::S)));
    }
    out
}

pub fn build_chain(kernel: &KernelGraph, spec: &ChainSpec) -> Result<StochasticMatrix> {
    let size = kernel.len();
    let rows: Vec<Vec<(usize, BigRational)>> = match spec {
        ChainSpec::Symmetric => {
            if kernel.n == 0 {
                return Err(Error::DomainError(
                    "the symmetric chain needs n >= 1".into(),
                ));
            }
            let w = rat(1, 2 * kernel.n as i64);
            (0..size)
                .into_par_iter()
                .map(|x| {
                    symmetric_outcomes(kernel, x)
                        .into_iter()
                        .map(|y| (y, w.clone()))
                        .collect()
                })
                .collect()
        }
        ChainSpec::LazySimple { .. } | ChainSpec::NonLazyWalk => {
            let p = match spec {
                ChainSpec::LazySimple { p } => p.clone(),
                _ => BigRational::one(),
            };
            if let Some(x) = (0..size).find(|&x| kernel.degree(x) == 0) {
                return Err(Error::IsolatedVertex(x));
            }
            (0..size)
                .map(|x| {
                    let d = kernel.degree(x) as i64;
                    let step = &p / BigInt::from(d);
                    let mut r: Vec<(usize, BigRational)> = kernel.adjacency[x]
                        .iter()
                        .map(|&(_, y)| (y, step.clone()))
                        .collect();
                    r.push((x, BigRational::one() - &p));
                    r
                })
                .collect()
        }
    };
    Ok(StochasticMatrix::from_rows(rows))
}

/// Stationary distribution of a reversible irreducible chain, found by
/// detailed balance along a BFS tree and then checked exactly against
/// `pi P = pi`.
pub fn stationary(p: &StochasticMatrix) -> Result<Distribution> {
    let size = p.len();
    if size == 0 {
        return Err(Error::DomainError("empty state space".into()));
    }
    let mut w: Vec<Option<BigRational>> = vec![None; size];
    w[0] = Some(BigRational::one());
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let wx = w[x].clone().unwrap();
        for (y, pxy) in p.row(x) {
            if w[*y].is_none() {
                let pyx = p.get(*y, x);
                if pyx.is_zero() {
                    return Err(Error::DomainError(format!(
                        "P({x},{y}) > 0 but P({y},{x}) = 0; chain is not reversible"
                    )));
                }
                w[*y] = Some(&wx * pxy / pyx);
                queue.push_back(*y);
            }
        }
    }
    if w.iter().any(Option::is_none) {
        return Err(Error::DomainError("chain is not irreducible".into()));
    }
    let w: Vec<BigRational> = w.into_iter().map(Option::unwrap).collect();
    let total: BigRational = w.iter().sum();
    let pi = Distribution {
        weights: w.into_iter().map(|x| x / &total).collect(),
    };
    if p.apply_left(&pi.weights) != pi.weights {
        return Err(Error::DomainError("chain is not reversible".into()));
    }
    Ok(pi)
}

/// Whether `pi(x) P(x,y) = pi(y) P(y,x)` for every pair, exactly.
pub fn detailed_balance_holds(p: &StochasticMatrix, pi: &Distribution) -> bool {
    (0..p.len()).all(|x| {
        p.row(x)
            .iter()
            .all(|(y, pxy)| &pi.weights[x] * pxy == &pi.weights[*y] * p.get(*y, x))
    })
}

/// Rows of the symmetrised operator `D^{1/2} P D^{-1/2}`.
fn symmetrized_rows(p: &StochasticMatrix, pi: &[f64]) -> Vec<Vec<(usize, f64)>> {
    let sq: Vec<f64> = pi.iter().map(|v| v.sqrt()).collect();
    p.float_rows()
        .into_iter()
        .enumerate()
        .map(|(x, r)| r.into_iter().map(|(y, w)| (y, w * sq[x] / sq[y])).collect())
        .collect()
}

/// All eigenvalues of `P`, descending, via the dense symmetric solver.
pub fn spectrum(p: &StochasticMatrix, pi: &Distribution) -> Vec<f64> {
    let n = p.len();
    let rows = symmetrized_rows(p, &pi.to_f64());
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (x, r) in rows.iter().enumerate() {
        for &(y, w) in r {
            m[(x, y)] = w;
        }
    }
    // Average away rounding asymmetry.
    let m = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

pub fn lambda_max_dense(p: &StochasticMatrix, pi: &Distribution) -> f64 {
    let ev = spectrum(p, pi);
    if ev.len() < 2 {
        return 0.0;
    }
    ev[1].abs().max(ev[ev.len() - 1].abs())
}

/// Power iteration on the square of the deflated symmetrised operator, so
/// that a dominant pair `±λ` does not stall convergence.
pub fn lambda_max_iterative(p: &StochasticMatrix, pi: &Distribution, tol: f64) -> Result<f64> {
    let n = p.len();
    if n < 2 {
        return Ok(0.0);
    }
    let rows = symmetrized_rows(p, &pi.to_f64());
    let top: Vec<f64> = pi.to_f64().iter().map(|v| v.sqrt()).collect();
    let deflate = |v: &mut Vec<f64>| {
        let c: f64 = v.iter().zip(&top).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(&top).for_each(|(a, b)| *a -= c * b);
    };
    let apply = |v: &[f64]| -> Vec<f64> {
        let mut out: Vec<f64> = rows
            .par_iter()
            .map(|r| r.iter().map(|&(y, w)| w * v[y]).sum())
            .collect();
        deflate(&mut out);
        out
    };
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    deflate(&mut v);
    let nv = norm(&v);
    v.iter_mut().for_each(|a| *a /= nv);
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_ITERATION_CAP {
        let sv = apply(&v);
        let ssv = apply(&sv);
        let mu: f64 = v.iter().zip(&ssv).map(|(a, b)| a * b).sum();
        residual = norm(
            &ssv.iter()
                .zip(&v)
                .map(|(a, b)| a - mu * b)
                .collect::<Vec<_>>(),
        );
        if residual < tol * tol.max(mu.abs()).max(f64::EPSILON) || residual < 1e-14 {
            return Ok(norm(&sv));
        }
        let ns = norm(&ssv);
        if ns == 0.0 {
            return Ok(0.0);
        }
        v = ssv.into_iter().map(|a| a / ns).collect();
    }
    Err(Error::ConvergenceFailure {
        iterations: POWER_ITERATION_CAP,
        residual,
    })
}

/// Second-largest eigenvalue modulus of a reversible chain.
pub fn lambda_max(p: &StochasticMatrix, pi: &Distribution) -> Result<f64> {
    if p.len() <= DENSE_LIMIT {
        Ok(lambda_max_dense(p, pi))
    } else {
        lambda_max_iterative(p, pi, 1e-6)
    }
}

/// Ergodic flow `Q(S, S^c) = sum_{x in S, y not in S} pi(x) P(x,y)`.
pub fn boundary_flow(p: &StochasticMatrix, pi: &Distribution, set: &[usize]) -> BigRational {
    let mut inside = vec![false; p.len()];
    for &x in set {
        inside[x] = true;
    }
    let mut q = BigRational::zero();
    for &x in set {
        for (y, w) in p.row(x) {
            if !inside[*y] {
                q += &pi.weights[x] * w;
            }
        }
    }
    q
}

/// `Q(S, S^c) / pi(S)`, an upper bound on the conductance.
pub fn conductance_upper_bound(
    p: &StochasticMatrix,
    pi: &Distribution,
    set: &[usize],
) -> Result<BigRational> {
    let mass = pi.mass(set);
    if mass.is_zero() {
        return Err(Error::DomainError("set has zero stationary mass".into()));
    }
    if mass > rat(1, 2) {
        return Err(Error::HeavySide(mass.to_string()));
    }
    Ok(boundary_flow(p, pi, set) / mass)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactConductance {
    #[serde(serialize_with = "ser_rational")]
    pub phi: BigRational,
    pub set: Vec<usize>,
}

/// Exact conductance by a Gray-code scan of all subsets with
/// `0 < pi(S) <= 1/2`, tracking scaled integer masses and flows.
pub fn conductance_exact(p: &StochasticMatrix, pi: &Distribution) -> Result<ExactConductance> {
    let n = p.len();
    if n > EXACT_PHI_CAP {
        return Err(Error::TooLarge {
            what: "states for the exact conductance scan".into(),
            size: n,
            cap: EXACT_PHI_CAP,
        });
    }
    if n < 2 {
        return Err(Error::TooSmall(
            "conductance needs at least two states".into(),
        ));
    }
    let lcm_of = |it: &mut dyn Iterator<Item = BigInt>| it.fold(BigInt::one(), |a, b| a.lcm(&b));
    let l = lcm_of(&mut pi.weights.iter().map(|w| w.denom().clone()));
    let md = lcm_of(&mut p.rows.iter().flatten().map(|(_, w)| w.denom().clone()));
    let too_big = || Error::TooLarge {
        what: "bits of the scaled weights".into(),
        size: 128,
        cap: 60,
    };
    let to_i = |v: BigInt| -> Result<i128> {
        let x = v.to_i128().ok_or_else(too_big)?;
        if x.abs() >= 1i128 << 60 {
            return Err(too_big());
        }
        Ok(x)
    };
    let a: Vec<i128> = pi
        .weights
        .iter()
        .map(|w| to_i((w * BigRational::from_integer(l.clone())).to_integer()))
        .collect::<Result<_>>()?;
    // flow[x] lists (y, a_x * P(x,y) * md) for y != x
    let mut flow: Vec<Vec<(usize, i128)>> = vec![Vec::new(); n];
    for x in 0..n {
        for (y, w) in p.row(x) {
            if *y != x {
                let b = to_i((w * BigRational::from_integer(md.clone())).to_integer())?;
                flow[x].push((*y, a[x] * b));
            }
        }
    }
    let incoming: Vec<Vec<(usize, i128)>> = {
        let mut inc = vec![Vec::new(); n];
        for (x, r) in flow.iter().enumerate() {
            for &(y, f) in r {
                inc[y].push((x, f));
            }
        }
        inc
    };
    let half = to_i(l.clone())?;
    let mut inside = vec![false; n];
    let (mut mass, mut q) = (0i128, 0i128);
    let mut best: Option<(i128, i128, u64)> = None;
    let mut mask = 0u64;
    for k in 1u64..(1u64 << n) {
        let v = k.trailing_zeros() as usize;
        let out_v: i128 = flow[v]
            .iter()
            .filter(|(y, _)| !inside[*y])
            .map(|e| e.1)
            .sum();
        let in_v: i128 = incoming[v]
            .iter()
            .filter(|(x, _)| inside[*x])
            .map(|e| e.1)
            .sum();
        if inside[v] {
            q += in_v - out_v;
            mass -= a[v];
        } else {
            q += out_v - in_v;
            mass += a[v];
        }
        inside[v] = !inside[v];
        mask ^= 1 << v;
        if mass > 0 && 2 * mass <= half {
            let better = match best {
                None => true,
                Some((bq, bm, _)) => q * bm < bq * mass,
            };
            if better {
                best = Some((q, mass, mask));
            }
        }
    }
    let (bq, bm, bmask) = best.expect("some singleton has mass at most 1/2");
    let phi = BigRational::new(BigInt::from(bq), BigInt::from(bm) * md);
    Ok(ExactConductance {
        phi,
        set: (0..n).filter(|&x| bmask >> x & 1 == 1).collect(),
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::DomainError(format!(
            "eps = {eps} must lie in (0, 1/2)"
        )));
    }
    Ok(())
}

/// `λ/(1-λ) ln(1/(2ε))`.
pub fn tau_spectral(lambda: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::DomainError(format!(
            "lambda_max = {lambda} must lie in (0, 1)"
        )));
    }
    Ok(lambda / (1.0 - lambda) * (1.0 / (2.0 * eps)).ln())
}

/// `(1-2Φ)/(2Φ) ln(1/(2ε))`.
pub fn tau_conductance(phi: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(phi > 0.0 && phi < 0.5) {
        return Err(Error::DomainError(format!(
            "phi = {phi} must lie in (0, 1/2)"
        )));
    }
    Ok((1.0 - 2.0 * phi) / (2.0 * phi) * (1.0 / (2.0 * eps)).ln())
}

pub fn mixing_lower_bounds(lambda: f64, phi: f64, eps: f64) -> Result<(f64, f64)> {
    Ok((tau_spectral(lambda, eps)?, tau_conductance(phi, eps)?))
}

fn tv_f64(mu: &[f64], pi: &[f64]) -> f64 {
    0.5 * mu.iter().zip(pi).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `d_start(t) = ||P^t(start, .) - pi||_TV` for `t = 0..=t_max`, in floating
/// point.
pub fn tv_evolution(
    p: &StochasticMatrix,
    pi: &Distribution,
    start: usize,
    t_max: usize,
) -> Vec<f64> {
    let cols: Vec<Vec<(usize, f64)>> = p
        .columns()
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|(x, w)| (x, w.to_f64().unwrap()))
                .collect()
        })
        .collect();
    let pif = pi.to_f64();
    let mut mu = vec![0.0; p.len()];
    mu[start] = 1.0;
    let mut out = vec![tv_f64(&mu, &pif)];
    for _ in 0..t_max {
        mu = cols
            .iter()
            .map(|c| c.iter().map(|&(x, w)| mu[x] * w).sum())
            .collect();
        out.push(tv_f64(&mu, &pif));
    }
    out
}

/// Exact `d_start(t)`. The row vector is kept as integers over the implicit
/// denominator `D^t`, where `D` clears every entry of `P`.
pub fn tv_evolution_exact(
    p: &StochasticMatrix,
    pi: &Distribution,
    start: usize,
    t_max: usize,
) -> Vec<BigRational> {
    let d = p
        .rows
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let l = pi
        .weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let cols: Vec<Vec<(usize, BigInt)>> = p
        .columns()
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|(x, w)| (x, (w * BigRational::from_integer(d.clone())).to_integer()))
                .collect()
        })
        .collect();
    let pi_scaled: Vec<BigInt> = pi
        .weights
        .iter()
        .map(|w| (w * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let mut v = vec![BigInt::zero(); p.len()];
    v[start] = BigInt::one();
    let mut dt = BigInt::one();
    let tv = |v: &[BigInt], dt: &BigInt| -> BigRational {
        let s: BigInt = v
            .iter()
            .zip(&pi_scaled)
            .map(|(a, b)| (a * &l - b * dt).abs())
            .sum();
        BigRational::new(s, BigInt::from(2) * &l * dt)
    };
    let mut out = vec![tv(&v, &dt)];
    for _ in 0..t_max {
        v = cols
            .par_iter()
            .map(|c| c.iter().map(|(x, w)| &v[*x] * w).sum())
            .collect();
        dt *= &d;
        out.push(tv(&v, &dt));
    }
    out
}

/// Start states for `d(t)`: every state for small chains, otherwise the
/// all-horizontal path and `E...E N E S`, which gives a lower bound.
pub fn default_start_set(kernel: &KernelGraph) -> (Vec<usize>, bool) {
    if kernel.len() <= FULL_START_LIMIT {
        return ((0..kernel.len()).collect(), true);
    }
    let mut starts = vec![kernel.root()];
    if kernel.n >= 3 && kernel.m >= 1 {
        let mut steps = vec![Step::E; kernel.n - 3];
        steps.extend([Step::N, Step::E, Step::S]);
        let path = MonotonePath::new(kernel.m, steps).expect("valid path");
        starts.extend(kernel.index_of(&path));
    }
    (starts, false)
}

/// `max_{x in starts} d_x(t)` for `t = 0..=t_max`.
pub fn distance_curve(
    p: &StochasticMatrix,
    pi: &Distribution,
    starts: &[usize],
    t_max: usize,
) -> Vec<f64> {
    let curves: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&s| tv_evolution(p, pi, s, t_max))
        .collect();
    (0..=t_max)
        .map(|t| curves.iter().map(|c| c[t]).fold(0.0, f64::max))
        .collect()
}

/// Draws steps of a chain; the symmetric chain uses its `2n` equally likely
/// outcomes, the lazy chain holds with probability `1 - p`.
#[derive(Clone, Debug)]
pub struct Sampler {
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Outcomes(Vec<Vec<usize>>),
    Lazy { p: f64, neighbors: Vec<Vec<usize>> },
}

impl Sampler {
    pub fn new(kernel: &KernelGraph, spec: &ChainSpec) -> Result<Self> {
        let kind = match spec {
            ChainSpec::Symmetric => {
                if kernel.n == 0 {
                    return Err(Error::DomainError(
                        "the symmetric chain needs n >= 1".into(),
                    ));
                }
                SamplerKind::Outcomes(
                    (0..kernel.len())
                        .map(|x| symmetric_outcomes(kernel, x))
                        .collect(),
                )
            }
            ChainSpec::LazySimple { .. } | ChainSpec::NonLazyWalk => {
                if let Some(x) = (0..kernel.len()).find(|&x| kernel.degree(x) == 0) {
                    return Err(Error::IsolatedVertex(x));
                }
                let p = match spec {
                    ChainSpec::LazySimple { p } => p.to_f64().unwrap(),
                    _ => 1.0,
                };
                SamplerKind::Lazy {
                    p,
                    neighbors: kernel
                        .adjacency
                        .iter()
                        .map(|l| l.iter().map(|&(_, y)| y).collect())
                        .collect(),
                }
            }
        };
        Ok(Sampler { kind })
    }

    pub fn step<R: Rng>(&self, x: usize, rng: &mut R) -> usize {
        match &self.kind {
            SamplerKind::Outcomes(t) => t[x][rng.random_range(0..t[x].len())],
            SamplerKind::Lazy { p, neighbors } => {
                if rng.random_bool(*p) {
                    neighbors[x][rng.random_range(0..neighbors[x].len())]
                } else {
                    x
                }
            }
        }
    }
}

/// The RNG for trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A trajectory of `steps` steps from `start`, including `start`.
pub fn simulate(
    kernel: &KernelGraph,
    spec: &ChainSpec,
    start: usize,
    steps: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let sampler = Sampler::new(kernel, spec)?;
    let mut rng = trajectory_rng(seed, 0);
    let mut traj = Vec::with_capacity(steps + 1);
    let mut x = start;
    traj.push(x);
    for _ in 0..steps {
        x = sampler.step(x, &mut rng);
        traj.push(x);
    }
    Ok(traj)
}

/// Final states of `count` independent trajectories, trajectory `i` using
/// stream `i` of `seed`.
pub fn simulate_many(
    kernel: &KernelGraph,
    spec: &ChainSpec,
    start: usize,
    steps: usize,
    seed: u64,
    count: usize,
) -> Result<Vec<usize>> {
    let sampler = Sampler::new(kernel, spec)?;
    Ok((0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(seed, i);
            (0..steps).fold(start, |x, _| sampler.step(x, &mut rng))
        })
        .collect())
}

fn ser_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TvPoint {
    pub t: usize,
    pub d: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixReport {
    pub m: u32,
    pub n: usize,
    pub chain: String,
    #[serde(serialize_with = "ser_opt_rational")]
    pub p: Option<BigRational>,
    pub states: usize,
    pub eps: f64,
    pub separator_size: usize,
    pub side_b_size: usize,
    pub lambda_max: f64,
    #[serde(serialize_with = "ser_rational")]
    pub phi_upper: BigRational,
    pub phi_upper_value: f64,
    #[serde(serialize_with = "ser_opt_rational")]
    pub phi_exact: Option<BigRational>,
    pub phi_exact_value: Option<f64>,
    pub tau_lb_spectral: Option<f64>,
    pub tau_lb_conductance: Option<f64>,
    /// `true` when `tv_curve` is the exact `d(t)` (maximum over all
    /// starts), `false` when it is a lower bound from a few starts.
    pub tv_all_starts: bool,
    pub tv_curve: Vec<TvPoint>,
}

#[derive(Clone, Debug)]
pub struct MixOptions {
    pub eps: f64,
    pub t_max: usize,
    pub exact_phi: bool,
}

/// Full analysis of one chain on `S_{m,n}`.
pub fn analyze(kernel: &KernelGraph, spec: &ChainSpec, opts: &MixOptions) -> Result<MixReport> {
    check_eps(opts.eps)?;
    if kernel.m < 2 || kernel.n < 3 {
        return Err(Error::TooSmall(format!(
            "mixing analysis needs m >= 2 and n >= 3, got m={}, n={}",
            kernel.m, kernel.n
        )));
    }
    if opts.exact_phi && kernel.len() > EXACT_PHI_CAP {
        return Err(Error::TooLarge {
            what: "states for the exact conductance scan".into(),
            size: kernel.len(),
            cap: EXACT_PHI_CAP,
        });
    }
    let p = build_chain(kernel, spec)?;
    let pi = stationary(&p)?;
    let side_b = kernel.class_members(VertexClass::SideB);
    let phi_upper = conductance_upper_bound(&p, &pi, &side_b)?;
    let phi_exact = if opts.exact_phi {
        Some(conductance_exact(&p, &pi)?.phi)
    } else {
        None
    };
    let lambda = lambda_max(&p, &pi)?;
    let (starts, all) = default_start_set(kernel);
    let curve = distance_curve(&p, &pi, &starts, opts.t_max);
    let phi_for_tau = phi_exact.as_ref().unwrap_or(&phi_upper).to_f64().unwrap();
    Ok(MixReport {
        m: kernel.m,
        n: kernel.n,
        chain: spec.name().into(),
        p: match spec {
            ChainSpec::LazySimple { p } => Some(p.clone()),
            _ => None,
        },
        states: kernel.len(),
        eps: opts.eps,
        separator_size: kernel.class_members(VertexClass::Separator).len(),
        side_b_size: side_b.len(),
        lambda_max: lambda,
        phi_upper_value: phi_upper.to_f64().unwrap(),
        phi_upper,
        phi_exact_value: phi_exact.as_ref().map(|v| v.to_f64().unwrap()),
        phi_exact,
        tau_lb_spectral: tau_spectral(lambda, opts.eps).ok(),
        tau_lb_conductance: tau_conductance(phi_for_tau, opts.eps).ok(),
        tv_all_starts: all,
        tv_curve: curve
            .into_iter()
            .enumerate()
            .map(|(t, d)| TvPoint { t, d })
            .collect(),
    })
}
