//! Brute-force references for desk-scale instances.
//!
//! Nothing here goes through [`crate::tensor`]: the tensors are materialized
//! entry by entry (every permutation of every edge, weight `1/(k-1)!`), and
//! cuts are recounted from scratch for every subset.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::CutWitness;
use crate::hypergraph::Hypergraph;
use crate::tensor::TensorKind;

/// Largest number of stored off-diagonal entries.
const MAX_ENTRIES: usize = 5_000_000;
pub const GRID_MAX_N: usize = 6;
pub const SUBSET_MAX_N: usize = 20;
/// Pairs closer than this in both `λ` and normalized `x` are merged.
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const ORACLE_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for the oracle: {what} = {value} exceeds {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },
}

/// A symmetric order-k tensor stored as explicit coordinates.
#[derive(Debug, Clone)]
pub struct CooTensor {
    order: usize,
    dim: usize,
    diagonal: Vec<f64>,
    /// Off-diagonal entries `(i_1, ..., i_k) -> value`.
    entries: Vec<(Vec<usize>, f64)>,
}

impl CooTensor {
    pub fn from_hypergraph(kind: TensorKind, h: &Hypergraph) -> Result<Self, OracleError> {
        let k = h.k();
        let perms: usize = (1..=k).product();
        if h.m() * perms > MAX_ENTRIES {
            return Err(OracleError::TooLarge {
                what: "tensor entries",
                value: h.m() * perms,
                max: MAX_ENTRIES,
            });
        }
        let (dsign, asign) = match kind {
            TensorKind::Adjacency => (0.0, 1.0),
            TensorKind::Laplacian => (1.0, -1.0),
            TensorKind::SignlessLaplacian => (1.0, 1.0),
        };
        let weight = asign / (1..k).product::<usize>() as f64;
        let mut diagonal = vec![0.0; h.n()];
        let mut entries = Vec::with_capacity(h.m() * perms);
        for e in h.edges() {
            for &v in e {
                diagonal[v] += dsign;
            }
            for p in e.iter().copied().permutations(k) {
                entries.push((p, weight));
            }
        }
        Ok(Self {
            order: k,
            dim: h.n(),
            diagonal,
            entries,
        })
    }

    fn tail_product(idx: &[usize], x: &[f64], skip: Option<usize>) -> f64 {
        idx.iter()
            .enumerate()
            .skip(1)
            .filter(|&(q, _)| Some(q) != skip)
            .map(|(_, &v)| x[v])
            .product()
    }

    /// Off-diagonal part of `T x^{k-1}`.
    fn apply_offdiagonal(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (idx, w) in &self.entries {
            out[idx[0]] += w * Self::tail_product(idx, x, None);
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let km1 = self.order as i32 - 1;
        let mut out = self.apply_offdiagonal(x);
        for (i, o) in out.iter_mut().enumerate() {
            *o += self.diagonal[i] * x[i].powi(km1);
        }
        out
    }

    pub fn form(&self, x: &[f64]) -> f64 {
        self.apply(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let k = self.order;
        let mut jac = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            jac[(i, i)] = self.diagonal[i] * (k - 1) as f64 * x[i].powi(k as i32 - 2);
        }
        for (idx, w) in &self.entries {
            for q in 1..k {
                jac[(idx[0], idx[q])] += w * Self::tail_product(idx, x, Some(q));
            }
        }
        jac
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OraclePair {
    pub lambda: f64,
    /// Normalized to `‖x‖∞ = 1`, first maximal entry positive.
    pub x: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchMeta {
    pub starts: usize,
    pub pivots: usize,
    pub converged_runs: usize,
    pub dedup_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub eigenpairs: Vec<OraclePair>,
    pub meta: SearchMeta,
}

impl OracleResult {
    /// Whether some found pair matches `(λ, x)` within the dedup radius.
    pub fn contains(&self, lambda: f64, x: &[f64]) -> bool {
        let Some(x) = normalized(x) else {
            return false;
        };
        self.eigenpairs
            .iter()
            .any(|p| same_pair(p.lambda, &p.x, lambda, &x))
    }
}

fn normalized(x: &[f64]) -> Option<Vec<f64>> {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max <= 0.0 || !max.is_finite() {
        return None;
    }
    let first = x.iter().position(|v| v.abs() >= max * (1.0 - 1e-9))?;
    let s = x[first].signum() / max;
    Some(x.iter().map(|v| v * s).collect())
}

fn same_pair(l1: f64, x1: &[f64], l2: f64, x2: &[f64]) -> bool {
    (l1 - l2).abs() <= DEDUP_RADIUS
        && x1
            .iter()
            .zip(x2)
            .all(|(a, b)| (a - b).abs() <= DEDUP_RADIUS)
}

fn residual(t: &CooTensor, lambda: f64, x: &[f64]) -> f64 {
    let km1 = t.order as i32 - 1;
    t.apply(x)
        .iter()
        .zip(x)
        .map(|(y, v)| (y - lambda * v.powi(km1)).abs())
        .fold(0.0, f64::max)
}

/// Stacked system `[T x^{k-1} - λ x^{[k-1]}; x_p - 1]`.
fn system(t: &CooTensor, lambda: f64, x: &[f64], p: usize) -> DVector<f64> {
    let km1 = t.order as i32 - 1;
    let y = t.apply(x);
    let n = t.dim;
    let mut f = DVector::zeros(n + 1);
    for i in 0..n {
        f[i] = y[i] - lambda * x[i].powi(km1);
    }
    f[n] = x[p] - 1.0;
    f
}

fn newton_run(t: &CooTensor, mut x: Vec<f64>, p: usize) -> Option<(f64, Vec<f64>)> {
    let n = t.dim;
    let k = t.order;
    let km1 = k as i32 - 1;
    x[p] = 1.0;
    let denom: f64 = x.iter().map(|v| v.powi(k as i32)).sum();
    let mut lambda = if denom.abs() > 1e-8 { t.form(&x) / denom } else { 0.0 };
    let mut f = system(t, lambda, &x, p);
    let mut norm = f.amax();
    for _ in 0..100 {
        if norm <= 1e-14 {
            break;
        }
        let jt = t.jacobian(&x);
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for l in 0..n {
                jac[(i, l)] = jt[(i, l)];
            }
            jac[(i, i)] -= lambda * (k - 1) as f64 * x[i].powi(km1 - 1);
            jac[(i, n)] = -x[i].powi(km1);
        }
        jac[(n, p)] = 1.0;
        let step = jac.svd(true, true).solve(&(-&f), 1e-13).ok()?;
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = (0..n).map(|i| x[i] + damping * step[i]).collect();
            let cl = lambda + damping * step[n];
            let cf = system(t, cl, &cand, p);
            let cn = cf.amax();
            if cn < norm {
                x = cand;
                lambda = cl;
                f = cf;
                norm = cn;
                accepted = true;
                break;
            }
            damping *= 0.5;
        }
        if !accepted {
            break;
        }
        if x.iter().any(|v| v.abs() > 1e8) {
            return None;
        }
    }
    let x = normalized(&x)?;
    (residual(t, lambda, &x) <= ORACLE_RESIDUAL_TOL).then_some((lambda, x))
}

/// Start `s` cycles through four families: dense uniform in `[-1, 1]^n`,
/// the same on a random support, positive values in `[1/2, 1]` on a random
/// support, and dense values of magnitude in `[1/2, 1]` with random signs.
fn start_vector(s: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let magnitude = |rng: &mut ChaCha8Rng| rng.random_range(0.5..=1.0);
    match s % 4 {
        0 => return (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        3 => {
            return (0..n)
                .map(|_| if rng.random_bool(0.5) { magnitude(rng) } else { -magnitude(rng) })
                .collect()
        }
        _ => {}
    }
    let size = rng.random_range(1..=n);
    let support = rand::seq::index::sample(rng, n, size);
    let mut x = vec![0.0; n];
    for i in support {
        x[i] = if s % 4 == 1 { rng.random_range(-1.0..=1.0) } else { magnitude(rng) };
    }
    x
}

/// Real H-eigenpairs found by damped Newton from random starts, sweeping
/// every pivot `x_p = 1`. A search, not a proof of
/// completeness; results are deduplicated and sorted by `(λ, x)`.
pub fn newton_eigen_enumerate(
    kind: TensorKind,
    h: &Hypergraph,
    starts: usize,
    seed: u64,
) -> Result<OracleResult, OracleError> {
    let t = CooTensor::from_hypergraph(kind, h)?;
    let n = h.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<OraclePair> = Vec::new();
    let mut converged_runs = 0;
    for s in 0..starts {
        let x0 = start_vector(s, n, &mut rng);
        for p in 0..n {
            let Some((lambda, x)) = newton_run(&t, x0.clone(), p) else {
                continue;
            };
            converged_runs += 1;
            if found.iter().any(|q| same_pair(q.lambda, &q.x, lambda, &x)) {
                continue;
            }
            let residual = residual(&t, lambda, &x);
            found.push(OraclePair { lambda, x, residual });
        }
    }
    found.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then_with(|| a.x.iter().zip(&b.x).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(OracleResult {
        eigenpairs: found,
        meta: SearchMeta {
            starts,
            pivots: n,
            converged_runs,
            dedup_radius: DEDUP_RADIUS,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridExtremum {
    pub value: f64,
    pub x: Vec<f64>,
    /// Bound on `|value - true extremum|`.
    pub error_bound: f64,
    pub evaluations: usize,
}

/// Extremum of `T x^k` over `{x >= 0, Σ x_i^k = 1}` (optionally `x_j = 0`),
/// searched on the simplex `u = x^{[k]}`: a full lattice of step
/// `1/resolution`, then pattern-search refinement with halving steps.
///
/// The error bound is the smaller of
/// - a Hölder bound for the full lattice,
///   `(k m / N) + k² m N^{-1/k}` (each lattice point lies within `1/N` of the
///   optimum coordinatewise, and `|u^{1/k} - v^{1/k}| <= |u - v|^{1/k}`);
/// - when the objective is concave (max of `A`, `Q`) or convex (min of `L`)
///   in `u`, the Frank–Wolfe gap at the returned point.
pub fn grid_extremize_form(
    kind: TensorKind,
    h: &Hypergraph,
    objective: Extremum,
    pinned: Option<usize>,
    resolution: usize,
) -> Result<GridExtremum, OracleError> {
    let n = h.n();
    if n > GRID_MAX_N {
        return Err(OracleError::TooLarge {
            what: "n",
            value: n,
            max: GRID_MAX_N,
        });
    }
    let t = CooTensor::from_hypergraph(kind, h)?;
    let k = h.k();
    let inv = 1.0 / k as f64;
    let sign = match objective {
        Extremum::Max => 1.0,
        Extremum::Min => -1.0,
    };
    let score = |u: &[f64]| -> f64 {
        let x: Vec<f64> = u.iter().map(|v| v.max(0.0).powf(inv)).collect();
        sign * t.form(&x)
    };
    let free: Vec<usize> = (0..n).filter(|&i| Some(i) != pinned).collect();
    let resolution = resolution.max(1);

    // full lattice: compositions of `resolution` over the free coordinates
    let mut best_u = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;
    let mut evaluations = 0;
    let mut counts = vec![0usize; free.len()];
    compositions(resolution, &mut counts, 0, &mut |c| {
        let mut u = vec![0.0; n];
        for (&i, &ci) in free.iter().zip(c) {
            u[i] = ci as f64 / resolution as f64;
        }
        let s = score(&u);
        evaluations += 1;
        if s > best {
            best = s;
            best_u = u;
        }
    });

    // pattern search: move mass `step` from coordinate b to coordinate a
    let mut step = 1.0 / resolution as f64;
    while step > 1e-13 {
        loop {
            let mut improved = false;
            for &a in &free {
                for &b in &free {
                    if a == b || best_u[b] <= 0.0 {
                        continue;
                    }
                    let moved = step.min(best_u[b]);
                    let mut u = best_u.clone();
                    u[a] += moved;
                    u[b] -= moved;
                    let s = score(&u);
                    evaluations += 1;
                    if s > best {
                        best = s;
                        best_u = u;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }

    let x: Vec<f64> = best_u.iter().map(|v| v.powf(inv)).collect();
    let value = t.form(&x);
    let m = h.m() as f64;
    let kf = k as f64;
    let nf = resolution as f64;
    let diag = if kind == TensorKind::Adjacency { 0.0 } else { kf * m / nf };
    let holder = diag + kf * kf * m * nf.powf(-inv);
    let convex_case = matches!(
        (kind, objective),
        (TensorKind::Adjacency | TensorKind::SignlessLaplacian, Extremum::Max)
            | (TensorKind::Laplacian, Extremum::Min)
    );
    let fw = if convex_case {
        frank_wolfe_gap(&t, &x, &best_u, &free, objective)
    } else {
        f64::INFINITY
    };
    Ok(GridExtremum {
        value,
        x,
        error_bound: holder.min(fw),
        evaluations,
    })
}

/// Duality gap of a concave max (or convex min) over the simplex face, using
/// the gradient in `u`: `g_i = (T x^{k-1})_i / x_i^{k-1}`.
fn frank_wolfe_gap(t: &CooTensor, x: &[f64], u: &[f64], free: &[usize], objective: Extremum) -> f64 {
    let km1 = t.order as i32 - 1;
    let off = t.apply_offdiagonal(x);
    let grad = |i: usize| -> f64 {
        if x[i] > 0.0 {
            t.diagonal[i] + off[i] / x[i].powi(km1)
        } else if off[i] == 0.0 {
            t.diagonal[i]
        } else {
            off[i].signum() * f64::INFINITY
        }
    };
    let g: Vec<f64> = free.iter().map(|&i| grad(i)).collect();
    let inner: f64 = free
        .iter()
        .zip(&g)
        .filter(|&(&i, _)| u[i] > 0.0)
        .map(|(&i, gi)| u[i] * gi)
        .sum();
    let gap = match objective {
        Extremum::Max => g.iter().copied().fold(f64::NEG_INFINITY, f64::max) - inner,
        Extremum::Min => inner - g.iter().copied().fold(f64::INFINITY, f64::min),
    };
    if gap.is_nan() {
        f64::INFINITY
    } else {
        gap.max(0.0)
    }
}

fn compositions(total: usize, counts: &mut [usize], at: usize, visit: &mut impl FnMut(&[usize])) {
    if counts.is_empty() {
        return;
    }
    if at == counts.len() - 1 {
        counts[at] = total;
        visit(counts);
        return;
    }
    for c in 0..=total {
        counts[at] = c;
        compositions(total - c, counts, at + 1, visit);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutStatistic {
    MinCut,
    MaxCut,
    AllCutChecks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub min_cut: Option<CutWitness>,
    pub max_cut: Option<CutWitness>,
    pub subsets_checked: usize,
    /// Subsets where a cut identity failed (only for `AllCutChecks`).
    pub identity_violations: Vec<Vec<usize>>,
}

/// Exhaustive cut statistics, recounting every edge for every subset.
///
/// `MinCut`/`MaxCut` range over `S` with `|S| <= n/2` and pick the witness
/// first by size, then lexicographically. `AllCutChecks` also evaluates, for
/// every proper `S` and `x = |S|^{-1/k} 1_S`,
/// `L x^k = t(S) |E(S,S̄)| / |S|` and
/// `Q x^k = (2k |E(S)| + t(S) |E(S,S̄)|) / |S|`, and `t(S) + t(S̄) = k`.
pub fn subset_enumerate(h: &Hypergraph, statistic: CutStatistic) -> Result<SubsetReport, OracleError> {
    let n = h.n();
    if n > SUBSET_MAX_N {
        return Err(OracleError::TooLarge {
            what: "n",
            value: n,
            max: SUBSET_MAX_N,
        });
    }
    let k = h.k();
    let edges: Vec<Vec<usize>> = h.edges().map(<[usize]>::to_vec).collect();
    let (lap, sig) = if statistic == CutStatistic::AllCutChecks {
        (
            Some(CooTensor::from_hypergraph(TensorKind::Laplacian, h)?),
            Some(CooTensor::from_hypergraph(TensorKind::SignlessLaplacian, h)?),
        )
    } else {
        (None, None)
    };

    let mut min_cut: Option<CutWitness> = None;
    let mut max_cut: Option<CutWitness> = None;
    let mut violations = Vec::new();
    let mut checked = 0;
    for mask in 1u32..((1u32 << n) - 1) {
        let set: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let inside = |v: usize| set.contains(&v);
        let mut in_s = 0usize;
        let mut crossing = 0usize;
        let mut t_total = 0usize;
        for e in &edges {
            let t = e.iter().filter(|&&v| inside(v)).count();
            if t == k {
                in_s += 1;
            } else if t > 0 {
                crossing += 1;
                t_total += t;
            }
        }
        checked += 1;
        if let (Some(lap), Some(sig)) = (&lap, &sig) {
            let s = set.len() as f64;
            let x: Vec<f64> = (0..n)
                .map(|v| if inside(v) { s.powf(-1.0 / k as f64) } else { 0.0 })
                .collect();
            let lhs_l = lap.form(&x);
            let rhs_l = t_total as f64 / s;
            let lhs_q = sig.form(&x);
            let rhs_q = (2.0 * k as f64 * in_s as f64 + t_total as f64) / s;
            let t_comp: usize = edges
                .iter()
                .map(|e| e.iter().filter(|&&v| !inside(v)).count())
                .filter(|&c| c > 0 && c < k)
                .sum();
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + b.abs());
            let t_ok = crossing == 0 || t_total + t_comp == k * crossing;
            if !close(lhs_l, rhs_l) || !close(lhs_q, rhs_q) || !t_ok {
                violations.push(set.clone());
            }
        }
        if 2 * set.len() > n {
            continue;
        }
        let candidate = CutWitness {
            value: crossing,
            subset: set,
        };
        let key = |w: &CutWitness| (w.subset.len(), w.subset.clone());
        let replace_min = match &min_cut {
            None => true,
            Some(b) => crossing < b.value || (crossing == b.value && key(&candidate) < key(b)),
        };
        if replace_min {
            min_cut = Some(candidate.clone());
        }
        let replace_max = match &max_cut {
            None => true,
            Some(b) => crossing > b.value || (crossing == b.value && key(&candidate) < key(b)),
        };
        if replace_max {
            max_cut = Some(candidate);
        }
    }
    let (min_cut, max_cut) = match statistic {
        CutStatistic::MinCut => (min_cut, None),
        CutStatistic::MaxCut => (None, max_cut),
        CutStatistic::AllCutChecks => (min_cut, max_cut),
    };
    Ok(SubsetReport {
        min_cut,
        max_cut,
        subsets_checked: checked,
        identity_violations: violations,
    })
}

/// The real root of `β³ + β = 1`, which lies in `(0.5, 1)`, by bisection.
pub fn solve_beta() -> f64 {
    let f = |b: f64| b * b * b + b - 1.0;
    let (mut lo, mut hi) = (0.5f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
