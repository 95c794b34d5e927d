//! Analytic connectivity `α(G)` and brute-force edge connectivity / maximum
//! cut, plus the inequalities tying them to the degrees.
//!
//! `α(G)` is the minimum over pinned vertices `j` of
//! `min { L x^k : x >= 0, Σ x_i^k = 1, x_j = 0 }`. With `u_i = x_i^k` the
//! feasible set is a face of the standard simplex and the objective becomes
//! `Σ_i d_i u_i - k Σ_e (Π_{i∈e} u_i)^{1/k}`, which is solved by multi-start
//! projected gradient descent and then polished with Newton steps on the
//! stationarity system over the support.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::report::{BoundCheck, BoundReport};
use crate::tensor::{self, TensorKind};

/// Lower clamp on `u_i` inside gradient evaluation.
const U_FLOOR: f64 = 1e-14;
const ARMIJO_C: f64 = 1e-4;
const PG_TOL: f64 = 1e-9;
const VALUE_TOL: f64 = 1e-13;
/// Coordinates of `x` above this count as positive in the KKT conditions.
const SUPPORT_THRESHOLD: f64 = 1e-6;
/// `α` above this is read as "positive".
pub const ALPHA_POSITIVE: f64 = 1e-6;
pub const DEFAULT_MAX_BRUTE_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaOptions {
    /// Random Dirichlet(1) starts per pinned vertex, on top of the uniform one.
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub polish: bool,
}

impl Default for AlphaOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            seed: 0,
            max_iter: 20_000,
            polish: true,
        }
    }
}

/// Result of the inner problem for one pinned vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedSolve {
    pub vertex: usize,
    pub value: f64,
    pub minimizer: Vec<f64>,
    pub kkt_residual: f64,
    pub converged: bool,
}

/// The computed `α(G)` with the point attaining it.
///
/// `alpha` is `L x^k` at a feasible point, so it is an upper bound on the
/// exact value; the KKT residual measures how close that point is to
/// stationarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    pub alpha: f64,
    pub pinned_vertex: usize,
    pub minimizer: Vec<f64>,
    pub kkt_residual: f64,
    pub per_vertex_values: Vec<f64>,
    /// Every inner solve met its stopping rule within `max_iter`.
    pub converged: bool,
    pub starts: usize,
    pub seed: u64,
}

impl AlphaCertificate {
    pub fn is_positive(&self) -> bool {
        self.alpha > ALPHA_POSITIVE
    }
}

pub fn analytic_connectivity(h: &Hypergraph, opts: &AlphaOptions) -> AlphaCertificate {
    let solves: Vec<PinnedSolve> = (0..h.n())
        .into_par_iter()
        .map(|j| solve_pinned(h, j, opts))
        .collect();
    let mut best = 0;
    for (j, s) in solves.iter().enumerate() {
        if s.value < solves[best].value {
            best = j;
        }
    }
    AlphaCertificate {
        alpha: solves[best].value,
        pinned_vertex: best,
        minimizer: solves[best].minimizer.clone(),
        kkt_residual: solves[best].kkt_residual,
        per_vertex_values: solves.iter().map(|s| s.value).collect(),
        converged: solves.iter().all(|s| s.converged),
        starts: opts.starts,
        seed: opts.seed,
    }
}

/// `min { L x^k : x >= 0, Σ x_i^k = 1, x_j = 0 }` by multi-start descent.
pub fn solve_pinned(h: &Hypergraph, j: usize, opts: &AlphaOptions) -> PinnedSolve {
    let n = h.n();
    let free = (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(j as u64);

    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for s in 0..=opts.starts {
        let mut u: Vec<f64> = if s == 0 {
            vec![1.0 / free; n]
        } else {
            (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect()
        };
        u[j] = 0.0;
        let total: f64 = u.iter().sum();
        u.iter_mut().for_each(|v| *v /= total);

        let (u, converged) = descend(h, j, u, opts.max_iter);
        let x = back_map(&u, h.k());
        let value = tensor::form_unchecked(TensorKind::Laplacian, h, &x);
        let better = match &best {
            None => true,
            Some((bv, bx, _)) => match value.total_cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => x < *bx,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, x, converged));
        }
    }
    let (mut value, mut x, converged) = best.expect("at least the uniform start runs");
    let mut kkt = kkt_residual(h, j, &x);
    if opts.polish {
        if let Some(px) = polish(h, j, &x) {
            let pv = tensor::form_unchecked(TensorKind::Laplacian, h, &px);
            let pk = kkt_residual(h, j, &px);
            if pv <= value + 1e-15 && pk < kkt {
                value = pv;
                x = px;
                kkt = pk;
            }
        }
    }
    PinnedSolve {
        vertex: j,
        value,
        minimizer: x,
        kkt_residual: kkt,
        converged,
    }
}

fn back_map(u: &[f64], k: usize) -> Vec<f64> {
    let inv = 1.0 / k as f64;
    u.iter().map(|&v| v.max(0.0).powf(inv)).collect()
}

fn objective(h: &Hypergraph, u: &[f64]) -> f64 {
    tensor::form_unchecked(TensorKind::Laplacian, h, &back_map(u, h.k()))
}

/// Gradient in `u`: `d_i - (A x^{k-1})_i / x_i^{k-1}` with `x_i` clamped away
/// from zero in the denominator.
fn gradient(h: &Hypergraph, j: usize, u: &[f64]) -> Vec<f64> {
    let k = h.k() as f64;
    let x = back_map(u, h.k());
    let ax = tensor::apply_unchecked(TensorKind::Adjacency, h, &x);
    let expo = (k - 1.0) / k;
    let mut g: Vec<f64> = (0..h.n())
        .map(|i| h.degree(i) as f64 - ax[i] / u[i].max(U_FLOOR).powf(expo))
        .collect();
    g[j] = 0.0;
    g
}

/// Euclidean projection onto `{u >= 0, Σ u = 1, u_j = 0}`.
fn project(v: &[f64], j: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = v
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &x)| x)
        .collect();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (r, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let t = (cumulative - 1.0) / (r + 1) as f64;
        if s - t > 0.0 {
            theta = t;
        }
    }
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i == j { 0.0 } else { (x - theta).max(0.0) })
        .collect()
}

fn descend(h: &Hypergraph, j: usize, mut u: Vec<f64>, max_iter: usize) -> (Vec<f64>, bool) {
    let mut f = objective(h, &u);
    let mut step: f64 = 1.0;
    for _ in 0..max_iter {
        let g = gradient(h, j, &u);
        let trial: Vec<f64> = u.iter().zip(&g).map(|(a, b)| a - b).collect();
        let pg = project(&trial, j)
            .iter()
            .zip(&u)
            .map(|(p, a)| (p - a).powi(2))
            .sum::<f64>()
            .sqrt();
        if pg <= PG_TOL {
            return (u, true);
        }
        let mut accepted = None;
        let mut t = (step * 2.0).min(1e6);
        for _ in 0..60 {
            let cand = project(
                &u.iter().zip(&g).map(|(a, b)| a - t * b).collect::<Vec<_>>(),
                j,
            );
            let decrease: f64 = g.iter().zip(cand.iter().zip(&u)).map(|(gi, (c, a))| gi * (c - a)).sum();
            let fc = objective(h, &cand);
            if fc <= f + ARMIJO_C * decrease {
                accepted = Some((cand, fc));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc)) = accepted else {
            return (u, true);
        };
        step = t;
        let change = f - fc;
        u = cand;
        f = fc;
        if change <= VALUE_TOL {
            return (u, true);
        }
    }
    (u, false)
}

/// Max violation of the first-order conditions at a feasible `x`:
/// `(L x^{k-1})_i = μ x_i^{k-1}` where `x_i > 0`, and
/// `(L x^{k-1})_i >= μ x_i^{k-1}` where `x_i = 0`, with `μ = L x^k`.
pub fn kkt_residual(h: &Hypergraph, j: usize, x: &[f64]) -> f64 {
    let km1 = h.k() as i32 - 1;
    let mu = tensor::form_unchecked(TensorKind::Laplacian, h, x);
    let lx = tensor::apply_unchecked(TensorKind::Laplacian, h, x);
    (0..h.n())
        .filter(|&i| i != j)
        .map(|i| {
            let g = lx[i] - mu * x[i].powi(km1);
            if x[i] > SUPPORT_THRESHOLD {
                g.abs()
            } else {
                (-g).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// Newton on `(L x^{k-1})_i = μ x_i^{k-1}` (i in the support) with
/// `Σ x_i^k = 1`, all other coordinates held at zero.
fn polish(h: &Hypergraph, j: usize, x0: &[f64]) -> Option<Vec<f64>> {
    let k = h.k();
    let km1 = k as i32 - 1;
    let support: Vec<usize> = (0..h.n())
        .filter(|&i| i != j && x0[i] > SUPPORT_THRESHOLD)
        .collect();
    let s = support.len();
    if s == 0 || s > 400 {
        return None;
    }
    let mut x: Vec<f64> = vec![0.0; h.n()];
    for &i in &support {
        x[i] = x0[i];
    }
    let mut mu = tensor::form_unchecked(TensorKind::Laplacian, h, &x);
    for _ in 0..20 {
        let lx = tensor::apply_unchecked(TensorKind::Laplacian, h, &x);
        let jt = tensor::jacobian(TensorKind::Laplacian, h, &x).ok()?;
        let mut jac = DMatrix::zeros(s + 1, s + 1);
        let mut rhs = DVector::zeros(s + 1);
        let norm = x.iter().map(|v| v.powi(k as i32)).sum::<f64>() - 1.0;
        let mut worst = norm.abs();
        for (a, &i) in support.iter().enumerate() {
            for (b, &l) in support.iter().enumerate() {
                jac[(a, b)] = jt[(i, l)];
            }
            jac[(a, a)] -= mu * (k - 1) as f64 * x[i].powi(km1 - 1);
            jac[(a, s)] = -x[i].powi(km1);
            jac[(s, a)] = k as f64 * x[i].powi(km1);
            let r = lx[i] - mu * x[i].powi(km1);
            worst = worst.max(r.abs());
            rhs[a] = -r;
        }
        if worst < 1e-15 {
            break;
        }
        rhs[s] = -norm;
        let step = jac.lu().solve(&rhs)?;
        for (a, &i) in support.iter().enumerate() {
            x[i] += step[a];
        }
        mu += step[s];
    }
    if !support.iter().all(|&i| x[i] > 0.0) {
        return None;
    }
    // exact renormalization onto Σ x^k = 1
    let scale = x.iter().map(|v| v.powi(k as i32)).sum::<f64>().powf(1.0 / k as f64);
    Some(x.into_iter().map(|v| v / scale).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("brute-force enumeration limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
}

/// A cut value with the vertex set attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    pub value: usize,
    pub subset: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutNumbers {
    /// `e(G)`; zero (with `disconnected` set) when the graph is disconnected.
    pub edge_connectivity: CutWitness,
    /// `c(G)`.
    pub max_cut: CutWitness,
    pub disconnected: bool,
}

fn mask_to_set(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Shortlex order on vertex sets given as masks.
fn shortlex_less(a: u32, b: u32, n: usize) -> bool {
    match a.count_ones().cmp(&b.count_ones()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => mask_to_set(a, n) < mask_to_set(b, n),
    }
}

/// Enumerates every proper subset `S` with `|S| <= n/2` in Gray-code order,
/// keeping per-edge counts `|e ∩ S|` up to date, and tracks the minimum and
/// maximum cut with shortlex-smallest witnesses.
fn gray_code_cuts(h: &Hypergraph, max_n: usize) -> Result<(CutWitness, CutWitness), ConnectivityError> {
    let n = h.n();
    if n > max_n || n > 30 {
        return Err(ConnectivityError::TooLarge { n, max: max_n.min(30) });
    }
    let k = h.k();
    let mut inside = vec![0usize; h.m()];
    let mut cut = 0usize;
    let mut mask: u32 = 0;
    let mut min: Option<(usize, u32)> = None;
    let mut max: Option<(usize, u32)> = None;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let adding = mask >> v & 1 == 0;
        mask ^= 1 << v;
        for &p in h.incident_edges(v) {
            let before = inside[p] > 0 && inside[p] < k;
            if adding {
                inside[p] += 1;
            } else {
                inside[p] -= 1;
            }
            let after = inside[p] > 0 && inside[p] < k;
            match (before, after) {
                (false, true) => cut += 1,
                (true, false) => cut -= 1,
                _ => {}
            }
        }
        if (mask.count_ones() as usize) * 2 > n {
            continue;
        }
        let improve_min = match min {
            None => true,
            Some((val, m)) => cut < val || (cut == val && shortlex_less(mask, m, n)),
        };
        if improve_min {
            min = Some((cut, mask));
        }
        let improve_max = match max {
            None => true,
            Some((val, m)) => cut > val || (cut == val && shortlex_less(mask, m, n)),
        };
        if improve_max {
            max = Some((cut, mask));
        }
    }
    let (min, max) = (min.expect("n >= 2"), max.expect("n >= 2"));
    Ok((
        CutWitness {
            value: min.0,
            subset: mask_to_set(min.1, n),
        },
        CutWitness {
            value: max.0,
            subset: mask_to_set(max.1, n),
        },
    ))
}

/// `e(G)`: the smallest edge cut, by exhaustive enumeration.
pub fn edge_connectivity_bruteforce(h: &Hypergraph, max_n: usize) -> Result<CutWitness, ConnectivityError> {
    Ok(gray_code_cuts(h, max_n)?.0)
}

/// `c(G)`: the largest edge cut, by exhaustive enumeration.
pub fn max_cut_bruteforce(h: &Hypergraph, max_n: usize) -> Result<CutWitness, ConnectivityError> {
    Ok(gray_code_cuts(h, max_n)?.1)
}

pub fn cut_numbers(h: &Hypergraph, max_n: usize) -> Result<CutNumbers, ConnectivityError> {
    let (edge_connectivity, max_cut) = gray_code_cuts(h, max_n)?;
    Ok(CutNumbers {
        disconnected: edge_connectivity.value == 0,
        edge_connectivity,
        max_cut,
    })
}

/// Checks `0 <= α <= δ`, `α > 0 ⇔ connected`, and, when cut numbers are
/// available, `e <= δ`, `(n/k) α <= e`, `e = δ` for `n <= 2k - 1` and
/// `c <= (n/k)(2 d̄ - δ)`.
///
/// If `(n/k) α <= e` fails, `α` is re-solved with four times the starts to
/// tell a loose solver bound from a genuine violation.
pub fn connectivity_bound_report(
    h: &Hypergraph,
    alpha: &AlphaCertificate,
    cuts: Option<&CutNumbers>,
    opts: &AlphaOptions,
) -> BoundReport {
    let stats = h.degree_stats();
    let min_deg = stats.min as f64;
    let n = h.n() as f64;
    let k = h.k() as f64;
    let connected = h.is_connected();
    let mut checks = vec![
        BoundCheck::le("alpha_nonnegative", 0.0, alpha.alpha),
        BoundCheck::le("alpha_le_min_degree", alpha.alpha, min_deg),
        BoundCheck::condition(
            "alpha_positive_iff_connected",
            alpha.is_positive() == connected,
        ),
    ];
    if let Some(c) = cuts {
        let e = c.edge_connectivity.value as f64;
        checks.push(BoundCheck::le("edge_connectivity_le_min_degree", e, min_deg));

        let mut scaled = BoundCheck::le(
            "scaled_alpha_le_edge_connectivity",
            n / k * alpha.alpha - ALPHA_POSITIVE,
            e,
        );
        if !scaled.holds {
            let retry_opts = AlphaOptions {
                starts: opts.starts * 4 + 1,
                ..*opts
            };
            let retry = analytic_connectivity(h, &retry_opts);
            let again = BoundCheck::le(
                "scaled_alpha_le_edge_connectivity",
                n / k * retry.alpha - ALPHA_POSITIVE,
                e,
            );
            scaled = if again.holds {
                again.with_note(format!(
                    "solver upper bound too loose; re-solved with {} starts",
                    retry_opts.starts
                ))
            } else {
                again.with_note("bound violated")
            };
        }
        checks.push(scaled);

        if h.n() < 2 * h.k() {
            checks.push(BoundCheck::le("min_degree_le_edge_connectivity", min_deg, e));
        }
        let cap = n / k * (2.0 * stats.average_f64() - min_deg);
        checks.push(BoundCheck::le("max_cut_le_degree_bound", c.max_cut.value as f64, cap));
    }
    BoundReport { checks }
}
