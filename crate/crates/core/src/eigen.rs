//! H-eigenpairs of `A`, `L` and `Q`: spectral radii of the nonnegative kinds,
//! verification and classification of candidate pairs, the structural pairs
//! every k-graph carries, and the degree bounds on `λ₁ = ρ(A)` and `ν₁ = ρ(Q)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::report::{BoundCheck, BoundReport};
use crate::tensor::{self, DimensionMismatch, TensorKind};

/// Entries at or below this (after `‖x‖∞ = 1` normalization) count as zero.
pub const POSITIVITY_THRESHOLD: f64 = 1e-9;

/// Residual tolerance used to classify a candidate as an eigenpair.
pub const VERIFY_TOL: f64 = 1e-10;

/// Largest component size for which the Newton polish (dense LU) runs.
const POLISH_MAX_N: usize = 400;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("the zero vector is never an eigenvector")]
    ZeroVector,
    #[error("vector has non-finite entries")]
    NonFinite,
    #[error("{0:?} is not a nonnegative tensor")]
    NotNonnegative(TensorKind),
    #[error("operation requires k >= 3, got k = {0}")]
    OrderTooSmall(usize),
    #[error("definiteness is only meaningful for even k, got k = {0}")]
    OddOrder(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    NotEigenpair,
    /// Verified, with a negative entry in the eigenvector.
    H,
    /// Verified, nonnegative with at least one zero entry.
    HPlusStrict,
    /// Verified, strictly positive.
    HPlusPlus,
}

impl Classification {
    pub fn is_eigenpair(self) -> bool {
        self != Classification::NotEigenpair
    }

    pub fn describe(self) -> &'static str {
        match self {
            Classification::NotEigenpair => "not an eigenpair",
            Classification::H => "H-eigenpair (not H+)",
            Classification::HPlusStrict => "strict H+-eigenpair",
            Classification::HPlusPlus => "H++-eigenpair",
        }
    }
}

/// A candidate `(λ, x)`, with `x` normalized to `‖x‖∞ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// `‖T x^{k-1} - λ x^{[k-1]}‖∞` for the normalized `x`.
    pub residual: f64,
    pub tolerance: f64,
    pub classification: Classification,
}

/// Scales `x` to `‖x‖∞ = 1`, flipping the sign so the first entry of maximal
/// magnitude is positive.
pub fn normalize_inf(x: &[f64]) -> Result<Vec<f64>, EigenError> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(EigenError::NonFinite);
    }
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(EigenError::ZeroVector);
    }
    let pivot = x
        .iter()
        .position(|v| v.abs() >= max * (1.0 - 1e-12))
        .expect("max is attained");
    let scale = x[pivot].signum() / max;
    Ok(x.iter().map(|v| v * scale).collect())
}

fn residual_inf(kind: TensorKind, h: &Hypergraph, lambda: f64, x: &[f64]) -> f64 {
    let km1 = h.k() as i32 - 1;
    tensor::apply_unchecked(kind, h, x)
        .iter()
        .zip(x)
        .map(|(y, xi)| (y - lambda * xi.powi(km1)).abs())
        .fold(0.0, f64::max)
}

/// Checks `T x^{k-1} = λ x^{[k-1]}` and classifies the pair.
pub fn verify_eigenpair(
    kind: TensorKind,
    h: &Hypergraph,
    lambda: f64,
    x: &[f64],
    tol: f64,
) -> Result<EigenPair, EigenError> {
    if x.len() != h.n() {
        return Err(DimensionMismatch {
            expected: h.n(),
            found: x.len(),
        }
        .into());
    }
    let x = normalize_inf(x)?;
    let residual = residual_inf(kind, h, lambda, &x);
    let classification = if residual.is_nan() || residual > tol {
        Classification::NotEigenpair
    } else if x.iter().any(|&v| v < -POSITIVITY_THRESHOLD) {
        Classification::H
    } else if x.iter().all(|&v| v > POSITIVITY_THRESHOLD) {
        Classification::HPlusPlus
    } else {
        Classification::HPlusStrict
    };
    Ok(EigenPair {
        lambda,
        x,
        residual,
        tolerance: tol,
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerOptions {
    /// Target width of the Collatz–Wielandt bracket.
    pub tol: f64,
    pub max_iter: usize,
    /// Refine the final iterate with Newton steps on the eigen-system.
    pub polish: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 100_000,
            polish: true,
        }
    }
}

/// Spectral radius of the tensor restricted to one connected component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRadius {
    pub vertices: Vec<usize>,
    pub rho: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Positive on `vertices`, zero elsewhere, `‖·‖∞ = 1`.
    pub witness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadius {
    pub kind: TensorKind,
    pub rho: f64,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
    pub converged: bool,
    /// Index into `components` of the component attaining the maximum.
    pub winner: usize,
    pub components: Vec<ComponentRadius>,
}

impl SpectralRadius {
    pub fn witness(&self) -> &[f64] {
        &self.components[self.winner].witness
    }
}

/// `ρ(T)` for `T ∈ {A, Q}`, computed per connected component by a shifted
/// higher-order power iteration and reported as the maximum over components.
pub fn spectral_radius(
    kind: TensorKind,
    h: &Hypergraph,
    opts: &PowerOptions,
) -> Result<SpectralRadius, EigenError> {
    if !kind.is_nonnegative() {
        return Err(EigenError::NotNonnegative(kind));
    }
    let comps = h.components();
    let components: Vec<ComponentRadius> = comps
        .par_iter()
        .map(|vertices| {
            let sub = h.component_subgraph(vertices);
            let local = component_power_iteration(kind, &sub, opts);
            let mut witness = vec![0.0; h.n()];
            for (&v, &xv) in vertices.iter().zip(&local.x) {
                witness[v] = xv;
            }
            ComponentRadius {
                vertices: vertices.clone(),
                rho: local.rho,
                lower: local.lower,
                upper: local.upper,
                iterations: local.iterations,
                converged: local.converged,
                witness,
            }
        })
        .collect();
    let mut winner = 0;
    for (r, c) in components.iter().enumerate() {
        if c.rho > components[winner].rho {
            winner = r;
        }
    }
    let lower = components.iter().map(|c| c.lower).fold(f64::MIN, f64::max);
    let upper = components.iter().map(|c| c.upper).fold(f64::MIN, f64::max);
    Ok(SpectralRadius {
        kind,
        rho: components[winner].rho,
        lower,
        upper,
        tol: opts.tol,
        converged: components.iter().all(|c| c.converged),
        winner,
        components,
    })
}

struct LocalRadius {
    rho: f64,
    lower: f64,
    upper: f64,
    iterations: usize,
    converged: bool,
    x: Vec<f64>,
}

/// Min and max of `(T x^{k-1})_i / x_i^{k-1}` over a positive `x`.
fn collatz_wielandt(kind: TensorKind, h: &Hypergraph, x: &[f64]) -> (f64, f64, Vec<f64>) {
    let km1 = h.k() as i32 - 1;
    let y = tensor::apply_unchecked(kind, h, x);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (yi, xi) in y.iter().zip(x) {
        let r = yi / xi.powi(km1);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi, y)
}

fn component_power_iteration(kind: TensorKind, h: &Hypergraph, opts: &PowerOptions) -> LocalRadius {
    let k = h.k();
    let km1 = k as i32 - 1;
    let inv = 1.0 / (k - 1) as f64;
    let shift = h.max_degree() as f64 + 1.0;

    let mut x = vec![1.0; h.n()];
    let mut best_lo = f64::NEG_INFINITY;
    let mut best_hi = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let (lo, hi, y) = collatz_wielandt(kind, h, &x);
        iterations += 1;
        best_lo = best_lo.max(lo);
        best_hi = best_hi.min(hi);
        if best_hi - best_lo <= opts.tol {
            break;
        }
        let mut z: Vec<f64> = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| (yi + shift * xi.powi(km1)).powf(inv))
            .collect();
        let top = z.iter().fold(0.0f64, |m, &v| m.max(v));
        z.iter_mut().for_each(|v| *v /= top);
        x = z;
    }

    if opts.polish && h.n() <= POLISH_MAX_N {
        let guess = 0.5 * (best_lo + best_hi);
        if let Some(polished) = newton_polish(kind, h, &x, guess) {
            if polished.iter().all(|&v| v > 0.0) {
                let (lo, hi, _) = collatz_wielandt(kind, h, &polished);
                if hi - lo < best_hi - best_lo {
                    x = polished;
                }
                best_lo = best_lo.max(lo);
                best_hi = best_hi.min(hi);
            }
        }
    }
    if best_lo > best_hi {
        // rounding in the ratios can cross the bounds by an ulp or two
        std::mem::swap(&mut best_lo, &mut best_hi);
    }
    LocalRadius {
        rho: 0.5 * (best_lo + best_hi),
        lower: best_lo,
        upper: best_hi,
        iterations,
        converged: best_hi - best_lo <= opts.tol,
        x,
    }
}

/// Newton steps on `{T x^{k-1} - λ x^{[k-1]} = 0, x_p = 1}` from a positive
/// iterate, `p` its largest coordinate. Returns the normalized vector.
fn newton_polish(kind: TensorKind, h: &Hypergraph, x0: &[f64], lambda0: f64) -> Option<Vec<f64>> {
    let n = h.n();
    let k = h.k();
    let km1 = k as i32 - 1;
    let p = (0..n).max_by(|&a, &b| x0[a].total_cmp(&x0[b]))?;
    let mut x: Vec<f64> = x0.iter().map(|v| v / x0[p]).collect();
    let mut lambda = lambda0;
    let mut best = residual_inf(kind, h, lambda, &x);
    for _ in 0..8 {
        if best < 1e-15 {
            break;
        }
        let y = tensor::apply_unchecked(kind, h, &x);
        let jt = tensor::jacobian(kind, h, &x).ok()?;
        let mut jac = DMatrix::zeros(n + 1, n + 1);
        let mut rhs = DVector::zeros(n + 1);
        for i in 0..n {
            for l in 0..n {
                jac[(i, l)] = jt[(i, l)];
            }
            jac[(i, i)] -= lambda * (k - 1) as f64 * x[i].powi(km1 - 1);
            jac[(i, n)] = -x[i].powi(km1);
            rhs[i] = -(y[i] - lambda * x[i].powi(km1));
        }
        jac[(n, p)] = 1.0;
        let step = jac.lu().solve(&rhs)?;
        let cand: Vec<f64> = (0..n).map(|i| x[i] + step[i]).collect();
        let cand_lambda = lambda + step[n];
        let r = residual_inf(kind, h, cand_lambda, &cand);
        if r.is_nan() || r >= best {
            break;
        }
        best = r;
        x = cand;
        lambda = cand_lambda;
    }
    let top = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Some(x.into_iter().map(|v| v / top).collect())
}

/// Where a structural eigenpair comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairOrigin {
    /// `(d_j, 1^{(j)})` for `L` and `Q`.
    UnitVector { vertex: usize },
    /// `(0, 1)` for `L`.
    AllOnes,
    /// `(0, x)` for `A` with `1 <= |supp x| <= k - 2`.
    SmallSupport,
    /// `ρ(T(G_r))` with the component's positive witness.
    ComponentRadius { component: usize },
    /// `ρ(T)` with all component witnesses summed, when every component has
    /// the same radius.
    CommonRadius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralPair {
    pub origin: PairOrigin,
    pub pair: EigenPair,
}

/// Eigenpairs every k-graph (k >= 3) carries by construction.
pub fn structural_eigenpairs(
    kind: TensorKind,
    h: &Hypergraph,
    opts: &PowerOptions,
) -> Result<Vec<StructuralPair>, EigenError> {
    if h.k() < 3 {
        return Err(EigenError::OrderTooSmall(h.k()));
    }
    let n = h.n();
    let mut out = Vec::new();
    let mut push = |origin: PairOrigin, lambda: f64, x: &[f64]| -> Result<(), EigenError> {
        let pair = verify_eigenpair(kind, h, lambda, x, VERIFY_TOL)?;
        out.push(StructuralPair { origin, pair });
        Ok(())
    };
    match kind {
        TensorKind::Laplacian | TensorKind::SignlessLaplacian => {
            for j in 0..n {
                push(
                    PairOrigin::UnitVector { vertex: j },
                    h.degree(j) as f64,
                    &tensor::unit(n, j),
                )?;
            }
        }
        TensorKind::Adjacency => push(PairOrigin::SmallSupport, 0.0, &tensor::unit(n, 0))?,
    }
    match kind {
        TensorKind::Laplacian => push(PairOrigin::AllOnes, 0.0, &tensor::ones(n))?,
        TensorKind::Adjacency | TensorKind::SignlessLaplacian => {
            let sr = spectral_radius(kind, h, opts)?;
            for (r, c) in sr.components.iter().enumerate() {
                push(PairOrigin::ComponentRadius { component: r }, c.rho, &c.witness)?;
            }
            let tie = 2.0 * opts.tol;
            if sr.components.len() > 1 && sr.components.iter().all(|c| (c.rho - sr.rho).abs() <= tie) {
                let mut sum = vec![0.0; n];
                for c in &sr.components {
                    for (s, w) in sum.iter_mut().zip(&c.witness) {
                        *s += w;
                    }
                }
                push(PairOrigin::CommonRadius, sr.rho, &sum)?;
            }
        }
    }
    Ok(out)
}

/// One 0/1 indicator per connected component; each is a Laplacian
/// eigenvector for the eigenvalue zero.
pub fn minimal_binary_eigenvectors(h: &Hypergraph) -> Vec<Vec<f64>> {
    h.components()
        .iter()
        .map(|c| tensor::indicator(h.n(), c))
        .collect()
}

/// Degree bounds on `λ₁ = ρ(A)` and `ν₁ = ρ(Q)`.
pub fn bound_report(h: &Hypergraph, lambda1: f64, nu1: f64) -> BoundReport {
    let stats = h.degree_stats();
    let max = stats.max as f64;
    let avg = stats.average_f64();
    BoundReport {
        checks: vec![
            BoundCheck::le("avg_degree_le_lambda1", avg, lambda1),
            BoundCheck::le("lambda1_le_max_degree", lambda1, max),
            BoundCheck::le("max_degree_le_nu1", max, nu1),
            BoundCheck::le("twice_avg_degree_le_nu1", 2.0 * avg, nu1),
            BoundCheck::le("nu1_le_twice_max_degree", nu1, 2.0 * max),
            BoundCheck::le("lambda1_le_nu1", lambda1, nu1),
            BoundCheck::le("nu1_in_gershgorin_disk", (nu1 - max).abs(), max),
        ],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QDefiniteness {
    PositiveDefinite,
    /// `Q x^{k-1} = 0` for the ±1/0 witness.
    HasZeroEigenvalue { witness: Vec<f64> },
    Inconclusive { reason: String },
}

pub const DEFAULT_MAX_EXHAUSTIVE_N: usize = 24;

/// Decides whether `Q` (even `k`) is positive definite.
///
/// For `k ≡ 0 (mod 4)` it always is. For `k ≡ 2 (mod 4)`, zero is an
/// eigenvalue exactly when some component admits signs `±1` splitting every
/// edge half and half; those are searched exhaustively.
pub fn q_positive_definiteness_probe(
    h: &Hypergraph,
    max_exhaustive_n: usize,
) -> Result<QDefiniteness, EigenError> {
    let k = h.k();
    if k % 2 == 1 {
        return Err(EigenError::OddOrder(k));
    }
    if k.is_multiple_of(4) {
        return Ok(QDefiniteness::PositiveDefinite);
    }
    if h.n() > max_exhaustive_n {
        return Ok(QDefiniteness::Inconclusive {
            reason: format!("n = {} exceeds the exhaustive limit {max_exhaustive_n}", h.n()),
        });
    }
    for comp in h.components() {
        let sub = h.component_subgraph(&comp);
        if let Some(signs) = balanced_signs(&sub) {
            let mut witness = vec![0.0; h.n()];
            for (&v, &s) in comp.iter().zip(&signs) {
                witness[v] = s as f64;
            }
            return Ok(QDefiniteness::HasZeroEigenvalue { witness });
        }
    }
    Ok(QDefiniteness::PositiveDefinite)
}

/// Backtracking search for `s ∈ {±1}^n` with exactly `k/2` positive entries
/// on every edge. Vertex 0 is fixed to `+1`.
fn balanced_signs(h: &Hypergraph) -> Option<Vec<i8>> {
    struct Search<'a> {
        h: &'a Hypergraph,
        half: usize,
        plus: Vec<usize>,
        minus: Vec<usize>,
        signs: Vec<i8>,
    }

    impl Search<'_> {
        fn assign(&mut self, v: usize) -> bool {
            if v == self.h.n() {
                return true;
            }
            let choices: &[i8] = if v == 0 { &[1] } else { &[1, -1] };
            for &s in choices {
                let edges = self.h.incident_edges(v);
                let counts = if s > 0 { &mut self.plus } else { &mut self.minus };
                let fits = edges.iter().all(|&p| counts[p] < self.half);
                if !fits {
                    continue;
                }
                for &p in edges {
                    counts[p] += 1;
                }
                self.signs[v] = s;
                if self.assign(v + 1) {
                    return true;
                }
                let counts = if s > 0 { &mut self.plus } else { &mut self.minus };
                for &p in edges {
                    counts[p] -= 1;
                }
            }
            false
        }
    }

    let mut search = Search {
        h,
        half: h.k() / 2,
        plus: vec![0; h.m()],
        minus: vec![0; h.m()],
        signs: vec![0; h.n()],
    };
    search.assign(0).then_some(search.signs)
}
