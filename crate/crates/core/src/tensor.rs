//! Matrix-free evaluation of the adjacency tensor `A`, the Laplacian tensor
//! `L = D - A` and the signless Laplacian tensor `Q = D + A`.
//!
//! Entries of `A` are `1/(k-1)!` on every permutation of an edge. Summing
//! those permutations analytically, each edge `e` contributes
//! `prod_{j in e, j != i} x_j` to `(A x^{k-1})_i` and `k * prod_{j in e} x_j`
//! to `A x^k`, so every routine here costs `O(m k)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;

/// Edge count above which reductions over edges switch to compensated sums.
const COMPENSATED_THRESHOLD: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TensorKind {
    Adjacency,
    Laplacian,
    SignlessLaplacian,
}

impl TensorKind {
    pub const ALL: [TensorKind; 3] = [
        TensorKind::Adjacency,
        TensorKind::Laplacian,
        TensorKind::SignlessLaplacian,
    ];

    /// Coefficient of the degree tensor `D`.
    fn diagonal_sign(self) -> f64 {
        match self {
            TensorKind::Adjacency => 0.0,
            TensorKind::Laplacian => 1.0,
            TensorKind::SignlessLaplacian => 1.0,
        }
    }

    /// Coefficient of the adjacency tensor `A`.
    fn adjacency_sign(self) -> f64 {
        match self {
            TensorKind::Adjacency => 1.0,
            TensorKind::Laplacian => -1.0,
            TensorKind::SignlessLaplacian => 1.0,
        }
    }

    /// Whether every entry of the tensor is nonnegative.
    pub fn is_nonnegative(self) -> bool {
        self != TensorKind::Laplacian
    }

    pub fn symbol(self) -> &'static str {
        match self {
            TensorKind::Adjacency => "A",
            TensorKind::Laplacian => "L",
            TensorKind::SignlessLaplacian => "Q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("vector has length {found}, graph has {expected} vertices")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

fn check_dim(h: &Hypergraph, x: &[f64]) -> Result<(), DimensionMismatch> {
    if x.len() == h.n() {
        Ok(())
    } else {
        Err(DimensionMismatch {
            expected: h.n(),
            found: x.len(),
        })
    }
}

/// `x^{[r]}`, the componentwise r-th power.
pub fn elementwise_power(x: &[f64], r: u32) -> Vec<f64> {
    x.iter().map(|v| v.powi(r as i32)).collect()
}

/// The all-ones vector.
pub fn ones(n: usize) -> Vec<f64> {
    vec![1.0; n]
}

/// The unit vector `1^{(j)}`.
pub fn unit(n: usize, j: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[j] = 1.0;
    v
}

/// Indicator vector of a vertex set.
pub fn indicator(n: usize, set: &[usize]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for &i in set {
        v[i] = 1.0;
    }
    v
}

/// Leave-one-out products of the edge coordinates, written into `out`.
///
/// Prefix/suffix passes avoid dividing by zero coordinates.
fn leave_one_out(edge: &[usize], x: &[f64], out: &mut [f64]) {
    let mut prefix = 1.0;
    for (slot, &v) in out.iter_mut().zip(edge) {
        *slot = prefix;
        prefix *= x[v];
    }
    let mut suffix = 1.0;
    for (slot, &v) in out.iter_mut().zip(edge).rev() {
        *slot *= suffix;
        suffix *= x[v];
    }
}

/// `T x^{k-1}`.
pub fn apply(kind: TensorKind, h: &Hypergraph, x: &[f64]) -> Result<Vec<f64>, DimensionMismatch> {
    check_dim(h, x)?;
    Ok(apply_unchecked(kind, h, x))
}

pub(crate) fn apply_unchecked(kind: TensorKind, h: &Hypergraph, x: &[f64]) -> Vec<f64> {
    let k = h.k();
    let km1 = (k - 1) as i32;
    let diag = kind.diagonal_sign();
    let adj = kind.adjacency_sign();
    let mut out: Vec<f64> = if diag == 0.0 {
        vec![0.0; h.n()]
    } else {
        x.iter()
            .zip(h.degrees())
            .map(|(&xi, &d)| diag * d as f64 * xi.powi(km1))
            .collect()
    };
    let mut loo = vec![0.0; k];
    for e in h.edges() {
        leave_one_out(e, x, &mut loo);
        for (&v, &p) in e.iter().zip(&loo) {
            out[v] += adj * p;
        }
    }
    out
}

/// Contribution of one edge to `T x^k`:
/// `sum_j x_j^k -/+ k prod_j x_j` for `L`/`Q`, and `k prod_j x_j` for `A`.
pub fn edge_form(kind: TensorKind, edge: &[usize], x: &[f64]) -> f64 {
    let k = edge.len();
    let product: f64 = edge.iter().map(|&v| x[v]).product();
    let powers: f64 = if kind.diagonal_sign() == 0.0 {
        0.0
    } else {
        edge.iter().map(|&v| x[v].powi(k as i32)).sum()
    };
    kind.diagonal_sign() * powers + kind.adjacency_sign() * k as f64 * product
}

/// `T x^k`, accumulated edge by edge.
pub fn form(kind: TensorKind, h: &Hypergraph, x: &[f64]) -> Result<f64, DimensionMismatch> {
    check_dim(h, x)?;
    Ok(form_unchecked(kind, h, x))
}

pub(crate) fn form_unchecked(kind: TensorKind, h: &Hypergraph, x: &[f64]) -> f64 {
    let terms = h.edges().map(|e| edge_form(kind, e, x));
    if h.m() > COMPENSATED_THRESHOLD {
        kahan_sum(terms)
    } else {
        terms.sum()
    }
}

fn kahan_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for t in terms {
        let y = t - carry;
        let s = sum + y;
        carry = (s - sum) - y;
        sum = s;
    }
    sum
}

/// `∇(T x^k) = k T x^{k-1}` (the tensors are symmetric).
pub fn form_gradient(
    kind: TensorKind,
    h: &Hypergraph,
    x: &[f64],
) -> Result<Vec<f64>, DimensionMismatch> {
    let k = h.k() as f64;
    Ok(apply(kind, h, x)?.into_iter().map(|v| k * v).collect())
}

/// Jacobian of `x ↦ T x^{k-1}` as a dense `n × n` matrix.
pub fn jacobian(
    kind: TensorKind,
    h: &Hypergraph,
    x: &[f64],
) -> Result<DMatrix<f64>, DimensionMismatch> {
    check_dim(h, x)?;
    let n = h.n();
    let k = h.k();
    let mut jac = DMatrix::zeros(n, n);
    let diag = kind.diagonal_sign();
    if diag != 0.0 {
        for i in 0..n {
            jac[(i, i)] = diag * ((k - 1) * h.degree(i)) as f64 * x[i].powi(k as i32 - 2);
        }
    }
    let adj = kind.adjacency_sign();
    for e in h.edges() {
        for (a, &i) in e.iter().enumerate() {
            for (b, &l) in e.iter().enumerate() {
                if a == b {
                    continue;
                }
                let p: f64 = e
                    .iter()
                    .enumerate()
                    .filter(|&(c, _)| c != a && c != b)
                    .map(|(_, &v)| x[v])
                    .product();
                jac[(i, l)] += adj * p;
            }
        }
    }
    Ok(jac)
}
