//! Spectra, eigenpair verification and connectivity of k-uniform hypergraphs.
//!
//! The adjacency tensor `A`, Laplacian `L = D - A` and signless Laplacian
//! `Q = D + A` are never materialized; every operation walks the edge list.

pub mod connectivity;
pub mod eigen;
pub mod hypergraph;
pub mod oracle;
pub mod report;
pub mod tensor;

pub use connectivity::{
    analytic_connectivity, connectivity_bound_report, cut_numbers, AlphaCertificate, AlphaOptions,
    ConnectivityError, CutNumbers, CutWitness,
};
pub use eigen::{
    spectral_radius, structural_eigenpairs, verify_eigenpair, Classification, EigenError,
    EigenPair, PowerOptions, QDefiniteness, SpectralRadius,
};
pub use hypergraph::{CutInfo, DegreeStats, Hypergraph, HypergraphError};
pub use report::{BoundCheck, BoundReport};
pub use tensor::TensorKind;
