use hyperspec::connectivity::{self, ALPHA_POSITIVE, DEFAULT_MAX_BRUTE_N};
use hyperspec::eigen::{self, StructuralPair, DEFAULT_MAX_EXHAUSTIVE_N};
use hyperspec::{
    AlphaCertificate, AlphaOptions, BoundCheck, BoundReport, CutNumbers, EigenError, EigenPair,
    Hypergraph, PowerOptions, QDefiniteness, SpectralRadius, TensorKind,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "hyperspec/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionsEcho {
    pub tol: f64,
    pub max_iter: usize,
    pub starts: usize,
    pub seed: u64,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub average_degree: f64,
    /// Exact average degree `km/n` as a reduced fraction.
    pub average_degree_exact: String,
    pub components: usize,
}

impl GraphSummary {
    pub fn of(h: &Hypergraph) -> Self {
        let stats = h.degree_stats();
        Self {
            k: h.k(),
            n: h.n(),
            m: h.m(),
            max_degree: stats.max,
            min_degree: stats.min,
            average_degree: stats.average_f64(),
            average_degree_exact: stats.average.to_string(),
            components: h.components().len(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "k={} n={} m={} Δ={} δ={} d̄={} components={}",
            self.k, self.n, self.m, self.max_degree, self.min_degree, self.average_degree_exact, self.components
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindSpectrum {
    pub kind: TensorKind,
    /// Only for the nonnegative tensors `A` and `Q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<SpectralRadius>,
    pub structural: Vec<StructuralPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSection {
    pub certificate: AlphaCertificate,
    /// `alpha` above this counts as positive.
    pub positive_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numbers: Option<CutNumbers>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Everything a command computed. Vertex indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub schema: String,
    pub version: String,
    pub command: String,
    pub options: OptionsEcho,
    pub graph: GraphSummary,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spectra: Vec<KindSpectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<CutSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_definiteness: Option<QDefiniteness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<EigenPair>,
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
    pub converged: bool,
}

impl SpectralReport {
    pub fn new(command: &str, options: OptionsEcho, h: &Hypergraph) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            options,
            graph: GraphSummary::of(h),
            spectra: Vec::new(),
            alpha: None,
            cuts: None,
            q_definiteness: None,
            verification: None,
            checks: Vec::new(),
            all_pass: true,
            converged: true,
        }
    }

    pub fn push_checks(&mut self, report: BoundReport) {
        self.checks.extend(report.checks);
        self.all_pass = self.checks.iter().all(|c| c.holds);
    }

    pub fn add_spectra(
        &mut self,
        h: &Hypergraph,
        kinds: &[TensorKind],
        opts: &PowerOptions,
    ) -> Result<(), EigenError> {
        let mut lambda1 = None;
        let mut nu1 = None;
        let mut checks = Vec::new();
        for &kind in kinds {
            let radius = if kind.is_nonnegative() {
                let r = eigen::spectral_radius(kind, h, opts)?;
                self.converged &= r.converged;
                match kind {
                    TensorKind::Adjacency => lambda1 = Some(r.rho),
                    _ => nu1 = Some(r.rho),
                }
                Some(r)
            } else {
                None
            };
            let (structural, note) = match eigen::structural_eigenpairs(kind, h, opts) {
                Ok(pairs) => (pairs, None),
                Err(EigenError::OrderTooSmall(k)) => {
                    (Vec::new(), Some(format!("structural pairs need k >= 3, got k = {k}")))
                }
                Err(e) => return Err(e),
            };
            if !structural.is_empty() {
                checks.push(BoundCheck::condition(
                    format!("structural_pairs_verify_{}", kind.symbol()),
                    structural.iter().all(|p| p.pair.classification.is_eigenpair()),
                ));
            }
            self.spectra.push(KindSpectrum {
                kind,
                radius,
                structural,
                note,
            });
        }
        if lambda1.is_some() || nu1.is_some() {
            let bounds = eigen::bound_report(h, lambda1.unwrap_or(f64::NAN), nu1.unwrap_or(f64::NAN));
            checks.extend(bounds.checks.into_iter().filter(|c| {
                (lambda1.is_some() || !c.id.contains("lambda1")) && (nu1.is_some() || !c.id.contains("nu1"))
            }));
        }
        self.push_checks(BoundReport { checks });
        Ok(())
    }

    pub fn add_alpha(&mut self, h: &Hypergraph, opts: &AlphaOptions, with_cuts: bool) {
        let certificate = connectivity::analytic_connectivity(h, opts);
        self.converged &= certificate.converged;
        let cuts = if with_cuts {
            match connectivity::cut_numbers(h, DEFAULT_MAX_BRUTE_N) {
                Ok(c) => CutSection {
                    numbers: Some(c),
                    note: None,
                },
                Err(_) => CutSection {
                    numbers: None,
                    note: Some(format!("skipped: n > {DEFAULT_MAX_BRUTE_N}")),
                },
            }
        } else {
            CutSection {
                numbers: None,
                note: None,
            }
        };
        let bounds = connectivity::connectivity_bound_report(h, &certificate, cuts.numbers.as_ref(), opts);
        self.push_checks(bounds);
        if with_cuts {
            self.cuts = Some(cuts);
        }
        let note = (!certificate.is_positive()).then(|| "disconnected".to_string());
        self.alpha = Some(AlphaSection {
            certificate,
            positive_threshold: ALPHA_POSITIVE,
            note,
        });
    }

    pub fn add_q_definiteness(&mut self, h: &Hypergraph) {
        if h.k().is_multiple_of(2) {
            self.q_definiteness = eigen::q_positive_definiteness_probe(h, DEFAULT_MAX_EXHAUSTIVE_N).ok();
        }
    }
}
