//! Empirical measurement statistics: the dataset file format, evaluation of
//! relations straight from joint outcome distributions, and simulation of
//! what a local von Neumann measurement experiment would record.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{digest, fmt_sig12, sig12};
use crate::linalg::{ComplexMatrix, DensityMatrix, Eigensystem};
use crate::relations::{LurReport, LurSpec, SettingReport};
use crate::tolerance::Tolerances;

/// Whether outcome weights are raw counts or normalized probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    Counts,
    Probabilities,
}

/// One joint outcome: eigenvalue `a` on side A, `b` on side B, weight `w`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Outcome {
    pub a: f64,
    pub b: f64,
    pub w: f64,
}

/// Joint outcome statistics for one measurement setting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettingRecord {
    pub label: String,
    pub outcomes: Vec<Outcome>,
}

impl SettingRecord {
    pub fn total_weight(&self) -> f64 {
        self.outcomes.iter().map(|o| o.w).sum()
    }

    /// Weights normalized to probabilities (counts divided by their total;
    /// probability inputs renormalized away from their ≤1e-6 slack).
    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total_weight();
        self.outcomes.iter().map(|o| o.w / total).collect()
    }
}

/// Per-setting joint outcome statistics for a bipartite experiment.
///
/// The JSON form is exactly the serde representation:
/// `{"dims":[NA,NB], "mode":"counts"|"probabilities",
///   "settings":[{"label":…, "outcomes":[{"a":…,"b":…,"w":…},…]},…]}`.
/// Omitted outcome pairs mean weight zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementDataset {
    pub dims: [usize; 2],
    pub mode: WeightMode,
    pub settings: Vec<SettingRecord>,
}

impl MeasurementDataset {
    pub fn setting(&self, label: &str) -> Option<&SettingRecord> {
        self.settings.iter().find(|s| s.label == label)
    }

    /// Serialize with weights rounded to 12 significant digits (canonical
    /// file form).
    pub fn to_json(&self) -> String {
        let rounded = MeasurementDataset {
            dims: self.dims,
            mode: self.mode,
            settings: self
                .settings
                .iter()
                .map(|s| SettingRecord {
                    label: s.label.clone(),
                    outcomes: s
                        .outcomes
                        .iter()
                        .map(|o| Outcome {
                            a: sig12(o.a),
                            b: sig12(o.b),
                            w: sig12(o.w),
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&rounded).expect("dataset serialization cannot fail")
    }
}

/// Parse and validate a dataset file. Checks the schema, weight signs,
/// duplicate outcome pairs, duplicate setting labels, and normalization
/// (probabilities must sum to one within 1e-6; counts must total > 0).
pub fn parse(text: &str) -> Result<MeasurementDataset> {
    parse_with_tolerances(text, &Tolerances::default())
}

pub fn parse_with_tolerances(text: &str, tol: &Tolerances) -> Result<MeasurementDataset> {
    let ds: MeasurementDataset =
        serde_json::from_str(text).map_err(|e| Error::SchemaError(format!("dataset file: {e}")))?;

    if ds.dims[0] < 2 || ds.dims[1] < 2 {
        return Err(Error::SchemaError(format!(
            "dims must be at least [2,2], got {:?}",
            ds.dims
        )));
    }
    for (i, s) in ds.settings.iter().enumerate() {
        if ds.settings[..i].iter().any(|prev| prev.label == s.label) {
            return Err(Error::SchemaError(format!(
                "duplicate setting label '{}'",
                s.label
            )));
        }
        if s.outcomes.is_empty() {
            return Err(Error::SchemaError(format!(
                "setting '{}' has no outcomes",
                s.label
            )));
        }
        for (j, o) in s.outcomes.iter().enumerate() {
            if !o.a.is_finite() || !o.b.is_finite() || !o.w.is_finite() {
                return Err(Error::SchemaError(format!(
                    "setting '{}' has a non-finite outcome entry",
                    s.label
                )));
            }
            if o.w < 0.0 {
                return Err(Error::NormalizationError(format!(
                    "setting '{}' has a negative weight {}",
                    s.label, o.w
                )));
            }
            if s.outcomes[..j]
                .iter()
                .any(|p| (p.a - o.a).abs() <= 1e-9 && (p.b - o.b).abs() <= 1e-9)
            {
                return Err(Error::SchemaError(format!(
                    "setting '{}' lists outcome ({}, {}) more than once",
                    s.label, o.a, o.b
                )));
            }
        }
        let total = s.total_weight();
        match ds.mode {
            WeightMode::Probabilities => {
                if (total - 1.0).abs() > tol.probability_sum {
                    return Err(Error::NormalizationError(format!(
                        "setting '{}': probabilities sum to {total}, expected 1 within {:.1e}",
                        s.label, tol.probability_sum
                    )));
                }
            }
            WeightMode::Counts => {
                if total <= 0.0 {
                    return Err(Error::NormalizationError(format!(
                        "setting '{}': counts must have a positive total",
                        s.label
                    )));
                }
            }
        }
    }
    Ok(ds)
}

/// Sample variance of a + b under the record's outcome distribution.
pub fn empirical_variance(record: &SettingRecord) -> f64 {
    let probs = record.probabilities();
    let mut mean = 0.0;
    let mut mean_sq = 0.0;
    for (o, p) in record.outcomes.iter().zip(&probs) {
        let s = o.a + o.b;
        mean += p * s;
        mean_sq += p * s * s;
    }
    (mean_sq - mean * mean).max(0.0)
}

/// Distinct eigenvalues of a decomposition with their eigenspace projectors,
/// descending. Values closer than `tol` are pooled into one cluster, so the
/// projector depends only on the eigenspace, never on the eigenvector choice
/// inside a degenerate cluster.
pub(crate) fn pooled_spectrum(eigen: &Eigensystem, tol: f64) -> Vec<(f64, ComplexMatrix)> {
    let n = eigen.values.len();
    let mut out: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut k = 0;
    while k < n {
        let start = k;
        while k < n && (eigen.values[start] - eigen.values[k]).abs() <= tol {
            k += 1;
        }
        let cluster = &eigen.values[start..k];
        let value = cluster.iter().sum::<f64>() / cluster.len() as f64;
        let mut projector = ComplexMatrix::zeros(n, n);
        for col in start..k {
            let v = eigen.eigenvector(col);
            projector = &projector + &ComplexMatrix::outer(&v, &v);
        }
        out.push((value, projector));
    }
    out
}

/// Evaluate a relation from measured statistics. Every spec setting must have
/// a record whose outcome values match the operator spectra.
pub fn evaluate_from_data(ds: &MeasurementDataset, spec: &LurSpec) -> Result<LurReport> {
    evaluate_from_data_with_tolerances(ds, spec, &Tolerances::default())
}

pub fn evaluate_from_data_with_tolerances(
    ds: &MeasurementDataset,
    spec: &LurSpec,
    tol: &Tolerances,
) -> Result<LurReport> {
    let (na, nb) = spec.dims();
    if ds.dims[0] != na || ds.dims[1] != nb {
        return Err(Error::DimMismatch {
            context: "dataset dims vs relation dims",
            got: ds.dims[0] * ds.dims[1],
            expected: na * nb,
        });
    }

    let mut per_setting = Vec::with_capacity(spec.settings().len());
    for (i, setting) in spec.settings().iter().enumerate() {
        let record = ds
            .setting(setting.label())
            .ok_or_else(|| Error::MissingSetting(setting.label().to_string()))?;

        let spectrum_a: Vec<f64> = pooled_spectrum(spec.obs_a().get(i).eigen(), tol.spectrum_match)
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        let spectrum_b: Vec<f64> = pooled_spectrum(spec.obs_b().get(i).eigen(), tol.spectrum_match)
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        for o in &record.outcomes {
            for (value, spectrum) in [(o.a, &spectrum_a), (o.b, &spectrum_b)] {
                if !spectrum.iter().any(|&s| (s - value).abs() <= tol.spectrum_match) {
                    return Err(Error::SpectrumMismatch {
                        setting: setting.label().to_string(),
                        value,
                        tolerance: tol.spectrum_match,
                    });
                }
            }
        }

        let shots = match ds.mode {
            WeightMode::Counts => Some(record.total_weight().round() as u64),
            WeightMode::Probabilities => None,
        };
        per_setting.push(SettingReport {
            label: setting.label().to_string(),
            variance: empirical_variance(record),
            shots,
        });
    }

    let input_digest = digest(
        serde_json::to_string(ds)
            .expect("dataset serialization cannot fail")
            .as_bytes(),
    );
    Ok(LurReport::from_variances(
        spec,
        per_setting,
        input_digest,
        tol.judge,
    ))
}

/// How [`simulate`] turns Born probabilities into a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Emit the exact probabilities P(a,b) = tr{ρ(Πₐ⊗Π_b)}.
    Exact,
    /// Draw one multinomial sample of this size per setting.
    Shots(u64),
}

/// Record what local von Neumann measurements of the relation's settings
/// would produce on `rho`. Every joint eigenvalue pair appears, including
/// zero-probability ones, so a spin-1 two-setting relation always yields
/// 2 × 9 = 18 outcome entries. Deterministic for a fixed seed: each setting
/// draws from its own pre-assigned generator stream.
pub fn simulate(
    rho: &DensityMatrix,
    spec: &LurSpec,
    sampling: Sampling,
    seed: u64,
) -> Result<MeasurementDataset> {
    if rho.dim() != spec.joint_dim() {
        return Err(Error::DimMismatch {
            context: "state dimension vs relation joint dimension",
            got: rho.dim(),
            expected: spec.joint_dim(),
        });
    }
    let tol = Tolerances::default();
    let (na, nb) = spec.dims();

    let mut settings = Vec::with_capacity(spec.settings().len());
    for (i, setting) in spec.settings().iter().enumerate() {
        let pool_a = pooled_spectrum(spec.obs_a().get(i).eigen(), tol.spectrum_match);
        let pool_b = pooled_spectrum(spec.obs_b().get(i).eigen(), tol.spectrum_match);

        let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(pool_a.len() * pool_b.len());
        let mut probs: Vec<f64> = Vec::with_capacity(pool_a.len() * pool_b.len());
        for (va, pa) in &pool_a {
            for (vb, pb) in &pool_b {
                let p = rho.matrix().trace_product(&pa.kron(pb)).re.max(0.0);
                pairs.push((*va, *vb));
                probs.push(p);
            }
        }
        // Born probabilities over a complete outcome set; renormalize away
        // the ~1e-15 rounding drift.
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Internal(format!(
                "simulated probabilities for '{}' sum to {total}",
                setting.label()
            )));
        }
        for p in &mut probs {
            *p /= total;
        }

        let outcomes = match sampling {
            Sampling::Exact => pairs
                .iter()
                .zip(&probs)
                .map(|(&(a, b), &p)| Outcome { a, b, w: p })
                .collect(),
            Sampling::Shots(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                let mut counts = vec![0u64; probs.len()];
                for _ in 0..n {
                    let x: f64 = rng.random();
                    let mut acc = 0.0;
                    let mut chosen = probs.len() - 1;
                    for (k, &p) in probs.iter().enumerate() {
                        acc += p;
                        if x < acc {
                            chosen = k;
                            break;
                        }
                    }
                    counts[chosen] += 1;
                }
                pairs
                    .iter()
                    .zip(&counts)
                    .map(|(&(a, b), &c)| Outcome { a, b, w: c as f64 })
                    .collect()
            }
        };
        settings.push(SettingRecord {
            label: setting.label().to_string(),
            outcomes,
        });
    }

    Ok(MeasurementDataset {
        dims: [na, nb],
        mode: match sampling {
            Sampling::Exact => WeightMode::Probabilities,
            Sampling::Shots(_) => WeightMode::Counts,
        },
        settings,
    })
}

/// CSV rendering of a report: one row per setting plus a totals row carrying
/// the bound, relative violation, margin and verdict.
pub fn report_to_csv(report: &LurReport) -> String {
    let mut out = String::from("label,variance,shots,bound,c_lur,margin,verdict\n");
    for s in &report.per_setting {
        let shots = s.shots.map(|n| n.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{shots},,,,\n", s.label, fmt_sig12(s.variance)));
    }
    let verdict = match report.verdict {
        crate::relations::Verdict::Entangled => "entangled",
        crate::relations::Verdict::Inconclusive => "inconclusive",
    };
    out.push_str(&format!(
        "total,{},,{},{},{},{verdict}\n",
        fmt_sig12(report.total),
        fmt_sig12(report.bound),
        fmt_sig12(report.c_lur),
        fmt_sig12(report.margin)
    ));
    out
}
