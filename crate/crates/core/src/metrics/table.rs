use std::collections::BTreeMap;
use std::io::{self, Write};

use super::ensemble::EnsembleSummary;
use super::estimators::transfer_entropy;
use super::MetricsError;
use crate::agent::InterventionKind;

/// Time series of every measure for one intervention.
#[derive(Clone, Debug, PartialEq)]
pub struct InterventionSeries {
    /// Length `horizon`.
    pub cmi_bits: Vec<f64>,
    /// Length `horizon + 1`.
    pub mi_bits: Vec<f64>,
    /// Length `horizon + 1`, starting at zero.
    pub te_bits: Vec<f64>,
    /// Length `horizon + 1`.
    pub viability: Vec<f64>,
}

impl From<&EnsembleSummary> for InterventionSeries {
    fn from(s: &EnsembleSummary) -> Self {
        Self {
            te_bits: transfer_entropy(&s.cmi_bits),
            cmi_bits: s.cmi_bits.clone(),
            mi_bits: s.mi_bits.clone(),
            viability: s.viability(),
        }
    }
}

/// Per-intervention, per-step results, ordered `cap0..cap9, dead, fixed`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MetricsTable {
    rows: BTreeMap<InterventionKind, InterventionSeries>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemanticInfo {
    pub bits: f64,
    pub argmin: InterventionKind,
}

impl MetricsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: InterventionKind, series: InterventionSeries) {
        self.rows.insert(kind, series);
    }

    pub fn insert_summary(&mut self, summary: &EnsembleSummary) {
        self.insert(summary.intervention.kind, summary.into());
    }

    pub fn row(&self, kind: InterventionKind) -> Option<&InterventionSeries> {
        self.rows.get(&kind)
    }

    pub fn rows(&self) -> impl Iterator<Item = (InterventionKind, &InterventionSeries)> {
        self.rows.iter().map(|(&k, s)| (k, s))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Last time index covered by every row.
    pub fn horizon(&self) -> usize {
        self.rows
            .values()
            .map(|s| s.viability.len().saturating_sub(1))
            .min()
            .unwrap_or(0)
    }

    fn require(&self, kind: InterventionKind) -> Result<&InterventionSeries, MetricsError> {
        self.row(kind)
            .ok_or_else(|| MetricsError::MissingIntervention(kind.to_string()))
    }

    fn check_step(&self, k: usize) -> Result<(), MetricsError> {
        let horizon = self.horizon();
        if k > horizon || self.rows.is_empty() {
            return Err(MetricsError::StepOutOfRange { k, horizon });
        }
        Ok(())
    }

    /// `V_9[k] - V_fixed[k]`.
    pub fn delta_viability(&self, k: usize) -> Result<f64, MetricsError> {
        self.check_step(k)?;
        let v = self.require(InterventionKind::DEFAULT)?.viability[k];
        let vf = self.require(InterventionKind::Fixed)?.viability[k];
        Ok(v - vf)
    }

    pub fn write_viability_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_series(out, "viability", |s| &s.viability)
    }

    pub fn write_cmi_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_series(out, "cmi_bits", |s| &s.cmi_bits)
    }

    pub fn write_te_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_series(out, "te_bits", |s| &s.te_bits)
    }

    pub fn write_mi_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        self.write_series(out, "mi_bits", |s| &s.mi_bits)
    }

    fn write_series<W, F>(&self, out: &mut W, column: &str, pick: F) -> io::Result<()>
    where
        W: Write,
        F: Fn(&InterventionSeries) -> &Vec<f64>,
    {
        writeln!(out, "iota,k,{column}")?;
        for (kind, series) in &self.rows {
            for (k, v) in pick(series).iter().enumerate() {
                writeln!(out, "{kind},{k},{v}")?;
            }
        }
        Ok(())
    }

    /// One row per time step with the observed semantic information.
    pub fn write_semantic_csv<W: Write>(&self, out: &mut W, eps: f64) -> Result<(), SemanticCsvError> {
        writeln!(out, "k,eps,argmin_iota,S_bits,te_default_bits")?;
        let default = self.require(InterventionKind::DEFAULT)?;
        for k in 0..=self.horizon() {
            let s = observed_semantic_information(self, k, eps)?;
            writeln!(out, "{k},{eps},{},{},{}", s.argmin, s.bits, default.te_bits[k])?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SemanticCsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Smallest transfer entropy among interventions whose viability is at least
/// `(1 - eps)` times the viability of the unmodified bacterium, and the
/// intervention attaining it. Ties go to the first row in table order.
pub fn observed_semantic_information(
    table: &MetricsTable,
    k: usize,
    eps: f64,
) -> Result<SemanticInfo, MetricsError> {
    table.check_step(k)?;
    let reference = table.require(InterventionKind::DEFAULT)?.viability[k];
    let threshold = reference * (1.0 - eps);
    let mut best: Option<SemanticInfo> = None;
    for (kind, series) in table.rows() {
        if series.viability[k] < threshold {
            continue;
        }
        let te = series.te_bits[k];
        if best.is_none_or(|b| te < b.bits) {
            best = Some(SemanticInfo { bits: te, argmin: kind });
        }
    }
    Ok(best.expect("the reference intervention always satisfies its own constraint"))
}
