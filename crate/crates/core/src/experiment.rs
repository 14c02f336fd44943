//! Experiment presets: parameter grids swept over every intervention, with
//! CSV reports and a manifest.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::agent::InterventionKind;
use crate::config::render_config;
use crate::engine::SimConfig;
use crate::metrics::{estimate_ensemble, EnsembleSummary, MetricsTable, SemanticCsvError};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentPreset {
    /// Viability over time for every intervention at the base parameters.
    ViabilityFig3,
    /// Mutual information over time for a gradually and a jumping source.
    MutualInfoStudy,
    /// Transfer entropy against viability for one to three nutrients per step.
    TeVsViability,
    /// The base configuration as loaded, swept over all interventions.
    Custom,
}

impl ExperimentPreset {
    pub const ALL: [ExperimentPreset; 4] = [
        ExperimentPreset::ViabilityFig3,
        ExperimentPreset::MutualInfoStudy,
        ExperimentPreset::TeVsViability,
        ExperimentPreset::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentPreset::ViabilityFig3 => "viability_fig3",
            ExperimentPreset::MutualInfoStudy => "mutual_info_study",
            ExperimentPreset::TeVsViability => "te_vs_viability",
            ExperimentPreset::Custom => "custom",
        }
    }

    /// Expands the preset around `base`. Points with an empty label write
    /// straight into the output directory.
    pub fn grid(self, base: &SimConfig) -> Vec<GridPoint> {
        let point = |label: &str, edit: &dyn Fn(&mut SimConfig)| {
            let mut config = base.clone();
            edit(&mut config);
            GridPoint {
                label: label.to_owned(),
                config,
            }
        };
        match self {
            ExperimentPreset::ViabilityFig3 | ExperimentPreset::Custom => vec![point("", &|_| {})],
            ExperimentPreset::MutualInfoStudy => vec![
                point("gradual", &|c| {
                    c.world.source_period = 5;
                    c.world.source_hop = 3;
                }),
                point("jump", &|c| {
                    c.world.source_period = 25;
                    c.world.source_hop = 8;
                }),
            ],
            ExperimentPreset::TeVsViability => (1..=3)
                .map(|rate| point(&format!("kns{rate}"), &|c| c.world.source_rate = rate))
                .collect(),
        }
    }
}

impl fmt::Display for ExperimentPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentPreset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
                format!("unknown preset `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    pub label: String,
    pub config: SimConfig,
}

/// Everything computed for one grid point.
#[derive(Clone, Debug)]
pub struct GridResult {
    pub table: MetricsTable,
    pub summaries: Vec<EnsembleSummary>,
}

/// Runs one ensemble per intervention, sharing seeds across interventions.
pub fn run_grid_point(cfg: &SimConfig, interventions: &[InterventionKind]) -> Result<GridResult, Error> {
    cfg.validate()?;
    let mut table = MetricsTable::new();
    let mut summaries = Vec::with_capacity(interventions.len());
    for &kind in interventions {
        let summary = estimate_ensemble(&cfg.with_intervention(kind))?;
        table.insert_summary(&summary);
        summaries.push(summary);
    }
    Ok(GridResult { table, summaries })
}

/// SHA-256 of the canonical configuration text.
pub fn config_hash(cfg: &SimConfig) -> String {
    let digest = Sha256::digest(render_config(cfg).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub files: Vec<PathBuf>,
    pub results: Vec<(GridPoint, GridResult)>,
}

pub const CSV_FILES: [(&str, &str); 5] = [
    ("viability.csv", "iota,k,viability"),
    ("cmi.csv", "iota,k,cmi_bits"),
    ("te.csv", "iota,k,te_bits"),
    ("mi.csv", "iota,k,mi_bits"),
    ("semantic.csv", "k,eps,argmin_iota,S_bits,te_default_bits"),
];

/// Runs every grid point of `preset` and writes its CSV files plus
/// `manifest.txt` under `out_dir`. Any failure aborts the whole experiment.
pub fn run_experiment(
    preset: ExperimentPreset,
    base: &SimConfig,
    out_dir: &Path,
) -> Result<ExperimentReport, Error> {
    let interventions = InterventionKind::all();
    let grid = preset.grid(base);
    for point in &grid {
        point.config.validate()?;
    }
    let mut files = Vec::new();
    let mut results = Vec::new();
    for point in grid {
        let result = run_grid_point(&point.config, &interventions)?;
        let dir = out_dir.join(&point.label);
        files.extend(write_reports(&dir, &result.table, &point.config)?);
        results.push((point, result));
    }
    let manifest = out_dir.join("manifest.txt");
    write_file(&manifest, |w| write_manifest(w, preset, base, &results))?;
    files.push(manifest);
    Ok(ExperimentReport { files, results })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn write_file<F>(path: &Path, body: F) -> Result<(), Error>
where
    F: FnOnce(&mut BufWriter<fs::File>) -> Result<(), Error>,
{
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush().map_err(io_err(path))
}

/// Writes the five metric CSV files for one grid point into `dir`.
pub fn write_reports(dir: &Path, table: &MetricsTable, cfg: &SimConfig) -> Result<Vec<PathBuf>, Error> {
    let horizon = table.horizon();
    let rows = table.rows().count();
    let mut written = Vec::new();
    for (name, header) in CSV_FILES {
        let path = dir.join(name);
        write_file(&path, |w| {
            let res = match name {
                "viability.csv" => table.write_viability_csv(w),
                "cmi.csv" => table.write_cmi_csv(w),
                "te.csv" => table.write_te_csv(w),
                "mi.csv" => table.write_mi_csv(w),
                _ => {
                    return table.write_semantic_csv(w, cfg.eps).map_err(|e| match e {
                        SemanticCsvError::Io(source) => Error::Io {
                            path: path.clone(),
                            source,
                        },
                        SemanticCsvError::Metrics(m) => m.into(),
                    })
                }
            };
            res.map_err(io_err(&path))
        })?;
        let expected = match name {
            "cmi.csv" => rows * horizon,
            "semantic.csv" => horizon + 1,
            _ => rows * (horizon + 1),
        };
        validate_csv(&path, header, expected)?;
        written.push(path);
    }
    Ok(written)
}

/// Re-reads a written CSV and checks its header, field count and row count.
pub fn validate_csv(path: &Path, header: &str, expected_rows: usize) -> Result<(), Error> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let invalid = |reason: String| Error::InvalidOutput {
        path: path.to_owned(),
        reason,
    };
    let mut lines = text.lines();
    if lines.next() != Some(header) {
        return Err(invalid(format!("header is not `{header}`")));
    }
    let fields = header.split(',').count();
    let mut rows = 0;
    for line in lines {
        if line.split(',').count() != fields {
            return Err(invalid(format!("malformed row `{line}`")));
        }
        rows += 1;
    }
    if rows != expected_rows {
        return Err(invalid(format!("{rows} rows, expected {expected_rows}")));
    }
    Ok(())
}

fn write_manifest<W: Write>(
    w: &mut W,
    preset: ExperimentPreset,
    base: &SimConfig,
    results: &[(GridPoint, GridResult)],
) -> Result<(), Error> {
    let path = Path::new("manifest.txt");
    let mut body = String::new();
    body.push_str(&format!(
        "tool = {} {}\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ));
    body.push_str(&format!("preset = {preset}\n"));
    body.push_str(&format!("master_seed = {}\n", base.master_seed));
    let ivs: Vec<_> = InterventionKind::all().iter().map(ToString::to_string).collect();
    body.push_str(&format!("interventions = {}\n", ivs.join(",")));
    for (point, _) in results {
        let dir = if point.label.is_empty() { "." } else { &point.label };
        body.push_str(&format!("\n[point {dir}]\n"));
        body.push_str(&format!("config_hash = {}\n", config_hash(&point.config)));
        body.push_str(&render_config(&point.config));
    }
    w.write_all(body.as_bytes()).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_names_roundtrip() {
        for p in ExperimentPreset::ALL {
            assert_eq!(p.name().parse::<ExperimentPreset>().unwrap(), p);
        }
        assert!("fig9".parse::<ExperimentPreset>().is_err());
    }

    #[test]
    fn grids_are_finite_and_deterministic() {
        let base = SimConfig::default();
        let mi = ExperimentPreset::MutualInfoStudy.grid(&base);
        assert_eq!(mi.len(), 2);
        assert_eq!((mi[0].config.world.source_period, mi[0].config.world.source_hop), (5, 3));
        assert_eq!((mi[1].config.world.source_period, mi[1].config.world.source_hop), (25, 8));
        let te = ExperimentPreset::TeVsViability.grid(&base);
        let rates: Vec<_> = te.iter().map(|p| p.config.world.source_rate).collect();
        assert_eq!(rates, vec![1, 2, 3]);
        assert_eq!(ExperimentPreset::ViabilityFig3.grid(&base).len(), 1);
        assert_eq!(te, ExperimentPreset::TeVsViability.grid(&base));
    }

    #[test]
    fn hash_tracks_every_field() {
        let base = SimConfig::default();
        let h = config_hash(&base);
        assert_eq!(h, config_hash(&base.clone()));
        let mut changed = base.clone();
        changed.world.nutrient_decay_prob = 0.25;
        assert_ne!(h, config_hash(&changed));
        let mut changed = base.clone();
        changed.master_seed = 1;
        assert_ne!(h, config_hash(&changed));
        let mut changed = base;
        changed.runs = 19_999;
        assert_ne!(h, config_hash(&changed));
    }
}
