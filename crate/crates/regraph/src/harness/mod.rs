//! Experiment campaigns. Each experiment is a pure function of its
//! [`ExperimentConfig`]: randomness comes from `(seed, stream)` pairs fixed by
//! the grid layout, and parallel work is reassembled in a fixed order, so the
//! worker count never changes a report.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use regraph_core::sampler::{Method, RegularSampler, SamplerConfig};

use crate::error::{HarnessError, HarnessResult};
use crate::report::{Format, StatReport, SCHEMA_VERSION};

pub mod error_scaling;
pub mod hole_census;
pub mod moment_profile;
pub mod switching_validation;
pub mod triangle_normality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ErrorScaling,
    TriangleNormality,
    SwitchingValidation,
    MomentProfile,
    HoleCensus,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::ErrorScaling,
        ExperimentKind::TriangleNormality,
        ExperimentKind::SwitchingValidation,
        ExperimentKind::MomentProfile,
        ExperimentKind::HoleCensus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ErrorScaling => "error-scaling",
            ExperimentKind::TriangleNormality => "triangle-normality",
            ExperimentKind::SwitchingValidation => "switching-validation",
            ExperimentKind::MomentProfile => "moment-profile",
            ExperimentKind::HoleCensus => "hole-census",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ExperimentKind::ErrorScaling => {
                "refined vs first-order conditional edge probabilities against the exact oracle"
            }
            ExperimentKind::TriangleNormality => {
                "triangle count mean, variance, skewness and Anderson-Darling normality"
            }
            ExperimentKind::SwitchingValidation => "switching-ratio estimates and switching term averages",
            ExperimentKind::MomentProfile => "factorial moments of the triangle count relative to mu^k",
            ExperimentKind::HoleCensus => "holes in random triangle tuples and the triangle bound",
        }
    }

    pub fn parse(s: &str) -> HarnessResult<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment {s:?}")))
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridPoint {
    pub n: usize,
    pub d: usize,
}

impl GridPoint {
    pub const fn new(n: usize, d: usize) -> Self {
        GridPoint { n, d }
    }
}

/// Pass/fail conventions for the statistical gates. The limit theorems give
/// no finite-n rates, so these are choices, recorded in every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub variance_ratio_low: f64,
    pub variance_ratio_high: f64,
    pub skewness: f64,
    pub ad_p_value: f64,
    pub z_score: f64,
    pub coverage: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            variance_ratio_low: 0.9,
            variance_ratio_high: 1.1,
            skewness: 0.2,
            ad_p_value: 0.01,
            z_score: 3.0,
            coverage: 0.95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub grid: Vec<GridPoint>,
    /// Monte Carlo samples per grid point (per side for switchings).
    pub samples: usize,
    /// Independent Markov chains per grid point.
    pub chains: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thinning: Option<u64>,
    pub k_max: u32,
    pub tuple_sizes: Vec<usize>,
    /// Tuples per tuple size.
    pub tuples: usize,
    /// Sampled graphs per grid point.
    pub graphs: usize,
    /// Random conditioning contexts over the oracle-sized grid points.
    pub contexts: usize,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        let mut cfg = ExperimentConfig {
            kind,
            seed: 0,
            grid: Vec::new(),
            samples: 2000,
            chains: 16,
            burn_in: None,
            thinning: None,
            k_max: 3,
            tuple_sizes: vec![1, 3, 20],
            tuples: 10_000,
            graphs: 10_000,
            contexts: 40,
            thresholds: Thresholds::default(),
            cache_dir: None,
            format: Format::Csv,
            out: None,
        };
        cfg.grid = match kind {
            ExperimentKind::ErrorScaling => vec![GridPoint::new(6, 3), GridPoint::new(8, 3), GridPoint::new(10, 3)],
            ExperimentKind::TriangleNormality => vec![GridPoint::new(2000, 20)],
            ExperimentKind::SwitchingValidation => {
                cfg.samples = 400;
                vec![GridPoint::new(6, 3), GridPoint::new(8, 3), GridPoint::new(500, 10)]
            }
            ExperimentKind::MomentProfile => {
                cfg.samples = 1000;
                vec![GridPoint::new(6, 3), GridPoint::new(8, 3), GridPoint::new(10, 3), GridPoint::new(2000, 20)]
            }
            ExperimentKind::HoleCensus => vec![GridPoint::new(200, 8)],
        };
        cfg
    }

    /// Reads a TOML file over the defaults of its experiment kind. `kind`
    /// overrides (or supplies) the file's `kind` key.
    pub fn from_toml_str(text: &str, kind: Option<ExperimentKind>) -> HarnessResult<Self> {
        let bad = |e: &dyn fmt::Display| HarnessError::Config(e.to_string());
        let file: toml::Table = toml::from_str(text).map_err(|e| bad(&e))?;
        let kind = match (kind, file.get("kind")) {
            (Some(k), _) => k,
            (None, Some(toml::Value::String(s))) => ExperimentKind::parse(s)?,
            (None, Some(_)) => return Err(HarnessError::Config("`kind` must be a string".into())),
            (None, None) => return Err(HarnessError::Config("no experiment kind given".into())),
        };
        let mut merged = toml::Table::try_from(Self::defaults(kind)).map_err(|e| bad(&e))?;
        for (key, value) in file {
            match (merged.get_mut(&key), value) {
                (Some(toml::Value::Table(base)), toml::Value::Table(over)) => base.extend(over),
                (_, value) => {
                    merged.insert(key, value);
                }
            }
        }
        merged.insert("kind".into(), toml::Value::String(kind.name().into()));
        let cfg: ExperimentConfig = merged.try_into().map_err(|e: toml::de::Error| bad(&e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> HarnessResult<()> {
        let fail = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.grid.is_empty() {
            return fail("the grid is empty");
        }
        if self.samples == 0 || self.chains == 0 || self.tuples == 0 || self.graphs == 0 {
            return fail("samples, chains, tuples and graphs must be at least 1");
        }
        if self.k_max == 0 {
            return fail("k_max must be at least 1");
        }
        if self.tuple_sizes.is_empty() || self.tuple_sizes.contains(&0) {
            return fail("tuple sizes must be nonempty and positive");
        }
        if self.thinning == Some(0) {
            return fail("thinning must be positive");
        }
        let t = &self.thresholds;
        if !(t.variance_ratio_low < t.variance_ratio_high && t.z_score > 0.0 && (0.0..=1.0).contains(&t.coverage)) {
            return fail("inconsistent thresholds");
        }
        Ok(())
    }

    /// SHA-256 over the settings that determine the report's content: the
    /// output path and the cache location are left out.
    pub fn config_hash(&self) -> String {
        let canonical = ExperimentConfig { out: None, cache_dir: None, ..self.clone() };
        let json = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub(crate) fn sampler_config(&self, p: GridPoint, stream: u64) -> SamplerConfig {
        let mut cfg = SamplerConfig::regular(p.n, p.d, Method::EdgeSwapMcmc, self.seed).with_stream(stream);
        if let Some(b) = self.burn_in {
            cfg = cfg.with_burn_in(b);
        }
        if let Some(t) = self.thinning {
            cfg = cfg.with_thinning(t);
        }
        cfg
    }

    pub(crate) fn cache(&self) -> HarnessResult<Option<crate::cache::OracleCache>> {
        self.cache_dir.as_ref().map(crate::cache::OracleCache::new).transpose()
    }
}

/// Streams reserved per grid point, so points never share randomness.
pub(crate) const STREAMS_PER_POINT: u64 = 1024;

/// Report skeleton with the metadata every experiment carries.
pub(crate) fn new_report(cfg: &ExperimentConfig, columns: &[crate::report::ColumnSpec]) -> StatReport {
    let mut r = StatReport::new(cfg.kind.name(), columns);
    r.meta("artifact_version", concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")));
    r.meta("schema_version", SCHEMA_VERSION);
    r.meta("seed", cfg.seed);
    r.meta("config_hash", cfg.config_hash());
    r.meta("grid", cfg.grid.iter().map(|p| format!("({},{})", p.n, p.d)).collect::<Vec<_>>().join(" "));
    r
}

pub(crate) fn record_thresholds(r: &mut StatReport, t: &Thresholds) {
    r.meta("threshold_variance_ratio", format!("[{}, {}]", t.variance_ratio_low, t.variance_ratio_high));
    r.meta("threshold_abs_skewness", t.skewness);
    r.meta("threshold_ad_p_value", t.ad_p_value);
    r.meta("threshold_z_score", t.z_score);
    r.meta("threshold_coverage", t.coverage);
}

/// Triangle counts of `samples` graphs drawn by `chains` independent swap
/// chains; chain `c` of grid point `index` uses stream
/// `index * STREAMS_PER_POINT + c` and contributes an equal share.
pub(crate) fn sample_triangle_counts(cfg: &ExperimentConfig, index: usize, p: GridPoint) -> HarnessResult<Vec<u64>> {
    let chains = cfg.chains.min(cfg.samples);
    let per = |c: usize| cfg.samples / chains + usize::from(c < cfg.samples % chains);
    let runs: Vec<HarnessResult<Vec<u64>>> = (0..chains)
        .into_par_iter()
        .map(|c| {
            let stream = index as u64 * STREAMS_PER_POINT + c as u64;
            let mut sampler = RegularSampler::new(cfg.sampler_config(p, stream))?;
            (0..per(c)).map(|_| Ok(sampler.next_with(|g| g.triangle_count())?)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(cfg.samples);
    for run in runs {
        out.extend(run?);
    }
    Ok(out)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> HarnessResult<StatReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.kind {
        ExperimentKind::ErrorScaling => error_scaling::run(cfg)?,
        ExperimentKind::TriangleNormality => triangle_normality::run(cfg)?,
        ExperimentKind::SwitchingValidation => switching_validation::run(cfg)?,
        ExperimentKind::MomentProfile => moment_profile::run(cfg)?,
        ExperimentKind::HoleCensus => hole_census::run(cfg)?,
    };
    report.runtime = Some(start.elapsed());
    Ok(report)
}

/// Columns of every experiment, for documentation and the schema file.
pub fn columns(kind: ExperimentKind) -> &'static [crate::report::ColumnSpec] {
    match kind {
        ExperimentKind::ErrorScaling => error_scaling::COLUMNS,
        ExperimentKind::TriangleNormality => triangle_normality::COLUMNS,
        ExperimentKind::SwitchingValidation => switching_validation::COLUMNS,
        ExperimentKind::MomentProfile => moment_profile::COLUMNS,
        ExperimentKind::HoleCensus => hole_census::COLUMNS,
    }
}

/// The documented column layout of every experiment, as shipped in
/// `schema/report-columns.json`.
pub fn column_schema() -> serde_json::Value {
    let describe = |c: &crate::report::ColumnSpec, optional: bool| {
        serde_json::json!({
            "name": c.name,
            "provenance": c.provenance,
            "description": c.description,
            "optional": optional,
        })
    };
    let experiments: serde_json::Map<String, serde_json::Value> = ExperimentKind::ALL
        .into_iter()
        .map(|k| {
            let mut cols: Vec<_> = columns(k).iter().map(|c| describe(c, false)).collect();
            if k == ExperimentKind::ErrorScaling {
                cols.push(describe(&error_scaling::SLOPE_COLUMN, true));
            }
            (k.name().to_string(), serde_json::json!({ "summary": k.summary(), "columns": cols }))
        })
        .collect();
    serde_json::json!({ "schema_version": SCHEMA_VERSION, "experiments": experiments })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(ExperimentKind::parse(k.name()).unwrap(), k);
        }
        assert!(ExperimentKind::parse("nope").is_err());
    }

    #[test]
    fn toml_overlays_defaults() {
        let text =
            "kind = \"triangle-normality\"\nseed = 9\ngrid = [{ n = 60, d = 4 }]\n[thresholds]\nskewness = 0.5\n";
        let cfg = ExperimentConfig::from_toml_str(text, None).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.grid, vec![GridPoint::new(60, 4)]);
        assert_eq!(cfg.chains, 16);
        assert_eq!(cfg.thresholds.skewness, 0.5);
        assert_eq!(cfg.thresholds.ad_p_value, 0.01);
        let over = ExperimentConfig::from_toml_str(text, Some(ExperimentKind::HoleCensus)).unwrap();
        assert_eq!(over.kind, ExperimentKind::HoleCensus);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::from_toml_str("seed = 1", None).is_err());
        assert!(ExperimentConfig::from_toml_str("kind = \"hole-census\"\ngrid = []", None).is_err());
        assert!(ExperimentConfig::from_toml_str("kind = \"hole-census\"\nsamples = 0", None).is_err());
        assert!(ExperimentConfig::from_toml_str("kind = \"hole-census\"\nbogus = 1", None).is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = ExperimentConfig::defaults(ExperimentKind::ErrorScaling);
        let b = ExperimentConfig { out: Some("x.csv".into()), cache_dir: Some("c".into()), ..a.clone() };
        assert_eq!(a.config_hash(), b.config_hash());
        let c = ExperimentConfig { seed: 1, ..a.clone() };
        assert_ne!(a.config_hash(), c.config_hash());
    }
}
