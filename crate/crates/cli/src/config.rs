use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::Failure;

pub const MAX_T: usize = 6;

/// Flags shared by every command. Each overrides the matching field of
/// `--config`.
#[derive(Args, Clone, Debug, Default)]
pub struct Flags {
    /// JSON run configuration; flags win over its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Order t (maximum order for the verify commands).
    #[arg(long)]
    pub t: Option<usize>,
    /// Weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u32>,
    /// Genus of the synthetic profile.
    #[arg(long)]
    pub g: Option<u32>,
    /// Number of cusps of the synthetic profile.
    #[arg(long)]
    pub m: Option<u32>,
    /// Group fixture (absolute, relative, or a name under the fixture root).
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// Target residual for numeric checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of q-expansion coefficients.
    #[arg(long)]
    pub qn: Option<usize>,
    /// Gauss-Legendre degree.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Report directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fixture root.
    #[arg(long, env = "HOFORMS_FIXTURES")]
    pub fixtures: Option<PathBuf>,
}

/// The configuration file format. Every field is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub group_fixture: Option<PathBuf>,
    pub weights: Option<Vec<u32>>,
    pub t_max: Option<usize>,
    pub tolerance: Option<f64>,
    pub qseries_n: Option<usize>,
    pub quadrature_degree: Option<usize>,
    pub parallelism: Option<usize>,
    pub report_dir: Option<PathBuf>,
    pub genus: Option<u32>,
    pub cusps: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_fixture: Option<PathBuf>,
    pub weights: Vec<u32>,
    pub t_max: usize,
    pub tolerance: f64,
    pub qseries_n: usize,
    pub quadrature_degree: usize,
    #[serde(skip)]
    pub parallelism: usize,
    #[serde(skip)]
    pub report_dir: PathBuf,
    pub genus: u32,
    pub cusps: u32,
    #[serde(skip)]
    pub fixture_root: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(flags: &Flags, default_t: usize) -> Result<RunConfig, Failure> {
        let file = match &flags.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", p.display())))?;
                serde_json::from_str::<FileConfig>(&text)
                    .map_err(|e| Failure::usage(format!("bad config {}: {e}", p.display())))?
            }
            None => FileConfig::default(),
        };
        let cfg = RunConfig {
            group_fixture: flags.group.clone().or(file.group_fixture),
            weights: if flags.k.is_empty() {
                file.weights.unwrap_or_else(|| vec![2, 4])
            } else {
                flags.k.clone()
            },
            t_max: flags.t.or(file.t_max).unwrap_or(default_t),
            tolerance: flags.tol.or(file.tolerance).unwrap_or(1e-8),
            qseries_n: flags.qn.or(file.qseries_n).unwrap_or(200),
            quadrature_degree: flags.degree.or(file.quadrature_degree).unwrap_or(64),
            parallelism: flags.jobs.or(file.parallelism).unwrap_or(0),
            report_dir: flags
                .out
                .clone()
                .or(file.report_dir)
                .unwrap_or_else(|| PathBuf::from("hoforms-report")),
            genus: flags.g.or(file.genus).unwrap_or(1),
            cusps: flags.m.or(file.cusps).unwrap_or(2),
            fixture_root: flags.fixtures.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.t_max == 0 || self.t_max > MAX_T {
            return Err(Failure::usage(format!(
                "--t must be between 1 and {MAX_T}, got {}",
                self.t_max
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Failure::usage(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.weights.is_empty() || self.weights.iter().any(|&k| k < 2 || k % 2 == 1) {
            return Err(Failure::usage(format!(
                "weights must be even and at least 2, got {:?}",
                self.weights
            )));
        }
        if self.quadrature_degree < 2 {
            return Err(Failure::usage("quadrature degree must be at least 2".into()));
        }
        Ok(())
    }

    /// The group fixture, defaulting to level 11 under the fixture root.
    pub fn group_path(&self) -> PathBuf {
        let root = self
            .fixture_root
            .clone()
            .unwrap_or_else(|| PathBuf::from("fixtures"));
        match &self.group_fixture {
            None => root.join("gamma0_11.json"),
            Some(p) if p.is_absolute() || p.exists() => p.clone(),
            Some(p) => root.join(p),
        }
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism)
            .build()
            .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))
    }
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}
