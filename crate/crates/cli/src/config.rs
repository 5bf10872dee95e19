//! Command line flags, the optional JSON config file, and their merge into a
//! [`RunConfig`]. Flags override file values.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use nhimpurity::analysis::{FitSettings, DEFAULT_WINDOW};
use nhimpurity::correlation::Route;
use nhimpurity::entanglement::{Partition, PartitionKind};
use nhimpurity::spectral::ModelParams;

pub const DEFAULT_N: usize = 8194;
pub const DEFAULT_SPECTRUM_N: usize = 400;

#[derive(Debug, Parser)]
#[command(name = "nhimpurity", version, about = "Entanglement of a free-fermion ring with a non-Hermitian impurity bond")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Finite-chain energies and analytic bound states.
    Spectrum,
    /// Correlation matrix on the selected partition.
    Corr,
    /// Entanglement entropy for every size in --LA-list.
    Ee,
    /// Logarithmic fit of the entropy with closed-form predictions.
    Fit,
    /// Phase-diagram grid over (t_R, t_L).
    Sweep,
    /// Run the acceptance suite.
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Impurity amplitude t_R: a value or start:stop:count.
    #[arg(long = "tR", global = true, allow_hyphen_values = true, value_name = "VALUE|RANGE")]
    pub t_r: Option<String>,
    /// Impurity amplitude t_L: a value or start:stop:count.
    #[arg(long = "tL", global = true, allow_hyphen_values = true, value_name = "VALUE|RANGE")]
    pub t_l: Option<String>,
    /// Bulk hopping [default: 1].
    #[arg(long = "t", global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Chemical potential [default: 0].
    #[arg(long = "mu", global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Chain length [default: 400 for spectrum, 8194 otherwise].
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Entanglement cut: I (at the impurity) or II (L0 sites away) [default: I].
    #[arg(long = "partition", global = true)]
    pub partition: Option<String>,
    /// Distance of a Partition-II subsystem from the impurity [default: 0].
    #[arg(long = "L0", global = true)]
    pub l0: Option<usize>,
    /// Comma-separated subsystem sizes.
    #[arg(long = "LA-list", global = true, value_delimiter = ',')]
    pub la_list: Option<Vec<usize>>,
    /// Correlation route: numeric, analytic or asymptotic [default: analytic].
    #[arg(long = "route", global = true)]
    pub route: Option<String>,
    /// Sweep grid as TR_RANGE,TL_RANGE, e.g. -2:2:81,0.05:2:40.
    #[arg(long = "grid", global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Output file [default: stdout].
    #[arg(long = "out", global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long = "format", global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the options above; flags take precedence.
    #[arg(long = "config", global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps [default: all cores].
    #[arg(long = "threads", global = true)]
    pub threads: Option<usize>,
}

/// Either a JSON number or a string in flag syntax.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum NumOrText {
    Num(f64),
    Text(String),
}

impl NumOrText {
    fn into_text(self) -> String {
        match self {
            NumOrText::Num(x) => x.to_string(),
            NumOrText::Text(s) => s,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(rename = "tR")]
    t_r: Option<NumOrText>,
    #[serde(rename = "tL")]
    t_l: Option<NumOrText>,
    t: Option<f64>,
    mu: Option<f64>,
    #[serde(rename = "N")]
    n: Option<usize>,
    partition: Option<String>,
    #[serde(rename = "L0")]
    l0: Option<usize>,
    #[serde(rename = "LA-list", alias = "LA_list")]
    la_list: Option<Vec<usize>>,
    route: Option<String>,
    grid: Option<String>,
    out: Option<PathBuf>,
    format: Option<Format>,
    threads: Option<usize>,
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config file {}", path.display()))
}

/// Inclusive `start:stop:count`, or a single value.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| f64::from_str(s.trim()).with_context(|| format!("'{s}' is not a number"));
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().with_context(|| format!("'{n}' is not a point count"))?;
            match n {
                0 => bail!("range '{text}' has zero points"),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()),
            }
        }
        _ => bail!("'{text}' is neither a value nor start:stop:count"),
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub params: ModelParams,
    pub kind: PartitionKind,
    pub l0: usize,
    pub la_list: Option<Vec<usize>>,
    pub route: Route,
    pub t_r_values: Vec<f64>,
    pub t_l_values: Vec<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn resolve(command: Command, flags: Flags) -> Result<Self> {
        let file = match &flags.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let t_r = flags.t_r.or(file.t_r.map(NumOrText::into_text));
        let t_l = flags.t_l.or(file.t_l.map(NumOrText::into_text));
        let grid = flags.grid.or(file.grid);

        let (t_r_values, t_l_values) = match grid {
            Some(g) => {
                let (a, b) = g.split_once(',').with_context(|| format!("--grid '{g}' must be TR_RANGE,TL_RANGE"))?;
                (parse_range(a)?, parse_range(b)?)
            }
            None => (
                parse_range(t_r.as_deref().unwrap_or("1")).context("--tR")?,
                parse_range(t_l.as_deref().unwrap_or("1")).context("--tL")?,
            ),
        };
        if command != Command::Sweep && command != Command::Verify && (t_r_values.len() != 1 || t_l_values.len() != 1) {
            bail!("ranges in --tR/--tL/--grid are only accepted by sweep");
        }

        let default_n = if command == Command::Spectrum { DEFAULT_SPECTRUM_N } else { DEFAULT_N };
        let n = flags.n.or(file.n).unwrap_or(default_n);
        let params = ModelParams {
            t: flags.t.or(file.t).unwrap_or(1.0),
            t_r: t_r_values[0],
            t_l: t_l_values[0],
            mu: flags.mu.or(file.mu).unwrap_or(0.0),
            n,
        };
        if command != Command::Verify {
            params.validate()?;
        }

        let kind: PartitionKind = flags.partition.or(file.partition).as_deref().unwrap_or("I").parse()?;
        let route: Route = flags.route.or(file.route).as_deref().unwrap_or("analytic").parse()?;
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            bail!("--threads must be at least 1");
        }

        Ok(Self {
            command,
            params,
            kind,
            l0: flags.l0.or(file.l0).unwrap_or(0),
            la_list: flags.la_list.or(file.la_list),
            route,
            t_r_values,
            t_l_values,
            out: flags.out.or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            threads,
        })
    }

    /// Subsystem sizes: `--LA-list`, else the default window for the cut.
    pub fn window(&self) -> Vec<usize> {
        match &self.la_list {
            Some(list) => list.clone(),
            None if self.kind == PartitionKind::II => FitSettings::bulk(self.l0).window,
            None => DEFAULT_WINDOW.to_vec(),
        }
    }

    pub fn fit_settings(&self) -> FitSettings {
        FitSettings { window: self.window(), route: self.route, kind: self.kind, l0: self.l0, n: self.params.n }
    }

    pub fn partition(&self, la: usize) -> Partition {
        Partition::new(self.kind, la, self.l0)
    }
}
