//! Run configuration and its flat `key = value` file format.
//!
//! Keys mirror the command-line flags (`N`, `m`, `j`, `t`, `lambda`, `p`,
//! `real`, `seed`, `tol`, `out`, `png`) plus `command`, `cell` and `vmax`.
//! Blank lines and lines starting with `#` are ignored. When a file and
//! flags are combined, flags win.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ctqw_core::analysis::EnsembleConfig;
use ctqw_core::netgen::{DisorderSpec, NetworkSpec, RingSpec};

use crate::error::{CliError, Result};

pub const DEFAULT_REALIZATIONS: usize = 200;
pub const DEFAULT_CELL_PIXELS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Wigner,
    Limit,
    Marginal,
    Asymmetry,
    Ensemble,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Spectrum,
        Command::Wigner,
        Command::Limit,
        Command::Marginal,
        Command::Asymmetry,
        Command::Ensemble,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Wigner => "wigner",
            Command::Limit => "limit",
            Command::Marginal => "marginal",
            Command::Asymmetry => "asymmetry",
            Command::Ensemble => "ensemble",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::usage(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub m: usize,
    pub j: Option<usize>,
    pub times: Vec<f64>,
    pub lambda: Option<f64>,
    pub p: Option<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub png: bool,
    pub cell: u32,
    pub vmax: Option<f64>,
}

const KEYS: [&str; 14] = [
    "command", "N", "m", "j", "t", "lambda", "p", "real", "seed", "tol", "out", "png", "cell",
    "vmax",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("invalid value for `{key}`: `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        other => Err(CliError::usage(format!(
            "invalid value for `{key}`: `{other}`"
        ))),
    }
}

fn parse_times(value: &str) -> Result<Vec<f64>> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|t| {
            let t: f64 = parse("t", t)?;
            if t.is_finite() {
                Ok(t)
            } else {
                Err(CliError::usage(format!("time must be finite, got `{t}`")))
            }
        })
        .collect()
}

/// Parses the key–value text into a map, rejecting unknown keys.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::usage(format!(
                "line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Builds and validates a configuration from key–value pairs.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::usage(format!("unknown key `{k}`")));
        }
        let get = |k: &str| map.get(k).map(String::as_str);
        let command: Command = get("command")
            .ok_or_else(|| CliError::usage("missing command"))?
            .parse()?;
        let n = parse("N", get("N").ok_or_else(|| CliError::usage("missing --N"))?)?;
        let m = parse("m", get("m").ok_or_else(|| CliError::usage("missing --m"))?)?;
        let config = RunConfig {
            command,
            n,
            m,
            j: get("j").map(|v| parse("j", v)).transpose()?,
            times: get("t").map(parse_times).transpose()?.unwrap_or_default(),
            lambda: get("lambda").map(|v| parse("lambda", v)).transpose()?,
            p: get("p").map(|v| parse("p", v)).transpose()?,
            realizations: get("real")
                .map(|v| parse("real", v))
                .transpose()?
                .unwrap_or(DEFAULT_REALIZATIONS),
            seed: get("seed")
                .map(|v| parse("seed", v))
                .transpose()?
                .unwrap_or(0),
            tol: get("tol").map(|v| parse("tol", v)).transpose()?,
            out: get("out")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
            png: get("png")
                .map(|v| parse_bool("png", v))
                .transpose()?
                .unwrap_or(false),
            cell: get("cell")
                .map(|v| parse("cell", v))
                .transpose()?
                .unwrap_or(DEFAULT_CELL_PIXELS),
            vmax: get("vmax").map(|v| parse("vmax", v)).transpose()?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        Self::from_map(&parse_kv(text)?)
    }

    /// Key–value pairs in a fixed order; `from_map` inverts this.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        let mut pairs = vec![
            ("command", self.command.to_string()),
            ("N", self.n.to_string()),
            ("m", self.m.to_string()),
        ];
        if let Some(j) = self.j {
            pairs.push(("j", j.to_string()));
        }
        if !self.times.is_empty() {
            let ts: Vec<String> = self.times.iter().map(|t| t.to_string()).collect();
            pairs.push(("t", ts.join(",")));
        }
        if let Some(l) = self.lambda {
            pairs.push(("lambda", l.to_string()));
        }
        if let Some(p) = self.p {
            pairs.push(("p", p.to_string()));
        }
        pairs.push(("real", self.realizations.to_string()));
        pairs.push(("seed", self.seed.to_string()));
        if let Some(tol) = self.tol {
            pairs.push(("tol", tol.to_string()));
        }
        pairs.push(("out", self.out.display().to_string()));
        pairs.push(("png", self.png.to_string()));
        pairs.push(("cell", self.cell.to_string()));
        if let Some(v) = self.vmax {
            pairs.push(("vmax", v.to_string()));
        }
        pairs
    }

    pub fn to_kv_string(&self) -> String {
        self.to_pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let ring = self.ring()?;
        if let Some(j) = self.j {
            if j >= ring.n() {
                return Err(CliError::usage(format!(
                    "--j {j} out of range for N={}",
                    self.n
                )));
            }
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return Err(CliError::usage("--lambda must be finite and >= 0"));
            }
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::usage("--p must lie in [0, 1]"));
            }
        }
        if self.lambda.is_some() && self.p.is_some() {
            return Err(CliError::usage("--lambda and --p are mutually exclusive"));
        }
        if let Some(tol) = self.tol {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::usage("--tol must be finite and >= 0"));
            }
        }
        if let Some(v) = self.vmax {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::usage("vmax must be finite and > 0"));
            }
        }
        if self.cell == 0 {
            return Err(CliError::usage("cell must be at least one pixel"));
        }
        match self.command {
            Command::Wigner if self.times.is_empty() => {
                Err(CliError::usage("wigner needs at least one time (--t)"))
            }
            Command::Limit | Command::Spectrum | Command::Ensemble if !self.times.is_empty() => {
                Err(CliError::usage(format!(
                    "{} does not take --t",
                    self.command
                )))
            }
            Command::Asymmetry if !self.n.is_multiple_of(2) => Err(CliError::usage(format!(
                "asymmetry needs an even N, got {}",
                self.n
            ))),
            Command::Ensemble if self.p.is_none() => Err(CliError::usage(
                "ensemble needs a rewiring probability (--p)",
            )),
            Command::Ensemble if self.realizations == 0 => {
                Err(CliError::usage("--real must be at least 1"))
            }
            _ => Ok(()),
        }
    }

    pub fn ring(&self) -> Result<RingSpec> {
        RingSpec::new(self.n, self.m).map_err(|e| CliError::usage(e.to_string()))
    }

    pub fn initial_node(&self) -> usize {
        self.j.unwrap_or(self.n / 2)
    }

    pub fn disorder(&self) -> DisorderSpec {
        match (self.lambda, self.p) {
            (Some(lambda), _) => DisorderSpec::Exponential { lambda },
            (None, Some(p)) => DisorderSpec::WattsStrogatz { p, seed: self.seed },
            (None, None) => DisorderSpec::None,
        }
    }

    pub fn network(&self) -> Result<NetworkSpec> {
        Ok(NetworkSpec {
            ring: self.ring()?,
            disorder: self.disorder(),
        })
    }

    pub fn ensemble(&self) -> Result<EnsembleConfig> {
        Ok(EnsembleConfig {
            ring: self.ring()?,
            p: self
                .p
                .ok_or_else(|| CliError::usage("ensemble needs --p"))?,
            initial_node: self.initial_node(),
            realizations: self.realizations,
            base_seed: self.seed,
            tolerance: self.tol,
        })
    }
}
