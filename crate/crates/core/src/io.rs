//! Run configuration and deterministic serialization.
//!
//! Floats are written with 17 significant digits (`{:.16e}`) in both JSON
//! and CSV, so every value round-trips exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::check_oracle_size;
use crate::hamiltonian::CouplingParams;
use crate::lattice::LatticeSpec;
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Blocks,
    ZeroModes,
    Sweep,
    Oracle,
    Pseudospin,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Spectrum,
        Command::Blocks,
        Command::ZeroModes,
        Command::Sweep,
        Command::Oracle,
        Command::Pseudospin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Blocks => "blocks",
            Command::ZeroModes => "zero-modes",
            Command::Sweep => "sweep",
            Command::Oracle => "oracle",
            Command::Pseudospin => "pseudospin",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown command `{s}`")))
    }

    fn needs_oracle(self) -> bool {
        matches!(self, Command::Oracle | Command::Pseudospin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Usage(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Fully resolved run parameters. `t`, `delta` and `mu` hold one value
/// except for `sweep`, which takes their Cartesian product.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub rows: usize,
    pub cols: usize,
    pub t: Vec<f64>,
    pub delta: Vec<f64>,
    pub mu: Vec<f64>,
    /// Relative zero threshold: a singular value counts as zero below
    /// `tol · (1 + ‖A‖₂)`.
    pub tol: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn spec(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.rows, self.cols)
    }

    /// The single coupling point of a non-sweep command.
    pub fn params(&self) -> Result<CouplingParams> {
        match (self.t.as_slice(), self.delta.as_slice(), self.mu.as_slice()) {
            ([t], [delta], [mu]) => Ok(CouplingParams::new(*t, *delta, *mu)),
            _ => Err(Error::Usage(format!("`{}` takes a single value for t, delta and mu", self.command.name()))),
        }
    }

    /// Grid points with `mu` varying fastest, then `delta`, then `t`.
    pub fn grid(&self) -> Vec<CouplingParams> {
        let mut out = Vec::with_capacity(self.t.len() * self.delta.len() * self.mu.len());
        for &t in &self.t {
            for &delta in &self.delta {
                for &mu in &self.mu {
                    out.push(CouplingParams::new(t, delta, mu));
                }
            }
        }
        out
    }
}

/// Keys accepted in a config file and as flags.
pub const KEYS: [&str; 9] = ["rows", "cols", "t", "delta", "mu", "tol", "format", "out", "jobs"];

/// Raw `key -> value` settings before validation.
pub type Settings = BTreeMap<String, String>;

/// Parses a flat `key = value` file. Blank lines and lines starting with
/// `#` are ignored; unknown or repeated keys are usage errors.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut out = Settings::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value, got `{line}`", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Usage(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(Error::Usage(format!("config line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("`{key}`: cannot parse `{value}` as a number")))
}

/// A comma-separated list of values or ranges `start:stop:count` (inclusive,
/// evenly spaced).
pub fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [x] => out.push(number(key, x)?),
            [start, stop, count] => {
                let (a, b): (f64, f64) = (number(key, start)?, number(key, stop)?);
                let n: usize = number(key, count)?;
                match n {
                    0 => return Err(Error::Usage(format!("`{key}`: range `{item}` has no points"))),
                    1 => out.push(a),
                    _ => out.extend((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64)),
                }
            }
            _ => return Err(Error::Usage(format!("`{key}`: cannot parse `{item}` (expected x or start:stop:count)"))),
        }
    }
    if let Some(bad) = out.iter().find(|x| !x.is_finite()) {
        return Err(Error::Usage(format!("`{key}`: non-finite value {bad}")));
    }
    Ok(out)
}

/// Merges file and flag settings (flags win), applies defaults
/// (`t = delta = mu = 1`, `tol = 1e-10`, `format = json`, `jobs = 1`) and
/// validates the result.
pub fn resolve(command: Command, file: Settings, flags: Settings) -> Result<RunConfig> {
    let mut s = file;
    s.extend(flags);
    if let Some(key) = s.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::Usage(format!("unknown setting `{key}`")));
    }
    let required = |key: &str| -> Result<usize> {
        let v = s.get(key).ok_or_else(|| Error::Usage(format!("missing required setting `{key}`")))?;
        number(key, v)
    };
    let rows = required("rows")?;
    let cols = required("cols")?;
    let list = |key: &str| s.get(key).map(|v| parse_list(key, v)).unwrap_or(Ok(vec![1.0]));
    let config = RunConfig {
        command,
        rows,
        cols,
        t: list("t")?,
        delta: list("delta")?,
        mu: list("mu")?,
        tol: s.get("tol").map(|v| number("tol", v)).unwrap_or(Ok(tolerances::ZERO_RELATIVE))?,
        format: s.get("format").map(|v| Format::parse(v)).unwrap_or(Ok(Format::Json))?,
        out: s.get("out").map(PathBuf::from),
        jobs: s.get("jobs").map(|v| number("jobs", v)).unwrap_or(Ok(1))?,
    };
    if !(config.tol > 0.0 && config.tol.is_finite()) {
        return Err(Error::Usage(format!("`tol` must be positive, got {}", config.tol)));
    }
    if config.jobs == 0 {
        return Err(Error::Usage("`jobs` must be at least 1".into()));
    }
    let spec = config.spec()?;
    if command != Command::Sweep {
        config.params()?;
    }
    if command.needs_oracle() {
        check_oracle_size(&spec)?;
    }
    Ok(config)
}

struct Precise;

impl serde_json::ser::Formatter for Precise {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with every float written to 17 significant digits,
/// followed by a newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV table: a header and rows of pre-formatted cells.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out.into_bytes()
}
