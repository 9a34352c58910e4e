//! Typed experiment configuration with a canonical one-line text form.
//!
//! `holder-check x=explicit:3,4 y=explicit:4,3 p=2` parses back to the same
//! config; keys are emitted in a fixed order and numbers in shortest
//! round-trip form, so `format(parse(s))` is the canonical spelling of `s`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use seqlab::SequenceFamily;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    HolderCheck,
    HolderWitness,
    AbelDini,
    LandauWitness,
    HilbertEval,
    HilbertConstant,
    SineIntegral,
    ConverseExplore,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::HolderCheck,
        Command::HolderWitness,
        Command::AbelDini,
        Command::LandauWitness,
        Command::HilbertEval,
        Command::HilbertConstant,
        Command::SineIntegral,
        Command::ConverseExplore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::HolderCheck => "holder-check",
            Command::HolderWitness => "holder-witness",
            Command::AbelDini => "abel-dini",
            Command::LandauWitness => "landau-witness",
            Command::HilbertEval => "hilbert-eval",
            Command::HilbertConstant => "hilbert-constant",
            Command::SineIntegral => "sine-integral",
            Command::ConverseExplore => "converse-explore",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown command '{s}'")))
    }
}

/// How `hilbert-eval` evaluates the double sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// FFT convolution, falling back to the direct sum on wide dynamic range
    Fast,
    Naive,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Fast => "fast",
            Method::Naive => "naive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub command: Option<Command>,
    pub x: Option<SequenceFamily>,
    pub y: Option<SequenceFamily>,
    pub a: Option<SequenceFamily>,
    pub b: Option<SequenceFamily>,
    pub p: Option<f64>,
    pub power: Option<f64>,
    pub alpha: Option<f64>,
    pub s: Vec<f64>,
    /// Truncation / term budget.
    pub n: Option<usize>,
    pub blocks: Option<usize>,
    pub cert_budget: Option<usize>,
    pub rows: Option<usize>,
    pub rel_tol: Option<f64>,
    pub method: Option<Method>,
    /// `(ε, N)` pairs for `hilbert-constant`.
    pub eps_schedule: Vec<(f64, usize)>,
    /// Truncation sizes for `converse-explore`.
    pub sizes: Vec<usize>,
    pub out: Option<PathBuf>,
    pub cert: Option<PathBuf>,
    pub check: Option<PathBuf>,
}

const KEYS: [&str; 19] = [
    "x", "y", "a", "b", "p", "power", "alpha", "s", "n", "blocks", "cert_budget", "rows", "rel_tol", "method",
    "eps_schedule", "sizes", "out", "cert", "check",
];

fn join<T>(v: &[T], f: impl Fn(&T) -> String) -> String {
    v.iter().map(f).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self { command: Some(command), ..Self::default() }
    }

    pub fn command(&self) -> Command {
        self.command.expect("config without command")
    }

    fn entries(&self) -> Vec<(&'static str, String)> {
        let fam = |f: &Option<SequenceFamily>| f.as_ref().map(|f| f.to_string());
        let num = |v: Option<f64>| v.map(|v| v.to_string());
        let int = |v: Option<usize>| v.map(|v| v.to_string());
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let values = [
            fam(&self.x),
            fam(&self.y),
            fam(&self.a),
            fam(&self.b),
            num(self.p),
            num(self.power),
            num(self.alpha),
            (!self.s.is_empty()).then(|| join(&self.s, f64::to_string)),
            int(self.n),
            int(self.blocks),
            int(self.cert_budget),
            int(self.rows),
            num(self.rel_tol),
            self.method.map(|m| m.name().to_string()),
            (!self.eps_schedule.is_empty()).then(|| join(&self.eps_schedule, |(e, n)| format!("{e}:{n}"))),
            (!self.sizes.is_empty()).then(|| join(&self.sizes, usize::to_string)),
            path(&self.out),
            path(&self.cert),
            path(&self.check),
        ];
        KEYS.iter().zip(values).filter_map(|(k, v)| v.map(|v| (*k, v))).collect()
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Usage(format!("config key '{key}': bad {what} '{value}'"));
        let num = || value.parse::<f64>().map_err(|_| bad("number"));
        let int = || value.parse::<usize>().map_err(|_| bad("integer"));
        let fam = || value.parse::<SequenceFamily>().map_err(|e| CliError::Usage(format!("config key '{key}': {e}")));
        match key {
            "x" => self.x = Some(fam()?),
            "y" => self.y = Some(fam()?),
            "a" => self.a = Some(fam()?),
            "b" => self.b = Some(fam()?),
            "p" => self.p = Some(num()?),
            "power" => self.power = Some(num()?),
            "alpha" => self.alpha = Some(num()?),
            "s" => self.s = parse_list(value, |t| t.parse().ok()).ok_or_else(|| bad("list"))?,
            "n" => self.n = Some(int()?),
            "blocks" => self.blocks = Some(int()?),
            "cert_budget" => self.cert_budget = Some(int()?),
            "rows" => self.rows = Some(int()?),
            "rel_tol" => self.rel_tol = Some(num()?),
            "method" => {
                self.method = Some(match value {
                    "fast" => Method::Fast,
                    "naive" => Method::Naive,
                    _ => return Err(bad("method")),
                })
            }
            "eps_schedule" => self.eps_schedule = parse_eps_schedule(value).map_err(CliError::Usage)?,
            "sizes" => self.sizes = parse_list(value, |t| t.parse().ok()).ok_or_else(|| bad("list"))?,
            "out" => self.out = Some(value.into()),
            "cert" => self.cert = Some(value.into()),
            "check" => self.check = Some(value.into()),
            _ => return Err(CliError::Usage(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    s.split(',').map(|t| f(t.trim())).collect()
}

/// `0.1:10000,0.03:100000`
pub fn parse_eps_schedule(s: &str) -> Result<Vec<(f64, usize)>, String> {
    parse_list(s, |t| {
        let (e, n) = t.split_once(':')?;
        Some((e.parse().ok()?, n.parse().ok()?))
    })
    .ok_or_else(|| format!("schedule '{s}' must look like eps:N,eps:N"))
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.command.map_or("?", Command::name))?;
        for (k, v) in self.entries() {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let mut tokens = s.split_whitespace();
        let command: Command = tokens.next().ok_or_else(|| CliError::Usage("empty config".into()))?.parse()?;
        let mut cfg = ExperimentConfig::new(command);
        let mut seen = Vec::new();
        for tok in tokens {
            let (k, v) = tok.split_once('=').ok_or_else(|| CliError::Usage(format!("config token '{tok}' is not key=value")))?;
            if seen.contains(&k) {
                return Err(CliError::Usage(format!("duplicate config key '{k}'")));
            }
            seen.push(k);
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        let s = "holder-check p=2 y=explicit:4,3 x=explicit:3,4 n=100";
        let cfg: ExperimentConfig = s.parse().unwrap();
        let canon = cfg.to_string();
        assert_eq!(canon, "holder-check x=explicit:3,4 y=explicit:4,3 p=2 n=100");
        assert_eq!(canon.parse::<ExperimentConfig>().unwrap().to_string(), canon);
    }

    #[test]
    fn normalizes_numbers_and_families() {
        let cfg: ExperimentConfig = "abel-dini a=power:alpha=0 alpha=1.0 blocks=3 power=1e0".parse().unwrap();
        assert_eq!(cfg.to_string(), "abel-dini a=power:c=1,alpha=0 power=1 alpha=1 blocks=3");
        let cfg: ExperimentConfig = "hilbert-constant p=2.0 eps_schedule=0.10:10000,0.01:1000000".parse().unwrap();
        assert_eq!(cfg.to_string(), "hilbert-constant p=2 eps_schedule=0.1:10000,0.01:1000000");
        assert_eq!(cfg.eps_schedule, vec![(0.1, 10_000), (0.01, 1_000_000)]);
    }

    #[test]
    fn rejects_bad_configs() {
        for s in [
            "",
            "frobnicate x=explicit:1",
            "holder-check x",
            "holder-check q=2",
            "holder-check p=2 p=3",
            "holder-check p=two",
            "hilbert-eval method=slow",
            "hilbert-constant eps_schedule=0.1",
            "landau-witness x=power:c=1,gamma=2",
        ] {
            assert!(s.parse::<ExperimentConfig>().is_err(), "{s}");
        }
    }

    #[test]
    fn every_command_name_parses() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
            assert_eq!(ExperimentConfig::new(c).to_string(), c.name());
        }
    }

    #[test]
    fn f64_text_is_exact() {
        let v: f64 = 0.1 + 0.2;
        let cfg: ExperimentConfig = format!("sine-integral s={v},0.5").parse().unwrap();
        assert_eq!(cfg.s[0].to_bits(), v.to_bits());
    }
}
