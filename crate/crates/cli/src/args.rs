use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use seqlab::hilbert::{DEFAULT_EXPLORE_SCHEDULE, DEFAULT_SCHEDULE};
use seqlab::landau::DEFAULT_BLOCKS;
use seqlab::SequenceFamily;

use crate::config::{parse_eps_schedule, Command, ExperimentConfig, Method};

/// Numerical experiments on Hölder, Landau, Abel-Dini and Hilbert inequalities.
///
/// Families use the grammar `power:c=1,alpha=0.5`, `powerlog:alpha=0.5,beta=1`,
/// `geom:c=1,r=0.5` or `explicit:3,4`.
#[derive(Debug, Parser)]
#[command(name = "seqlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Check Σ x_n y_n <= ‖x‖_p ‖y‖_q with certified enclosures
    HolderCheck(HolderCheck),
    /// Extremal witness for the finite converse of Hölder's inequality
    HolderWitness(HolderWitness),
    /// Divergence certificate (alpha <= 1) or convergence bound (alpha > 1) for Σ a_n / s_n^alpha
    AbelDini(AbelDini),
    /// Witness y in l^q with Σ x_n y_n = ∞ for x outside l^p
    LandauWitness(LandauWitness),
    /// Evaluate the truncated form Σ a_m b_n / (m+n)
    HilbertEval(HilbertEval),
    /// Ratio study against π / sin(π/p) for near-extremal sequences
    HilbertConstant(HilbertConstant),
    /// ∫_0^∞ dt / ((1+t) t^s) against π / sin(πs)
    SineIntegral(SineIntegral),
    /// Tabulate S_N for a outside l^p against its Landau witness
    ConverseExplore(ConverseExplore),
}

#[derive(Debug, Args)]
pub struct Io {
    /// Write the CSV or certificate artifact here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-verify a previously written artifact; exits 3 on mismatch
    #[arg(long)]
    pub check: Option<PathBuf>,
}

fn family(s: &str) -> Result<SequenceFamily, String> {
    s.parse().map_err(|e: seqlab::Error| e.to_string())
}

fn eps_pair(s: &str) -> Result<(f64, usize), String> {
    parse_eps_schedule(s).map(|v| v[0])
}

#[derive(Debug, Args)]
pub struct HolderCheck {
    #[arg(long, value_parser = family)]
    pub x: SequenceFamily,
    #[arg(long, value_parser = family)]
    pub y: SequenceFamily,
    #[arg(long)]
    pub p: f64,
    /// Truncation for infinite families
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct HolderWitness {
    /// Explicit finite sequence
    #[arg(long, value_parser = family)]
    pub x: SequenceFamily,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct AbelDini {
    /// Base family; may be omitted with --check to verify a certificate on its own
    #[arg(long, value_parser = family, required_unless_present = "check")]
    pub a: Option<SequenceFamily>,
    /// Series terms are a_n^power
    #[arg(long, default_value_t = 1.0)]
    pub power: f64,
    #[arg(long, required_unless_present = "check")]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    /// Term budget; defaults to 10^8 for certificates and 10^6 for bounds
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct LandauWitness {
    #[arg(long, value_parser = family)]
    pub x: SequenceFamily,
    #[arg(long)]
    pub p: f64,
    /// Truncation for λ and the norm check
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_BLOCKS)]
    pub blocks: usize,
    /// Term budget for the divergence certificate
    #[arg(long, default_value_t = 100_000_000)]
    pub cert_budget: usize,
    /// Rows of `i,x,y,s` written to --out
    #[arg(long, default_value_t = 1000)]
    pub rows: usize,
    /// Write the divergence certificate here
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct HilbertEval {
    #[arg(long, value_parser = family)]
    pub a: SequenceFamily,
    #[arg(long, value_parser = family)]
    pub b: SequenceFamily,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Also report the ratio against π / sin(π/p)
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    pub method: Method,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct HilbertConstant {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Comma-separated eps:N pairs
    #[arg(long, value_parser = eps_pair, value_delimiter = ',')]
    pub schedule: Option<Vec<(f64, usize)>>,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct SineIntegral {
    /// Comma-separated exponents in (0, 1)
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.25,0.3333333333333333,0.5,0.7,0.9")]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 1e-13)]
    pub rel_tol: f64,
    #[command(flatten)]
    pub io: Io,
}

#[derive(Debug, Args)]
pub struct ConverseExplore {
    #[arg(long, value_parser = family)]
    pub a: SequenceFamily,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated truncation sizes
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[command(flatten)]
    pub io: Io,
}

impl Cmd {
    /// Effective configuration with every default filled in.
    pub fn into_config(self) -> ExperimentConfig {
        let with_io = |mut c: ExperimentConfig, io: Io| {
            c.out = io.out;
            c.check = io.check;
            c
        };
        match self {
            Cmd::HolderCheck(a) => {
                let mut c = ExperimentConfig::new(Command::HolderCheck);
                (c.x, c.y, c.p, c.n) = (Some(a.x), Some(a.y), Some(a.p), Some(a.n));
                with_io(c, a.io)
            }
            Cmd::HolderWitness(a) => {
                let mut c = ExperimentConfig::new(Command::HolderWitness);
                (c.x, c.p) = (Some(a.x), Some(a.p));
                with_io(c, a.io)
            }
            Cmd::AbelDini(a) => {
                let mut c = ExperimentConfig::new(Command::AbelDini);
                c.a = a.a;
                c.alpha = a.alpha;
                if c.a.is_some() {
                    c.power = Some(a.power);
                    if a.alpha.is_some_and(|al| al > 1.0) {
                        c.n = Some(a.n.unwrap_or(1_000_000));
                    } else {
                        c.blocks = Some(a.blocks);
                        c.n = Some(a.n.unwrap_or(100_000_000));
                    }
                }
                with_io(c, a.io)
            }
            Cmd::LandauWitness(a) => {
                let mut c = ExperimentConfig::new(Command::LandauWitness);
                (c.x, c.p, c.n, c.blocks) = (Some(a.x), Some(a.p), Some(a.n), Some(a.blocks));
                (c.cert_budget, c.rows, c.cert) = (Some(a.cert_budget), Some(a.rows), a.cert);
                with_io(c, a.io)
            }
            Cmd::HilbertEval(a) => {
                let mut c = ExperimentConfig::new(Command::HilbertEval);
                (c.a, c.b, c.n, c.p, c.method) = (Some(a.a), Some(a.b), Some(a.n), a.p, Some(a.method));
                with_io(c, a.io)
            }
            Cmd::HilbertConstant(a) => {
                let mut c = ExperimentConfig::new(Command::HilbertConstant);
                c.p = Some(a.p);
                c.eps_schedule = a.schedule.unwrap_or_else(|| DEFAULT_SCHEDULE.to_vec());
                with_io(c, a.io)
            }
            Cmd::SineIntegral(a) => {
                let mut c = ExperimentConfig::new(Command::SineIntegral);
                (c.s, c.rel_tol) = (a.s, Some(a.rel_tol));
                with_io(c, a.io)
            }
            Cmd::ConverseExplore(a) => {
                let mut c = ExperimentConfig::new(Command::ConverseExplore);
                (c.a, c.p) = (Some(a.a), Some(a.p));
                c.sizes = a.sizes.unwrap_or_else(|| DEFAULT_EXPLORE_SCHEDULE.to_vec());
                with_io(c, a.io)
            }
        }
    }
}
