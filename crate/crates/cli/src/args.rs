use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "lmono", version, about = "Zeros, log-derivatives and monotonicity of real Dirichlet L-functions")]
pub struct Cli {
    /// Directory holding verified zero lists
    #[arg(long, global = true, env = "LMONO_CACHE", default_value = ".lmono-cache")]
    pub cache: PathBuf,

    /// Emit a JSON report (default)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit plain CSV columns instead of a report
    #[arg(long, global = true)]
    pub csv: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan and verify the zeros of L(s, χ_d) up to height T
    Zeros(ZerosArgs),
    /// Evaluate the k-th derivative of log L at a real point
    Deriv(DerivArgs),
    /// Locate certified sign changes of the normalized derivative on an interval
    Scan(ScanArgs),
    /// Sign fingerprint over a range of k
    Fingerprint(FingerprintArgs),
    /// First k separating the fingerprints at two points
    Compare(CompareArgs),
    /// Constants derived from the low-lying zeros
    Constants(ZeroArgs),
    /// Experiments on synthetic zero sets
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ZeroArgs {
    /// Fundamental discriminant
    #[arg(short = 'd', allow_negative_numbers = true)]
    pub d: i64,

    /// Height of the verified zero list
    #[arg(short = 'T', default_value_t = 100.0)]
    #[serde(rename = "T")]
    pub height: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ZerosArgs {
    #[arg(short = 'd', allow_negative_numbers = true)]
    pub d: i64,

    #[arg(short = 'T', default_value_t = 50.0)]
    #[serde(rename = "T")]
    pub height: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Series,
    Zerosum,
    Both,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct DerivArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub zeros: ZeroArgs,

    #[arg(short = 's')]
    pub s: f64,

    #[arg(short = 'k')]
    pub k: u32,

    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,

    /// Absolute error target for the Dirichlet series
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub zeros: ZeroArgs,

    /// Interval endpoints a,b
    #[arg(short = 's', long = "s", value_delimiter = ',', num_args = 1.., required = true)]
    pub s: Vec<f64>,

    /// Largest k examined (defaults to three times the onset)
    #[arg(long)]
    pub kmax: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct FingerprintArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub zeros: ZeroArgs,

    #[arg(short = 's')]
    pub s: f64,

    /// k or kmin..kmax
    #[arg(short = 'k', value_parser = parse_k_range, default_value = "2..2000")]
    pub k: KRange,

    /// Margin added to the certified bound before a sign counts as definite
    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct CompareArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub zeros: ZeroArgs,

    #[arg(long)]
    pub s1: f64,

    #[arg(long)]
    pub s2: f64,

    #[arg(long, default_value_t = 100_000)]
    pub kmax: u32,

    #[arg(long, default_value_t = 0.0)]
    pub tolerance: f64,
}

#[derive(Subcommand, Debug)]
pub enum SynthCommand {
    /// Stability of the sign pattern after adding a real zero beta
    Siegel(SiegelArgs),
    /// Build an off-line zero pair and certify a fingerprint collision
    Offline(OfflineArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SiegelArgs {
    #[arg(long)]
    pub beta: f64,

    /// Discriminant whose verified zeros form the base set
    #[arg(long, allow_negative_numbers = true)]
    pub base: i64,

    #[arg(short = 'T', default_value_t = 100.0)]
    #[serde(rename = "T")]
    pub height: f64,

    #[arg(short = 's', long = "s", value_delimiter = ',', num_args = 1.., required = true)]
    pub s: Vec<f64>,

    #[arg(long, default_value_t = 1)]
    pub k_start: u32,

    #[arg(long, default_value_t = 500)]
    pub k_span: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OfflineArgs {
    /// First zero as re,im
    #[arg(long, value_parser = parse_point)]
    pub rho0: (f64, f64),

    /// Second zero as re,im
    #[arg(long, value_parser = parse_point)]
    pub rho1: (f64, f64),

    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KRange {
    pub min: u32,
    pub max: u32,
}

fn parse_k_range(text: &str) -> Result<KRange, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad k '{t}': {e}"));
    let (min, max) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let k = parse(text)?;
            (k, k)
        }
    };
    if min > max {
        return Err(format!("empty range {min}..{max}"));
    }
    Ok(KRange { min, max })
}

fn parse_point(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected re,im, got '{text}'"))?;
    let re = a.trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = b.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((re, im))
}
