use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use warsparse::modring::Modulus;
use warsparse::pfhe::{PfheParams, Sampler};
use warsparse::stream::StreamParams;

/// Exit status contract.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(String),
    Param(String),
    Transport(String),
    /// A scenario's expectation was not met.
    Check(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Param(_) => 3,
            Failure::Transport(_) => 4,
            Failure::Check(_) => 5,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m)
            | Failure::Parse(m)
            | Failure::Param(m)
            | Failure::Transport(m)
            | Failure::Check(m) => f.write_str(m),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "warsparse",
    version,
    about = "White-box robust k-sparse recovery for turnstile streams"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Gaussian,
    Binomial,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Universe size
    #[arg(short = 'n', long = "n", global = true, default_value_t = 1024)]
    pub n: u64,
    /// Sparsity
    #[arg(short = 'k', long = "k", global = true, default_value_t = 16)]
    pub k: usize,
    /// Bound on entry magnitudes
    #[arg(short = 'N', long = "bound", global = true, default_value_t = 1000)]
    pub bound: u64,
    /// Lattice dimension
    #[arg(short = 'g', long = "g", global = true, default_value_t = 8)]
    pub g: usize,
    /// Ciphertext modulus, or "auto" for the smallest admissible power of two
    #[arg(short = 'q', long = "q", global = true, default_value = "auto")]
    pub q: String,
    /// Fresh-noise bound
    #[arg(long, global = true, default_value_t = 6)]
    pub beta: u64,
    #[arg(long, global = true, value_enum, default_value_t = SamplerArg::Gaussian)]
    pub sampler: SamplerArg,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Update syndromes one at a time instead of in batches of 2k
    #[arg(long, global = true)]
    pub naive: bool,
    /// Memoize up to this many evaluated point ciphertexts (0 = off)
    #[arg(long, global = true, default_value_t = 0)]
    pub memo: usize,
    /// Refuse toy lattice parameters
    #[arg(long, global = true)]
    pub secure: bool,
}

/// Smallest lattice dimension accepted with `--secure`.
pub const SECURE_MIN_G: usize = 512;

impl Config {
    pub fn seed_bytes(&self) -> [u8; 32] {
        let mut s = [0u8; 32];
        s[..8].copy_from_slice(&self.seed.to_le_bytes());
        s
    }

    pub fn check_secure(&self) -> Result<(), Failure> {
        if self.secure && self.g < SECURE_MIN_G {
            return Err(Failure::Param(format!(
                "--secure requires g ≥ {SECURE_MIN_G}, got g = {}",
                self.g
            )));
        }
        Ok(())
    }

    pub fn stream_params(&self) -> Result<StreamParams, Failure> {
        self.check_secure()?;
        let param = |e: warsparse::ParamError| Failure::Param(e.to_string());
        let mut params = if self.q == "auto" {
            StreamParams::auto(self.n, self.k, self.bound, self.g, self.beta).map_err(param)?
        } else {
            let q: u64 = self.q.parse().map_err(|_| {
                Failure::Usage(format!(
                    "--q expects an integer or \"auto\", got {:?}",
                    self.q
                ))
            })?;
            let q =
                Modulus::new(q).map_err(|e| Failure::Param(format!("parameter violation: {e}")))?;
            let pfhe = PfheParams::for_universe(self.n, self.g, q, self.beta).map_err(param)?;
            StreamParams::new(self.n, self.k, self.bound, pfhe).map_err(param)?
        };
        params.pfhe = params.pfhe.with_sampler(match self.sampler {
            SamplerArg::Gaussian => Sampler::Gaussian,
            SamplerArg::Binomial => Sampler::Binomial,
        });
        Ok(params)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a trace file ("-" for stdin) and print a report at every Q
    Stream(StreamArgs),
    /// Run the coordinator protocol over one trace-format vector file per server
    Dist(DistArgs),
    /// Play an adversary scenario and print one JSON line per trial
    Attack(AttackArgs),
    /// Print operation counts and sizes
    Bench(BenchArgs),
    /// Write a random trace with a given final support size
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct StreamArgs {
    pub trace: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransportArg {
    Inproc,
    Tcp,
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[arg(required = true)]
    pub partitions: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = TransportArg::Inproc)]
    pub transport: TransportArg,
    /// Coordinator port for --transport tcp (0 picks a free one)
    #[arg(long, default_value_t = 0)]
    pub port: u16,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    /// oblivious, completeness, inspector, collision, collision-ablation, collision-degenerate, hybrid4
    pub scenario: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Updates planned by the adaptive strategies
    #[arg(long, default_value_t = 100)]
    pub rounds: usize,
    /// Game round budget
    #[arg(long, default_value_t = 100_000)]
    pub max_rounds: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Sparsities for the syndrome-update table
    #[arg(long, value_delimiter = ',', default_values_t = vec![8usize, 16, 32, 64])]
    pub ks: Vec<usize>,
    /// Batches of 2k updates per sparsity
    #[arg(long, default_value_t = 16)]
    pub batches: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    pub updates: usize,
    /// Final support size (defaults to k)
    #[arg(long)]
    pub sparsity: Option<usize>,
    /// Also emit a Q after every this many updates (0 = only at the end)
    #[arg(long, default_value_t = 0)]
    pub query_every: usize,
}
