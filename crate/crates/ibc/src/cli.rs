//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification rejected, 2 invalid input or
//! protocol abort, 3 nonce reuse, 4 IO or configuration error, 5 failed
//! property check.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ibc_core::harness::{run_adversary, AdvantageReport, Adversary, RandomAdversary, ReplayAdversary};
use ibc_core::protocol::{
    alice_generate, bob_verify, derive_session, DecodeError, Message, Nonce, Profile, ProtocolError, Reject,
};
use num_bigint::BigInt;

use crate::fixtures;
use crate::nonce_log::{NonceLog, NonceLogError};
use crate::profile_file::{self, ProfileFileError};
use crate::selftest;

/// Fresh nonces tried before `send` gives up on repeated aborts.
const SEND_ATTEMPTS: usize = 16;
const NONCE_LOG_ENV: &str = "IBC_NONCE_LOG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("rejected: {0}")]
    Rejected(Reject),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Abort(ProtocolError),
    #[error("{0}")]
    NonceReuse(String),
    #[error("{0}")]
    Io(String),
    #[error("property check failed: {0}")]
    Property(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected(_) => 1,
            CliError::Input(_) | CliError::Abort(_) => 2,
            CliError::NonceReuse(_) => 3,
            CliError::Io(_) => 4,
            CliError::Property(_) => 5,
        }
    }
}

impl From<ProfileFileError> for CliError {
    fn from(e: ProfileFileError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<NonceLogError> for CliError {
    fn from(e: NonceLogError) -> Self {
        match e {
            NonceLogError::Reused(_) => CliError::NonceReuse(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Oscillator(_) => CliError::Io(e.to_string()),
            _ => CliError::Abort(e),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ibc", version, about = "Four-point invariant message scheme")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a 132-byte message carrying `v`.
    Send {
        #[arg(long)]
        secret_file: PathBuf,
        /// Preset name (toy, mini, production) or JSON profile path.
        #[arg(long, default_value = "toy")]
        profile: String,
        #[arg(long)]
        v: u64,
        /// Public spacing; drawn at random when omitted.
        #[arg(long)]
        u: Option<u64>,
        /// Explicit 32-byte nonce in hex.
        #[arg(long, requires = "allow_explicit_nonce")]
        z: Option<String>,
        #[arg(long)]
        allow_explicit_nonce: bool,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to $IBC_NONCE_LOG, then ~/.ibc/nonces.log.
        #[arg(long)]
        nonce_log: Option<PathBuf>,
    },
    /// Verify a message and print the recovered `v`.
    Recv {
        #[arg(long)]
        secret_file: PathBuf,
        #[arg(long, default_value = "toy")]
        profile: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value = "toy")]
        profile: String,
    },
    /// Play forgery games and print the advantage as CSV.
    Attack {
        #[arg(long, value_enum)]
        adversary: AdversaryKind,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value = "toy")]
        profile: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write regression vectors, the recomputation ledger and profiles.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdversaryKind {
    Random,
    Replay,
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, data).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn default_nonce_log() -> PathBuf {
    if let Some(p) = std::env::var_os(NONCE_LOG_ENV) {
        return PathBuf::from(p);
    }
    let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    home.join(".ibc").join("nonces.log")
}

fn os_random<const N: usize>() -> Result<[u8; N], CliError> {
    let mut buf = [0u8; N];
    getrandom::getrandom(&mut buf).map_err(|e| CliError::Io(format!("entropy source: {e}")))?;
    Ok(buf)
}

fn parse_nonce(hex_str: &str) -> Result<Nonce, CliError> {
    hex::decode(hex_str)
        .ok()
        .and_then(|b| b.try_into().ok())
        .ok_or_else(|| CliError::Input("--z must be 64 hex digits".into()))
}

fn is_retryable(e: &ProtocolError) -> bool {
    matches!(e, ProtocolError::AbortZeroIndex | ProtocolError::AbortSingular | ProtocolError::AbortNonInvertible)
}

pub struct SendArgs<'a> {
    pub secret: &'a [u8],
    pub profile: &'a Profile,
    pub v: u64,
    pub u: Option<u64>,
    pub z: Option<Nonce>,
    pub log: &'a NonceLog,
}

/// Builds and logs one message. Returns it with the nonce actually used.
pub fn send(args: SendArgs<'_>) -> Result<Message, CliError> {
    let p = args.profile;
    if u128::from(args.v) >= p.v_limit() {
        return Err(CliError::Input(format!("v = {} is out of range: must be below 2^{}", args.v, p.v_bits)));
    }
    let u = match args.u {
        Some(u) if u == 0 || u >= p.u_limit() => {
            return Err(CliError::Input(format!("u = {u} is out of range: must be in [1, 2^{})", p.u_bits)))
        }
        Some(u) => u,
        None => 1 + u64::from_be_bytes(os_random()?) % (p.u_limit() - 1),
    };
    if let Some(z) = args.z {
        if args.log.contains(args.secret, &z)? {
            return Err(NonceLogError::Reused(hex::encode(z)).into());
        }
        let msg = alice_generate(&derive_session(args.secret, &z, p)?, u, args.v)?;
        args.log.record(args.secret, &z)?;
        return Ok(msg);
    }
    let mut last = None;
    for _ in 0..SEND_ATTEMPTS {
        let z: Nonce = os_random()?;
        match derive_session(args.secret, &z, p).and_then(|s| alice_generate(&s, u, args.v)) {
            Ok(msg) => {
                args.log.record(args.secret, &z)?;
                return Ok(msg);
            }
            Err(e) if is_retryable(&e) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

fn decode(bytes: &[u8], profile: &Profile) -> Result<Message, CliError> {
    Message::from_bytes(bytes, &profile.modulus).map_err(|e| match e {
        DecodeError::BadLength(_) | DecodeError::FieldOverflow => CliError::Input(format!("malformed message: {e}")),
    })
}

pub fn csv_header() -> &'static str {
    "game_id,adversary,trials,wins,ci_low,ci_high"
}

pub fn csv_row(game_id: &str, adversary: &str, r: &AdvantageReport) -> String {
    format!("{game_id},{adversary},{},{},{:.6},{:.6}", r.trials, r.wins, r.ci_low, r.ci_high)
}

/// The property an attack run must satisfy: no wins for replay or for
/// large moduli, and a 95% upper bound of at most `2/M` otherwise.
pub fn attack_holds(kind: AdversaryKind, profile: &Profile, r: &AdvantageReport) -> bool {
    match (kind, profile.modulus.value().to_u64_digits().as_slice()) {
        (AdversaryKind::Random, &[m]) if m <= 1 << 16 => r.ci_high <= 2.0 / m as f64,
        _ => r.wins == 0,
    }
}

pub fn run(cli: Cli, out: &mut String) -> Result<(), CliError> {
    match cli.command {
        Command::Send { secret_file, profile, v, u, z, allow_explicit_nonce: _, out: path, nonce_log } => {
            let secret = read_file(&secret_file)?;
            let profile = profile_file::resolve(&profile)?;
            let z = z.as_deref().map(parse_nonce).transpose()?;
            let log = NonceLog::new(nonce_log.unwrap_or_else(default_nonce_log));
            let msg = send(SendArgs { secret: &secret, profile: &profile, v, u, z, log: &log })?;
            write_file(&path, &msg.to_bytes())?;
            let _ = writeln!(out, "wrote {} (u={}, z={})", path.display(), msg.u, hex::encode(msg.z));
        }
        Command::Recv { secret_file, profile, input } => {
            let secret = read_file(&secret_file)?;
            let profile = profile_file::resolve(&profile)?;
            let msg = decode(&read_file(&input)?, &profile)?;
            let v = bob_verify(&secret, &msg, &profile).map_err(CliError::Rejected)?;
            let _ = writeln!(out, "{v}");
        }
        Command::Selftest { profile } => {
            let profile = profile_file::resolve(&profile)?;
            let mut failed = Vec::new();
            for (r, secs) in selftest::run(&profile) {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{tag} {:<11} {} ({secs:.2}s)", r.name, r.detail);
                if !r.passed {
                    failed.push(r.name);
                }
            }
            if !failed.is_empty() {
                return Err(CliError::Property(failed.join(", ")));
            }
        }
        Command::Attack { adversary, trials, profile, seed, csv } => {
            if trials < 100 {
                return Err(CliError::Input("--trials must be at least 100".into()));
            }
            let profile = profile_file::resolve(&profile)?;
            let mut adv: Box<dyn Adversary> = match adversary {
                AdversaryKind::Random => Box::new(RandomAdversary::new(seed.wrapping_mul(31).wrapping_add(7))),
                AdversaryKind::Replay => Box::new(ReplayAdversary { delta: BigInt::from(-1) }),
            };
            let report = run_adversary(&profile, adv.as_mut(), trials, seed);
            let id = format!("{}-{}-{seed}", profile.name, adv.name());
            let text = format!("{}\n{}\n", csv_header(), csv_row(&id, adv.name(), &report));
            out.push_str(&text);
            if let Some(path) = csv {
                write_file(&path, text.as_bytes())?;
            }
            if !attack_holds(adversary, &profile, &report) {
                return Err(CliError::Property(format!("{} adversary exceeded its bound", adv.name())));
            }
        }
        Command::Fixtures { out: dir } => {
            let names = fixtures::write_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for n in names {
                let _ = writeln!(out, "wrote {}", dir.join(n).display());
            }
            let rows = crate::ledger::build();
            if let Some(r) = rows.iter().find(|r| r.value_a != r.value_b) {
                return Err(CliError::Property(format!("oracles disagree on {}", r.quantity)));
            }
        }
    }
    Ok(())
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Rejected(_)) => {
            println!("{e}");
            ExitCode::from(e.exit_code())
        }
        Err(e) => {
            eprintln!("ibc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            CliError::Rejected(Reject::Hash).exit_code(),
            CliError::Input(String::new()).exit_code(),
            CliError::NonceReuse(String::new()).exit_code(),
            CliError::Io(String::new()).exit_code(),
            CliError::Property(String::new()).exit_code(),
        ];
        assert_eq!(codes, [1, 2, 3, 4, 5]);
        assert_eq!(CliError::from(ProtocolError::AbortZeroIndex).exit_code(), 2);
    }

    #[test]
    fn explicit_nonce_requires_flag() {
        let r = Cli::try_parse_from(["ibc", "send", "--secret-file", "s", "--v", "1", "--out", "o", "--z", "00"]);
        assert!(r.is_err());
        let r = Cli::try_parse_from([
            "ibc",
            "send",
            "--secret-file",
            "s",
            "--v",
            "1",
            "--out",
            "o",
            "--z",
            "00",
            "--allow-explicit-nonce",
        ]);
        assert!(r.is_ok());
    }

    #[test]
    fn send_checks_ranges_and_reuse() {
        let dir = tempfile::tempdir().unwrap();
        let log = NonceLog::new(dir.path().join("log"));
        let p = Profile::toy();
        let base = |v, u, z| SendArgs { secret: b"0123456789abcdef", profile: &p, v, u, z, log: &log };
        assert_eq!(send(base(1 << 16, Some(5), None)).unwrap_err().exit_code(), 2);
        assert_eq!(send(base(1, Some(0), None)).unwrap_err().exit_code(), 2);
        let msg = send(base(17, Some(5), None)).unwrap();
        assert_eq!(bob_verify(b"0123456789abcdef", &msg, &p), Ok(17));
        assert_eq!(send(base(17, Some(5), Some(msg.z))).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn attack_bounds() {
        let toy = Profile::toy();
        let r =
            AdvantageReport { trials: 10_000, wins: 30, aborts: 0, estimate: 0.003, ci_low: 0.002, ci_high: 0.0043 };
        assert!(attack_holds(AdversaryKind::Random, &toy, &r));
        assert!(!attack_holds(AdversaryKind::Replay, &toy, &r));
        assert!(!attack_holds(AdversaryKind::Random, &Profile::production(), &r));
        assert_eq!(csv_row("g", "random", &r), "g,random,10000,30,0.002000,0.004300");
    }
}
