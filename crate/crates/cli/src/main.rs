use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use telescope_cli::artifact::Artifact;
use telescope_cli::check::{check_artifact, claims};
use telescope_cli::oeis::{self, OeisError};
use telescope_cli::prove::{prove_integral, prove_sum, verified, ProveError};

const OK: u8 = 0;
const USAGE: u8 = 1;
const DISCOVERY: u8 = 2;
const VERIFICATION: u8 = 3;
const NETWORK: u8 = 4;

#[derive(Parser)]
#[command(name = "telescope", version, about = "Find and certify recurrences for definite sums and integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover a recurrence and write a proof artifact.
    #[command(subcommand)]
    Prove(Prove),
    /// Re-verify an artifact, or run the built-in suite.
    Check {
        /// Artifact JSON file.
        #[arg(required_unless_present = "builtin_suite")]
        artifact: Option<PathBuf>,
        #[arg(long, alias = "paper-suite", conflicts_with = "artifact")]
        builtin_suite: bool,
    },
    /// Compare a sequence's OEIS b-file with the local oracle.
    Oeis {
        #[arg(long, default_value = "A006256")]
        id: String,
        #[arg(long, default_value_t = 40)]
        limit: i64,
        /// Cache directory; defaults to $TELESCOPE_CACHE, then ~/.cache/telescope.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Never touch the network.
        #[arg(long, conflicts_with = "refresh")]
        offline: bool,
        /// Fetch even when a cached copy exists.
        #[arg(long)]
        refresh: bool,
        #[arg(long, default_value = oeis::DEFAULT_BASE)]
        base_url: String,
    },
}

#[derive(Subcommand)]
enum Prove {
    /// Definite sum over k of a proper hypergeometric term in n and k.
    Sum {
        /// Summand, e.g. `3^k*binomial(3*n-k,2*n)`; `j` may stand for `k`.
        term: String,
        /// `LO..UP`, e.g. `0..n` or `0..2n`.
        #[arg(long)]
        range: String,
        #[command(flatten)]
        common: Common,
    },
    /// Definite integral over x of `c(x) f(x)^n`.
    Int {
        /// Integrand, e.g. `(3*x^2-2*x^3)^n`.
        term: String,
        /// `A..B` with rational ends, e.g. `-1/2..3/2`.
        #[arg(long, allow_hyphen_values = true)]
        bounds: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Highest recurrence order tried.
    #[arg(long, default_value_t = 6)]
    max_order: usize,
    /// Style of the `[L, rhs]` line on stderr.
    #[arg(long, value_enum, default_value_t = StyleArg::Canonical)]
    style: StyleArg,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Canonical,
    #[value(alias = "paper")]
    Factored,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    ExitCode::from(match cli.command {
        Command::Prove(p) => prove(p),
        Command::Check { artifact: Some(path), .. } => check_file(&path),
        Command::Check { artifact: None, .. } => builtin_suite(),
        Command::Oeis { id, limit, cache, offline, refresh, base_url } => {
            oeis_check(&id, limit, cache, offline, refresh, &base_url)
        }
    })
}

fn prove(p: Prove) -> u8 {
    let (result, common) = match p {
        Prove::Sum { term, range, common } => (prove_sum(&term, &range, common.max_order), common),
        Prove::Int { term, bounds, common } => (prove_integral(&term, &bounds, common.max_order), common),
    };
    let artifact = match result {
        Ok(a) => a,
        Err(ProveError::Usage(m)) => {
            eprintln!("error: {m}");
            return USAGE;
        }
        Err(ProveError::Discovery(m)) => {
            eprintln!("no recurrence: {m}");
            return DISCOVERY;
        }
    };
    let json = serde_json::to_string_pretty(&artifact).expect("artifacts serialize");
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: {}: {e}", path.display());
                return USAGE;
            }
        }
        None => println!("{json}"),
    }
    let line = match common.style {
        StyleArg::Canonical => &artifact.operator.canonical,
        StyleArg::Factored => &artifact.operator.factored,
    };
    eprintln!("{line}");
    eprintln!("certificate: {}", artifact.certificate.text);
    let v = &artifact.verification;
    eprintln!("certificate identity: {}", if v.certificate_ok { "ok" } else { "FAILED" });
    match v.oracle_window {
        Some((lo, hi)) => eprintln!("oracle n = {lo}..={hi}: {}", if v.oracle_ok { "ok" } else { "FAILED" }),
        None => eprintln!("oracle: not available for this input"),
    }
    if verified(&artifact) {
        OK
    } else {
        VERIFICATION
    }
}

fn check_file(path: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return USAGE;
        }
    };
    let artifact: Artifact = match serde_json::from_str(&text) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return USAGE;
        }
    };
    let failures = check_artifact(&artifact);
    if failures.is_empty() {
        eprintln!("ok: {}", artifact.operator.canonical);
        OK
    } else {
        for f in &failures {
            eprintln!("FAILED: {f}");
        }
        VERIFICATION
    }
}

fn builtin_suite() -> u8 {
    let mut code = OK;
    for c in claims() {
        match (c.run)() {
            Ok(()) => println!("claim {}: PASS ({})", c.id, c.name),
            Err(why) => {
                println!("claim {}: FAIL ({}): {why}", c.id, c.name);
                code = VERIFICATION;
            }
        }
    }
    code
}

fn oeis_check(id: &str, limit: i64, cache: Option<PathBuf>, offline: bool, refresh: bool, base: &str) -> u8 {
    let Some(id) = oeis::normalize_id(id) else {
        eprintln!("error: '{id}' is not an OEIS id");
        return USAGE;
    };
    if limit < 1 {
        eprintln!("error: --limit must be positive");
        return USAGE;
    }
    let dir = oeis::cache_dir(cache.as_deref());
    let text = match oeis::bfile(&id, base, &dir, offline, refresh) {
        Ok(t) => t,
        Err(e @ (OeisError::Network(_) | OeisError::NotCached(_))) => {
            eprintln!("error: {e}");
            return NETWORK;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let entries = oeis::parse_bfile(&text);
    match oeis::mismatches(&id, &entries, limit) {
        Ok(bad) if bad.is_empty() => {
            println!("{id}: first {limit} terms agree");
            OK
        }
        Ok(bad) => {
            println!("{id}: disagreement at n = {bad:?}");
            VERIFICATION
        }
        Err(e) => {
            eprintln!("error: {e}");
            USAGE
        }
    }
}
