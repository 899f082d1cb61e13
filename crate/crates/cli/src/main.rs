use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subdirect_cli::commands::{cmd_analyze, cmd_catalog, cmd_star, cmd_subdirects, Loaded, Options};
use subdirect_cli::report::{write_lines, Line};
use subdirect_cli::verify::{cmd_verify, parse_catalog};
use subdirect_cli::{CliError, Result};
use subdirect_core::oracle::HomSearch;
use subdirect_core::Caps;

/// Subdirect products of finite groups and extensibility of homomorphisms into cyclic groups.
#[derive(Parser)]
#[command(name = "subdirect", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one subgroup U of G x H.
    Analyze {
        #[command(flatten)]
        pair: Pair,
        /// Subgroup descriptor: full, diagonal, center-diagonal, derived-diagonal,
        /// normal-diagonal:<elems>, pairs:g,h;g,h or quintuple:<json|@file>.
        #[arg(long = "U", default_value = "full")]
        u: String,
        #[command(flatten)]
        primes: Primes,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze every subdirect product of G x H.
    Subdirects {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        primes: Primes,
        #[command(flatten)]
        common: Common,
    },
    /// Compose U <= G x H with V <= H x K.
    Star {
        #[arg(long = "G")]
        g: String,
        /// Middle factor; defaults to G.
        #[arg(long = "H")]
        h: Option<String>,
        /// Right factor of V; defaults to G.
        #[arg(long = "K")]
        k: Option<String>,
        /// Descriptor, report file, or inline JSON record.
        #[arg(long = "U")]
        u: String,
        #[arg(long = "V")]
        v: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run every invariant on a catalog of groups.
    Verify {
        /// Comma list of groups, a JSON array of specs or a .json file; "" selects nothing.
        #[arg(long)]
        catalog: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// List the default catalog.
    Catalog {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Pair {
    /// Group spec: shorthand (C4, D8, S3, A4, Q8, C2^2, dihedral:8, D8xC2), JSON or a .json file.
    #[arg(long = "G")]
    g: String,
    /// Defaults to G.
    #[arg(long = "H")]
    h: Option<String>,
}

#[derive(Args)]
struct Primes {
    /// Primes to test, comma separated; defaults to the primes dividing |G x H|.
    #[arg(long = "pi", alias = "prime", value_delimiter = ',')]
    pi: Option<Vec<usize>>,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest |G x H|.
    #[arg(long = "max-order", default_value_t = Caps::default().max_product_order)]
    max_order: usize,
    /// Reserved; has no effect.
    #[arg(long = "seed-order")]
    seed_order: Option<u64>,
    /// Cross-check with the value-table hom search instead of the abelianization.
    #[arg(long = "raw-oracle")]
    raw_oracle: bool,
    /// Skip the hom-oracle cross-check.
    #[arg(long = "no-oracle", conflicts_with = "raw_oracle")]
    no_oracle: bool,
    /// Record per-subgroup wall time.
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn options(&self) -> Options {
        let _ = self.seed_order;
        let oracle = match (self.no_oracle, self.raw_oracle) {
            (true, _) => None,
            (false, true) => Some(HomSearch::RawTable),
            (false, false) => Some(HomSearch::Abelianization),
        };
        Options { caps: Caps { max_product_order: self.max_order, ..Caps::default() }, oracle, timing: self.timing }
    }

    fn emit(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
            None => std::io::stdout().write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
        }
    }

    fn emit_lines(&self, lines: &[Line]) -> Result<()> {
        let mut buf = Vec::new();
        write_lines(&mut buf, lines)?;
        self.emit(&buf)
    }
}

fn pair(p: &Pair, caps: &Caps) -> Result<(Loaded, Loaded)> {
    let g = Loaded::parse(&p.g, caps)?;
    let h = match &p.h {
        Some(h) => Loaded::parse(h, caps)?,
        None => g.clone(),
    };
    Ok((g, h))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { pair: p, u, primes, common } => {
            let options = common.options();
            let (g, h) = pair(&p, &options.caps)?;
            common.emit_lines(&cmd_analyze(&g, &h, &u, primes.pi.as_deref(), &options)?)
        }
        Command::Subdirects { pair: p, primes, common } => {
            let options = common.options();
            let (g, h) = pair(&p, &options.caps)?;
            common.emit_lines(&cmd_subdirects(&g, &h, primes.pi.as_deref(), &options)?)
        }
        Command::Star { g, h, k, u, v, common } => {
            let options = common.options();
            let g = Loaded::parse(&g, &options.caps)?;
            let load = |s: &Option<String>| match s {
                Some(s) => Loaded::parse(s, &options.caps),
                None => Ok(g.clone()),
            };
            let (h, k) = (load(&h)?, load(&k)?);
            common.emit_lines(&cmd_star(&g, &h, &k, &u, &v, &options)?)
        }
        Command::Verify { catalog, common } => {
            let caps = common.options().caps;
            let report = cmd_verify(&parse_catalog(catalog.as_deref())?, &caps)?;
            let mut text = serde_json::to_vec_pretty(&report)?;
            text.push(b'\n');
            common.emit(&text)?;
            match report.first_failure {
                Some(f) => Err(CliError::Verification(f)),
                None => Ok(()),
            }
        }
        Command::Catalog { common } => {
            let mut buf = Vec::new();
            for entry in cmd_catalog(&common.options().caps)? {
                serde_json::to_writer(&mut buf, &entry)?;
                buf.push(b'\n');
            }
            common.emit(&buf)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
