use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fourfold_core::brauer::{dp6_report, multisection_witness, quadric_report};
use fourfold_core::config::Registry;
use fourfold_core::family::FiberKind;
use fourfold_core::overlattice::sieve;
use fourfold_core::report::{run_report, Format};
use fourfold_core::verify::run_verify;

#[derive(Parser)]
#[command(name = "fourfold", version, about = "Intersection loci of special cubic fourfold divisors")]
struct Cli {
    /// TOML file with extra or overriding family definitions.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full component table for one family.
    Report {
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "markdown")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every family against the published tables.
    Verify {
        #[arg(long)]
        family: Option<String>,
    },
    /// Empty/nonempty verdict for one component.
    Classify {
        family: String,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Vectors of norm at most `bound` in A_tau, up to sign.
    Shortvec {
        family: String,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        #[arg(long, default_value_t = 2)]
        bound: u64,
    },
    /// Overlattice sieve with its full candidate ledger.
    Overlattices {
        family: String,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
    },
    /// Brauer class report, or a single multisection search with --k.
    Brauer {
        family: String,
        #[arg(long, allow_negative_numbers = true)]
        tau: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(1..=3))]
        k: Option<i64>,
    },
    /// List registered families.
    Families,
}

enum Failure {
    Usage(String),
    Verify,
    Io(String),
}

impl From<fourfold_core::Error> for Failure {
    fn from(e: fourfold_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let registry = match &cli.config {
        Some(path) => Registry::with_config_file(path)?,
        None => Registry::builtin(),
    };
    match cli.command {
        Command::Report { family, format, out } => {
            let format: Format = format.parse()?;
            let text = run_report(registry.get(&family)?, format)?;
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
        }
        Command::Verify { family } => {
            let outcome = run_verify(&registry, family.as_deref())?;
            println!("{outcome}");
            if !outcome.passed() {
                return Err(Failure::Verify);
            }
        }
        Command::Classify { family, tau } => {
            println!("{}", registry.get(&family)?.classify_component(tau)?);
        }
        Command::Shortvec { family, tau, bound } => {
            let f = registry.get(&family)?;
            f.classify_component(tau)?;
            let lattice = f.lattice_at(tau);
            for v in lattice.short_vectors(bound)? {
                println!("{v} norm {}", lattice.norm(&v)?);
            }
        }
        Command::Overlattices { family, tau } => {
            let v = sieve(registry.get(&family)?, tau)?;
            let indices: Vec<String> = v.indices.iter().map(|n| n.to_string()).collect();
            println!("tau={} d={} indices {{{}}} ({})", v.tau, v.discriminant, indices.join(","), v.shortcut.as_str());
            for c in &v.ledger {
                println!("{c}");
            }
            println!(
                "{} candidates, {} accepted: {}",
                v.candidates_checked,
                v.survivors.len(),
                if v.irreducible { "irreducible" } else { "not shown irreducible" }
            );
        }
        Command::Brauer { family, tau, k } => {
            let f = registry.get(&family)?;
            if let Some(k) = k {
                match multisection_witness(f, tau, k)? {
                    Some(w) => println!("{w} = {} pairs to {}", w.coefficients, w.pairing),
                    None => println!("no cycle with <W,F> = {k}"),
                }
                return Ok(());
            }
            match f.fiber.as_ref().map(|fs| fs.kind) {
                Some(FiberKind::QuadricSurface) => println!("{}", quadric_report(f, tau)?),
                _ => println!("{}", dp6_report(f, tau)?),
            }
        }
        Command::Families => {
            for f in registry.families() {
                let fiber = match &f.fiber {
                    Some(fs) => format!("{} {}", fs.kind.as_str(), fs.coefficients),
                    None => "no fiber".into(),
                };
                println!(
                    "{}: basis ({}) g12={} g22={} g13={} g33={} {}",
                    f.name,
                    f.basis_labels.join(","),
                    f.g12,
                    f.g22,
                    f.g13,
                    f.g33,
                    fiber
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
