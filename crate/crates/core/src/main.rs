use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hamcubic::constructive::{generate_base_file, SEARCH_NODES_VAR};
use hamcubic::families::XParams;
use hamcubic::io::{self, Envelope, InstanceSpec, MultigraphJson, SolveMethod};
use hamcubic::iso::isomorphic_x;
use hamcubic::oracle::{HAM_LIMIT_VAR, ISO_LIMIT_VAR};
use hamcubic::{Error, Result};

/// Hamiltonicity of I-graphs through quartic quotients.
#[derive(Parser)]
#[command(name = "hamcubic", version, about)]
struct Cli {
    /// Vertex limit for brute-force Hamiltonicity (default 60).
    #[arg(long, global = true)]
    max_ham_vertices: Option<usize>,
    /// Vertex limit for brute-force isomorphism (default 48).
    #[arg(long, global = true)]
    max_iso_vertices: Option<usize>,
    /// Node budget for exact good-subgraph search fallbacks.
    #[arg(long, global = true)]
    max_search_nodes: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

/// An instance: family tag then integer parameters, e.g. `i 12 2 3`,
/// `gpg 7 2`, `x 5 4 3`, `sgi 4 2 2`, `circulant 9 1 3`, `cayley 4 2 1 0 1 1`.
#[derive(Args)]
struct Instance {
    #[arg(required = true, num_args = 1.., allow_hyphen_values = false)]
    instance: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Graph6,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a graph.
    Gen {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Contract the spokes of a cubic instance; emit quotient, sides and colouring.
    Contract {
        #[command(flatten)]
        instance: Instance,
    },
    /// Decide Hamiltonicity (cubic) or good-subgraph existence (quartic); emit a certificate.
    Solve {
        #[command(flatten)]
        instance: Instance,
        /// Exhaustive search.
        #[arg(long, conflicts_with = "constructive")]
        exact: bool,
        /// Constructive method (default).
        #[arg(long)]
        constructive: bool,
        /// Write the certificate to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-check a certificate file; prints PASS or FAIL.
    Verify { certificate: PathBuf },
    /// Decide X(s,t,r) ≅ X(s2,t2,r2).
    Iso {
        s: usize,
        t: usize,
        r: usize,
        s2: usize,
        t2: usize,
        r2: usize,
        /// Also decide by brute force and emit a certificate.
        #[arg(long)]
        oracle: bool,
    },
    /// Run every I(n,p,q) with 3 ≤ n ≤ N; emit CSV.
    Survey {
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Leave the millis column empty (byte-stable output).
        #[arg(long)]
        no_timing: bool,
    },
    /// Emit a good Eulerian subgraph of X(s,t,r), or regenerate the base-witness file.
    Witness {
        #[arg(required_unless_present = "regenerate_bases")]
        s: Option<usize>,
        #[arg(required_unless_present = "regenerate_bases")]
        t: Option<usize>,
        #[arg(required_unless_present = "regenerate_bases")]
        r: Option<usize>,
        /// Write freshly generated base witnesses to PATH.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["s", "t", "r"])]
        regenerate_bases: Option<PathBuf>,
    },
}

/// Result of a command: positive (exit 0) or negative/absent/FAIL (exit 1).
type Answer = bool;

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<Answer> {
    if let Some(v) = cli.max_ham_vertices {
        std::env::set_var(HAM_LIMIT_VAR, v.to_string());
    }
    if let Some(v) = cli.max_iso_vertices {
        std::env::set_var(ISO_LIMIT_VAR, v.to_string());
    }
    if let Some(v) = cli.max_search_nodes {
        std::env::set_var(SEARCH_NODES_VAR, v.to_string());
    }
    match cli.command {
        Command::Gen { instance, format } => {
            let spec = InstanceSpec::parse_tokens(&instance.instance)?;
            let g = spec.build()?;
            match format {
                Format::Json => print_json(&MultigraphJson::from(&g)),
                Format::Graph6 => println!("{}", io::to_graph6(&g)?),
                Format::Dot => print!("{}", io::to_dot(&g, &spec.to_string(), None)),
            }
            Ok(true)
        }
        Command::Contract { instance } => {
            let spec = InstanceSpec::parse_tokens(&instance.instance)?;
            print_json(&io::contraction_json(&spec)?);
            Ok(true)
        }
        Command::Solve { instance, exact, constructive: _, output } => {
            let spec = InstanceSpec::parse_tokens(&instance.instance)?;
            let method = if exact { SolveMethod::Exact } else { SolveMethod::Constructive };
            let env = io::solve(&spec, method)?;
            match output {
                Some(path) => std::fs::write(&path, env.to_json() + "\n")?,
                None => println!("{}", env.to_json()),
            }
            Ok(env.certificate.is_positive())
        }
        Command::Verify { certificate } => {
            let env = Envelope::from_json(&std::fs::read_to_string(&certificate)?)?;
            let verdict = io::verify(&env)?;
            println!("{} {}: {}", if verdict.pass { "PASS" } else { "FAIL" }, env.instance, verdict.reason);
            Ok(verdict.pass)
        }
        Command::Iso { s, t, r, s2, t2, r2, oracle } => {
            let a = XParams::new(s, t, r)?;
            let b = XParams::new(s2, t2, r2)?;
            let predicate = isomorphic_x(&a, &b);
            println!("{a} {} {b}", if predicate { "≅" } else { "≇" });
            if oracle {
                let env = io::iso_certificate(&a, &b)?;
                let brute = env.certificate.is_positive();
                println!("{}", env.to_json());
                if brute != predicate {
                    return Err(Error::Format(format!("predicate says {predicate}, brute force says {brute}")));
                }
            }
            Ok(predicate)
        }
        Command::Survey { n_max, jobs, no_timing } => {
            let rows = io::survey(n_max, jobs, !no_timing)?;
            println!("{}", io::SURVEY_HEADER);
            for row in &rows {
                println!("{}", row.csv());
            }
            Ok(true)
        }
        Command::Witness { s, t, r, regenerate_bases } => {
            if let Some(path) = regenerate_bases {
                let file = generate_base_file()?;
                std::fs::write(&path, serde_json::to_string_pretty(&file).expect("serializable") + "\n")?;
                eprintln!("wrote {} base witnesses to {}", file.witnesses.len(), path.display());
                return Ok(true);
            }
            let p = XParams::new(s.unwrap(), t.unwrap(), r.unwrap())?;
            match io::witness_json(&p)? {
                Some(w) => {
                    print_json(&w);
                    Ok(true)
                }
                None => {
                    println!("{p} has no good Eulerian subgraph");
                    Ok(false)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
