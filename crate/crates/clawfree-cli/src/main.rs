//! Command line front end. Matroids travel as single-line text,
//! `dim <n> elements <v...>`, read from files or stdin ("-"); outputs
//! use the same format so commands compose.

use clap::{Parser, Subcommand};
use clawfree::census::{census, CensusFilter};
use clawfree::critical::critical_number;
use clawfree::gf2::{hyperplane_from_dual, Point};
use clawfree::matroid::{
    affine_geometry, ag_circ, bose_burton, doubling, fano, independent, k5, p5,
    projective_geometry, semidoubling, Matroid,
};
use clawfree::recognize::{
    find_claw_fano_violation, find_induced_embedding, is_k_even, recognize_bose_burton,
};
use clawfree::structure::{
    chibound_witness, decompose_claw_fano_free, gsfalse_family, Decomposition,
    StructureCertificate,
};
use clawfree::suites::{run_suite, SuiteParams, SUITE_NAMES};
use std::fs;
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "clawfree", version, about = "Binary matroid structure toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Critical number of a matroid
    Chi {
        /// Matroid file, or - for stdin
        input: String,
        /// Also print a basis of a maximal flat avoiding the elements
        #[arg(long)]
        witness: bool,
    },
    /// Recognition summary: rank, evenness, freeness, critical number
    Classify {
        /// Matroid file, or - for stdin
        input: String,
    },
    /// Structure decomposition: chain certificate or violating plane
    Decompose {
        /// Matroid file, or - for stdin
        input: String,
        /// Write the chain certificate to this file (- for stdout)
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Search for an induced embedding of one matroid in another
    Embed {
        /// Pattern matroid file, or - for stdin
        pattern: String,
        /// Host matroid file
        host: String,
    },
    /// Print a named matroid or a transform of an input
    Construct {
        /// Family or transform, with its arguments
        #[arg(num_args = 1.., allow_hyphen_values = false)]
        spec: Vec<String>,
    },
    /// List isomorphism classes of a given dimension
    Census {
        /// Ambient dimension
        n: u32,
        /// Keep only spanning ground sets
        #[arg(long)]
        full_rank: bool,
        /// Keep only three-even classes
        #[arg(long)]
        e3: bool,
        /// Keep only claw-free Fano-free classes
        #[arg(long)]
        claw_fano_free: bool,
    },
    /// Run a verification suite (or "all")
    Verify {
        /// Suite name
        suite: String,
        /// Random seed
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Dimension or family-index knob, suite-specific
        #[arg(long)]
        n: Option<u32>,
        /// Number of random samples, suite-specific
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Rebuild a matroid from a chain certificate
    Replay {
        /// Certificate file, or - for stdin
        input: String,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn read_matroid(path: &str) -> Result<Matroid, String> {
    read_input(path)?
        .parse()
        .map_err(|e| format!("parsing {path}: {e}"))
}

fn parse_u32(s: &str, what: &str) -> Result<u32, String> {
    s.parse().map_err(|_| format!("{what} must be a number, found {s:?}"))
}

fn point_arg(v: u32, dim: u32, what: &str) -> Result<Point, String> {
    match Point::new(v) {
        Some(p) if p.fits(dim) => Ok(p),
        _ => Err(format!("{what} {v} is not a point of a dimension-{dim} geometry")),
    }
}

fn sorted_points(flat: &clawfree::gf2::Flat) -> String {
    let mut vals: Vec<u32> = flat.points().map(|p| p.value()).collect();
    vals.sort_unstable();
    vals.iter().map(|v| format!(" {v}")).collect()
}

fn run_construct(spec: &[String]) -> Result<Matroid, String> {
    let arg = |i: usize, what: &str| -> Result<u32, String> {
        spec.get(i)
            .ok_or_else(|| format!("missing {what}"))
            .and_then(|s| parse_u32(s, what))
    };
    match spec[0].as_str() {
        "projective" => Ok(projective_geometry(arg(1, "dimension")?)),
        "affine" => Ok(affine_geometry(arg(1, "dimension")?)),
        "affine-circled" => Ok(ag_circ(arg(1, "dimension")?)),
        "bose-burton" => Ok(bose_burton(arg(1, "dimension")?, arg(2, "order")?)),
        "independent" => Ok(independent(arg(1, "dimension")?)),
        "fano" => Ok(fano()),
        "k5" => Ok(k5()),
        "p5" => Ok(p5()),
        "chibound-witness" => Ok(chibound_witness(arg(1, "dimension")?)),
        "gsfalse" => Ok(gsfalse_family(arg(1, "family index")?)),
        "doubling" => {
            let input = spec.get(1).ok_or("missing input matroid")?;
            let m = read_matroid(input)?;
            doubling(&m).map_err(|e| e.to_string())
        }
        "semidoubling" => {
            let dual = arg(1, "hyperplane dual")?;
            let input = spec.get(2).ok_or("missing input matroid")?;
            let m = read_matroid(input)?;
            let u = point_arg(dual, m.dim(), "hyperplane dual")?;
            semidoubling(&m, &hyperplane_from_dual(m.dim(), u)).map_err(|e| e.to_string())
        }
        other => Err(format!(
            "unknown construction {other:?}; families: projective, affine, \
             affine-circled, bose-burton, independent, fano, k5, p5, \
             chibound-witness, gsfalse, doubling, semidoubling"
        )),
    }
}

/// Exit 0 on success, 1 for a negative domain answer, 2 for bad input.
fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Chi { input, witness } => {
            let m = read_matroid(&input)?;
            let result = critical_number(&m);
            println!("{}", result.chi);
            if witness {
                print!("witness basis");
                for p in result.witness.basis_points() {
                    print!(" {p}");
                }
                println!();
            }
            Ok(0)
        }
        Command::Classify { input } => {
            let m = read_matroid(&input)?;
            println!("dim {}", m.dim());
            println!("size {}", m.size());
            println!("rank {}", m.rank());
            println!("chi {}", critical_number(&m).chi);
            println!(
                "three-even {}",
                if is_k_even(&m, 3) { "yes" } else { "no" }
            );
            match find_claw_fano_violation(&m) {
                None => println!("claw-fano-free yes"),
                Some(v) => {
                    println!("claw-fano-free no");
                    println!("violation {} plane{}", v.kind, sorted_points(&v.flat));
                }
            }
            if let Some(k) = recognize_bose_burton(&m) {
                println!("bose-burton {k}");
            }
            Ok(0)
        }
        Command::Decompose { input, certificate } => {
            let m = read_matroid(&input)?;
            let report = decompose_claw_fano_free(&m);
            println!("span {}", report.span.dim());
            let cert: &StructureCertificate = match &report.outcome {
                Decomposition::Violation(v) => {
                    println!("violation {} plane{}", v.kind, sorted_points(&v.flat));
                    if certificate.is_some() {
                        eprintln!("no certificate: the matroid has a violating plane");
                        return Ok(1);
                    }
                    return Ok(0);
                }
                Decomposition::EvenPlaneChain(d) => &d.certificate,
                Decomposition::AgCircChain { decomposition, .. } => &decomposition.certificate,
            };
            println!("{cert}");
            if let Some(path) = certificate {
                let text = format!("{cert}\n");
                if path == "-" {
                    print!("{text}");
                } else {
                    fs::write(&path, text).map_err(|e| format!("writing {path}: {e}"))?;
                }
            }
            Ok(0)
        }
        Command::Embed { pattern, host } => {
            let p = read_matroid(&pattern)?;
            let h = read_matroid(&host)?;
            match find_induced_embedding(&p, &h) {
                Some(e) => {
                    print!("images");
                    for img in e.images() {
                        print!(" {img}");
                    }
                    println!();
                    Ok(0)
                }
                None => {
                    eprintln!("no induced embedding");
                    Ok(1)
                }
            }
        }
        Command::Construct { spec } => {
            if spec.is_empty() {
                return Err("missing construction name".into());
            }
            let m = run_construct(&spec)?;
            println!("{m}");
            Ok(0)
        }
        Command::Census {
            n,
            full_rank,
            e3,
            claw_fano_free,
        } => {
            let filter = CensusFilter {
                full_rank,
                three_even: e3,
                claw_fano_free,
            };
            let records = census(n, &filter).map_err(|e| e.to_string())?;
            eprintln!("{} classes", records.len());
            for rec in records {
                println!("{}", rec.matroid);
            }
            Ok(0)
        }
        Command::Verify {
            suite,
            seed,
            n,
            samples,
        } => {
            let params = SuiteParams { seed, n, samples };
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut failed = false;
            for name in names {
                let report = run_suite(name, &params).map_err(|e| e.to_string())?;
                println!("{report}");
                for note in &report.notes {
                    println!("note: {note}");
                }
                for failure in &report.failures {
                    println!("failure: {failure}");
                }
                failed |= !report.passed();
            }
            Ok(if failed { 1 } else { 0 })
        }
        Command::Replay { input } => {
            let cert: StructureCertificate = read_input(&input)?
                .parse()
                .map_err(|e: clawfree::ClawfreeError| format!("parsing certificate: {e}"))?;
            let m = cert.replay().map_err(|e| e.to_string())?;
            println!("{m}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
