use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tableaux::document::TableauDocument;
use tableaux::guillemin::{check_gnf_commutativity, w1_of_phi, w_minus_of_phi, Covector};
use tableaux::involutivity::{build_b_array, cartan_test, CartanOptions, EndovolutiveStatus, Variant};
use tableaux::moduli::{
    default_coefficient_set, enumerate_census, export_ideal, format_ideal, sample_involutive, SampleOptions,
    DEFAULT_CENSUS_CAP,
};
use tableaux::rational::parse_rational_list;
use tableaux::tableau::{extract_symbol_coefficients, find_generic_basis, CartanCharacters, DEFAULT_TRIALS};
use tableaux::{Error, RatMatrix, Rational, Subspace};

#[derive(Parser)]
#[command(name = "tableaux", version, about = "Exact Cartan-test and normal-form analysis of tableaux")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for the random basis search
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random bases tried when computing generic characters
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    /// Index range of the quadratic criterion
    #[arg(long, default_value_t = Variant::Theorem)]
    variant: Variant,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generic Cartan characters, dim A, dim H^1 and the basis used
    Characters {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Full involutivity report; exit 0 involutive, 1 not, 2 error or inconclusive
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// W^-(phi), W^1(phi) and the commutativity check, in the report's basis
    Gnf {
        #[arg(long)]
        input: PathBuf,
        /// Covector components, e.g. "1,0,0"
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[command(flatten)]
        common: Common,
    },
    /// Quadratic ideal in the free coefficients, one polynomial per line
    Ideal {
        #[arg(required = true)]
        characters: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Random involutive presentations written as documents
    Sample {
        #[arg(required = true)]
        characters: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        /// Coefficient values, e.g. "-1,0,1"
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
        /// Directory for the kept documents
        #[arg(long, default_value = "samples")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive count over all assignments from --set
    Census {
        #[arg(required = true)]
        characters: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CENSUS_CAP)]
        cap: u64,
        #[command(flatten)]
        common: Common,
    },
}

fn options(c: &Common) -> CartanOptions {
    CartanOptions { seed: c.seed, trials: c.trials, variant: c.variant, ..CartanOptions::default() }
}

fn parse_set(set: &Option<String>) -> Result<Vec<Rational>, Error> {
    match set {
        Some(s) => Ok(parse_rational_list(s)?),
        None => Ok(default_coefficient_set()),
    }
}

fn show_matrix(name: &str, m: &RatMatrix) {
    println!("{name} =");
    for a in 0..m.rows() {
        let row: Vec<String> = m.row(a).iter().map(ToString::to_string).collect();
        println!("  [{}]", row.join(", "));
    }
}

fn show_subspace(name: &str, s: &Subspace) {
    let vs: Vec<String> = s
        .basis()
        .iter()
        .map(|v| format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    println!("{name}: dim {} basis [{}]", s.dim(), vs.join(", "));
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Characters { input, common } => {
            let t = TableauDocument::from_path(&input)?.tableau();
            let (basis, chars) = find_generic_basis(&t, common.seed, common.trials);
            if common.json {
                let v = serde_json::json!({
                    "characters": chars,
                    "dim_a": t.dim(),
                    "dim_h1": t.dim_h1(),
                    "basis": tableaux::involutivity::BasisRecord::of(&basis),
                });
                println!("{}", to_json(&v));
            } else {
                let s: Vec<String> = chars.as_slice().iter().map(ToString::to_string).collect();
                println!("characters: {}, dim A = {}", s.join(" "), t.dim());
                println!("dim H^1 = {}", t.dim_h1());
                show_matrix("g", basis.g());
                show_matrix("h", basis.h());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze { input, common } => {
            let t = TableauDocument::from_path(&input)?.tableau();
            let report = cartan_test(&t, &options(&common));
            if common.json {
                println!("{}", to_json(&report));
            } else {
                println!("characters: {}", report.characters);
                println!("dim A = {}, dim A^(1) = {}, Cartan bound = {}", report.dim_a, report.dim_a1, report.cartan_bound);
                println!("dim H^1 = {}, dim H^2 = {}", report.dim_h1, report.dim_h2);
                println!("oracle: {}", if report.involutive { "involutive" } else { "not involutive" });
                match report.criterion_holds {
                    Some(h) => println!(
                        "endovolutive: yes ({:?}); quadratic criterion ({}): {}",
                        report.endovolutive_status,
                        report.variant,
                        if h { "holds" } else { "fails" }
                    ),
                    None => println!("endovolutive: inconclusive; quadratic criterion not evaluated"),
                }
                for v in &report.violations {
                    println!(
                        "  violation: (B^{}_{} B^{}_{} - B^{}_{} B^{}_{})^{}_{} = {}",
                        v.lambda, v.i, v.mu, v.j, v.lambda, v.j, v.mu, v.i, v.a, v.b, v.value
                    );
                }
                let pair = report.basis.to_pair()?;
                show_matrix("g", pair.g());
                show_matrix("h", pair.h());
            }
            Ok(if report.endovolutive_status == EndovolutiveStatus::Inconclusive {
                ExitCode::from(2)
            } else if report.involutive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Gnf { input, phi, common } => {
            let t = TableauDocument::from_path(&input)?.tableau();
            let report = cartan_test(&t, &options(&common));
            if report.endovolutive_status == EndovolutiveStatus::Inconclusive {
                return Err(Error::Inconclusive { retries: options(&common).retries });
            }
            let pair = report.basis.to_pair()?;
            let b = build_b_array(&extract_symbol_coefficients(&t, &pair)?);
            let phi = Covector::new(parse_rational_list(&phi)?);
            let w_minus = w_minus_of_phi(&b, &phi)?;
            let w1 = w1_of_phi(&b, &phi)?;
            let check = check_gnf_commutativity(&b, &phi, &[])?;
            if common.json {
                let v = serde_json::json!({
                    "w_minus": w_minus.basis(),
                    "w1": w1.basis(),
                    "commutativity": check,
                    "basis": report.basis,
                });
                println!("{}", to_json(&v));
            } else {
                show_subspace("W^-(phi)", &w_minus);
                show_subspace("W^1(phi)", &w1);
                match &check.witness {
                    None => println!("B(phi)(v) preserves W^1(phi) and commutes there: yes"),
                    Some(w) => println!("B(phi)(v) preserves W^1(phi) and commutes there: no, {w:?}"),
                }
                show_matrix("g", pair.g());
                show_matrix("h", pair.h());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ideal { characters, common } => {
            let chars = CartanCharacters::new(characters)?;
            print!("{}", format_ideal(&export_ideal(&chars, common.variant)));
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { characters, count, set, out, common } => {
            let chars = CartanCharacters::new(characters)?;
            let opts = SampleOptions {
                seed: common.seed,
                count,
                set: parse_set(&set)?,
                variant: common.variant,
                trials: common.trials,
                ..SampleOptions::default()
            };
            let outcome = sample_involutive(&chars, &opts)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::InvalidDocument(format!("{}: {e}", out.display())))?;
            for (k, p) in outcome.kept.iter().enumerate() {
                let path = out.join(format!("sample_{k:04}.json"));
                std::fs::write(&path, TableauDocument::Coefficients(p.clone()).to_json())
                    .map_err(|e| Error::InvalidDocument(format!("{}: {e}", path.display())))?;
            }
            println!(
                "kept {} of {} draws ({} non-generic, {} rejected, {} criterion/oracle disagreements); written to {}",
                outcome.kept.len(),
                outcome.draws,
                outcome.non_generic,
                outcome.rejected,
                outcome.disagreements.len(),
                out.display()
            );
            Ok(if outcome.disagreements.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Census { characters, set, cap, common } => {
            let chars = CartanCharacters::new(characters)?;
            let census = enumerate_census(&chars, &parse_set(&set)?, cap, common.variant, common.trials)?;
            if common.json {
                println!("{}", to_json(&census));
            } else {
                println!("characters: {} (r = {}, {} free variables)", census.characters, census.r, census.variables);
                println!("assignments: {}", census.total);
                println!("non-generic: {}", census.non_generic);
                println!("criterion involutive: {}", census.criterion_involutive);
                println!("oracle involutive: {}", census.oracle_involutive);
                println!("disagreements: {}", census.disagreements);
                for (v, c) in &census.violation_histogram {
                    println!("  {v} violations: {c}");
                }
                println!("note: {}", census.note);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
