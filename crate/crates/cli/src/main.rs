//! Command-line front end: build field tables, evaluate individual sums,
//! and run verification scans with machine-readable output.
//!
//! Exit codes: 0 on success, 1 on verification failure, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use charsum::verify::fmt_f64;
use charsum::{
    check_theorem, enumerate_characters, find_witness_primes, g_direct, gauss_sum, hyper_mellin,
    hyper_naive, jacobi_sum, s_sum, scan_field, AddCharacter, CharTuple, FieldTable, GForm,
    GaussTable, MulCharacter, QuadExtension, ScanOptions, SumValue,
};

#[derive(Parser)]
#[command(name = "charsum", version, about = "Character sums over finite fields")]
struct Cli {
    /// Worker threads for scans (also via CHARSUM_THREADS; default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FieldArgs {
    /// Field characteristic (a prime)
    #[arg(long)]
    p: u32,
    /// Extension degree
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Modulus polynomial coefficients, constant term first (e.g. 1,0,1)
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn build(&self) -> charsum::Result<Arc<FieldTable>> {
        Ok(Arc::new(FieldTable::build(
            self.p,
            self.n,
            self.modulus.as_deref(),
        )?))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum HyperMethod {
    Mellin,
    Naive,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Product,
    Fraction,
    Ci,
}

#[derive(Subcommand)]
enum Command {
    /// Show field parameters, modulus, generator and character indexing
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the table to a JSON dump
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Load a table dump instead of building (cross-checked on load)
        #[arg(long, conflicts_with_all = ["dump", "modulus"])]
        load: Option<PathBuf>,
    },
    /// Gauss sum tau(chi_j) against the canonical additive character
    Gauss {
        #[command(flatten)]
        field: FieldArgs,
        /// Character index j in [0, q-1); 0 is trivial
        #[arg(long)]
        chi: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Jacobi sum J(chi_{j1}, chi_{j2})
    Jacobi {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        chi1: u64,
        #[arg(long)]
        chi2: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Hypergeometric sum H(t) for character tuples (indices comma-separated)
    Hyper {
        #[command(flatten)]
        field: FieldArgs,
        /// Element code of t (nonzero)
        #[arg(long)]
        t: u64,
        /// Indices of the chi tuple, e.g. 0,0,0 (may be empty: "")
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        chi: Vec<u64>,
        /// Indices of the eta tuple
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        eta: Vec<u64>,
        #[arg(long, value_enum, default_value = "mellin")]
        method: HyperMethod,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The double character sum g(chi, eta)
    Gsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        chi: u64,
        #[arg(long)]
        eta: u64,
        #[arg(long, value_enum, default_value = "product")]
        form: FormArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The S-sum over the quadratic extension GF(q^2)
    Ssum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        chi: u64,
        #[arg(long)]
        eta: u64,
        /// Character index on GF(q^2), in [0, q^2-1)
        #[arg(long)]
        rho: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the hypergeometric identity for one pair or all pairs
    VerifyTheorem {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, required_unless_present = "all_pairs")]
        chi: Option<u64>,
        #[arg(long, required_unless_present = "all_pairs")]
        eta: Option<u64>,
        /// Check every nontrivial pair
        #[arg(long, conflicts_with_all = ["chi", "eta"])]
        all_pairs: bool,
        /// Number of witness primes for the exact check (0 = numeric only)
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Full-field scan: identity, path equivalence, bounds, Jacobi lemma
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        witnesses: usize,
        /// Restrict chi to the quadratic character
        #[arg(long)]
        quadratic_chi: bool,
        /// Emit results without failing the exit code
        #[arg(long)]
        report_only: bool,
        /// Skip the max_t |H(t)| bound scan
        #[arg(long)]
        no_hyper: bool,
        /// Skip the four-path equivalence check
        #[arg(long)]
        no_paths: bool,
        /// Skip the Jacobi-decomposition check
        #[arg(long)]
        no_jacobi: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write output here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Find witness primes for the field's root-of-unity modulus
    Witness {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn print_sum(label: &str, s: &SumValue, format: Format) {
    match format {
        Format::Json => {
            let mut obj = serde_json::json!({
                "value": label,
                "re": s.re,
                "im": s.im,
                "err": s.err,
            });
            if let Some(w) = &s.witness {
                obj["witness"] = serde_json::json!(w);
            }
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
        _ => {
            println!(
                "{label} = {} + {}i  (err <= {})",
                fmt_f64(s.re),
                fmt_f64(s.im),
                fmt_f64(s.err)
            );
            if let Some(w) = &s.witness {
                for (ell, res) in w {
                    println!("  residue mod {ell}: {res}");
                }
            }
        }
    }
}

fn character(f: &Arc<FieldTable>, j: u64) -> charsum::Result<MulCharacter> {
    MulCharacter::new(f.clone(), j)
}

fn run(cli: Cli) -> charsum::Result<bool> {
    // all-pass flag drives the exit code
    match cli.command {
        Command::FieldInfo {
            field,
            format,
            dump,
            load,
        } => {
            let tbl = match &load {
                Some(path) => Arc::new(FieldTable::load_json(path)?),
                None => field.build()?,
            };
            if let Some(path) = &dump {
                tbl.save_json(path)?;
            }
            let spec = tbl.spec();
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "p": spec.p, "n": spec.n, "q": spec.q,
                        "modulus": spec.modulus,
                        "gen": tbl.generator(),
                        "quadratic_index": if spec.q % 2 == 1 { Some((spec.q - 1) / 2) } else { None },
                    }))
                    .unwrap()
                );
            } else {
                println!("GF({}) = GF({}^{})", spec.q, spec.p, spec.n);
                println!("modulus (constant term first): {:?}", spec.modulus);
                println!("generator: {}", tbl.generator());
                println!("characters: j in [0, {}); j = 0 is trivial", spec.q - 1);
                if spec.q % 2 == 1 {
                    println!("quadratic character: j = {}", (spec.q - 1) / 2);
                }
            }
            Ok(true)
        }
        Command::Gauss { field, chi, format } => {
            let f = field.build()?;
            let psi = AddCharacter::canonical(f.clone());
            let tau = gauss_sum(&character(&f, chi)?, &psi)?;
            print_sum("tau", &tau, format);
            Ok(true)
        }
        Command::Jacobi {
            field,
            chi1,
            chi2,
            format,
        } => {
            let f = field.build()?;
            let j = jacobi_sum(&character(&f, chi1)?, &character(&f, chi2)?)?;
            print_sum("J", &j, format);
            Ok(true)
        }
        Command::Hyper {
            field,
            t,
            chi,
            eta,
            method,
            format,
        } => {
            let f = field.build()?;
            let t = f.check_element(t)?;
            let chi_t = CharTuple::new(
                chi.iter()
                    .map(|&j| character(&f, j))
                    .collect::<charsum::Result<_>>()?,
            )?;
            let eta_t = CharTuple::new(
                eta.iter()
                    .map(|&j| character(&f, j))
                    .collect::<charsum::Result<_>>()?,
            )?;
            match method {
                HyperMethod::Mellin => {
                    let gauss = GaussTable::build(&f);
                    print_sum("H", &hyper_mellin(t, &chi_t, &eta_t, &gauss)?, format);
                }
                HyperMethod::Naive => {
                    print_sum("H", &hyper_naive(t, &chi_t, &eta_t)?, format);
                }
                HyperMethod::Both => {
                    let gauss = GaussTable::build(&f);
                    let a = hyper_mellin(t, &chi_t, &eta_t, &gauss)?;
                    let b = hyper_naive(t, &chi_t, &eta_t)?;
                    print_sum("H (mellin)", &a, format);
                    print_sum("H (naive)", &b, format);
                    println!("cross-path diff = {}", fmt_f64(a.dist(&b)));
                }
            }
            Ok(true)
        }
        Command::Gsum {
            field,
            chi,
            eta,
            form,
            format,
        } => {
            let f = field.build()?;
            let form = match form {
                FormArg::Product => GForm::Product,
                FormArg::Fraction => GForm::Fraction,
                FormArg::Ci => GForm::Ci,
            };
            let g = g_direct(&character(&f, chi)?, &character(&f, eta)?, form)?;
            print_sum("g", &g, format);
            Ok(true)
        }
        Command::Ssum {
            field,
            chi,
            eta,
            rho,
            format,
        } => {
            let f = field.build()?;
            let qe = QuadExtension::build(f.clone())?;
            let rho = MulCharacter::new(qe.ext.clone(), rho)?;
            let s = s_sum(&character(&f, chi)?, &character(&f, eta)?, &rho, &qe)?;
            print_sum("S", &s, format);
            Ok(true)
        }
        Command::VerifyTheorem {
            field,
            chi,
            eta,
            all_pairs,
            witnesses,
            format,
        } => {
            let f = field.build()?;
            let gauss = GaussTable::build(&f);
            let ws = if witnesses > 0 {
                let l = charsum::arith::lcm(f.p() as u64, f.q() as u64 - 1);
                Some(find_witness_primes(l, witnesses)?)
            } else {
                None
            };
            let pairs: Vec<(MulCharacter, MulCharacter)> = if all_pairs {
                let chars = enumerate_characters(&f, true);
                chars
                    .iter()
                    .flat_map(|c| chars.iter().map(move |e| (c.clone(), e.clone())))
                    .collect()
            } else {
                vec![(character(&f, chi.unwrap())?, character(&f, eta.unwrap())?)]
            };
            let mut all_ok = true;
            let mut reports = Vec::new();
            for (c, e) in &pairs {
                let r = check_theorem(c, e, &gauss, ws.as_deref())?;
                all_ok &= r.pass;
                if format == Format::Text {
                    println!(
                        "chi={} eta={} |g - rhs| = {} (tol {}) witness={:?} {}",
                        r.chi_j,
                        r.eta_j,
                        fmt_f64(r.abs_diff),
                        fmt_f64(r.tolerance),
                        r.witness_pass,
                        if r.pass { "PASS" } else { "FAIL" }
                    );
                }
                reports.push(r);
            }
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&reports).unwrap());
            }
            Ok(all_ok)
        }
        Command::Scan {
            field,
            witnesses,
            quadratic_chi,
            report_only,
            no_hyper,
            no_paths,
            no_jacobi,
            format,
            output,
        } => {
            let f = field.build()?;
            let opts = ScanOptions {
                witness_count: witnesses,
                quadratic_chi_only: quadratic_chi,
                report_only,
                hyper_bound: !no_hyper,
                path_equivalence: !no_paths,
                lemma_jacobi: !no_jacobi,
            };
            let report = scan_field(&f, &opts)?;
            let body = match format {
                Format::Csv => report.to_csv(),
                Format::Json => serde_json::to_string_pretty(&report).unwrap() + "\n",
                Format::Text => {
                    let mut s = format!(
                        "scan GF({}) ({} pairs, {} passed){}\n",
                        report.q,
                        report.pairs_total,
                        report.pairs_passed,
                        if report.report_only {
                            " [report-only]"
                        } else {
                            ""
                        },
                    );
                    s += &format!(
                        "max |g|/q = {}\nmax_t |H(t)| = {}\nmax |g - rhs| = {}\n",
                        fmt_f64(report.max_g_over_q),
                        fmt_f64(report.max_h),
                        fmt_f64(report.max_abs_diff),
                    );
                    if let Some(im) = report.max_im_g_quadratic {
                        s += &format!("max |Im g| (quadratic chi) = {}\n", fmt_f64(im));
                    }
                    if let Some(ok) = report.lemma_jacobi_pass {
                        s += &format!(
                            "jacobi decomposition: {}\n",
                            if ok { "PASS" } else { "FAIL" }
                        );
                    }
                    s += if report.all_pass {
                        "ALL PASS\n"
                    } else {
                        "FAILURES\n"
                    };
                    s
                }
            };
            match output {
                Some(path) => std::fs::write(path, body)?,
                None => print!("{body}"),
            }
            Ok(report.all_pass || report.report_only)
        }
        Command::Witness {
            field,
            count,
            format,
        } => {
            let f = field.build()?;
            let l = charsum::arith::lcm(f.p() as u64, f.q() as u64 - 1);
            let ws = find_witness_primes(l, count)?;
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&ws).unwrap());
            } else {
                println!("L = lcm(p, q-1) = {l}");
                for w in &ws {
                    println!("ell = {}  zeta = {} (order {})", w.ell, w.zeta, w.l);
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("CHARSUM_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
