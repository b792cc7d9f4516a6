//! Batch construction, verification, and report export for the two
//! measurement families. Exit status: 0 when every requested verification
//! passes, 1 on a verification failure, 2 on bad input. Failures also emit a
//! machine-parseable JSON record on stderr.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use povmforge_core::{
    build_ensemble_q, build_ensemble_q1, build_f_permutation, build_s_set, codebook_metrics,
    compute_ledger_q, compute_ledger_q1, count_two_to_one_bruteforce, count_two_to_one_formula,
    ensemble_from_json, ensemble_to_json, is_pn, is_two_to_one, ledger_csv_error_row,
    ledger_csv_rows, ledger_to_csv, verify_li_bound, verify_povm_axioms, Construction,
    EpsilonLedger, FieldElement, FieldSpec, NSubgroupTable, PolyFunction, PovmEnsemble,
    Tolerances, TowerSpec, LEDGER_CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "povmforge",
    version,
    about = "Construct approximately symmetric informationally complete POVMs from finite-field \
             character sums and verify their properties"
)]
struct Cli {
    /// Worker threads for pairwise scans; also set by POVMFORGE_WORKERS.
    /// Results are bitwise identical for any worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// Dimension-q family (odd prime power, 2-to-1 PN function).
    Q,
    /// Dimension-(q+1) family (any prime power, norm-one subgroup).
    Q1,
}

#[derive(Subcommand)]
enum Command {
    /// Build the dimension-q ensemble; writes ensemble JSON and ledger CSV.
    #[command(name = "construct-q")]
    ConstructQ {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// Polynomial coefficients, constant term first: "0,0,1" is x^2.
        /// For k > 1, separate coefficients with ';' and base-p digits of
        /// each coefficient with ',' (e.g. "0;0;1,0").
        #[arg(long)]
        f: Option<String>,
        /// Additive character index: an element index, or base-p digits
        /// joined by ',' when k > 1. Defaults to 1.
        #[arg(long, default_value = "1")]
        chi: String,
        /// Run the full axiom verification and gate the exit status on it.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build the dimension-(q+1) ensemble; writes ensemble JSON and ledger CSV.
    #[command(name = "construct-q1")]
    ConstructQ1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Re-verify a previously exported ensemble JSON.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Override the per-dimension POVM-sum tolerance (positive).
        #[arg(long)]
        sum_tol: Option<f64>,
        /// Override the overlap-bound slack (positive).
        #[arg(long)]
        bound_slack: Option<f64>,
        /// Override the member-positivity tolerance (positive magnitude).
        #[arg(long)]
        psd_tol: Option<f64>,
        /// Where to write the summary CSV (defaults next to the input).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Classify a polynomial: 2-to-1 and perfect nonlinear predicates.
    #[command(name = "fn-check")]
    FnCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        f: String,
    },
    /// Count all 2-to-1 mappings: closed formula, optionally brute force.
    #[command(name = "fn-count")]
    FnCount {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// Cross-check against exhaustive enumeration (q <= 5).
        #[arg(long)]
        brute: bool,
    },
    /// Codebook metrics of a family's vector set against the Welch bound.
    Welch {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Family::Q1)]
        construction: Family,
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value = "1")]
        chi: String,
    },
    /// Maximum subgroup character sum over the set S, against sqrt(q).
    Libound {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Batch construction across a q grid; aggregated ledger CSV with gap
    /// statistics. Per-q failures are recorded in-row and the sweep continues.
    Sweep {
        #[arg(long, value_enum)]
        construction: Family,
        /// Comma-separated prime powers, e.g. "3,5,7,9,13".
        #[arg(long)]
        q_list: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_workers(cli.workers);
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let record = serde_json::json!({
                "status": "error",
                "message": format!("{err:#}"),
            });
            eprintln!("{record}");
            ExitCode::from(2)
        }
    }
}

fn init_workers(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("POVMFORGE_WORKERS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::ConstructQ { p, k, f, chi, verify, out_dir } => {
            let spec = FieldSpec::new(p, k)?;
            let f = match f {
                Some(text) => parse_poly(&spec, &text)?,
                None => PolyFunction::x_squared(&spec),
            };
            let chi = parse_element(&spec, &chi)?;
            let perm = build_f_permutation(&spec, &f)?;
            let ensemble = build_ensemble_q(&spec, &f, &perm, &chi)?;
            let ledger = compute_ledger_q(&ensemble);
            finish_construct(&ensemble, &ledger, verify, &out_dir)
        }
        Command::ConstructQ1 { p, k, verify, out_dir } => {
            let tower = TowerSpec::for_base(FieldSpec::new(p, k)?)?;
            let ensemble = build_ensemble_q1(&tower)?;
            let ledger = compute_ledger_q1(&ensemble);
            finish_construct(&ensemble, &ledger, verify, &out_dir)
        }
        Command::Verify { input, sum_tol, bound_slack, psd_tol, out_dir } => {
            let mut tol = Tolerances::default();
            if let Some(v) = sum_tol {
                ensure_positive(v, "--sum-tol")?;
                tol.povm_sum_per_dim = v;
            }
            if let Some(v) = bound_slack {
                ensure_positive(v, "--bound-slack")?;
                tol.bound_slack = v;
            }
            if let Some(v) = psd_tol {
                ensure_positive(v, "--psd-tol")?;
                tol.psd_floor = -v;
            }
            let json = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let ensemble = ensemble_from_json(&json)?;
            let report = verify_povm_axioms(&ensemble, &tol)?;
            print!("{}", report.summary_text());

            let stem = input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("ensemble")
                .to_string();
            let dir = out_dir.unwrap_or_else(|| {
                input.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
            });
            fs::create_dir_all(&dir)?;
            let json_path = dir.join(format!("{stem}.verify.json"));
            fs::write(&json_path, report.to_json())?;
            let csv_path = dir.join(format!("{stem}.verify.csv"));
            fs::write(&csv_path, report.summary_csv())?;
            println!("wrote {}", json_path.display());
            println!("wrote {}", csv_path.display());
            verdict(report.pass, "axiom verification failed")
        }
        Command::FnCheck { p, k, f } => {
            let spec = FieldSpec::new(p, k)?;
            let f = parse_poly(&spec, &f)?;
            let profile = is_two_to_one(&spec, &f);
            let pn = is_pn(&spec, &f);
            let record = serde_json::json!({
                "q": spec.q(),
                "two_to_one": profile.is_two_to_one,
                "exceptional_image": profile.exceptional_image.as_ref().map(|e| e.coeffs().to_vec()),
                "fiber_counts": profile.fiber_counts,
                "pn": pn,
                "two_to_one_pn": profile.is_two_to_one && pn,
            });
            println!("{}", serde_json::to_string_pretty(&record)?);
            verdict(profile.is_two_to_one && pn, "function is not a 2-to-1 PN function")
        }
        Command::FnCount { p, k, brute } => {
            let spec = FieldSpec::new(p, k)?;
            let formula = count_two_to_one_formula(&spec);
            println!("formula: {formula}");
            if brute {
                let counted = count_two_to_one_bruteforce(&spec)?;
                println!("brute force: {counted}");
                return verdict(
                    formula.to_string() == counted.to_string(),
                    "formula disagrees with brute force",
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Welch { p, k, construction, f, chi } => {
            let spec = FieldSpec::new(p, k)?;
            let ensemble = match construction {
                Family::Q => {
                    let f = match f {
                        Some(text) => parse_poly(&spec, &text)?,
                        None => PolyFunction::x_squared(&spec),
                    };
                    let chi = parse_element(&spec, &chi)?;
                    let perm = build_f_permutation(&spec, &f)?;
                    build_ensemble_q(&spec, &f, &perm, &chi)?
                }
                Family::Q1 => {
                    let tower = TowerSpec::for_base(spec)?;
                    build_ensemble_q1(&tower)?
                }
            };
            let metrics = codebook_metrics(&ensemble.vectors)?;
            println!("{}", serde_json::to_string_pretty(&metrics)?);
            println!(
                "({}, {}) codebook: i_max = {:.9}, welch bound = {:.9}, ratio = {:.9}",
                metrics.n, metrics.k, metrics.i_max, metrics.welch_bound, metrics.ratio
            );
            verdict(
                metrics.i_max >= metrics.welch_bound - 1e-9,
                "maximum cross-correlation fell below the Welch bound",
            )
        }
        Command::Libound { p, k } => {
            let tower = TowerSpec::for_base(FieldSpec::new(p, k)?)?;
            let table = NSubgroupTable::build(&tower);
            let s = build_s_set(&tower)?;
            let q = tower.q();
            match verify_li_bound(&table, &s) {
                Ok(max) => {
                    println!(
                        "q = {q}: max |sum| over {} nontrivial characters = {max:.9} <= sqrt(q) = {:.9}",
                        q * q + q,
                        (q as f64).sqrt()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(err) => {
                    let record = serde_json::json!({
                        "status": "verification_failed",
                        "message": err.to_string(),
                    });
                    eprintln!("{record}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Sweep { construction, q_list, out_dir } => sweep(construction, &q_list, &out_dir),
    }
}

/// Write ensemble JSON and ledger CSV, print the run summary, and gate the
/// exit status on the requested level of verification.
fn finish_construct(
    ensemble: &PovmEnsemble,
    ledger: &EpsilonLedger,
    verify: bool,
    out_dir: &Path,
) -> Result<ExitCode> {
    fs::create_dir_all(out_dir)?;
    let tag = ensemble.construction.tag();
    let q = ensemble.q();
    let json_path = out_dir.join(format!("{tag}_q{q}.ensemble.json"));
    let csv_path = out_dir.join(format!("{tag}_q{q}.ledger.csv"));
    fs::write(&json_path, ensemble_to_json(ensemble))?;
    fs::write(&csv_path, ledger_to_csv(ledger))?;

    println!(
        "built {} ensemble: q = {q}, dimension {}, {} members",
        tag,
        ensemble.dim,
        ensemble.member_count()
    );
    for case in &ledger.cases {
        println!(
            "  case {}: measured max {:.9} vs bound {:.9} (margin {:+.3e})",
            case.case_id, case.measured_max, case.bound, case.margin
        );
    }
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());

    if verify {
        let report = verify_povm_axioms(ensemble, &Tolerances::default())?;
        print!("{}", report.summary_text());
        return verdict(report.pass, "axiom verification failed");
    }
    verdict(ledger.validate(1e-9).is_ok(), "an overlap bound was violated")
}

fn sweep(construction: Family, q_list: &str, out_dir: &Path) -> Result<ExitCode> {
    let qs = parse_q_list(q_list)?;
    let tag = match construction {
        Family::Q => Construction::DimQ,
        Family::Q1 => Construction::DimQPlusOne,
    };
    let mut rows = vec![LEDGER_CSV_HEADER.to_string()];
    let mut gap_lines: HashMap<String, Vec<(u64, f64)>> = HashMap::new();
    let mut all_ok = true;

    for &q in &qs {
        let outcome: Result<EpsilonLedger> = (|| {
            let (p, k) = prime_power(q)?;
            let spec = FieldSpec::new(p, k)?;
            match construction {
                Family::Q => {
                    let f = PolyFunction::x_squared(&spec);
                    let perm = build_f_permutation(&spec, &f)?;
                    let ensemble = build_ensemble_q(&spec, &f, &perm, &spec.one())?;
                    Ok(compute_ledger_q(&ensemble))
                }
                Family::Q1 => {
                    let tower = TowerSpec::for_base(spec)?;
                    let ensemble = build_ensemble_q1(&tower)?;
                    Ok(compute_ledger_q1(&ensemble))
                }
            }
        })();
        match outcome {
            Ok(ledger) => {
                let ok = ledger.validate(1e-9).is_ok();
                if !ok {
                    all_ok = false;
                }
                rows.extend(ledger_csv_rows(&ledger, if ok { "ok" } else { "bound_violated" }));
                for case in &ledger.cases {
                    gap_lines
                        .entry(case.case_id.clone())
                        .or_default()
                        .push((q, case.gap_scaled));
                }
            }
            Err(err) => {
                all_ok = false;
                rows.push(ledger_csv_error_row(tag, q, &err.to_string()));
            }
        }
    }

    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("sweep_{}.csv", tag.tag()));
    fs::write(&path, rows.join("\n") + "\n")?;
    println!("wrote {}", path.display());

    let mut case_ids: Vec<&String> = gap_lines.keys().collect();
    case_ids.sort();
    println!("gap * q^order by case (bounded-ratio statistic for the decay claims):");
    for id in case_ids {
        let series = &gap_lines[id];
        let rendered: Vec<String> =
            series.iter().map(|(q, g)| format!("q={q}: {g:.4}")).collect();
        println!("  case {id}: {}", rendered.join(", "));
    }
    verdict(all_ok, "sweep recorded at least one failure")
}

fn verdict(pass: bool, message: &str) -> Result<ExitCode> {
    if pass {
        Ok(ExitCode::SUCCESS)
    } else {
        let record = serde_json::json!({
            "status": "verification_failed",
            "message": message,
        });
        eprintln!("{record}");
        Ok(ExitCode::FAILURE)
    }
}

fn ensure_positive(value: f64, flag: &str) -> Result<()> {
    if value > 0.0 {
        Ok(())
    } else {
        bail!("{flag} must be positive, got {value}")
    }
}

/// "0,0,1" -> coefficients by element index; with ';' present, each
/// coefficient is a base-p digit vector (constant digit first).
fn parse_poly(spec: &FieldSpec, text: &str) -> Result<PolyFunction> {
    let coeffs: Result<Vec<FieldElement>> = if text.contains(';') {
        text.split(';').map(|tok| parse_digit_vector(spec, tok)).collect()
    } else {
        text.split(',').map(|tok| parse_index_element(spec, tok)).collect()
    };
    Ok(PolyFunction::new(coeffs?))
}

/// An element given either as a plain enumeration index or as base-p digits
/// joined by ','.
fn parse_element(spec: &FieldSpec, text: &str) -> Result<FieldElement> {
    if text.contains(',') {
        parse_digit_vector(spec, text)
    } else {
        parse_index_element(spec, text)
    }
}

fn parse_digit_vector(spec: &FieldSpec, token: &str) -> Result<FieldElement> {
    let digits: Result<Vec<u64>> = token
        .split(',')
        .map(|d| {
            d.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("invalid base-{} digit {d:?}", spec.p()))
        })
        .collect();
    Ok(spec.element_from_coeffs(&digits?)?)
}

fn parse_index_element(spec: &FieldSpec, token: &str) -> Result<FieldElement> {
    let idx: u64 = token
        .trim()
        .parse()
        .map_err(|_| anyhow!("invalid element index {token:?}"))?;
    if idx >= spec.q() {
        bail!("element index {idx} out of range for q = {}", spec.q());
    }
    Ok(spec.element(idx))
}

fn parse_q_list(text: &str) -> Result<Vec<u64>> {
    let qs: Result<Vec<u64>> = text
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .map_err(|_| anyhow!("invalid q value {tok:?}"))
        })
        .collect();
    let qs = qs?;
    if qs.is_empty() {
        bail!("--q-list must name at least one prime power");
    }
    Ok(qs)
}

/// Decompose q as p^k for prime p, or reject.
fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        bail!("q must be at least 2");
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    let p = if q.is_multiple_of(p) { p } else { q };
    let mut rest = q;
    let mut k = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest != 1 {
        bail!("{q} is not a prime power");
    }
    Ok((p, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(13).unwrap(), (13, 1));
        assert_eq!(prime_power(8).unwrap(), (2, 3));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn poly_parsing_prime_field() {
        let spec = FieldSpec::new(5, 1).unwrap();
        let f = parse_poly(&spec, "0,0,1").unwrap();
        assert_eq!(f, PolyFunction::x_squared(&spec));
        assert!(parse_poly(&spec, "0,9").is_err());
    }

    #[test]
    fn poly_parsing_extension_field() {
        let spec = FieldSpec::new(3, 2).unwrap();
        let f = parse_poly(&spec, "0;0;1,0").unwrap();
        assert_eq!(f, PolyFunction::x_squared(&spec));
        let g = parse_poly(&spec, "0,1;0;1").unwrap();
        assert_eq!(g.coeffs[0], spec.element(3));
    }

    #[test]
    fn element_parsing_modes() {
        let spec = FieldSpec::new(3, 2).unwrap();
        assert_eq!(parse_element(&spec, "4").unwrap(), spec.element(4));
        assert_eq!(parse_element(&spec, "1,1").unwrap(), spec.element(4));
        assert!(parse_element(&spec, "9").is_err());
    }
}
