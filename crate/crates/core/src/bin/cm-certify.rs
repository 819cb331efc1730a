use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use cm_certify::anticert::{
    anti_certify, format_witnesses, generate_golden, AntiCertOptions,
};
use cm_certify::cases::{self, case_registry, explore, run_case, RunOptions, DEFAULT_SEED};
use cm_certify::cayley_menger::{build_f, directional_derivative, EdgeSubset};
use cm_certify::chambers::{build_partitions, coverage_check, verify_barycenter_conditions, LatticeSimplex6};
use cm_certify::dominance::{certify, certify_parallel, DEFAULT_BUDGET};
use cm_certify::lengthening::{appendix_suite, lengthen_check, lengthen_suite, square_root_suite};
use cm_certify::poly::Polynomial;
use cm_certify::pullback::pullback;
use cm_certify::{Error, Result};

#[derive(Parser)]
#[command(name = "cm-certify", version, about = "Exact positivity certificates for Cayley-Menger inequalities")]
struct Cli {
    /// Emit JSON instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Named lengthening cases.
    Case {
        #[command(subcommand)]
        cmd: CaseCmd,
    },
    /// Exact value of f or g = D_beta f at an integer list.
    Eval {
        #[arg(long, conflicts_with = "g")]
        f: bool,
        /// Edge subset for g, e.g. `12,34` or `K4`.
        #[arg(long, value_name = "BETA")]
        g: Option<String>,
        #[arg(num_args = 6, required = true, allow_negative_numbers = true)]
        d: Vec<i64>,
    },
    /// Certifies a polynomial file on the unit cube or on a simplex.
    CertifyFile {
        #[arg(long)]
        poly: PathBuf,
        /// Simplex id (`C_21`, `D_3111`, ...) or a file holding `<id>: v1; ...; v6`.
        #[arg(long)]
        simplex: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        parallel: bool,
    },
    /// Searches a chamber for an exact point with f > 0 and g < 0.
    Anticert {
        #[arg(long, required_unless_present = "all")]
        beta: Option<String>,
        #[arg(long, required_unless_present = "all")]
        chamber: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        parallel: bool,
        /// Search every excluded chamber of every case and print a witness file.
        #[arg(long)]
        all: bool,
    },
    /// Volumes, random coverage and barycenter identities of the partitions.
    PartitionCheck {
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// The 48 chambers.
    Chambers {
        #[command(subcommand)]
        cmd: ChambersCmd,
    },
    /// Unit lengthening on random tetrahedral lists, or on one given list.
    LengthenCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Check this list only.
        #[arg(long, num_args = 6, value_name = "D")]
        list: Option<Vec<i64>>,
        #[arg(long, default_value_t = 1)]
        t: i64,
    },
    /// Sums of squared lists and square roots of lists.
    AppendixCheck {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluates (f, g) at a point and lists its chambers.
    Explore {
        #[arg(long)]
        beta: String,
        #[arg(long, num_args = 6, required = true)]
        point: Vec<i64>,
    },
}

#[derive(Subcommand)]
enum CaseCmd {
    List,
    Run {
        name: String,
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    RunAll {
        #[arg(long)]
        parallel: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum ChambersCmd {
    List,
}

fn emit<T: Serialize>(json: bool, value: &T, text: String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable report"));
    } else {
        print!("{text}");
    }
}

fn code(ok: bool) -> ExitCode {
    ExitCode::from(if ok { 0 } else { 1 })
}

fn six(v: &[i64]) -> [i64; 6] {
    v.try_into().expect("clap enforces six values")
}

fn load_simplex(spec: &str) -> Result<LatticeSimplex6> {
    if let Ok(s) = build_partitions().simplex(spec) {
        return Ok(s.clone());
    }
    let path = PathBuf::from(spec);
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        let line = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .ok_or_else(|| Error::InvalidArgument(format!("{spec}: empty simplex file")))?;
        return line.parse();
    }
    Err(Error::UnknownId(spec.to_string()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json = cli.json;
    match cli.cmd {
        Cmd::Case { cmd } => match cmd {
            CaseCmd::List => {
                let reg = case_registry();
                let mut text = String::new();
                for c in &reg {
                    let funcs: Vec<String> = c.functions.iter().map(|f| format!("{}={}", f.label, f.expr())).collect();
                    let simp: Vec<&str> = c.simplices.iter().map(|s| s.label.as_str()).collect();
                    text.push_str(&format!(
                        "{:<14} beta={:<12} chambers={:<3} simplices=[{}] functions=[{}]\n",
                        c.name,
                        c.beta.to_string(),
                        c.chambers,
                        simp.join(","),
                        funcs.join(", ")
                    ));
                }
                emit(json, &reg, text);
                Ok(ExitCode::SUCCESS)
            }
            CaseCmd::Run { name, parallel, seed } => {
                let opts = RunOptions {
                    seed,
                    parallel,
                    ..Default::default()
                };
                let rep = cases::run_named(&name, &opts)?;
                emit(json, &rep, rep.render());
                Ok(code(rep.passed))
            }
            CaseCmd::RunAll { parallel, seed } => {
                let opts = RunOptions {
                    seed,
                    parallel,
                    ..Default::default()
                };
                let mut reports = Vec::new();
                for c in case_registry() {
                    reports.push(run_case(&c, &opts)?);
                }
                let ok = reports.iter().all(|r| r.passed);
                let mut text = String::new();
                for r in &reports {
                    text.push_str(&r.render());
                    text.push('\n');
                }
                text.push_str(&format!(
                    "all cases: {}\n",
                    if ok { "PASS" } else { "FAIL" }
                ));
                emit(json, &reports, text);
                Ok(code(ok))
            }
        },
        Cmd::Eval { f, g, d } => {
            let d = six(&d);
            let (label, value) = match g {
                Some(b) => {
                    let beta: EdgeSubset = b.parse()?;
                    (format!("g[{beta}]"), directional_derivative(beta).evaluate_i64(&d)?)
                }
                None => {
                    let _ = f;
                    ("f".to_string(), build_f().evaluate_i64(&d)?)
                }
            };
            #[derive(Serialize)]
            struct Out {
                function: String,
                point: [i64; 6],
                value: String,
            }
            let out = Out {
                function: label.clone(),
                point: d,
                value: value.to_string(),
            };
            emit(json, &out, format!("{value}\n"));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::CertifyFile {
            poly,
            simplex,
            budget,
            parallel,
        } => {
            let text = std::fs::read_to_string(&poly)?;
            let p = Polynomial::parse(&text, None)?;
            let q = match &simplex {
                Some(s) => pullback(&p, &load_simplex(s)?)?,
                // Cube polynomials in fewer than five variables are embedded.
                None if p.nvars() < 5 => {
                    let vars: Vec<Polynomial> = (0..p.nvars()).map(|i| Polynomial::var(5, i)).collect();
                    p.substitute(&vars)?
                }
                None => p,
            };
            let cert = if parallel {
                certify_parallel(&q, budget)?
            } else {
                certify(&q, budget)?
            };
            emit(json, &cert, cert.report());
            Ok(ExitCode::from(cert.exit_code() as u8))
        }
        Cmd::Anticert {
            beta,
            chamber,
            trials,
            seed,
            parallel,
            all,
        } => {
            let opts = AntiCertOptions {
                trials,
                seed,
                parallel,
                ..Default::default()
            };
            if all {
                let (found, missing) = generate_golden(&opts)?;
                let mut text = format_witnesses(&found, seed);
                for (b, id) in &missing {
                    text.push_str(&format!("# no witness: {b} {id}\n"));
                }
                emit(json, &found, text);
                return Ok(code(missing.is_empty()));
            }
            let beta: EdgeSubset = beta.expect("required").parse()?;
            let ch = build_partitions().chamber(chamber.as_deref().expect("required"))?;
            let out = anti_certify(ch, beta, &opts)?;
            let text = match &out.witness {
                Some(w) => format!("{w}\n"),
                None => format!("no witness in {} trials\n", out.trials),
            };
            emit(json, &out, text);
            Ok(code(out.witness.is_some()))
        }
        Cmd::PartitionCheck { samples, seed } => {
            let parts = build_partitions();
            let vols = parts.volumes();
            let vol_ok = vols.iter().all(|v| *v == vols[0]);
            let cov = coverage_check(samples, seed);
            let bary = verify_barycenter_conditions();
            let bary_ok = bary.iter().all(|b| b.holds);
            let mut text = format!(
                "volumes (3, 4, 12, 48 pieces): {} {} {} {} {}\n",
                vols[0],
                vols[1],
                vols[2],
                vols[3],
                if vol_ok { "equal" } else { "MISMATCH" }
            );
            text.push_str(&format!(
                "coverage: {} points (seed {}), uncovered {:?}, generic overlaps {:?}, points with ties {}, chamber mismatches {}: {}\n",
                cov.samples,
                cov.seed,
                cov.uncovered,
                cov.overlapping_generic,
                cov.points_with_ties,
                cov.chamber_mismatches,
                if cov.passed() { "ok" } else { "FAIL" }
            ));
            for b in &bary {
                text.push_str(&format!(
                    "barycenter {} at {}: {}\n",
                    b.name,
                    b.point,
                    if b.holds { "ok" } else { "FAIL" }
                ));
            }
            let ok = vol_ok && cov.passed() && bary_ok;
            #[derive(Serialize)]
            struct Out<'a> {
                volumes: Vec<String>,
                coverage: &'a cm_certify::chambers::CoverageReport,
                barycenters: &'a [cm_certify::chambers::BarycenterCheck],
                passed: bool,
            }
            let out = Out {
                volumes: vols.iter().map(|v| v.to_string()).collect(),
                coverage: &cov,
                barycenters: &bary,
                passed: ok,
            };
            emit(json, &out, text);
            Ok(code(ok))
        }
        Cmd::Chambers { cmd: ChambersCmd::List } => {
            let parts = build_partitions();
            let mut text = String::new();
            for c in &parts.chambers {
                text.push_str(&format!("# {}\n{}\n", c.decoration, c.simplex));
            }
            emit(json, &parts.chambers, text);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::LengthenCheck {
            trials,
            seed,
            list,
            t,
        } => {
            if let Some(d) = list {
                let out = lengthen_check(&six(&d), t)?;
                let text = format!(
                    "f(D+t) S^6 = {}\nf(D) (S+6t)^6 = {}\n{}{}\n",
                    out.lhs,
                    out.rhs,
                    if out.holds() { "holds" } else { "FAILS" },
                    if out.equality { " with equality" } else { "" }
                );
                emit(json, &out, text);
                return Ok(code(out.holds()));
            }
            let rep = lengthen_suite(trials, seed)?;
            let regular = lengthen_check(&[5; 6], 1)?;
            let text = format!(
                "{}regular list equality: {}\n",
                rep.summary(),
                regular.equality
            );
            let ok = rep.ok() && regular.equality;
            emit(json, &rep, text);
            Ok(code(ok))
        }
        Cmd::AppendixCheck { trials, seed } => {
            let pairs = appendix_suite(trials, seed)?;
            let roots = square_root_suite(trials, seed)?;
            let text = pairs.summary() + &roots.summary();
            let ok = pairs.ok() && roots.ok();
            emit(json, &[pairs, roots], text);
            Ok(code(ok))
        }
        Cmd::Explore { beta, point } => {
            let beta: EdgeSubset = beta.parse()?;
            let rep = explore(beta, &six(&point))?;
            emit(json, &rep, rep.render());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
