use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use epsolve::chains::{check_local_determination, is_colimiting, LdReport};
use epsolve::functors::{functor_family, named_constant, parse_functor, preserves_cocone, FunctorExpr};
use epsolve::json::cocone_from_str;
use epsolve::presheaf::{check_fully_faithful, enumerate_nat_trans, one_two_category, yoneda};
use epsolve::solver::{parse_equation, render_checks, solve};
use epsolve::suite::{run_suite, SuiteConfig};
use epsolve::{Caps, Error, Result};

#[derive(Parser)]
#[command(name = "epsolve", version, about = "Finite ep-pair domain equations and local-determination checks")]
struct Cli {
    #[command(flatten)]
    caps: CapFlags,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct CapFlags {
    /// Largest poset any construction may build [env: EPSOLVE_CAP_ELEMS, default 512]
    #[arg(long, global = true)]
    cap_elems: Option<usize>,
    /// Largest |A|*|B| for pair enumeration
    #[arg(long, global = true)]
    cap_pairs: Option<usize>,
    /// Deepest chain the solver iterates
    #[arg(long, global = true)]
    cap_depth: Option<usize>,
}

impl CapFlags {
    fn resolve(&self) -> Caps {
        let mut caps = Caps::from_env();
        if let Some(n) = self.cap_elems {
            caps.elems = n;
        }
        if let Some(n) = self.cap_pairs {
            caps.pair_product = n;
        }
        if let Some(n) = self.cap_depth {
            caps.depth = n;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate `D = F(D)` from the one-point domain and report each stage
    Solve {
        /// Equation such as "D = lift(unit + D)"
        equation: String,
        #[arg(long, default_value_t = epsolve::solver::DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check a cocone for local determination and colimiting-ness
    CheckLd {
        #[arg(long)]
        cocone: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Push a cocone through functors and check the images
    Preserve {
        #[arg(long)]
        cocone: PathBuf,
        /// A single functor body, e.g. "lift(D)"
        #[arg(long, conflicts_with = "depth")]
        functor: Option<String>,
        /// Every functor of this depth over the constants 1 and 2
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the seeded property suite
    VerifyTheorems {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(long, default_value_t = 200)]
        chains: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Yoneda embedding of the two-object category {1, 2}
    YonedaDemo {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// Text for stdout, an optional JSON payload, and the verdict.
struct Outcome {
    text: String,
    json: Option<(PathBuf, String)>,
    passed: bool,
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<Option<(PathBuf, String)>> {
    Ok(match path {
        Some(p) => Some((p.clone(), serde_json::to_string_pretty(value)? + "\n")),
        None => None,
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Internal(format!("{}: {e}", path.display())))
}

fn ld_line(r: &LdReport) -> String {
    format!("kind {:?}  verdict {}  defects {:?}", r.kind, r.verdict, r.defects)
}

fn run(cli: Cli) -> Result<Outcome> {
    let caps = cli.caps.resolve();
    match cli.cmd {
        Cmd::Solve { equation, depth, json, csv } => {
            let mut spec = parse_equation(&equation)?;
            spec.depth = depth;
            spec.caps = caps;
            let report = solve(&spec)?;
            if let Some(p) = csv {
                std::fs::write(&p, report.to_csv()).map_err(|e| Error::Internal(format!("{}: {e}", p.display())))?;
            }
            Ok(Outcome {
                text: report.to_table(),
                json: json.map(|p| report.to_json().map(|s| (p, s))).transpose()?,
                passed: report.passed(),
            })
        }
        Cmd::CheckLd { cocone, json } => {
            let k = cocone_from_str(&read(&cocone)?)?;
            let ld = check_local_determination(&k)?;
            let colimiting = is_colimiting(&k, &caps)?;
            let text = format!("{}\ncolimiting {}\n", ld_line(&ld), colimiting);
            let payload = json!({ "ld": ld, "colimiting": colimiting });
            Ok(Outcome {
                text,
                json: write_json(&json, &payload)?,
                passed: ld.verdict && colimiting,
            })
        }
        Cmd::Preserve { cocone, functor, depth, json } => {
            let k = cocone_from_str(&read(&cocone)?)?;
            let functors: Vec<FunctorExpr> = match functor {
                Some(f) => vec![parse_functor(&f)?],
                None => {
                    let consts = ["1", "2"].map(|n| named_constant(n).expect("builtin"));
                    functor_family(depth.unwrap_or(1), &consts)
                }
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut passed = true;
            for f in &functors {
                let p = match preserves_cocone(f, &k, &caps) {
                    Ok(p) => p,
                    Err(e @ (Error::CapExceeded { .. } | Error::NotPointed)) => {
                        let _ = writeln!(text, "SKIP {f}: {e}");
                        rows.push(json!({ "functor": f.to_string(), "skipped": e.to_string() }));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                let ok = p.colimiting && p.locally_determined.verdict;
                passed &= ok;
                let _ = writeln!(
                    text,
                    "{} {f}: apex {}  colimiting {}  {}",
                    if ok { "PASS" } else { "FAIL" },
                    p.image.apex().len(),
                    p.colimiting,
                    ld_line(&p.locally_determined)
                );
                rows.push(json!({
                    "functor": f.to_string(),
                    "apex_size": p.image.apex().len(),
                    "colimiting": p.colimiting,
                    "ld": p.locally_determined,
                }));
            }
            Ok(Outcome {
                text,
                json: write_json(&json, &rows)?,
                passed,
            })
        }
        Cmd::VerifyTheorems { seed, max_size, max_len, chains, json } => {
            let cfg = SuiteConfig {
                seed,
                max_size,
                max_len,
                chains,
                caps: Caps { elems: caps.elems.min(SuiteConfig::default().caps.elems), ..caps },
                ..SuiteConfig::default()
            };
            let report = run_suite(&cfg)?;
            let mut text = render_checks(&report);
            for c in report.criteria.iter().filter(|c| !c.passed) {
                if let Some(ce) = &c.counterexample {
                    let _ = writeln!(text, "{} counterexample: {ce}", c.id);
                }
            }
            Ok(Outcome {
                text,
                json: write_json(&json, &report)?,
                passed: report.all_passed(),
            })
        }
        Cmd::YonedaDemo { json } => {
            let k = one_two_category();
            let mut text = String::new();
            let mut counts = Vec::new();
            for x in 0..k.objects().len() {
                for y in 0..k.objects().len() {
                    let n = enumerate_nat_trans(&k, &yoneda(&k, x)?, &yoneda(&k, y)?, &caps)?.len();
                    let h = k.hom(x, y).len();
                    let (a, b) = (&k.objects()[x], &k.objects()[y]);
                    let _ = writeln!(text, "|Nat(y {a}, y {b})| = {n}   |K({a}, {b})| = {h}");
                    counts.push(json!({ "from": a, "to": b, "nat": n, "hom": h }));
                }
            }
            let ff = check_fully_faithful(&k, &caps)?;
            let _ = writeln!(text, "fully faithful: {ff}");
            Ok(Outcome {
                text,
                json: write_json(&json, &json!({ "objects": k.objects(), "counts": counts, "fully_faithful": ff }))?,
                passed: ff,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some((path, body)) = out.json {
                if let Err(e) = std::fs::write(&path, body) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
