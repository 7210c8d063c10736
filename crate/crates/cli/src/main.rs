//! `finvar`: builders, checkers and the reproduction harness on the command
//! line. Algebras are read and written in the JSON document format.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use finvar_core::algebra::{
    free_algebra_with, holds_with, in_variety_with, read_algebra, vn_basis_with, write_algebra, AlgebraDoc,
    Assignment, FiniteAlgebra, Membership,
};
use finvar_core::constructions::{
    adjoin_zero, automatic_from_zero_adjoined, build_action_algebra, build_b, square, star, BuildBConfig,
    TwoSortedActionAlgebra,
};
use finvar_core::groups::{todd_coxeter, FiniteGroup, GroupAction, GroupPresentation};
use finvar_core::terms::{format_identity, parse_identity};
use finvar_core::verify::{
    growth_csv, growth_experiment, render_growth, render_reports, verify_suite, Flavor, GrowthConfig, VerifyConfig,
    SCENARIO_IDS,
};
use finvar_core::{Budget, Error, Progress, Silent};

#[derive(Parser)]
#[command(name = "finvar", version, about = "Finite algebras, group actions and variety membership")]
struct Cli {
    /// Resource caps, e.g. `elements=100000,assignments=5000000,cosets=200000`.
    /// Overrides FINVAR_BUDGET.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Report progress of long searches on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the reproduction scenarios and print their report.
    VerifyPaper {
        /// Scenario to run (repeatable); all when omitted.
        #[arg(long = "scenario", value_name = "ID")]
        scenarios: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random actions in the suite.
        #[arg(long, default_value_t = 20)]
        suite_size: usize,
        /// Directory for report.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List scenario ids and exit.
        #[arg(long)]
        list: bool,
    },
    /// Witness sizes and membership levels along a list of targets.
    Growth {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "star")]
        flavor: String,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        ell: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Witness parameter of the automatic flavor.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Rows getting the exhaustive membership test.
        #[arg(long, default_value_t = 1)]
        full_rows: usize,
        /// Skip the bounded identity check.
        #[arg(long)]
        no_bounded: bool,
        /// Directory for report.txt and growth.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A(G, S) from a permutation group.
    BuildAction {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A* of a two-sorted algebra.
    Star(Transform),
    /// C□ of a τ*-algebra.
    Square(Transform),
    /// A⁰ of a two-sorted algebra.
    AdjoinZero(Transform),
    /// The automatic algebra of a two-sorted algebra (zero adjoined first
    /// unless the document designates zeros).
    Automatic(Transform),
    /// The witness B(n, ℓ) for primes p ≠ q.
    #[command(name = "build-B")]
    BuildB {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        ell: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Order of a finitely presented group, e.g. `gens: a b; rels: a^2, b^2, (a*b)^3;`.
    CosetEnum {
        presentation: String,
        /// Write the multiplication table as a one-sorted algebra.
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Free algebra of V(A) on the given generator counts per sort.
    Free {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        gens: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether B lies in V(A).
    Member {
        /// The algebra B.
        input: PathBuf,
        /// The generating algebra A.
        #[arg(long)]
        variety: PathBuf,
    },
    /// Whether an identity holds, e.g. `d(x0, x0) =~ x0`.
    CheckId {
        input: PathBuf,
        identity: String,
    },
    /// Identities of A in at most n variables per sort.
    VnBasis {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

#[derive(Args)]
struct GroupArgs {
    /// Symmetric group on n points.
    #[arg(long, group = "source")]
    symmetric: Option<usize>,
    /// Dihedral group on the vertices of an n-gon.
    #[arg(long, group = "source")]
    dihedral: Option<usize>,
    /// Cyclic group of order n acting regularly.
    #[arg(long, group = "source")]
    cyclic: Option<usize>,
    /// Number of points for --gen.
    #[arg(long, requires = "gen")]
    degree: Option<usize>,
    /// Generator as 1-based images, e.g. `2,3,1` (repeatable).
    #[arg(long = "gen", value_name = "IMAGES", group = "source")]
    gen: Vec<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Transform {
    input: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

struct Stderr(Mutex<String>);

impl Progress for Stderr {
    fn report(&self, stage: &str, done: u64, total: Option<u64>) {
        let mut last = self.0.lock().expect("progress lock");
        let line = match total {
            Some(t) => format!("{stage}: {done}/{t}"),
            None => format!("{stage}: {done}"),
        };
        if *last != line {
            eprintln!("{line}");
            *last = line;
        }
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_doc(path: &Path) -> CliResult<AlgebraDoc> {
    AlgebraDoc::parse(&read_text(path)?).map_err(err)
}

fn read_alg(path: &Path) -> CliResult<FiniteAlgebra> {
    read_algebra(&read_text(path)?).map_err(err)
}

fn read_two_sorted(path: &Path) -> CliResult<TwoSortedActionAlgebra> {
    TwoSortedActionAlgebra::from_doc(&read_doc(path)?).map_err(err)
}

/// Writes to stdout, treating a closed pipe as success.
fn say(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => say(&format!("{text}\n")),
    }
}

fn write_file(dir: &Path, name: &str, text: &str) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let p = dir.join(name);
    fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    Ok(p)
}

fn group_action(g: &GroupArgs) -> CliResult<GroupAction> {
    if let Some(n) = g.symmetric {
        return Ok(FiniteGroup::symmetric(n).1);
    }
    if let Some(n) = g.dihedral {
        return Ok(FiniteGroup::dihedral(n).1);
    }
    if let Some(n) = g.cyclic {
        return Ok(GroupAction::regular(std::sync::Arc::new(FiniteGroup::cyclic(n))));
    }
    if g.gen.is_empty() {
        return Err("give --symmetric, --dihedral, --cyclic or --gen".into());
    }
    let gens: Vec<Vec<usize>> = g
        .gen
        .iter()
        .map(|s| {
            s.split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(format!("bad image `{x}` in --gen {s}")),
                })
                .collect()
        })
        .collect::<CliResult<_>>()?;
    let degree = g.degree.unwrap_or(gens[0].len());
    Ok(FiniteGroup::from_permutations(degree, &gens).map_err(err)?.1)
}

fn format_assignment(alg: &FiniteAlgebra, a: &Assignment) -> String {
    a.0.iter()
        .map(|(v, &e)| format!("{v}={}", alg.label(v.sort, e)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn budget(cli: &Cli, fallback: Budget) -> CliResult<Budget> {
    match &cli.budget {
        Some(s) => Budget::parse(s).map_err(err),
        None if std::env::var_os("FINVAR_BUDGET").is_some() => Budget::from_env().map_err(err),
        None => Ok(fallback),
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    let stderr = Stderr(Mutex::new(String::new()));
    let progress: &dyn Progress = if cli.verbose { &stderr } else { &Silent };
    let b = budget(cli, Budget::default())?;
    match &cli.command {
        Command::VerifyPaper {
            scenarios,
            seed,
            suite_size,
            out,
            list,
        } => {
            if *list {
                SCENARIO_IDS.iter().for_each(|id| println!("{id}"));
                return Ok(true);
            }
            let defaults = VerifyConfig::default();
            let cfg = VerifyConfig {
                seed: *seed,
                scenarios: scenarios.clone(),
                budget: budget(cli, defaults.budget)?,
                suite_size: *suite_size,
                ..defaults
            };
            let mut reports = verify_suite(&cfg).map_err(err)?;
            if let Some(dir) = out {
                let path = dir.join("report.txt");
                for r in &mut reports {
                    r.artifacts.push(path.clone());
                }
                write_file(dir, "report.txt", &render_reports(&reports))?;
            }
            say(&render_reports(&reports))?;
            Ok(!reports.iter().any(|r| r.failed()))
        }
        Command::Growth {
            n,
            flavor,
            ell,
            p,
            q,
            k,
            full_rows,
            no_bounded,
            out,
        } => {
            let mut cfg = GrowthConfig::new(*n, ell.clone(), Flavor::parse(flavor).map_err(err)?);
            cfg.p = *p;
            cfg.q = *q;
            cfg.k = *k;
            cfg.full_rows = *full_rows;
            cfg.bounded = !no_bounded;
            cfg.budget = b;
            let rows = growth_experiment(&cfg, progress).map_err(err)?;
            let text = render_growth(&cfg, &rows);
            let csv = growth_csv(&rows);
            if let Some(dir) = out {
                write_file(dir, "report.txt", &text)?;
                write_file(dir, "growth.csv", &csv)?;
            }
            say(&text)?;
            Ok(rows.iter().all(|r| r.passes()))
        }
        Command::BuildAction { group, output } => {
            let act = group_action(group)?;
            let a = build_action_algebra(act.group(), &act).map_err(err)?;
            if a.faithful == Some(false) {
                eprintln!("warning: the action is not faithful");
            }
            emit(output, &a.to_doc().to_json())?;
            Ok(true)
        }
        Command::Star(t) => {
            let s = star(&read_alg(&t.input)?).map_err(err)?;
            emit(&t.output, &write_algebra(&s.algebra))?;
            Ok(true)
        }
        Command::Square(t) => {
            let s = square(&read_alg(&t.input)?).map_err(err)?;
            emit(&t.output, &write_algebra(&s.algebra))?;
            Ok(true)
        }
        Command::AdjoinZero(t) => {
            let z = adjoin_zero(&read_alg(&t.input)?).map_err(err)?;
            emit(&t.output, &z.to_doc().to_json())?;
            Ok(true)
        }
        Command::Automatic(t) => {
            let a = read_two_sorted(&t.input)?;
            let a0 = match a.zeros {
                Some(_) => a,
                None => adjoin_zero(&a.algebra).map_err(err)?,
            };
            let c = automatic_from_zero_adjoined(&a0).map_err(err)?;
            emit(&t.output, &write_algebra(&c.algebra))?;
            Ok(true)
        }
        Command::BuildB { n, ell, p, q, output } => {
            let mut cfg = BuildBConfig::new(*n, *ell, *p, *q);
            cfg.budget = b;
            let w = build_b(&cfg).map_err(err)?;
            let (n1, n2) = w.algebra.sizes();
            eprintln!("c={} |G_V|={} sizes=({n1}, {n2})", w.c, w.gv_order);
            emit(output, &w.algebra.to_doc().to_json())?;
            Ok(true)
        }
        Command::CosetEnum { presentation, output } => {
            let pres = GroupPresentation::parse(presentation).map_err(err)?;
            let (g, _) = todd_coxeter(&pres, b.coset_limit).map_err(err)?;
            println!("order {}", g.size());
            if output.output.is_some() {
                emit(output, &write_algebra(&g.to_algebra()))?;
            }
            Ok(true)
        }
        Command::Free { input, gens, output } => {
            let a = read_alg(input)?;
            let f = free_algebra_with(&a, gens, &b).map_err(err)?;
            eprintln!("free algebra sizes {:?}", f.algebra.sizes());
            emit(output, &write_algebra(&f.algebra))?;
            Ok(true)
        }
        Command::Member { input, variety } => {
            let (bb, a) = (read_alg(input)?, read_alg(variety)?);
            match in_variety_with(&bb, &a, &b).map_err(err)? {
                Membership::Member(cert) => {
                    println!("member (certificate: subalgebra of A^{})", cert.exponent);
                    Ok(true)
                }
                Membership::NotMember { identity, assignment } => {
                    println!(
                        "not a member: {} fails at {}",
                        format_identity(&identity, a.signature()),
                        format_assignment(&bb, &assignment)
                    );
                    Ok(false)
                }
            }
        }
        Command::CheckId { input, identity } => {
            let a = read_alg(input)?;
            let id = parse_identity(identity, a.signature()).map_err(err)?;
            match holds_with(&a, &id, &b).map_err(err)? {
                finvar_core::Check::Holds => {
                    println!("holds");
                    Ok(true)
                }
                finvar_core::Check::Fails(asg) => {
                    println!("fails at {}", format_assignment(&a, &asg));
                    Ok(false)
                }
            }
        }
        Command::VnBasis { input, n } => {
            let a = read_alg(input)?;
            let ids = vn_basis_with(&a, &vec![*n; a.sort_count()], &b).map_err(err)?;
            let text: String = ids.iter().map(|id| format_identity(id, a.signature()) + "\n").collect();
            say(&text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
