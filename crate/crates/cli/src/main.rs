//! `itree`: normal forms, cuttings, the cutting order, equation solving and
//! property suites for presented set functors.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use iterative_trees::chains::{enumerate_initial_stage_with, enumerate_terminal_stage_with, StageConfig};
use iterative_trees::dot::to_dot;
use iterative_trees::order::{leq_quotient_with, OrderConfig, OrderedElement};
use iterative_trees::par::Execution;
use iterative_trees::presentation::{parse_builtin, parse_presentation};
use iterative_trees::solver::{approx_homomorphism, approx_solution, solve, CoalgebraSystem, RecEquationSystem, Rhs};
use iterative_trees::suites::{run_suite, SuiteConfig, SUITES};
use iterative_trees::syntax::{
    parse_equations, parse_inline_equations, parse_term, parse_tree, print_finite, print_solution, print_tree,
};
use iterative_trees::{CutPoint, Error, Presentation, TreeValue, Verdict};

#[derive(Parser)]
#[command(
    name = "itree",
    version,
    about = "Rational trees, presented functors and guarded equations"
)]
struct Cli {
    #[command(flatten)]
    ws: Workspace,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Workspace {
    /// Built-in presentation: id, product(a,b,..), list, pf, pk(k), automata(n), am23.
    #[arg(long, global = true, default_value = "pf")]
    pres: String,
    /// Presentation file (`op`, `schema` and `eqn` lines); overrides --pres.
    #[arg(long, global = true)]
    pres_file: Option<String>,
    /// Cut point: a nullary operation or a variable. Defaults to the first
    /// nullary operation, or the variable `p`.
    #[arg(long, global = true)]
    p: Option<String>,
    #[arg(long, global = true, env = "ITREE_DEPTH")]
    depth: Option<usize>,
    #[arg(long, global = true, env = "ITREE_CAP", default_value_t = 100_000)]
    cap: usize,
    #[arg(long, global = true, env = "ITREE_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, env = "ITREE_CASES", default_value_t = 100)]
    cases: usize,
    /// Run data-parallel work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Args)]
struct Equations {
    /// Inline equations, `x = a(y); y = b(x)`.
    #[arg(long, conflicts_with = "file")]
    eqs: Option<String>,
    /// Equation file, one `x = term` per line.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageKindArg {
    Initial,
    Terminal,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a finite or rational tree.
    Nf {
        #[arg(long)]
        term: String,
    },
    /// Normal form of the cutting at depth n.
    Cut {
        #[arg(long)]
        term: String,
        #[arg(long)]
        n: usize,
    },
    /// Whether lhs is below rhs in the order by cutting.
    Leq {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Whether two trees are congruent.
    Equiv {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Exact solution of a guarded system; --depth adds unfoldings.
    Solve {
        #[command(flatten)]
        eqs: Equations,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The k-th approximate solution.
    Approx {
        #[command(flatten)]
        eqs: Equations,
        #[arg(long)]
        k: usize,
    },
    /// The n-th approximate homomorphism of a coalgebra given as equations.
    Hom {
        #[command(flatten)]
        eqs: Equations,
        #[arg(long)]
        n: usize,
    },
    /// Size (and optionally elements) of a stage of the initial or terminal chain.
    Enumerate {
        #[arg(long, value_enum, default_value = "initial")]
        kind: StageKindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
    },
    /// Runs a property suite and prints a pass/fail table.
    Check {
        /// One of the suite names, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Graphviz rendering of the canonical state system of a tree.
    Dot {
        #[arg(long)]
        term: String,
    },
}

enum Failure {
    Domain(Error),
    Io(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: Io: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn presentation(ws: &Workspace) -> Result<Presentation, Failure> {
    match &ws.pres_file {
        Some(path) => Ok(parse_presentation(path, &read(path)?)?),
        None => Ok(parse_builtin(&ws.pres)?),
    }
}

fn cut_point(ws: &Workspace, pres: &Presentation) -> Result<CutPoint, Failure> {
    let sig = pres.signature();
    match &ws.p {
        None => Ok(match sig.nullaries().first() {
            Some(c) => CutPoint::nullary(c),
            None => CutPoint::var("p"),
        }),
        Some(text) => {
            let t = parse_term(sig, text)?;
            if !t.is_leaf() {
                return Err(Error::BadCutPoint(text.clone()).into());
            }
            Ok(CutPoint::new(sig, t.head().clone())?)
        }
    }
}

fn equations(pres: &Presentation, eqs: &Equations) -> Result<RecEquationSystem, Failure> {
    match (&eqs.eqs, &eqs.file) {
        (Some(text), _) => Ok(parse_inline_equations(pres, text)?),
        (None, Some(path)) => Ok(parse_equations(pres, &read(path)?)?),
        (None, None) => Err(Error::Precondition("give --eqs or --file".into()).into()),
    }
}

fn exec(ws: &Workspace) -> Execution {
    if ws.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let ws = &cli.ws;
    let pres = presentation(ws)?;
    let sets = pres.uses_set_syntax();
    let sig = pres.signature();
    let show = |v: &TreeValue| print_tree(v, sets);
    let mut out = String::new();
    match &cli.cmd {
        Command::Nf { term } => {
            let t = parse_tree(sig, term)?;
            out = show(pres.canonical(&t)?.value()) + "\n";
        }
        Command::Cut { term, n } => {
            let p = cut_point(ws, &pres)?;
            let t = parse_tree(sig, term)?;
            out = print_finite(&pres.normal_form(&t.cut(*n, &p))?, sets) + "\n";
        }
        Command::Leq { lhs, rhs } => {
            let p = cut_point(ws, &pres)?;
            let a = OrderedElement::new(&pres, parse_tree(sig, lhs)?, &p)?;
            let b = OrderedElement::new(&pres, parse_tree(sig, rhs)?, &p)?;
            let cfg = ws
                .depth
                .map_or_else(OrderConfig::default, |d| OrderConfig { depth_bound: d });
            out = format!("{}\n", leq_quotient_with(&a, &b, &cfg)?);
        }
        Command::Equiv { lhs, rhs } => {
            let v = pres.equiv_star(&parse_tree(sig, lhs)?, &parse_tree(sig, rhs)?, ws.depth)?;
            out = match v {
                Verdict::Exact(b) => format!("{b}\n"),
                Verdict::Bounded(b) => format!("{b} (bounded)\n"),
            };
        }
        Command::Solve { eqs, format } => {
            let e = equations(&pres, eqs)?;
            let sol = solve(&e)?;
            match format {
                Format::Text => {
                    out = print_solution(&sol, &e, sets);
                    if let Some(d) = ws.depth {
                        let p = cut_point(ws, &pres)?;
                        for (i, name) in sol.vars.iter().enumerate() {
                            if !e.is_aux(i) {
                                let unfolded = pres.normal_form(&sol.values[i].cut(d, &p))?;
                                out.push_str(&format!("# {name} at depth {d}: {}\n", print_finite(&unfolded, sets)));
                            }
                        }
                    }
                }
                Format::Dot => {
                    for (i, name) in sol.vars.iter().enumerate() {
                        if !e.is_aux(i) {
                            out.push_str(&to_dot(&sol.values[i].to_rational(), name));
                        }
                    }
                }
            }
        }
        Command::Approx { eqs, k } => {
            let p = cut_point(ws, &pres)?;
            let e = equations(&pres, eqs)?;
            out = print_solution(&approx_solution(&e, *k, &p)?, &e, sets);
        }
        Command::Hom { eqs, n } => {
            let p = cut_point(ws, &pres)?;
            let e = equations(&pres, eqs)?;
            let mut states = Vec::new();
            for (name, r) in e.vars().iter().zip(e.rhs()) {
                match r {
                    Rhs::Flat(f) => states.push((name.clone(), f.clone())),
                    Rhs::Param(_) => {
                        return Err(Error::Precondition(format!("`{name}` is not a coalgebra state")).into())
                    }
                }
            }
            let c = CoalgebraSystem {
                pres: pres.clone(),
                states,
            };
            out = print_solution(&approx_homomorphism(&c, *n, &p)?, &e, sets);
        }
        Command::Enumerate { kind, n, list } => {
            let cfg = StageConfig {
                cap: ws.cap,
                exec: exec(ws),
            };
            let stage = match kind {
                StageKindArg::Initial => enumerate_initial_stage_with(&pres, *n, &cfg)?,
                StageKindArg::Terminal => enumerate_terminal_stage_with(&pres, *n, &cut_point(ws, &pres)?, &cfg)?,
            };
            out = format!("{}\n", stage.len());
            if *list {
                for t in &stage.elements {
                    out.push_str(&print_finite(t, sets));
                    out.push('\n');
                }
            }
        }
        Command::Check { suite } => {
            let cfg = SuiteConfig {
                cases: ws.cases,
                seed: ws.seed,
                exec: exec(ws),
            };
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut ok = true;
            for name in names {
                let report = run_suite(name, &cfg)?;
                ok &= report.passed();
                out.push_str(&report.to_string());
            }
            if !ok {
                print!("{out}");
                return Err(Failure::Checks);
            }
        }
        Command::Dot { term } => {
            let t = parse_tree(sig, term)?;
            out = to_dot(&pres.canonical(&t)?.to_rational(), "tree");
        }
    }
    Ok(out)
}
