use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use f4_core::albert::corpus::{Corpus, CorpusReport};
use f4_core::dersolve::{assemble_constraints, pivot_diff, solve, ConstraintSystem, Solution};
use f4_core::lie::{jacobi_violation, killing, killing_rank, structure_constants};
use f4_core::paperparam::{
    audit, paper_generators, recover_relation_from_constraints, span_equals, supermatrix,
    symbolic_table, GeneratorTable, ParamVector, Relation, NPARAMS, PARAM_NAMES,
};
use f4_core::{AlbertElement, FieldSpec, Scalar};

/// Split f4 as derivations of the split Albert algebra, in exact arithmetic.
#[derive(Debug, Parser)]
#[command(name = "f4", version)]
struct Cli {
    /// `q` for the rationals or `gf:<p>` for a prime field.
    #[arg(long, global = true, default_value = "q")]
    field: FieldSpec,

    /// Write the command's artifact to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (hint only).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Progress and timings on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the derivation equations and report the dimension.
    Solve,
    /// Identity corpus, generator audit, eliminated relation, unit check.
    PaperCheck {
        /// Identity corpus file instead of the bundled one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Compare the tabulated generators with the solver basis.
    CrossValidate,
    /// Structure constants of a basis.
    Structure {
        #[arg(long, value_enum, default_value_t = BasisChoice::Paper)]
        basis: BasisChoice,
    },
    /// Killing form of the paper basis.
    Killing,
    /// The 52-parameter generic derivation, symbolically.
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisChoice {
    Paper,
    Solver,
}

impl BasisChoice {
    fn label(self) -> &'static str {
        match self {
            BasisChoice::Paper => "paper",
            BasisChoice::Solver => "solver",
        }
    }
}

struct Ctx {
    field: FieldSpec,
    out: Option<PathBuf>,
    json: bool,
    verbose: u8,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose > 0 {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn constraints(&self, field: &FieldSpec) -> ConstraintSystem {
        let t = Instant::now();
        let sys = assemble_constraints(field);
        self.log(format!(
            "{field}: {} rows, {} nonzeros assembled in {:.2?}",
            sys.len(),
            sys.nnz(),
            t.elapsed()
        ));
        sys
    }

    fn solve(&self, field: &FieldSpec) -> Solution {
        let sys = self.constraints(field);
        let t = Instant::now();
        let s = solve(&sys);
        self.log(format!("{field}: rank {} in {:.2?}", s.rank, t.elapsed()));
        s
    }

    fn write_out(&self, text: &str) -> Result<()> {
        if let Some(p) = &self.out {
            write_file(p, text)?;
            self.log(format!("wrote {}", p.display()));
        }
        Ok(())
    }
}

fn write_file(p: &Path, text: &str) -> Result<()> {
    fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_solve(cx: &Ctx) -> Result<bool> {
    let s = cx.solve(&cx.field);
    let dim = s.basis.dim();
    cx.write_out(&s.basis.to_json())?;
    let diff = (!cx.field.is_rationals()).then(|| {
        let q = cx.solve(&FieldSpec::Rationals);
        pivot_diff(&q.pivots, &s.pivots)
    });
    if cx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            field: &'a FieldSpec,
            dim: usize,
            rank: usize,
            pivot_diff_vs_q: Option<&'a f4_core::dersolve::PivotDiff>,
        }
        print_json(&Out {
            field: &cx.field,
            dim,
            rank: s.rank,
            pivot_diff_vs_q: diff.as_ref(),
        });
    } else {
        println!("field = {}", cx.field);
        println!("rank = {}", s.rank);
        println!("dim = {dim}");
        if let Some(d) = &diff {
            if d.is_empty() {
                println!("pivot columns vs Q: identical");
            } else {
                println!("WARNING pivot columns differ from Q: {d}");
            }
        }
    }
    Ok(dim == 52)
}

#[derive(Serialize)]
struct CheckRow {
    check: String,
    passed: bool,
    detail: String,
}

fn expected_relation(table: &GeneratorTable, field: &FieldSpec) -> Relation {
    let mut coeffs = vec![field.zero(); NPARAMS];
    for &(k, c) in &table.eliminated.relation {
        coeffs[k] = Scalar::from_i64(field, c);
    }
    Relation {
        field: field.clone(),
        name: table.eliminated.name.clone(),
        coeffs,
    }
}

fn cmd_paper_check(cx: &Ctx, corpus: Option<&Path>) -> Result<bool> {
    let f = &cx.field;
    let corpus = match corpus {
        Some(p) => Corpus::parse(
            &fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
        ),
        None => Corpus::builtin(),
    };
    let report: CorpusReport = corpus.evaluate(f);
    let table = GeneratorTable::builtin();
    let sys = cx.constraints(f);

    let mut rows: Vec<CheckRow> = report
        .entries
        .iter()
        .map(|e| CheckRow {
            check: format!("corpus line {}", e.line),
            passed: e.passed,
            detail: match &e.error {
                Some(err) => format!("{}  ({err})", e.identity),
                None => e.identity.clone(),
            },
        })
        .collect();

    let a = audit(&table, &sys);
    let detail = match a.failures.first() {
        None => format!("52 generators satisfy all {} rows, rank {}", sys.len(), a.rank),
        Some((k, p)) => format!(
            "{} generators fail, first {} at {p}; rank {}",
            a.failures.len(),
            PARAM_NAMES[*k],
            a.rank
        ),
    };
    rows.push(CheckRow {
        check: "generator audit".into(),
        passed: a.passed(),
        detail,
    });

    let want = expected_relation(&table, f);
    let got = recover_relation_from_constraints(&table, &sys);
    rows.push(CheckRow {
        check: "eliminated relation".into(),
        passed: got.as_ref() == Some(&want),
        detail: got.map_or("no rank-1 relation".into(), |r| r.to_string()),
    });

    let one = AlbertElement::one(f).coords();
    let killed = (0..NPARAMS)
        .filter(|&k| {
            supermatrix(&table, &ParamVector::unit(f, k))
                .apply_right(&one)
                .iter()
                .all(Scalar::is_zero)
        })
        .count();
    rows.push(CheckRow {
        check: "unit row times supermatrix".into(),
        passed: killed == NPARAMS,
        detail: format!("zero for {killed} of 52 generators"),
    });

    let ok = rows.iter().all(|r| r.passed);
    if cx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            field: &'a FieldSpec,
            passed: bool,
            checks: &'a [CheckRow],
        }
        print_json(&Out {
            field: f,
            passed: ok,
            checks: &rows,
        });
    } else {
        let w = rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
        println!("paper check over {f}");
        for r in &rows {
            println!("{:<w$}  {}  {}", r.check, verdict(r.passed), r.detail);
        }
        let passed = rows.iter().filter(|r| r.passed).count();
        println!("{passed}/{} checks passed", rows.len());
    }
    Ok(ok)
}

fn cmd_cross_validate(cx: &Ctx) -> Result<bool> {
    let f = &cx.field;
    let paper = paper_generators(f);
    let solver = cx.solve(f).basis;
    let eq = span_equals(&paper, &solver)?;
    let (pd, sd) = (f4_core::paperparam::rank(&paper), solver.dim());
    if eq {
        println!("paper span == solver span ({pd} = {sd})");
    } else {
        println!("paper span != solver span ({pd} vs {sd})");
        let solver_sys = cx.constraints(f);
        for (k, d) in paper.basis.iter().enumerate() {
            if let Some(p) = solver_sys.first_violation(d) {
                println!("witness: generator {} violates {p}", PARAM_NAMES[k]);
                break;
            }
        }
    }
    Ok(eq)
}

fn cmd_structure(cx: &Ctx, which: BasisChoice) -> Result<bool> {
    let f = &cx.field;
    let basis = match which {
        BasisChoice::Paper => paper_generators(f),
        BasisChoice::Solver => cx.solve(f).basis,
    };
    let sc = match structure_constants(&basis, which.label()) {
        Ok(sc) => sc,
        Err(e) => {
            println!("{e}");
            return Ok(false);
        }
    };
    let jac = jacobi_violation(&sc);
    let json = sc.to_json();
    cx.write_out(&json)?;
    if cx.out.is_none() || cx.json {
        println!("{json}");
    }
    if cx.out.is_some() && !cx.json {
        println!("structure constants ({} basis, {f}): {} nonzero", which.label(), sc.nnz());
        match jac {
            None => println!("Jacobi identity holds on all triples"),
            Some((i, j, k)) => println!("Jacobi fails at ({}, {}, {})", i + 1, j + 1, k + 1),
        }
    }
    Ok(jac.is_none())
}

fn cmd_killing(cx: &Ctx) -> Result<bool> {
    let f = &cx.field;
    let sc = match structure_constants(&paper_generators(f), "paper") {
        Ok(sc) => sc,
        Err(e) => {
            println!("{e}");
            return Ok(false);
        }
    };
    let k = killing(&sc);
    let rank = killing_rank(&k);
    cx.write_out(&k.to_json())?;
    if cx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            field: &'a FieldSpec,
            rank: usize,
            symmetric: bool,
        }
        print_json(&Out {
            field: f,
            rank,
            symmetric: k.is_symmetric(),
        });
    } else {
        println!("killing form over {f}: rank = {rank}, symmetric = {}", k.is_symmetric());
    }
    Ok(k.is_symmetric())
}

fn cmd_generic(cx: &Ctx) -> Result<bool> {
    let table = GeneratorTable::builtin();
    if cx.json {
        type Image<'a> = (String, Vec<(usize, &'a str, i64)>);
        #[derive(Serialize)]
        struct Out<'a> {
            parameters: &'a [&'a str],
            images: Vec<Image<'a>>,
        }
        let images = f4_core::BasisElement::all()
            .map(|b| {
                let ts = table
                    .image(b)
                    .iter()
                    .map(|t| (t.slot + 1, PARAM_NAMES[t.param], t.coef))
                    .collect();
                (b.to_string(), ts)
            })
            .collect();
        let text = serde_json::to_string_pretty(&Out {
            parameters: &PARAM_NAMES,
            images,
        })?;
        cx.write_out(&text)?;
        println!("{text}");
    } else {
        let text = symbolic_table(&table);
        cx.write_out(&text)?;
        print!("{text}");
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure worker threads")?;
    }
    let cx = Ctx {
        field: cli.field,
        out: cli.out,
        json: cli.json,
        verbose: cli.verbose,
    };
    match cli.command {
        Command::Solve => cmd_solve(&cx),
        Command::PaperCheck { corpus } => cmd_paper_check(&cx, corpus.as_deref()),
        Command::CrossValidate => cmd_cross_validate(&cx),
        Command::Structure { basis } => cmd_structure(&cx, basis),
        Command::Killing => cmd_killing(&cx),
        Command::Generic => cmd_generic(&cx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
