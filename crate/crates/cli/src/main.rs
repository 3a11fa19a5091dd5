// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the PCF/EPCF toolchain.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use eampcf::eam::{dump, load_dump, run, trace, RunOutcome};
use eampcf::eam_typing::MachineTyper;
use eampcf::harness::{difftest_with, GenConfig, DEFAULT_MULTIPLIER};
use eampcf::lang_typing::{check_epcf, check_pcf, infer_epcf, infer_pcf, TypeEnv};
use eampcf::syntax::{flatten, Closure};
use eampcf::{compile_program, eval_epcf, eval_pcf, parse_program, parse_type, Address, AddressTable, Fuel, Outcome};
use eampcf::{SimpleType, Subst, Term};

#[derive(Parser)]
#[command(name = "eampcf", version, about = "PCF and EPCF over extended addressing machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    Pcf,
    Epcf,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a closed term.
    Check {
        file: PathBuf,
        /// Check against this type instead of inferring one.
        #[arg(long = "type")]
        ty: Option<String>,
        #[arg(long, value_enum, default_value = "epcf")]
        lang: Lang,
    },
    /// Evaluate a closed term with a big-step semantics.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "epcf")]
        semantics: Lang,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
    },
    /// Translate a closed term into a machine and print its dump.
    Compile {
        file: PathBuf,
        /// Write the dump here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a machine.
    Run {
        #[command(flatten)]
        target: MachineTarget,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        /// Print every visited state.
        #[arg(long)]
        trace: bool,
    },
    /// Infer or check the type of a machine.
    TypecheckMachine {
        #[command(flatten)]
        target: MachineTarget,
        #[arg(long = "type")]
        ty: Option<String>,
        /// Print the rule applications of the inference.
        #[arg(long)]
        derivation: bool,
    },
    /// Compare the three semantics on generated programs.
    Difftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
        #[arg(long, default_value_t = 30)]
        max_size: usize,
        /// Machine steps per unit of big-step fuel.
        #[arg(long, default_value_t = DEFAULT_MULTIPLIER)]
        multiplier: u64,
    },
    /// Execute every explicit substitution and print the PCF term.
    Flatten { file: PathBuf },
}

/// A source program, or an address optionally resolved against a dump.
#[derive(Args)]
struct MachineTarget {
    #[arg(required_unless_present_any = ["addr", "dump"], conflicts_with_all = ["addr", "dump"])]
    file: Option<PathBuf>,
    /// `num:N`, `fix:N` or `cell:N`. Defaults to the root of `--dump`.
    #[arg(long)]
    addr: Option<String>,
    /// Machine dump produced by `compile`.
    #[arg(long)]
    dump: Option<PathBuf>,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
    fn fault(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
    fn timeout(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::input(format!("{e:#}"))
    }
}

type Exit = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_program(path: &Path) -> Result<Arc<Term>, Failure> {
    let src = read(path)?;
    parse_program(&src).map_err(|e| {
        let (line, col) = e.line_col(&src);
        Failure::input(format!("{}:{line}:{col}: {}", path.display(), e.message))
    })
}

fn load_type(text: &str) -> Result<SimpleType, Failure> {
    parse_type(text).map_err(|e| Failure::input(format!("bad type '{text}': {}", e.message)))
}

fn check(file: &Path, ty: Option<&str>, lang: Lang) -> Exit {
    let t = load_program(file)?;
    if matches!(lang, Lang::Pcf) && !t.is_pcf() {
        return Err(Failure::input("not a PCF term: an abstraction carries a substitution"));
    }
    let env = TypeEnv::new();
    match ty {
        Some(text) => {
            let want = load_type(text)?;
            let ok = match lang {
                Lang::Pcf => check_pcf(&env, &t, &want),
                Lang::Epcf => check_epcf(&env, &t, &want),
            }
            .map_err(|e| Failure::input(format!("type error: {e}")))?;
            if !ok {
                return Err(Failure::input(format!("term does not have type {want}")));
            }
            println!("{want}");
        }
        None => {
            let s = match lang {
                Lang::Pcf => infer_pcf(&env, &t),
                Lang::Epcf => infer_epcf(&env, &t),
            }
            .map_err(|e| Failure::input(format!("type error: {e}")))?;
            println!("{s}");
        }
    }
    Ok(())
}

fn eval(file: &Path, semantics: Lang, fuel: u64) -> Exit {
    let t = load_program(file)?;
    let outcome = match semantics {
        Lang::Pcf => {
            if !t.is_pcf() {
                return Err(Failure::input("not a PCF term; flatten it first"));
            }
            eval_pcf(&t, &mut Fuel::new(fuel))
        }
        Lang::Epcf => eval_epcf(&Subst::empty(), &t, &mut Fuel::new(fuel)),
    };
    match outcome {
        Outcome::Value(v) => {
            println!("{v}");
            Ok(())
        }
        Outcome::Timeout => Err(Failure::timeout(format!("timeout after {fuel} rule applications"))),
        Outcome::RuntimeFault(m) => Err(Failure::fault(format!("runtime fault: {m}"))),
    }
}

fn compile(file: &Path, output: Option<&Path>) -> Exit {
    let t = load_program(file)?;
    let mut table = AddressTable::new();
    let root = compile_program(&mut table, &t).map_err(|e| Failure::input(e.to_string()))?;
    let text = dump(&table, root);
    match output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            println!("{root}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn resolve(table: &mut AddressTable, target: &MachineTarget) -> Result<Address, Failure> {
    if let Some(file) = &target.file {
        let t = load_program(file)?;
        return compile_program(table, &t).map_err(|e| Failure::input(e.to_string()));
    }
    let root = match &target.dump {
        Some(path) => {
            let text = read(path)?;
            Some(load_dump(table, &text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?)
        }
        None => None,
    };
    let a = match (&target.addr, root) {
        (Some(text), _) => text
            .parse::<Address>()
            .map_err(|e| Failure::input(format!("bad address '{text}': {e}")))?,
        (None, Some(r)) => r,
        (None, None) => return Err(Failure::input("no machine given")),
    };
    if table.try_lookup(a).is_none() {
        return Err(Failure::input(format!(
            "address {a} is not allocated; pass the dump that defines it"
        )));
    }
    Ok(a)
}

fn run_machine(target: &MachineTarget, fuel: u64, with_trace: bool) -> Exit {
    let mut table = AddressTable::new();
    let a = resolve(&mut table, target)?;
    let m = table.lookup(a);
    let result = if with_trace {
        let (lines, result) = trace(&mut table, &m, fuel);
        for l in lines {
            println!("{l}");
        }
        result
    } else {
        run(&mut table, &m, fuel)
    };
    match result.outcome {
        RunOutcome::Final(m) => {
            match m.numeral_value() {
                Some(n) => println!("{n}"),
                None => println!("{m}"),
            }
            Ok(())
        }
        RunOutcome::Err => Err(Failure::fault(format!("machine error after {} steps", result.steps))),
        RunOutcome::Timeout(_) => Err(Failure::timeout(format!("timeout after {} steps", result.steps))),
    }
}

fn typecheck_machine(target: &MachineTarget, ty: Option<&str>, derivation: bool) -> Exit {
    let mut table = AddressTable::new();
    let a = resolve(&mut table, target)?;
    let mut typer = MachineTyper::new();
    if derivation {
        let d = typer
            .derivation(&table, a)
            .map_err(|e| Failure::input(format!("untypable: {e}")))?;
        print!("{d}");
    }
    match ty {
        Some(text) => {
            let want = load_type(text)?;
            let ok = typer
                .check(&table, a, &want)
                .map_err(|e| Failure::input(format!("untypable: {e}")))?;
            if !ok {
                return Err(Failure::input(format!("machine does not have type {want}")));
            }
            println!("{want}");
        }
        None => {
            let report = typer.infer(&table, a);
            match report.scheme() {
                Some(s) => println!("{s}"),
                None => return Err(Failure::input(report.to_string())),
            }
        }
    }
    Ok(())
}

fn run_difftest(seed: u64, count: usize, fuel: u64, max_size: usize, multiplier: u64) -> Exit {
    if max_size == 0 {
        return Err(Failure::input("--max-size must be at least 1"));
    }
    let cfg = GenConfig {
        seed,
        max_size,
        ..GenConfig::default()
    };
    let report = difftest_with(&cfg, count, fuel, multiplier);
    print!("{report}");
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure {
            code: 4,
            message: "semantics disagree".into(),
        })
    }
}

fn flatten_file(file: &Path) -> Exit {
    let t = load_program(file)?;
    println!("{}", flatten(&Closure::bare(t)));
    Ok(())
}

fn dispatch(cli: Cli) -> Exit {
    match cli.command {
        Command::Check { file, ty, lang } => check(&file, ty.as_deref(), lang),
        Command::Eval { file, semantics, fuel } => eval(&file, semantics, fuel),
        Command::Compile { file, output } => compile(&file, output.as_deref()),
        Command::Run { target, fuel, trace } => run_machine(&target, fuel, trace),
        Command::TypecheckMachine { target, ty, derivation } => typecheck_machine(&target, ty.as_deref(), derivation),
        Command::Difftest {
            seed,
            count,
            fuel,
            max_size,
            multiplier,
        } => run_difftest(seed, count, fuel, max_size, multiplier),
        Command::Flatten { file } => flatten_file(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("eampcf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
