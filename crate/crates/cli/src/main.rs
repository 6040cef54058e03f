use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use hyperfix::automata::{LassoWord, DEFAULT_STATE_BUDGET};
use hyperfix::encodings::{gen_async_od, gen_ck_chain, gen_mazurkiewicz, gen_muddy_children, Instance, Mazurkiewicz, OdProgram};
use hyperfix::engine::{verify, CheckConfig, Method, Outcome, Verdict};
use hyperfix::formula::parse_formula;
use hyperfix::system::parse_system;

const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperfix", version, about = "Model checker for least-fixpoint second-order HyperLTL")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Iter,
    Learn,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Iter => Method::IterOnly,
            MethodArg::Learn => Method::LearnOnly,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a formula against a system.
    Check {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[arg(long, default_value_t = 50)]
        max_precision: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        state_budget: usize,
        /// Print the traces behind the verdict.
        #[arg(long)]
        witness: bool,
    },
    /// Write benchmark instances: `muddy N M`, `ck N`, `od tsyn|tasyn|q1`,
    /// `swap a|twice|n N|violation N`.
    Gen {
        family: String,
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a quick sanity suite.
    Selftest,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] hyperfix::engine::EngineError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn render(w: &LassoWord, aps: &[String]) -> String {
    let letter = |l: &Vec<u64>| {
        let on: Vec<&str> = (0..aps.len()).filter(|&p| l[0] >> p & 1 == 1).map(|p| aps[p].as_str()).collect();
        format!("{{{}}}", on.join(","))
    };
    let pre: String = w.prefix().iter().map(letter).collect();
    let cyc: String = w.cycle().iter().map(letter).collect();
    format!("{pre}({cyc})^w")
}

fn verdict_line(v: &Verdict, method: Method, ms: u128) -> String {
    format!(
        "VERDICT={} precision={} method={} peak_states={} ms={}",
        v.outcome,
        v.precision,
        method.name(),
        v.stats.peak_states,
        ms
    )
}

fn exit_for(o: Outcome) -> u8 {
    match o {
        Outcome::Sat => 0,
        Outcome::Unsat => 1,
        Outcome::Unknown => 2,
    }
}

fn check(system: &Path, formula: &Path, cfg: CheckConfig, witness: bool) -> Result<u8, CliError> {
    let ts = parse_system(&read(system)?).map_err(|e| CliError::Parse { path: system.to_path_buf(), msg: e.to_string() })?;
    let f = parse_formula(&read(formula)?, ts.aps())
        .map_err(|e| CliError::Parse { path: formula.to_path_buf(), msg: e.to_string() })?;
    let start = Instant::now();
    let v = verify(&ts, &f, &cfg)?;
    println!("{}", verdict_line(&v, cfg.method, start.elapsed().as_millis()));
    if let Some(d) = &v.diagnostic {
        eprintln!("note: {d}");
    }
    if witness {
        for (name, w) in v.witness.iter().flatten() {
            println!("{name} = {}", render(w, ts.aps()));
        }
    }
    Ok(exit_for(v.outcome))
}

fn number(params: &[String], i: usize) -> Result<usize, CliError> {
    params
        .get(i)
        .ok_or_else(|| CliError::Usage(format!("missing parameter {}", i + 1)))?
        .parse()
        .map_err(|_| CliError::Usage(format!("parameter {} is not a number", i + 1)))
}

fn generate(family: &str, params: &[String]) -> Result<Vec<Instance>, CliError> {
    let word = params.first().map(String::as_str).unwrap_or("");
    Ok(match family {
        "muddy" => vec![gen_muddy_children(number(params, 0)?, number(params, 1)?)],
        "ck" => {
            let n = number(params, 0)?;
            if n == 0 {
                return Err(CliError::Usage("ck needs n >= 1".into()));
            }
            let (a, b) = gen_ck_chain(n);
            vec![a, b]
        }
        "od" => {
            let p = match word {
                "tsyn" => OdProgram::TSyn,
                "tasyn" => OdProgram::TAsyn,
                "q1" => OdProgram::Q1,
                _ => return Err(CliError::Usage(format!("unknown program `{word}`"))),
            };
            let (a, b) = gen_async_od(p);
            vec![a, b]
        }
        "swap" => vec![gen_mazurkiewicz(match word {
            "a" => Mazurkiewicz::SwapA,
            "twice" => Mazurkiewicz::SwapATwice,
            "n" => Mazurkiewicz::SwapAN(number(params, 1)?),
            "violation" => Mazurkiewicz::SwapAViolation(number(params, 1)?),
            _ => return Err(CliError::Usage(format!("unknown swap variant `{word}`"))),
        })],
        _ => return Err(CliError::Usage(format!("unknown family `{family}`"))),
    })
}

fn selftest() -> u8 {
    let iter = |cap| CheckConfig { max_precision: cap, method: Method::IterOnly, ..Default::default() };
    let learn = CheckConfig { max_precision: 10, method: Method::LearnOnly, ..Default::default() };
    let mut cases: Vec<(String, Instance, CheckConfig, Outcome, Option<usize>)> = Vec::new();
    for n in 1..=3 {
        let (a, b) = gen_ck_chain(n);
        cases.push((a.name.clone(), a, iter(10), Outcome::Sat, Some(2 * n - 1)));
        cases.push((b.name.clone(), b, iter(10), Outcome::Unsat, None));
    }
    for (p, sync) in [(OdProgram::TSyn, Outcome::Sat), (OdProgram::TAsyn, Outcome::Unsat), (OdProgram::Q1, Outcome::Unsat)] {
        let (a, b) = gen_async_od(p);
        cases.push((a.name.clone(), a, iter(10), sync, None));
        cases.push((b.name.clone(), b, iter(10), Outcome::Sat, None));
    }
    let swap = gen_mazurkiewicz(Mazurkiewicz::SwapA);
    cases.push((swap.name.clone(), swap, learn, Outcome::Sat, None));
    for m in 1..=2 {
        let i = gen_muddy_children(2, m);
        cases.push((i.name.clone(), i, iter(10), if m >= 2 { Outcome::Sat } else { Outcome::Unsat }, None));
    }
    let mut failed = 0;
    for (name, i, cfg, want, at) in cases {
        let ok = match verify(&i.system, &i.formula, &cfg) {
            Ok(v) => v.outcome == want && at.is_none_or(|n| n == v.precision),
            Err(_) => false,
        };
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    u8::from(failed > 0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Check { system, formula, method, max_precision, state_budget, witness } => {
            let cfg = CheckConfig { max_precision, method: method.into(), state_budget };
            check(&system, &formula, cfg, witness)
        }
        Cmd::Gen { family, params, out } => {
            for i in generate(&family, &params)? {
                let (s, f) = i.write_to(&out).map_err(|source| CliError::Io { path: out.clone(), source })?;
                println!("{} {}", s.display(), f.display());
            }
            Ok(0)
        }
        Cmd::Selftest => Ok(selftest()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
