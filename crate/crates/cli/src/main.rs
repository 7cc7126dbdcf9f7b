//! `semistar`: batch front end over semistar-core. Every command prints one JSON document with
//! sorted keys on standard output.

mod render;
mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semistar_core::domain::Domain;
use semistar_core::function_rings::{kr_membership, na_membership, na_unit, KrMode, NaMode, RationalFunction};
use semistar_core::lattice::Lattice;
use semistar_core::module::Module;
use semistar_core::pmd::{pmd_decide, star_invertible, verify_theorem, CheckVerdict, PmdStatus};
use semistar_core::sample::ideal_pool;
use semistar_core::semistar::SemistarOp;
use semistar_core::spec::{self, DomainDoc, ExtensionDoc, InstanceDoc, OpDoc};
use semistar_core::{Error, TriBool};

#[derive(Parser)]
#[command(name = "semistar", version, about = "Semistar operations over quadratic orders")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closure of an ideal under an operation
    Closure {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Primes of the domain above p
    Spectrum {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        p: i128,
    },
    /// ⋆-invertibility of an ideal through every available route
    Invertible {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        ideal: String,
    },
    /// Decide whether the domain is a P⋆MD
    Pmd {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
    },
    /// Nagata ring membership and units
    Nagata {
        #[command(subcommand)]
        q: NagataCmd,
    },
    /// Kronecker function ring membership
    Kronecker {
        #[command(subcommand)]
        q: KroneckerCmd,
    },
    /// Run a theorem verifier on an instance
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        instance: PathBuf,
        /// overrides the seed of the instance file
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Ascent/descent, Krull's formula and the overline operation on an extension pair
    Pair {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a bundled suite (or a manifest file) and compare against its expected verdicts
    Report {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Subcommand)]
enum NagataCmd {
    Member {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, value_enum, default_value_t = NaModeArg::Local)]
        mode: NaModeArg,
    },
    Unit {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        elem: String,
    },
}

#[derive(Subcommand)]
enum KroneckerCmd {
    Member {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        elem: String,
        #[arg(long, value_enum, default_value_t = KrModeArg::Valuation)]
        mode: KrModeArg,
        /// size of the h pool in bounded mode
        #[arg(long, default_value_t = 60)]
        pool: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NaModeArg {
    Local,
    Certified,
}

#[derive(Clone, Copy, ValueEnum)]
enum KrModeArg {
    Valuation,
    Bounded,
}

/// What a command concluded; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 2,
        }
    }
}

fn from_tri(t: TriBool) -> Outcome {
    match t {
        TriBool::Yes => Outcome::Pass,
        TriBool::No => Outcome::Fail,
        TriBool::Unknown => Outcome::Unknown,
    }
}

pub fn from_status(s: PmdStatus) -> Outcome {
    match s {
        PmdStatus::Yes => Outcome::Pass,
        PmdStatus::No => Outcome::Fail,
        PmdStatus::Unknown => Outcome::Unknown,
    }
}

pub fn from_check(v: CheckVerdict) -> Outcome {
    match v {
        CheckVerdict::Pass => Outcome::Pass,
        CheckVerdict::Fail => Outcome::Fail,
        CheckVerdict::Unknown => Outcome::Unknown,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok((v, outcome)) => {
            let text = serde_json::to_string_pretty(&v).expect("json values serialize");
            // a closed pipe is not an error for a batch tool
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedMode(_) | Error::TildeUnsupported | Error::NoValuationFamily | Error::NoRouteAvailable => 2,
        Error::RoutesDisagree(_) | Error::TrivialOperation | Error::EmptyFamily => 1,
        _ => 3,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Schema { path: String::new(), msg: format!("{}: {e}", path.display()) })
}

fn load_domain(path: &Path) -> Result<Domain, Error> {
    let doc: DomainDoc = spec::parse(&read(path)?)?;
    spec::build_domain(&doc.domain, semistar_core::sample::RunConfig::default().prime_bound, "/domain")
}

fn load_op(domain: &Path, op: &Path) -> Result<SemistarOp, Error> {
    let d = load_domain(domain)?;
    let doc: OpDoc = spec::parse(&read(op)?)?;
    spec::build_op(&d, &doc.op, "/op")
}

fn parse_ideal(d: &Domain, text: &str) -> Result<Module, Error> {
    let l = Lattice::parse(d.tag().dim(), text)?;
    d.module_from_lattice(&l)
}

fn run(cmd: Cmd) -> Result<(Value, Outcome), Error> {
    match cmd {
        Cmd::Closure { domain, op, ideal } => {
            let op = load_op(&domain, &op)?;
            let e = parse_ideal(op.domain(), &ideal)?;
            let c = op.closure(&e)?;
            Ok((
                json!({ "domain": op.domain().describe(), "op": op.describe(), "ideal": e.text(), "closure": c.text() }),
                Outcome::Pass,
            ))
        }
        Cmd::Spectrum { domain, p } => {
            let d = load_domain(&domain)?;
            let mut primes = Vec::new();
            for q in d.primes_above(p)? {
                primes.push(json!({
                    "label": q.label(),
                    "ideal": q.under.text(),
                    "contains_conductor": q.contains_conductor,
                    "residue_size": q.residue_size.to_string(),
                    "valuation": d.is_valuation_at(&q)?,
                }));
            }
            Ok((json!({ "domain": d.describe(), "p": p.to_string(), "primes": primes }), Outcome::Pass))
        }
        Cmd::Invertible { domain, op, ideal } => {
            let op = load_op(&domain, &op)?;
            let i = parse_ideal(op.domain(), &ideal)?;
            let r = star_invertible(&op, &i)?;
            let routes: serde_json::Map<String, Value> = r
                .routes
                .iter()
                .map(|(route, v)| (serde_json::to_value(route).expect("route").as_str().unwrap_or("").to_string(), json!(v)))
                .collect();
            Ok((
                json!({ "op": op.describe(), "ideal": i.text(), "invertible": r.invertible, "routes": routes }),
                if r.invertible { Outcome::Pass } else { Outcome::Fail },
            ))
        }
        Cmd::Pmd { domain, op } => {
            let op = load_op(&domain, &op)?;
            let v = pmd_decide(&op)?;
            Ok((render::pmd(&op, &v), from_status(v.status())))
        }
        Cmd::Nagata { q } => match q {
            NagataCmd::Member { domain, op, elem, mode } => {
                let op = load_op(&domain, &op)?;
                let u = RationalFunction::parse(op.domain().tag(), &elem)?;
                let m = match mode {
                    NaModeArg::Local => NaMode::Local,
                    NaModeArg::Certified => NaMode::Certified,
                };
                let t = na_membership(&op, &u, m)?;
                Ok((json!({ "op": op.describe(), "elem": u.text(), "member": t.as_str() }), from_tri(t)))
            }
            NagataCmd::Unit { domain, op, elem } => {
                let op = load_op(&domain, &op)?;
                let u = RationalFunction::parse(op.domain().tag(), &elem)?;
                let t = na_unit(&op, &u)?;
                Ok((json!({ "op": op.describe(), "elem": u.text(), "unit": t.as_str() }), from_tri(t)))
            }
        },
        Cmd::Kronecker { q: KroneckerCmd::Member { domain, op, elem, mode, pool } } => {
            let op = load_op(&domain, &op)?;
            let u = RationalFunction::parse(op.domain().tag(), &elem)?;
            let t = match mode {
                KrModeArg::Valuation => kr_membership(&op, &u, KrMode::ValuationExact)?,
                KrModeArg::Bounded => {
                    let hs = ideal_pool(op.domain(), pool, 0)?;
                    kr_membership(&op, &u, KrMode::BoundedH(&hs))?
                }
            };
            Ok((json!({ "op": op.describe(), "elem": u.text(), "member": t.as_str() }), from_tri(t)))
        }
        Cmd::Verify { theorem, instance, seed } => {
            let mut doc: InstanceDoc = spec::parse(&read(&instance)?)?;
            if let Some(s) = seed {
                doc.config.get_or_insert_with(Default::default).seed = s;
            }
            let inst = spec::build_instance(&doc)?;
            let r = verify_theorem(&theorem, &inst)?;
            Ok((render::theorem(&r), from_check(r.overall())))
        }
        Cmd::Pair { instance } => {
            let doc: ExtensionDoc = spec::parse(&read(&instance)?)?;
            let (v, outcome) = suite::run_pair(&doc)?;
            Ok((v, outcome))
        }
        Cmd::Report { suite } => suite::run_suite(&suite),
    }
}
