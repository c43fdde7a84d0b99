use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use eiscurve_core::btree::{
    reducibility_index_check, reduction_at, stable_set, Geometry, LatticeVertex, MatrixRep,
};
use eiscurve_core::dirichlet::{character_by_index, characters_mod, gen_bernoulli, DirichletCharacter};
use eiscurve_core::modforms::{
    e2_series, eigencheck, eigensystem_verify, eisenstein_series, hecke_apply, refine, EigenSystemSpec,
    HeckeDescriptor, QExpansion, Refinement,
};
use eiscurve_core::numkernel::CyclotomicNumber;
use eiscurve_core::selmer::{selmer_dimension, SelmerProblem};
use serde::Serialize;
use serde_json::json;

use crate::codec::{encode, load};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "eiscurve", version, about = "Exact Eisenstein series, Selmer ledgers and stable lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Bernoulli number B_{k,psi} of a primitive character.
    Bernoulli {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        char_index: usize,
        #[arg(long)]
        json: bool,
    },
    /// List the Dirichlet characters modulo N in index order.
    Characters {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
    /// q-expansion of E_{k,chi,psi}, or of E2 with --e2.
    Eisenstein(EisensteinArgs),
    /// Ordinary or critical p-stabilization of a q-expansion.
    Refine {
        #[command(flatten)]
        io: FormIo,
        #[arg(long, value_parser = parse_refinement)]
        mode: Refinement,
        #[arg(long)]
        p: u64,
    },
    /// Apply T:l, U:m or V:t to a q-expansion.
    Hecke {
        #[command(flatten)]
        io: FormIo,
        #[arg(long)]
        op: String,
    },
    /// Test whether a q-expansion is an eigenvector of one operator.
    Eigencheck {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        op: String,
        #[arg(long)]
        json: bool,
    },
    /// Check a q-expansion against a list of expected eigenvalues.
    Eigensystem {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Selmer dimension of a one-dimensional character with its ledger.
    Selmer {
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Value to use when no vanishing rule settles the dual Selmer term.
        #[arg(long)]
        assume_dual: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Stable lattices on the Bruhat-Tits tree.
    Btree {
        #[command(subcommand)]
        command: TreeCommand,
    },
}

#[derive(Debug, Args)]
pub struct EisensteinArgs {
    /// Produce E2 instead; only --prec is read.
    #[arg(long)]
    e2: bool,
    #[arg(long, required_unless_present = "e2")]
    k: Option<u32>,
    #[arg(long, default_value_t = 1)]
    chi_mod: u64,
    #[arg(long, default_value_t = 0)]
    chi_index: usize,
    #[arg(long, default_value_t = 1)]
    psi_mod: u64,
    #[arg(long, default_value_t = 0)]
    psi_index: usize,
    #[arg(long)]
    prec: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FormIo {
    /// Input q-expansion JSON; standard input when absent or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum TreeCommand {
    /// Search outward from the standard vertex for stable vertices.
    StableSet {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        cap: u32,
        #[arg(long)]
        json: bool,
    },
    /// Reduce the representation at a vertex and classify it.
    Classify {
        #[arg(long)]
        rep: PathBuf,
        /// `a,b` for [[p^a,b],[0,1]] or `a,b,c` for [[p^a,b],[0,p^c]].
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        json: bool,
    },
    /// Test tr(w) = psi1(w) + psi2(w) mod p^n over short words.
    IndexCheck {
        #[arg(long)]
        rep: PathBuf,
        /// Comma-separated values on the generators.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        psi1: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        psi2: Vec<i64>,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        words: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_refinement(s: &str) -> Result<Refinement, String> {
    s.parse().map_err(|e: eiscurve_core::modforms::ModformError| e.to_string())
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Bernoulli {
            k,
            modulus,
            char_index,
            json,
        } => {
            let psi = character_by_index(modulus, char_index)?;
            let b = gen_bernoulli(k, &psi)?;
            Ok(if json { encode(&b) } else { format!("{}\n", b.value) })
        }
        Command::Characters { modulus, json } => characters(modulus, json),
        Command::Eisenstein(args) => {
            let f = if args.e2 {
                e2_series(args.prec)?
            } else {
                let chi = character_by_index(args.chi_mod, args.chi_index)?;
                let psi = character_by_index(args.psi_mod, args.psi_index)?;
                eisenstein_series(args.k.expect("required by clap"), &chi, &psi, args.prec)?
            };
            emit(&encode(&f), args.output.as_deref())
        }
        Command::Refine { io, mode, p } => {
            let f: QExpansion = load(io.input.as_deref())?;
            emit(&encode(&refine(&f, mode, p)?), io.output.as_deref())
        }
        Command::Hecke { io, op } => {
            let f: QExpansion = load(io.input.as_deref())?;
            let d = HeckeDescriptor::parse_for(&op, &f).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(&encode(&hecke_apply(&d, &f)?), io.output.as_deref())
        }
        Command::Eigencheck { input, op, json } => {
            let f: QExpansion = load(input.as_deref())?;
            let d = HeckeDescriptor::parse_for(&op, &f).map_err(|e| CliError::Usage(e.to_string()))?;
            let found = eigencheck(&d, &f)?;
            Ok(if json {
                encode(&json!({ "operator": d.to_string(), "eigenvalue": found }))
            } else {
                match found {
                    Some(v) => format!("eigenvalue: {v}\n"),
                    None => format!("not an eigenvector of {d}\n"),
                }
            })
        }
        Command::Eigensystem { input, system, json } => {
            let f: QExpansion = load(input.as_deref())?;
            let system_file: EigenSystemSpec = load(Some(&system))?;
            let sys = system_file.bind(&f)?;
            let report = eigensystem_verify(&f, &sys)?;
            if json {
                return Ok(encode(&report));
            }
            let mut out = String::new();
            for o in &report.outcomes {
                let found = o.found.as_ref().map_or("none".to_string(), CyclotomicNumber::to_string);
                let mark = if o.pass { "ok" } else { "MISMATCH" };
                let _ = writeln!(out, "{:<6} expected {:<8} found {:<8} {mark}", o.operator, o.expected, found);
            }
            let _ = writeln!(out, "{}", if report.pass { "PASS" } else { "FAIL" });
            Ok(out)
        }
        Command::Selmer {
            problem,
            assume_dual,
            json,
        } => {
            let problem: SelmerProblem = load(problem.as_deref())?;
            let r = selmer_dimension(&problem, assume_dual);
            if json {
                return Ok(encode(&r));
            }
            let values: Vec<String> = r
                .ledger_values()
                .iter()
                .map(|v| v.map_or("?".to_string(), |x| x.to_string()))
                .collect();
            let mut out = format!("dimension: {r}\nledger: {}\n", values.join(","));
            for e in r.ledger() {
                let v = e.value.map_or("?".to_string(), |x| x.to_string());
                let _ = writeln!(out, "  {:<14} {:>3}  {}", e.label, v, e.justification);
            }
            Ok(out)
        }
        Command::Btree { command } => tree(command),
    }
}

fn characters(modulus: u64, json: bool) -> Result<String, CliError> {
    #[derive(Serialize)]
    struct Row {
        index: usize,
        character: DirichletCharacter,
        conductor: u64,
        parity: i64,
        generators: Vec<u64>,
    }
    let rows: Vec<Row> = characters_mod(modulus)?
        .into_iter()
        .enumerate()
        .map(|(index, c)| Row {
            index,
            conductor: c.conductor(),
            parity: c.sign(),
            generators: c.generator_residues(),
            character: c,
        })
        .collect();
    if json {
        return Ok(encode(&rows));
    }
    let mut out = String::new();
    for r in &rows {
        let c = &r.character;
        let _ = writeln!(
            out,
            "{:>3}  exponents {:?}  order {}  conductor {}  parity {:+}",
            r.index,
            c.exponents(),
            c.order(),
            r.conductor,
            r.parity
        );
    }
    Ok(out)
}

fn emit(text: &str, output: Option<&Path>) -> Result<String, CliError> {
    match output {
        Some(path) if path != Path::new("-") => {
            fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        _ => Ok(text.to_string()),
    }
}

fn parse_vertex(s: &str, p: u64) -> Result<LatticeVertex, CliError> {
    let bad = || CliError::Usage(format!("bad vertex `{s}` (expected a,b or a,b,c)"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let (a, b, c) = match parts.as_slice() {
        [a, b] => (*a, *b, "0"),
        [a, b, c] => (*a, *b, *c),
        _ => return Err(bad()),
    };
    let a = a.parse().map_err(|_| bad())?;
    let b = b.parse().map_err(|_| bad())?;
    let c = c.parse().map_err(|_| bad())?;
    LatticeVertex::new(p, a, b, c).map_err(|e| CliError::Usage(e.to_string()))
}

fn tree(command: TreeCommand) -> Result<String, CliError> {
    match command {
        TreeCommand::StableSet { rep, cap, json } => {
            let rep: MatrixRep = load(Some(&rep))?;
            let s = stable_set(&rep, cap)?;
            if json {
                return Ok(encode(&s));
            }
            let mut out = String::new();
            for v in &s.vertices {
                let _ = writeln!(out, "{v}  radius {}", v.radius());
            }
            let shape = match &s.geometry {
                Geometry::Empty => "empty".to_string(),
                Geometry::Segment { endpoints, length } => {
                    format!("segment of length {length} from {} to {}", endpoints.0, endpoints.1)
                }
                Geometry::NotASegment => "not a segment".to_string(),
            };
            let _ = writeln!(out, "{shape}");
            if s.unbounded {
                let _ = writeln!(out, "unbounded: stable vertices continue past radius {cap}");
            }
            Ok(out)
        }
        TreeCommand::Classify { rep, vertex, json } => {
            let rep: MatrixRep = load(Some(&rep))?;
            let v = parse_vertex(&vertex, rep.p())?;
            let r = reduction_at(&v, &rep)?;
            if json {
                return Ok(encode(&json!({ "vertex": v, "reduction": r })));
            }
            let mut out = String::new();
            for (label, m) in rep.labels().iter().zip(&r.matrices) {
                let _ = writeln!(out, "{label}: [[{},{}],[{},{}]] mod {}", m[0][0], m[0][1], m[1][0], m[1][1], rep.p());
            }
            let _ = writeln!(out, "{:?}", r.class);
            Ok(out)
        }
        TreeCommand::IndexCheck {
            rep,
            psi1,
            psi2,
            n,
            words,
            json,
        } => {
            let rep: MatrixRep = load(Some(&rep))?;
            let holds = reducibility_index_check(&rep, &psi1, &psi2, n, words)?;
            Ok(if json {
                encode(&json!({ "n": n, "words": words, "holds": holds }))
            } else {
                format!(
                    "trace congruence mod {}^{n} over words of length <= {words}: {}\n",
                    rep.p(),
                    if holds { "holds" } else { "fails" }
                )
            })
        }
    }
}
