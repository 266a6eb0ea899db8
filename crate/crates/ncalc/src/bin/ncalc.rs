//! Thin command-line front end over the ncalc library.
//!
//! Exit codes: 0 success, 1 failed verification or runtime error,
//! 2 usage error, 3 a size cap was exceeded.

use std::process::ExitCode;
use std::rc::Rc;

use clap::{Parser, Subcommand};
use serde_json::json;

use ncalc::based::{BasedAlgebra, Elem};
use ncalc::error::NcalcError;
use ncalc::forms::DrContext;
use ncalc::hochschild::{hh_cohomology, hh_homology, Bimodule};
use ncalc::ktheory::{chern_ch_k, IdempotentMatrix};
use ncalc::parser::{eval_free, eval_necklace, eval_phase, parse, ParseEnv};
use ncalc::rep::{trace_function, RepVars};
use ncalc::scalar::Rational;
use ncalc::star::{t_slices, PhasePoly};
use ncalc::structure::{abelian_lie, heisenberg3, sl2, LieAlgebraData, StructureAlgebra};
use ncalc::suite::{run_suite, SuiteCaps};

#[derive(Parser)]
#[command(name = "ncalc", version, about = "Exact noncommutative calculus")]
struct Cli {
    /// Seed for all randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest graded-piece dimension accepted before giving up.
    #[arg(long, global = true, default_value_t = 200_000)]
    max_dim: usize,
    /// Largest weight iterated by weight-graded computations.
    #[arg(long, global = true, default_value_t = 5)]
    max_weight: usize,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology and cohomology dimensions of an algebra.
    Hochschild {
        /// Path to a structure-constant algebra description (JSON).
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Karoubi-de Rham cohomology dimensions of an algebra.
    Drham {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Necklace bracket of two cyclic expressions.
    Necklace {
        /// Number of symplectic pairs (generators x1..xn, y1..yn).
        #[arg(long, default_value_t = 1)]
        pairs: usize,
        /// First cyclic element, e.g. "cyc(x1*x1*y1)".
        #[arg(long)]
        f: String,
        /// Second cyclic element.
        #[arg(long)]
        g: String,
    },
    /// Evaluate a Moyal star-product expression.
    Moyal {
        #[arg(long, default_value_t = 1)]
        pairs: usize,
        /// Expression in x1, y1, .., t, e.g. "star(x1, y1)".
        #[arg(long)]
        expr: String,
    },
    /// Trace function of a free-algebra element on n x n matrices.
    Rep {
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Element whose trace function to compute, e.g. "x*y - y*x".
        #[arg(long)]
        trace: String,
    },
    /// Commutative Weil algebra cohomology of a Lie algebra.
    Weil {
        /// One of: sl2, heisenberg, abelian:<dim>.
        #[arg(long, default_value = "sl2")]
        lie: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// Chern character ch_k of an idempotent matrix.
    Chern {
        #[arg(long)]
        algebra: String,
        /// Path to the idempotent description (JSON: {"r": .., "entries": [[..], ..]}).
        #[arg(long)]
        idempotent: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Run a named verification suite (or "all").
    Verify {
        #[arg(default_value = "all")]
        name: String,
    },
}

fn load_algebra(path: &str) -> Result<StructureAlgebra, NcalcError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| NcalcError::InvalidInput(format!("cannot read {}: {}", path, e)))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| NcalcError::InvalidInput(format!("{}: {}", path, e)))?;
    StructureAlgebra::from_json(&v)
}

fn parse_rational(s: &str) -> Result<Rational, NcalcError> {
    s.parse::<Rational>()
        .map_err(|_| NcalcError::InvalidInput(format!("not a rational: {}", s)))
}

fn load_idempotent(path: &str, alg: &Rc<BasedAlgebra>) -> Result<IdempotentMatrix, NcalcError> {
    #[derive(serde::Deserialize)]
    struct IdemJson {
        r: usize,
        /// Row-major entries; each entry is a coefficient vector over the
        /// algebra basis, rationals written as "p/q" or "p".
        entries: Vec<Vec<String>>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| NcalcError::InvalidInput(format!("cannot read {}: {}", path, e)))?;
    let j: IdemJson = serde_json::from_str(&text)
        .map_err(|e| NcalcError::InvalidInput(format!("{}: {}", path, e)))?;
    let mut entries = Vec::with_capacity(j.entries.len());
    for coeffs in &j.entries {
        let v: Result<Vec<Rational>, _> = coeffs.iter().map(|s| parse_rational(s)).collect();
        entries.push(Elem::from_vector(&v?));
    }
    IdempotentMatrix::new(alg.clone(), j.r, entries)
}

fn phase_string(f: &PhasePoly) -> String {
    let slices = t_slices(f);
    if slices.is_empty() {
        return "0".into();
    }
    let names = ncalc::star::phase_var_names(f.nvars / 2);
    let parts: Vec<String> = slices
        .iter()
        .map(|(k, p)| {
            let t = match k {
                0 => return p.display(&names),
                1 => "t".to_string(),
                _ => format!("t^{}", k),
            };
            let body = p.display(&names);
            if body == "1" {
                t
            } else {
                format!("({})*{}", body, t)
            }
        })
        .collect();
    parts.join(" + ")
}

fn run(cli: &Cli) -> Result<i32, NcalcError> {
    let caps = SuiteCaps {
        max_dim: cli.max_dim,
        max_weight: cli.max_weight,
    };
    match &cli.command {
        Command::Hochschild { algebra, max_degree } => {
            let a = load_algebra(algebra)?;
            let m = Bimodule::regular(&a);
            let h = hh_homology(&a, &m, *max_degree, true)?;
            let hc = hh_cohomology(&a, &m, *max_degree)?;
            if cli.json {
                println!(
                    "{}",
                    json!({ "homology": h.dims, "cohomology": hc.dims })
                );
            } else {
                println!("HH_ dims: {:?}", h.dims);
                println!("HH^ dims: {:?}", hc.dims);
            }
        }
        Command::Drham { algebra, max_degree } => {
            let a = load_algebra(algebra)?;
            let ctx = DrContext::with_cap(Rc::new(BasedAlgebra::fin_dim(a)), cli.max_dim);
            let h = ctx.dr_cohomology_reduced(*max_degree, 0)?;
            let dims: Vec<usize> = (0..=*max_degree).map(|n| h[&(n, 0)]).collect();
            if cli.json {
                println!("{}", json!({ "dims": dims }));
            } else {
                println!("DR dims: {:?}", dims);
            }
        }
        Command::Necklace { pairs, f, g } => {
            let env = ParseEnv::new(ncalc::cyclic::SymplecticLayout::new(*pairs).names());
            let layout = ncalc::cyclic::SymplecticLayout::new(*pairs);
            let fe = eval_necklace(&parse(f, &env)?, &env)?;
            let ge = eval_necklace(&parse(g, &env)?, &env)?;
            let br = ncalc::cyclic::necklace_bracket(&fe, &ge, &layout)?;
            if cli.json {
                println!("{}", json!({ "bracket": br.to_string() }));
            } else {
                println!("{}", br);
            }
        }
        Command::Moyal { pairs, expr } => {
            let env = ParseEnv::phase(*pairs);
            let val = eval_phase(&parse(expr, &env)?, &env, *pairs)?;
            let out = phase_string(&val);
            if cli.json {
                println!("{}", json!({ "result": out }));
            } else {
                println!("{}", out);
            }
        }
        Command::Rep { gens, n, trace } => {
            let env = ParseEnv::new(ncalc::word::default_gen_names(*gens));
            let p = eval_free(&parse(trace, &env)?, &env)?;
            let tr = trace_function(&p, *n)?;
            let names = RepVars::new(*gens, *n)?.names();
            let out = if tr.is_zero() {
                "0".to_string()
            } else {
                tr.display(&names)
            };
            if cli.json {
                println!("{}", json!({ "trace": out }));
            } else {
                println!("{}", out);
            }
        }
        Command::Weil { lie, max_degree } => {
            let g: LieAlgebraData = if lie == "sl2" {
                sl2()
            } else if lie == "heisenberg" {
                heisenberg3()
            } else if let Some(d) = lie.strip_prefix("abelian:") {
                let d: usize = d
                    .parse()
                    .map_err(|_| NcalcError::InvalidInput(format!("bad dimension: {}", d)))?;
                abelian_lie(d)
            } else {
                return Err(NcalcError::InvalidInput(format!(
                    "unknown Lie algebra '{}'; use sl2, heisenberg or abelian:<dim>",
                    lie
                )));
            };
            let dims = ncalc::chern_weil::weil_cohomology(&g, *max_degree)?;
            if cli.json {
                println!("{}", json!({ "dims": dims }));
            } else {
                println!("H(W(g)) dims: {:?}", dims);
            }
        }
        Command::Chern {
            algebra,
            idempotent,
            k,
        } => {
            let a = Rc::new(BasedAlgebra::fin_dim(load_algebra(algebra)?));
            let e = load_idempotent(idempotent, &a)?;
            let ctx = DrContext::with_cap(a, cli.max_dim);
            let c = chern_ch_k(&e, *k, &ctx)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "class": c.class.rep.to_string(),
                        "degree": c.class.degree,
                        "certified": c.certified(),
                    })
                );
            } else {
                println!("ch_{} = {}", k, c.class.rep);
                println!("certified closed: {}", c.certified());
            }
        }
        Command::Verify { name } => {
            let rep = run_suite(name, cli.seed, &caps)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&rep).unwrap());
            } else {
                for c in &rep.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    print!("{} {} ({} ms)", status, c.name, c.millis);
                    if let Some(cex) = &c.counterexample {
                        print!("  [{}]", cex);
                    }
                    println!();
                }
            }
            if !rep.passed() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(NcalcError::CapExceeded { .. }) => {
            eprintln!("error: size cap exceeded; raise --max-dim or --max-weight");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
