//! Batch front end: parse a problem file, run one operation, emit JSON.
//!
//! Exit codes: 0 when a verdict/result was produced, 2 when a computation
//! came back inconclusive, 1 on errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use npd_core::colon::ideal_membership;
use npd_core::config::split_seed;
use npd_core::deflate::deflate;
use npd_core::dual::{truncated_dual, DualBasis, Point};
use npd_core::embedded::{
    double_truncation, ideal_truncation, is_point_embedded, localize_at, slice_suspect,
    EmbeddedVerdict, TruncationSpace,
};
use npd_core::interp::{dual_dims_of_truncated_ideal, interpolate_isolated};
use npd_core::parse::parse_poly;
use npd_core::problem::Problem;
use npd_core::staircase::{gcorners, hilbert_values, stats_of_staircase};
use npd_core::{Error, NumericalConfig};

#[derive(Parser)]
#[command(
    name = "npd",
    about = "numerical embedded-component tests for polynomial ideals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file (JSON)
    problem: PathBuf,
    /// Override the SVD threshold
    #[arg(long)]
    delta: Option<f64>,
    /// Override the RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the degree cap
    #[arg(long)]
    max_degree: Option<usize>,
    /// Suppress warnings on stderr
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated dual space dimensions and reduced basis at each suspect
    Dual {
        #[command(flatten)]
        common: Common,
        /// Truncation order
        #[arg(long, short = 'k', default_value_t = 4)]
        order: usize,
    },
    /// Local Hilbert function values at each suspect
    Hilbert {
        #[command(flatten)]
        common: Common,
        #[arg(long, short = 'k', default_value_t = 4)]
        order: usize,
    },
    /// Staircase data: g-corners, s-corners, regularity, multiplicity
    Corners {
        #[command(flatten)]
        common: Common,
    },
    /// Local ideal membership of a polynomial at the first suspect
    Member {
        #[command(flatten)]
        common: Common,
        /// The polynomial to test
        #[arg(long)]
        poly: String,
    },
    /// Ideal truncation J_d (or the double truncation J_d^e) at the first suspect
    Truncate {
        #[command(flatten)]
        common: Common,
        #[arg(short)]
        d: usize,
        /// Dual-constraint order; omitted = certify the full truncation
        #[arg(short)]
        e: Option<usize>,
    },
    /// Embedded-component verdict for every suspect
    Embedded {
        #[command(flatten)]
        common: Common,
    },
    /// Emit the order-d deflation of the system
    Deflate {
        #[command(flatten)]
        common: Common,
        #[arg(short, default_value_t = 1)]
        d: usize,
    },
    /// Interpolate degree-bounded elements of an isolated component
    Interpolate {
        #[command(flatten)]
        common: Common,
        /// Component id
        #[arg(long)]
        component: String,
        /// Degree bound
        #[arg(short, default_value_t = 3)]
        e: usize,
        /// Also report dual dimensions of the interpolated ideal up to this order
        #[arg(long, short = 'k', default_value_t = 4)]
        order: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, quiet) = run(cli.command);
    match result {
        Ok((value, code)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serializable")
            );
            ExitCode::from(code)
        }
        Err(e) => {
            if !quiet {
                eprintln!("error: {}", e);
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

type CmdResult = Result<(Value, u8), Error>;

fn run(cmd: Command) -> (CmdResult, bool) {
    match cmd {
        Command::Dual { common, order } => (cmd_dual(&common, order), common.quiet),
        Command::Hilbert { common, order } => (cmd_hilbert(&common, order), common.quiet),
        Command::Corners { common } => (cmd_corners(&common), common.quiet),
        Command::Member { common, poly } => (cmd_member(&common, &poly), common.quiet),
        Command::Truncate { common, d, e } => (cmd_truncate(&common, d, e), common.quiet),
        Command::Embedded { common } => (cmd_embedded(&common), common.quiet),
        Command::Deflate { common, d } => (cmd_deflate(&common, d), common.quiet),
        Command::Interpolate {
            common,
            component,
            e,
            order,
        } => (cmd_interpolate(&common, &component, e, order), common.quiet),
    }
}

fn load(common: &Common) -> Result<(Problem, NumericalConfig), Error> {
    let p = Problem::from_path(&common.problem)?;
    let cfg = p.effective_config(common.delta, common.seed, common.max_degree);
    Ok((p, cfg))
}

fn complex_pair(c: &npd_core::Complex64) -> Value {
    json!([c.re, c.im])
}

fn functional_json(q: &npd_core::DualFunctional) -> Value {
    let terms: Vec<Value> = q
        .terms
        .iter()
        .map(|(e, c)| json!({"exponents": e.0, "coeff": complex_pair(c)}))
        .collect();
    json!({"string": functional_string(q), "terms": terms})
}

fn functional_string(q: &npd_core::DualFunctional) -> String {
    // render as a polynomial in the derivative symbols d<name>
    let names: Vec<String> = q.ring.names.iter().map(|n| format!("d{}", n)).collect();
    let dring = npd_core::ring::ring_from_names(names);
    let mut p = npd_core::Polynomial::zero(&dring);
    for (e, c) in &q.terms {
        p.add_term(e.clone(), *c);
    }
    format!("{}", p)
}

fn poly_json(f: &npd_core::Polynomial) -> Value {
    let terms: Vec<Value> = f
        .ordered_terms()
        .into_iter()
        .map(|(e, c)| json!({"exponents": e.0, "coeff": complex_pair(c)}))
        .collect();
    json!({"string": format!("{}", f), "terms": terms})
}

fn basis_json(b: &DualBasis) -> Vec<Value> {
    b.functionals.iter().map(functional_json).collect()
}

fn space_json(s: &TruncationSpace) -> Value {
    json!({
        "d": s.d,
        "e": s.e,
        "dim": s.dim(),
        "basis": s.basis.iter().map(poly_json).collect::<Vec<_>>(),
    })
}

fn suspect_points(p: &Problem) -> Vec<Point> {
    if p.suspects.is_empty() {
        vec![Point::origin(p.variables.len())]
    } else {
        p.suspects.iter().map(|s| s.to_point()).collect()
    }
}

fn emit_warnings(quiet: bool, warnings: &[String]) {
    if !quiet {
        for w in warnings {
            eprintln!("warning: {}", w);
        }
    }
}

fn cmd_dual(common: &Common, order: usize) -> CmdResult {
    let (p, cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    let mut out = Vec::new();
    for (i, y) in suspect_points(&p).iter().enumerate() {
        let basis = truncated_dual(&gens, y, order, &cfg)?;
        emit_warnings(common.quiet, &basis.warnings);
        out.push(json!({
            "suspect": i,
            "point": y.coords.iter().map(complex_pair).collect::<Vec<_>>(),
            "dims": basis.dims,
            "basis": basis_json(&basis),
        }));
    }
    Ok((
        json!({"command": "dual", "order": order, "results": out}),
        0,
    ))
}

fn cmd_hilbert(common: &Common, order: usize) -> CmdResult {
    let (p, cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    let mut out = Vec::new();
    for (i, y) in suspect_points(&p).iter().enumerate() {
        let values = hilbert_values(&gens, y, order, &cfg)?;
        out.push(json!({"suspect": i, "values": values}));
    }
    Ok((
        json!({"command": "hilbert", "order": order, "results": out}),
        0,
    ))
}

fn cmd_corners(common: &Common) -> CmdResult {
    let (p, cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    let ring = p.ring();
    let mut out = Vec::new();
    for (i, y) in suspect_points(&p).iter().enumerate() {
        let st = gcorners(&gens, y, &cfg)?;
        let stats = stats_of_staircase(&st)?;
        let bound = st.gcorners.iter().map(|c| c.degree()).max().unwrap_or(0);
        let scorners: Vec<String> = st
            .scorners(bound * ring.nvars() as u32 + 1)
            .iter()
            .map(|m| ring.monomial_string(m))
            .collect();
        out.push(json!({
            "suspect": i,
            "gcorners": st.corner_strings(),
            "scorners": scorners,
            "rho0": stats.regularity,
            "mu0": stats.multiplicity,
            "dimension": stats.dimension,
            "hilbert_values": stats.values,
        }));
    }
    Ok((json!({"command": "corners", "results": out}), 0))
}

fn cmd_member(common: &Common, poly: &str) -> CmdResult {
    let (p, cfg) = load(common)?;
    let ring = p.ring();
    let gens = p.parsed_generators()?;
    let g = parse_poly(poly, &ring)?;
    let y = suspect_points(&p)[0].clone();
    let local_gens: Vec<_> = gens.iter().map(|f| f.translate(&y.coords)).collect();
    let local_g = g.translate(&y.coords);
    let member = ideal_membership(&local_gens, &local_g, &cfg)?;
    Ok((
        json!({"command": "member", "poly": poly, "member": member}),
        0,
    ))
}

fn cmd_truncate(common: &Common, d: usize, e: Option<usize>) -> CmdResult {
    let (p, cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    let y = suspect_points(&p)[0].clone();
    let mut h = p.oracle(&y, &cfg)?;
    let (local_gens, mut ht) = localize_at(&gens, &y, &mut h, &cfg)?;
    let space = match e {
        Some(e) => double_truncation(&mut ht, d, e, &cfg)?,
        None => ideal_truncation(&local_gens, &mut ht, d, &cfg)?.0,
    };
    Ok((
        json!({"command": "truncate", "local_at": y.coords.iter().map(complex_pair).collect::<Vec<_>>(), "space": space_json(&space)}),
        0,
    ))
}

fn verdict_json(i: usize, y: &Point, v: &EmbeddedVerdict, sliced: bool) -> Value {
    let mut val = serde_json::to_value(v).expect("serializable");
    let obj = val.as_object_mut().unwrap();
    obj.insert("suspect".into(), json!(i));
    obj.insert(
        "point".into(),
        json!(y.coords.iter().map(complex_pair).collect::<Vec<_>>()),
    );
    obj.insert("sliced".into(), json!(sliced));
    val
}

fn cmd_embedded(common: &Common) -> CmdResult {
    let (p, cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    if p.suspects.is_empty() {
        return Err(Error::Problem("no suspects in the problem file".into()));
    }

    // independent suspects run in parallel with split seeds; output order is
    // fixed by the input order
    let results: Vec<Result<(Value, u8), Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = p
            .suspects
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let p = &p;
                let gens = &gens;
                let cfg = cfg.with_seed(split_seed(cfg.seed, i as u64 + 1));
                scope.spawn(move || -> Result<(Value, u8), Error> {
                    let y = s.to_point();
                    if s.dim == 0 {
                        let mut h = p.oracle(&y, &cfg)?;
                        let v = is_point_embedded(gens, &y, &mut h, &cfg)?;
                        Ok((verdict_json(i, &y, &v, false), 0))
                    } else {
                        let comp = p.suspect_component(s)?;
                        let mut h = p.oracle(&y, &cfg)?;
                        let (ext, y2, mut h2) = slice_suspect(gens, &comp, &mut h, &cfg)?;
                        let v = is_point_embedded(&ext, &y2, &mut h2, &cfg)?;
                        Ok((verdict_json(i, &y2, &v, true), 0))
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });

    let mut out = Vec::new();
    let mut code = 0u8;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((v, c)) => {
                out.push(v);
                code = code.max(c);
            }
            Err(e) => {
                out.push(json!({"suspect": i, "error": format!("{}", e)}));
                code = code.max(e.exit_code() as u8);
            }
        }
    }
    Ok((json!({"command": "embedded", "verdicts": out}), code))
}

fn cmd_deflate(common: &Common, d: usize) -> CmdResult {
    let (p, _cfg) = load(common)?;
    let gens = p.parsed_generators()?;
    let sys = deflate(&gens, d)?;
    Ok((
        json!({
            "command": "deflate",
            "order": d,
            "variables": sys.ring.names,
            "generators": sys.generators.iter().map(|f| format!("{}", f)).collect::<Vec<_>>(),
        }),
        0,
    ))
}

fn cmd_interpolate(common: &Common, component: &str, e: usize, order: usize) -> CmdResult {
    let (p, cfg) = load(common)?;
    let y = suspect_points(&p)[0].clone();
    let mut h = p.oracle(&y, &cfg)?;
    let space = interpolate_isolated(&mut h, component, e, &cfg)?;
    let dims = dual_dims_of_truncated_ideal(&space, order, &cfg)?;
    Ok((
        json!({
            "command": "interpolate",
            "component": component,
            "space": space_json(&space),
            "dual_dims": dims,
        }),
        0,
    ))
}
