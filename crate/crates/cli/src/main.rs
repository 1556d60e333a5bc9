//! `qflag`: command-line driver for the exact quantum flag engine.
//!
//! Results go to standard output as a JSON document (and to `--json PATH`);
//! progress and diagnostics go to standard error. Exit code 0 means every
//! check passed, 1 a verification failure, 2 a usage error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use qflag::calculus::{gamma_crosscheck, gamma_relation_operator, liouville_check, Chirality, TangentSpace};
use qflag::cartan::{catalog, default_flags, FlagSpec, LieType, Weight};
use qflag::coordring::{central_element_checks, flatness_table, mixed_commutation_check, quadratic_relations};
use qflag::peterweyl::{CoordAlgebra, StructureCache};
use qflag::repr::{Guard, Registry};
use qflag::rmatrix::braiding;
use qflag::scalars::{Field, QParams, Rational, Scalar};
use qflag::verify::{
    borel_weil_report, cg_bookkeeping, coordinate_ring_equality, default_depth, highest_weight_audit,
    representation_suite, rmatrix_suite, spherical_decomposition_check, word_check,
};
use qflag::{Error, Result};

const SCHEMA: &str = include_str!("../schema/qflag-report.schema.json");
const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Parser, Debug)]
#[command(name = "qflag", version, about = "Exact computations on irreducible quantum flag manifolds")]
struct Cli {
    /// `symbolic`, a rational value of q with a rational L-th root, or `s=<rational>`.
    #[arg(long, global = true, default_value = "symbolic")]
    q: String,
    /// Directory of the persistent structure cache.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Truncation depth: blocks V_lambda with sum lambda_i <= N.
    #[arg(long, global = true)]
    depth: Option<i64>,
    /// Also compare kernels against a second reduced word of w_0.
    #[arg(long, global = true)]
    word_check: bool,
    /// Also write the JSON document to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for randomized samples.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Irreducible flag manifolds and their spherical weights.
    Catalog {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
    },
    /// An irreducible module.
    Rep {
        #[arg(long = "type")]
        ty: LieType,
        /// Fundamental-weight coordinates, e.g. `1,0`.
        #[arg(long, allow_hyphen_values = true)]
        weight: Weight,
        /// Include the generator matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// The braiding of V_{varpi_x} with itself.
    Rmatrix {
        #[arg(long)]
        flag: FlagSpec,
        #[arg(long)]
        matrices: bool,
    },
    /// Quadratic relations, flatness, the central element and mixed commutation.
    Relations {
        #[arg(long)]
        flag: FlagSpec,
        /// Also assemble the bracket operator of the quotient route.
        #[arg(long)]
        gamma: bool,
    },
    /// The kernel of dbar on the degree-zero truncation.
    Liouville {
        #[arg(long)]
        flag: FlagSpec,
    },
    /// Holomorphic sections of the line modules.
    BorelWeil {
        #[arg(long)]
        flag: FlagSpec,
        /// Inclusive range `a:b`, or a single integer.
        #[arg(long, default_value = "-2:3", allow_hyphen_values = true)]
        k: KRange,
        /// Use the (1,0) calculus.
        #[arg(long)]
        opposite: bool,
        /// Compare with the quotient route at truncation 2.
        #[arg(long)]
        crosscheck: bool,
    },
    /// z-monomial spans against holomorphic sections.
    Coordring {
        #[arg(long)]
        flag: FlagSpec,
        #[arg(long, default_value_t = 3)]
        dmax: usize,
    },
    /// Spherical weights of the degree-zero algebra.
    Spherical {
        #[arg(long)]
        flag: FlagSpec,
    },
    /// Composite verification over flags and suites.
    Verify {
        /// Flags; defaults to the six desk-scale flags.
        #[arg(long, value_delimiter = ',')]
        flag: Vec<FlagSpec>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "borel-weil,liouville,coordring,spherical,flatness,central,rmatrix"
        )]
        suite: Vec<Suite>,
    },
    /// Inspect or clear the cache directory.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Stats,
    List,
    Clear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    BorelWeil,
    Opposite,
    Liouville,
    Coordring,
    Spherical,
    Flatness,
    Central,
    Mixed,
    Rmatrix,
    Audit,
    Gamma,
    Representations,
}

#[derive(Clone, Debug)]
struct KRange(Vec<i64>);

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("bad integer `{x}`"));
        match s.split_once(':') {
            Some((a, b)) => {
                let (a, b) = (p(a)?, p(b)?);
                if a > b {
                    return Err(format!("empty range {s}"));
                }
                Ok(KRange((a..=b).collect()))
            }
            None => Ok(KRange(vec![p(s)?])),
        }
    }
}

/// How to build the field for a given type.
enum Mode {
    Symbolic,
    AtQ(Rational),
    AtS(Rational),
}

impl Mode {
    fn parse(s: &str) -> Result<Mode> {
        let r = |x: &str| {
            x.trim()
                .parse::<Rational>()
                .map_err(|_| Error::Parse(format!("bad value `{x}` for --q")))
        };
        if s == "symbolic" {
            Ok(Mode::Symbolic)
        } else if let Some(x) = s.strip_prefix("s=") {
            Ok(Mode::AtS(r(x)?))
        } else {
            Ok(Mode::AtQ(r(s)?))
        }
    }
}

struct Ctx<'a, F: Field> {
    cli: &'a Cli,
    params: &'a dyn Fn(LieType) -> Result<QParams<F>>,
}

impl<F: Field> Ctx<'_, F> {
    fn algebra(&self, ty: LieType) -> Result<CoordAlgebra<F>> {
        let reg = Registry::new(ty, (self.params)(ty)?, Guard::default());
        let cache = match &self.cli.cache {
            Some(d) => StructureCache::persistent(d)?,
            None => StructureCache::in_memory(),
        };
        Ok(CoordAlgebra::new(std::sync::Arc::new(reg), cache))
    }

    fn depth(&self, flag: &FlagSpec) -> i64 {
        self.cli.depth.unwrap_or_else(|| default_depth(flag))
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn progress(msg: &str) {
    eprintln!("qflag: {msg}");
}

fn run<F: Field>(ctx: &Ctx<F>) -> Result<(Value, Option<bool>)> {
    let cli = ctx.cli;
    match &cli.cmd {
        Cmd::Catalog { max_rank } => {
            let rows: Vec<Value> = catalog(*max_rank)
                .iter()
                .map(|f| -> Result<Value> {
                    Ok(json!({
                        "flag": f.to_string(),
                        "name": f.name(),
                        "type": f.ty.name(),
                        "node": f.x + 1,
                        "complex_dim": f.restricted_roots(true).len(),
                        "generators": f.ty.weyl_dim(&f.varpi())?,
                        "spherical_weights": f.spherical_weights().iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
                    }))
                })
                .collect::<Result<_>>()?;
            Ok((json!({ "flags": rows }), None))
        }
        Cmd::Rep { ty, weight, matrices } => {
            let o = ctx.algebra(*ty)?;
            let m = o.module(weight)?;
            let rel = m.check_relations();
            let mut v = json!({
                "type": ty.name(),
                "lambda": weight.0,
                "dim": m.dim(),
                "weyl_dim": ty.weyl_dim(weight)?,
                "weights": m.weights.iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
                "relations": rel.is_ok(),
            });
            if *matrices {
                v["module"] = m.to_json();
            }
            let pass = rel.is_ok() && m.dim() as u64 == ty.weyl_dim(weight)?;
            Ok((v, Some(pass)))
        }
        Cmd::Rmatrix { flag, matrices } => {
            let o = ctx.algebra(flag.ty)?;
            let r = rmatrix_suite(&o, flag)?;
            let mut v = json!({ "report": to_value(&r) });
            if *matrices {
                let m = o.module(&flag.varpi())?;
                v["braiding"] = braiding(&m, &m)?.to_json();
            }
            Ok((v, Some(r.pass)))
        }
        Cmd::Relations { flag, gamma } => {
            let o = ctx.algebra(flag.ty)?;
            let g = o.generators(flag)?;
            let spec = quadratic_relations(&o, flag)?;
            let flat = flatness_table(&o, flag, &g, 3)?;
            let central = central_element_checks(&o, &g)?;
            let mixed = mixed_commutation_check(&o, &g)?;
            let flat_ok = flat
                .iter()
                .all(|r| r.abstract_dim == r.realized_dim && r.realized_dim as u64 == r.weyl_dim);
            let mut v = json!({
                "flag": flag.to_string(),
                "relations": spec.to_json(),
                "flatness": to_value(&flat),
                "central": to_value(&central),
                "mixed": to_value(&mixed),
            });
            if *gamma {
                v["bracket_operator"] = to_value(&gamma_relation_operator(&o, flag)?);
            }
            Ok((v, Some(flat_ok && central.pass() && mixed.holds)))
        }
        Cmd::Liouville { flag } => {
            let o = ctx.algebra(flag.ty)?;
            let ts = TangentSpace::new(*flag, Chirality::Antiholomorphic, None)?;
            let r = liouville_check(&o, &ts, ctx.depth(flag))?;
            Ok((to_value(&r), Some(r.pass)))
        }
        Cmd::BorelWeil {
            flag,
            k,
            opposite,
            crosscheck,
        } => {
            let o = ctx.algebra(flag.ty)?;
            let g = o.generators(flag)?;
            let ch = if *opposite { Chirality::Holomorphic } else { Chirality::Antiholomorphic };
            let ts = TangentSpace::new(*flag, ch, None)?;
            let depth = ctx.depth(flag);
            progress(&format!("h0 on {flag} at depth {depth}"));
            let r = borel_weil_report(&o, &ts, &g, &k.0, depth)?;
            let mut pass = r.pass;
            let mut v = json!({ "report": to_value(&r) });
            if *crosscheck {
                progress("quotient-route cross-check");
                let c = gamma_crosscheck(&o, &ts, &g, 2, &[-1, 0, 1], false)?;
                pass &= c.pass;
                v["crosscheck"] = to_value(&c);
            }
            if cli.word_check {
                let w = word_check(&o, flag, &k.0, depth)?;
                pass &= w.pass;
                v["word_check"] = to_value(&w);
            }
            Ok((v, Some(pass)))
        }
        Cmd::Coordring { flag, dmax } => {
            let o = ctx.algebra(flag.ty)?;
            let g = o.generators(flag)?;
            let ts = TangentSpace::new(*flag, Chirality::Antiholomorphic, None)?;
            let r = coordinate_ring_equality(&o, &ts, &g, *dmax, ctx.depth(flag))?;
            Ok((to_value(&r), Some(r.pass)))
        }
        Cmd::Spherical { flag } => {
            let o = ctx.algebra(flag.ty)?;
            let r = spherical_decomposition_check(&o, flag, ctx.depth(flag))?;
            Ok((to_value(&r), Some(r.pass)))
        }
        Cmd::Verify { flag, suite } => {
            let flags = if flag.is_empty() { default_flags() } else { flag.clone() };
            let mut pass = true;
            let mut out = serde_json::Map::new();
            for f in &flags {
                let (v, p) = verify_flag(ctx, f, suite)?;
                pass &= p;
                out.insert(f.to_string(), v);
            }
            Ok((json!({ "flags": out }), Some(pass)))
        }
        Cmd::Cache { action } => {
            let Some(dir) = &cli.cache else {
                return Err(Error::InvalidInput("cache commands need --cache DIR".into()));
            };
            let c: StructureCache<F> = StructureCache::persistent(dir)?;
            let files = c.entries()?;
            let names: Vec<String> = files
                .iter()
                .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
                .collect();
            let v = match action {
                CacheAction::Stats => {
                    let mut bytes = 0u64;
                    for p in &files {
                        bytes += std::fs::metadata(p)?.len();
                    }
                    json!({ "entries": files.len(), "bytes": bytes })
                }
                CacheAction::List => json!({ "entries": names }),
                CacheAction::Clear => json!({ "removed": c.clear()? }),
            };
            Ok((v, None))
        }
    }
}

fn verify_flag<F: Field>(ctx: &Ctx<F>, flag: &FlagSpec, suites: &[Suite]) -> Result<(Value, bool)> {
    let o = ctx.algebra(flag.ty)?;
    let g = o.generators(flag)?;
    let depth = ctx.depth(flag);
    let ts = TangentSpace::new(*flag, Chirality::Antiholomorphic, None)?;
    let kmax = (depth - 1).clamp(0, 4);
    let mut out = serde_json::Map::new();
    let mut pass = true;
    let mut record = |name: &str, v: Value, p: bool| {
        pass &= p;
        out.insert(name.to_string(), v);
    };
    for s in suites {
        progress(&format!("{flag}: {s:?}"));
        match s {
            Suite::BorelWeil => {
                let ks: Vec<i64> = (-kmax.min(2)..=kmax).collect();
                let r = borel_weil_report(&o, &ts, &g, &ks, depth)?;
                record("borel_weil", to_value(&r), r.pass);
            }
            Suite::Opposite => {
                let op = TangentSpace::new(*flag, Chirality::Holomorphic, None)?;
                let ks: Vec<i64> = (-kmax..=kmax.min(2)).collect();
                let r = borel_weil_report(&o, &op, &g, &ks, depth)?;
                record("opposite", to_value(&r), r.pass);
            }
            Suite::Liouville => {
                let r = liouville_check(&o, &ts, depth)?;
                record("liouville", to_value(&r), r.pass);
            }
            Suite::Coordring => {
                let dmax = if flag.ty.rank <= 2 && flag.ty.series == qflag::cartan::Series::A { 3 } else { 2 };
                let r = coordinate_ring_equality(&o, &ts, &g, dmax, depth)?;
                record("coordring", to_value(&r), r.pass);
            }
            Suite::Spherical => {
                let r = spherical_decomposition_check(&o, flag, depth)?;
                record("spherical", to_value(&r), r.pass);
            }
            Suite::Flatness => {
                let t = flatness_table(&o, flag, &g, 3)?;
                let p = t
                    .iter()
                    .all(|r| r.abstract_dim == r.realized_dim && r.realized_dim as u64 == r.weyl_dim);
                record("flatness", to_value(&t), p);
            }
            Suite::Central => {
                let r = central_element_checks(&o, &g)?;
                let p = r.pass();
                record("central", to_value(&r), p);
            }
            Suite::Mixed => {
                let r = mixed_commutation_check(&o, &g)?;
                record("mixed", to_value(&r), r.holds);
            }
            Suite::Rmatrix => {
                let r = rmatrix_suite(&o, flag)?;
                record("rmatrix", to_value(&r), r.pass);
            }
            Suite::Audit => {
                let r = highest_weight_audit(&o, flag, &g, 1, depth)?;
                record("audit", to_value(&r), r.pass);
            }
            Suite::Gamma => {
                let r = gamma_crosscheck(&o, &ts, &g, 2, &[-1, 0, 1], false)?;
                record("gamma", to_value(&r), r.pass);
            }
            Suite::Representations => {
                let small: Vec<Weight> = flag
                    .ty
                    .dominant_weights(4)
                    .into_iter()
                    .filter(|l| flag.ty.weyl_dim(l).is_ok_and(|d| d <= 12))
                    .collect();
                let r = representation_suite(&o.reg, &small)?;
                let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.seed);
                // Pairs whose product fits the dimension guard.
                let fits: Vec<(Weight, Weight)> = small
                    .iter()
                    .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
                    .filter(|(a, b)| {
                        let d = |w: &Weight| flag.ty.weyl_dim(w).unwrap_or(u64::MAX);
                        d(a).saturating_mul(d(b)) <= o.reg.guard.max_dim
                    })
                    .collect();
                let pairs: Vec<(Weight, Weight)> =
                    (0..8).map(|_| fits.choose(&mut rng).expect("nonempty").clone()).collect();
                let t = cg_bookkeeping(&o, &pairs)?;
                let p = r.pass && t.pass;
                record("representations", json!({ "modules": to_value(&r), "tensors": to_value(&t) }), p);
            }
        }
    }
    if ctx.cli.word_check {
        let w = word_check(&o, flag, &[0, 1], depth)?;
        record("word_check", to_value(&w), w.pass);
    }
    let stats = o.cache.stats();
    progress(&format!(
        "{flag}: cache memory {} disk {} computed {}",
        stats.memory_hits, stats.disk_hits, stats.computed
    ));
    Ok((Value::Object(out), pass))
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Catalog { .. } => "catalog",
        Cmd::Rep { .. } => "rep",
        Cmd::Rmatrix { .. } => "rmatrix",
        Cmd::Relations { .. } => "relations",
        Cmd::Liouville { .. } => "liouville",
        Cmd::BorelWeil { .. } => "borel-weil",
        Cmd::Coordring { .. } => "coordring",
        Cmd::Spherical { .. } => "spherical",
        Cmd::Verify { .. } => "verify",
        Cmd::Cache { .. } => "cache",
    }
}

fn diagnostic(kind: &str, message: &str) {
    let d = json!({
        "schema": "qflag-diagnostic",
        "schema_version": SCHEMA_VERSION,
        "error": kind,
        "message": message,
    });
    eprintln!("{d}");
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidInput(_) | Error::Parse(_) | Error::Unsupported(_) | Error::DimensionGuard(_)
    )
}

fn main() -> ExitCode {
    debug_assert!(SCHEMA.contains(&format!("\"const\": \"{SCHEMA_VERSION}\"")));
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            diagnostic("usage", &e.to_string());
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    if let Some(n) = cli.jobs {
        qflag::par::set_threads(n.max(1));
    }
    let outcome = Mode::parse(&cli.q).and_then(|mode| match mode {
        Mode::Symbolic => {
            let p = |ty: LieType| Ok(QParams::<Scalar>::symbolic(ty.l_denominator()));
            run(&Ctx { cli: &cli, params: &p }).map(|r| (r, "symbolic".to_string()))
        }
        Mode::AtQ(q0) => {
            let p = |ty: LieType| QParams::<Rational>::at_q(ty.l_denominator(), &q0);
            run(&Ctx { cli: &cli, params: &p }).map(|r| (r, format!("q={q0}")))
        }
        Mode::AtS(s0) => {
            let p = |ty: LieType| QParams::<Rational>::at_s(ty.l_denominator(), s0.clone());
            run(&Ctx { cli: &cli, params: &p }).map(|r| (r, format!("s={s0}")))
        }
    });
    let ((result, pass), q) = match outcome {
        Ok(x) => x,
        Err(e) => {
            let usage = is_usage(&e);
            diagnostic(if usage { "usage" } else { "failure" }, &e.to_string());
            return ExitCode::from(if usage { 2 } else { 1 });
        }
    };
    let doc = json!({
        "schema": "qflag-report",
        "schema_version": SCHEMA_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.cmd),
        "q": q,
        "pass": pass,
        "result": result,
    });
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    print!("{text}");
    if let Some(p) = &cli.json {
        if let Err(e) = std::fs::write(p, &text) {
            diagnostic("failure", &format!("cannot write {}: {e}", p.display()));
            return ExitCode::from(1);
        }
    }
    if pass == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
