//! `diffop`: command-line front end for diffop-core.
//!
//! Operator, polynomial and function arguments are inline text, `@file`, or
//! `fixture:NAME`. Output is `key: value` lines, or one JSON object with
//! `--json`. Exit status is 0 on success, 1 when a search finds nothing or a
//! check fails, 2 on usage, parse and input errors.

mod input;

use clap::{Parser, Subcommand, ValueEnum};
use diffop_core::diagonal::{self, DEFAULT_MARGIN};
use diffop_core::fixtures;
use diffop_core::homomorphisms::{intertwiner_search, transform_solutions, AnsatzBounds};
use diffop_core::powers::{self, PowerResult, DEFAULT_DIMENSION_CAP};
use diffop_core::ratsol::{rational_solutions, RatSolBounds};
use diffop_core::selfadjoint::random_self_adjoint;
use diffop_core::tower::{self, classify_family, decomposition_document, expand_terms};
use diffop_core::{DiffOperator, Error};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "diffop", version, about = "Exact algebra of linear differential operators over Q(x)")]
struct Cli {
    /// Worker threads for parallel stages (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit one JSON object instead of key-value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Expand,
    Multinomial,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adjoint (-1)^ord times the formal adjoint.
    Adjoint { op: String },
    /// Product A·B.
    Mul { a: String, b: String },
    /// Euclidean division: A = Q·B + R (right) or A = B·Q + R (left).
    Divide {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "right")]
        side: Side,
    },
    /// Random self-adjoint operator with polynomial coefficients.
    Selfadjoint {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// Build the operator and its tower from a decomposition file.
    Build { file: String },
    /// Decomposition of OP from its first intertwiner X.
    Extract {
        op: Option<String>,
        x: Option<String>,
        /// Read `operator:` and `intertwiner:` from a `build` output.
        #[arg(long, conflicts_with_all = ["op", "x"])]
        from: Option<String>,
    },
    /// Bounded ansatz search for intertwiners.
    Intertwine {
        op: String,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        deg: usize,
        /// Fixed ansatz denominator (polynomial).
        #[arg(long)]
        den: Option<String>,
    },
    /// Annihilator of T(y) over the solutions y of OP.
    Transform {
        op: String,
        #[arg(long)]
        by: String,
    },
    /// Symmetric power.
    Sympow {
        op: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
    },
    /// Exterior power.
    Extpow {
        op: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_DIMENSION_CAP)]
        cap: usize,
    },
    /// Rational solutions.
    Ratsols {
        op: String,
        #[arg(long)]
        num_deg: Option<usize>,
        #[arg(long)]
        den: Option<String>,
    },
    /// Diagonal coefficients of a trivariate rational function.
    Diag {
        #[arg(long, default_value = "fixture:generic")]
        input: String,
        #[arg(long, value_enum, default_value = "expand")]
        method: Method,
        #[arg(long)]
        terms: usize,
    },
    /// Guess an operator with polynomial coefficients annihilating a series.
    Guess {
        /// Series file, one rational per line.
        #[arg(long, required_unless_present = "diag")]
        series: Option<String>,
        /// Use this many diagonal coefficients of the built-in rational function.
        #[arg(long, conflicts_with = "series")]
        diag: Option<usize>,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: usize,
    },
    /// Orthogonal or symplectic family of a decomposition file.
    Classify { file: String },
    /// Random-instance check of the operator identities and inversion relations.
    VerifyIdentities {
        #[arg(long, default_value_t = 50)]
        n_random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a built-in fixture, or list them.
    Fixture { name: Option<String> },
}

/// Ordered key-value output.
#[derive(Default)]
struct Doc {
    entries: Vec<(String, Value)>,
    found: bool,
}

impl Doc {
    fn new() -> Self {
        Doc { entries: Vec::new(), found: true }
    }

    fn put(&mut self, key: impl Into<String>, v: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), v.into()));
        self
    }

    fn text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let v = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            if k.is_empty() {
                s.push_str(&v);
                s.push('\n');
            } else {
                s.push_str(&format!("{}: {}\n", k, v));
            }
        }
        s
    }

    fn json(&self) -> Value {
        let mut m = serde_json::Map::new();
        let mut values = Vec::new();
        for (k, v) in &self.entries {
            if k.is_empty() {
                values.push(v.clone());
            } else {
                m.insert(k.clone(), v.clone());
            }
        }
        if !values.is_empty() {
            m.insert("values".into(), Value::Array(values));
        }
        m.insert("found".into(), json!(self.found));
        Value::Object(m)
    }
}

fn op_doc(key: &str, l: &DiffOperator) -> Doc {
    let mut d = Doc::new();
    d.put(key, l.to_text());
    d
}

fn power_doc(p: &PowerResult) -> Doc {
    let mut d = Doc::new();
    d.put("order", p.operator.order()).put("full_dimension", p.full_dim).put("drop", p.drop);
    d.put("operator", p.operator.to_cleared_text());
    d
}

fn doc_from_kv(text: &str) -> Doc {
    let mut d = Doc::new();
    for line in text.lines() {
        if let Some((k, v)) = line.split_once(": ") {
            let v = match v {
                "true" => json!(true),
                "false" => json!(false),
                _ => v.parse::<u64>().map(Value::from).unwrap_or_else(|_| json!(v)),
            };
            d.put(k, v);
        }
    }
    d
}

fn run(cmd: Command) -> Result<Doc, Error> {
    Ok(match cmd {
        Command::Adjoint { op } => op_doc("", &input::operator(&op)?.adjoint()),
        Command::Mul { a, b } => op_doc("", &input::operator(&a)?.mul(&input::operator(&b)?)),
        Command::Divide { a, b, side } => {
            let (a, b) = (input::operator(&a)?, input::operator(&b)?);
            let (q, r) = match side {
                Side::Right => a.right_divide(&b)?,
                Side::Left => a.left_divide(&b)?,
            };
            let mut d = Doc::new();
            d.put("quotient", q.to_text()).put("remainder", r.to_text());
            d
        }
        Command::Selfadjoint { order, seed, deg } => op_doc("", &random_self_adjoint(order, deg, seed)?),
        Command::Build { file } => {
            let dec = input::decomposition(&file)?;
            let trace = tower::build(&dec);
            let mut d = Doc::new();
            d.put("operator", trace.top().to_text());
            if let Some(x) = trace.first_intertwiner() {
                d.put("intertwiner", x.to_text());
            }
            for (k, l) in trace.operators.iter().enumerate() {
                d.put(format!("tower.{}", k), l.to_text());
            }
            d.put("fibonacci_terms", expand_terms(dec.len()).len());
            d
        }
        Command::Extract { op, x, from } => {
            let (l, x) = match (from, op, x) {
                (Some(f), _, _) => {
                    let kv = input::key_values(&input::read_file(&f)?);
                    let get = |k: &str| {
                        kv.get(k).ok_or_else(|| Error::Parse(format!("{}: missing key '{}'", f, k))).and_then(|s| DiffOperator::parse(s))
                    };
                    (get("operator")?, get("intertwiner")?)
                }
                (None, Some(op), Some(x)) => (input::operator(&op)?, input::operator(&x)?),
                _ => return Err(Error::InvalidInput("extract needs OP and X, or --from".into())),
            };
            let (dec, trace) = tower::extract(&l, &x)?;
            doc_from_kv(&decomposition_document(&dec, Some(&trace)))
        }
        Command::Intertwine { op, order, deg, den } => {
            let l = input::operator(&op)?;
            let bounds = AnsatzBounds {
                order,
                numerator_degree: deg,
                denominator: den.as_deref().map(input::poly).transpose()?,
            };
            let found = intertwiner_search(&l, &bounds)?;
            let mut d = Doc::new();
            d.put("bounds.order", order).put("bounds.numerator_degree", deg);
            d.put(
                "bounds.denominator",
                bounds.denominator.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "escalating powers of lc".into()),
            );
            d.put("count", found.len());
            for (i, x) in found.iter().enumerate() {
                d.put(format!("intertwiner.{}", i + 1), x.to_text());
            }
            d.found = !found.is_empty();
            d
        }
        Command::Transform { op, by } => {
            let (lt, cof) = transform_solutions(&input::operator(&op)?, &input::operator(&by)?)?;
            let mut d = Doc::new();
            d.put("operator", lt.to_cleared_text()).put("order", lt.order()).put("cofactor", cof.to_text());
            d
        }
        Command::Sympow { op, m, cap } => power_doc(&powers::sym_power_capped(&input::operator(&op)?, m, cap)?),
        Command::Extpow { op, m, cap } => power_doc(&powers::ext_power_capped(&input::operator(&op)?, m, cap)?),
        Command::Ratsols { op, num_deg, den } => {
            let bounds = RatSolBounds { numerator_degree: num_deg, denominator: den.as_deref().map(input::poly).transpose()? };
            let res = rational_solutions(&input::operator(&op)?, &bounds)?;
            let mut d = Doc::new();
            d.put("denominator", res.denominator.to_string());
            if let Some(k) = res.numerator_degree {
                d.put("numerator_degree", k);
            }
            d.put("bounded_search", res.bounded_search).put("count", res.basis.len());
            for (i, f) in res.basis.iter().enumerate() {
                d.put(format!("solution.{}", i + 1), f.to_string());
            }
            d.found = !res.basis.is_empty();
            d
        }
        Command::Diag { input: spec, method, terms } => {
            let r = input::trivariate(&spec)?;
            let s = match method {
                Method::Expand => diagonal::diag_series_expand(&r, terms)?,
                Method::Multinomial => diagonal::diag_series_multinomial(&r, terms)?,
            };
            let mut d = Doc::new();
            for c in s.coeffs() {
                d.put("", c.to_string());
            }
            d
        }
        Command::Guess { series, diag, order, deg, margin } => {
            let s = match (series, diag) {
                (Some(path), _) => input::series(&path)?,
                (None, Some(n)) => diagonal::diag_series_expand(&input::trivariate("fixture:generic")?, n)?,
                _ => return Err(Error::InvalidInput("guess needs --series or --diag".into())),
            };
            let mut d = Doc::new();
            d.put("terms", s.len()).put("order", order).put("degree", deg).put("margin", margin);
            match diagonal::guess_operator_with_margin(&s, order, deg, margin)? {
                Some(l) => {
                    d.put("operator", l.to_cleared_text());
                }
                None => d.found = false,
            }
            d
        }
        Command::Classify { file } => {
            let dec = input::decomposition(&file)?;
            let c = classify_family(&dec)?;
            let mut d = Doc::new();
            let orders: Vec<String> = dec.orders().iter().map(|o| o.to_string()).collect();
            d.put("orders", orders.join(",")).put("family", c.family.to_string()).put("generic", c.generic);
            d
        }
        Command::VerifyIdentities { n_random, seed } => {
            let rep = tower::verify_identities(n_random, seed);
            let mut d = Doc::new();
            d.put("instances", rep.instances).put("checks", rep.checks).put("failures", rep.failures.len());
            for (i, name) in &rep.failures {
                d.put(format!("failure.{}", i), name.clone());
            }
            d.found = rep.passed();
            d
        }
        Command::Fixture { name } => match name {
            Some(n) => {
                let f = fixtures::load(&n)?;
                let mut d = Doc::new();
                d.put("name", f.name).put("description", f.description).put("payload", f.text.trim().to_string());
                d
            }
            None => {
                let mut d = Doc::new();
                for f in fixtures::FIXTURES {
                    d.put(f.name, f.description);
                }
                for (n, deg) in fixtures::NOT_PRINTED {
                    d.put(*n, format!("degree {}, not printed", deg));
                }
                d
            }
        },
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::UnknownFixture(_) | Error::Io(_) | Error::MixedParity(_) => 2,
        Error::InsufficientTerms { .. } | Error::DimensionCap { .. } | Error::TemplateMismatch(_) => 2,
        Error::NotExpandable | Error::DivisionByZero => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(doc) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&doc.json()).unwrap());
            } else {
                print!("{}", doc.text());
            }
            if doc.found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
