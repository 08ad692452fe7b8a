use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use nabch::checks::{run_suite, Suite};
use nabch::cuts::coefficient_via_cuts;
use nabch::magnus::{bch_monomial, bch_ode, n_coeff, tau_components, Composition};
use nabch::rational::{format_rational, inv_factorial, latex_rational};
use nabch::series::{bernoulli, log_l_one_plus_x};
use nabch::suops::eval_combination;
use nabch::trees::{bernoulli_weights, fuchs_level_sum, nj_tree_sum, woon_level_sum};
use nabch::{Error, Monomial, PrimCombination, Rational, Series, Strategy, Style};

const SCHEMA_VERSION: &str = "1";
const DEFAULT_CAP: usize = 8;

#[derive(Parser)]
#[command(name = "bch", version, about = "Exact non-associative BCH series and friends")]
struct Cli {
    /// Largest truncation degree any command may use.
    #[arg(long, global = true, env = "BCH_MAX_DEGREE", default_value_t = DEFAULT_CAP)]
    max_degree: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    Monomial,
    Primitive,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffMethod {
    Cuts,
    Series,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum BernoulliMethod {
    Woon,
    Fuchs,
    Nj,
    Recurrence,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Hopf,
    Suops,
    Dsw,
    Magnus,
    Cuts,
    All,
}

/// Series whose left logarithm `log` computes.
#[derive(Clone, Copy, ValueEnum)]
enum LogTarget {
    /// `1 + x`
    OnePlusX,
    /// `exp_l(x)`
    ExpL,
    /// `exp_r(x)`
    ExpR,
    /// `exp_l(x) exp_l(y)`
    Bch,
}

#[derive(Subcommand)]
enum Command {
    /// BCH series log_l(exp_l(x) exp_l(y)) up to a degree.
    Expand {
        #[arg(long, default_value_t = 5)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Basis::Monomial)]
        basis: Basis,
    },
    /// Coefficient of one monomial in the BCH series.
    Coeff {
        #[arg(long)]
        monomial: String,
        #[arg(long, value_enum, default_value_t = CoeffMethod::Cuts)]
        method: CoeffMethod,
    },
    /// Run an identity suite.
    Check {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
    /// B_k / k! by one of several constructions.
    Bernoulli {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = BernoulliMethod::Recurrence)]
        method: BernoulliMethod,
    },
    /// The coefficient n_J of a composition, e.g. `--tuple 2,1`.
    Nj {
        #[arg(long)]
        tuple: String,
    },
    /// The degree-n component of the tangent map of exp_l.
    Tau {
        #[arg(long)]
        n: usize,
    },
    /// Left logarithm of a named series.
    Log {
        #[arg(value_enum)]
        target: LogTarget,
        #[arg(long, default_value_t = 5)]
        degree: usize,
    },
}

enum Payload {
    Rational(Rational),
    Series(Series),
    Prim(PrimCombination),
    Lines(Vec<(String, Payload)>),
    Text { text: String, json: Value },
}

impl Payload {
    fn render(&self, format: Format) -> String {
        let style = if format == Format::Latex { Style::Latex } else { Style::Compact };
        match self {
            Payload::Rational(q) if format == Format::Latex => latex_rational(q),
            Payload::Rational(q) => format_rational(q),
            Payload::Series(s) => s.format(style),
            Payload::Prim(c) => c.format(style),
            Payload::Lines(items) => items
                .iter()
                .map(|(k, v)| format!("{k}: {}", v.render(format)))
                .collect::<Vec<_>>()
                .join("\n"),
            Payload::Text { text, .. } => text.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Payload::Rational(q) => Value::String(format_rational(q)),
            Payload::Series(s) => s.to_json(),
            Payload::Prim(c) => c.to_json(),
            Payload::Lines(items) => {
                Value::Object(items.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
            }
            Payload::Text { json, .. } => json.clone(),
        }
    }
}

struct Outcome {
    parameters: Map<String, Value>,
    payload: Payload,
    failed: bool,
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_degree(degree: usize, cap: usize) -> Result<(), Error> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    if degree > cap {
        return Err(Error::DegreeCap { requested: degree, cap });
    }
    Ok(())
}

fn primitive_bch(degree: usize) -> PrimCombination {
    bch_ode::<PrimCombination>(degree).at_one(degree)
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cap = cli.max_degree;
    Ok(match &cli.command {
        Command::Expand { degree, basis } => {
            check_degree(*degree, cap)?;
            let n = *degree;
            let payload = match basis {
                Basis::Monomial => Payload::Series(bch_monomial(n)),
                Basis::Primitive => Payload::Prim(primitive_bch(n)),
                Basis::Both => {
                    let mono = bch_monomial(n);
                    let prim = primitive_bch(n);
                    let equal = eval_combination(&prim, n) == mono;
                    Payload::Lines(vec![
                        ("monomial".into(), Payload::Series(mono)),
                        ("primitive".into(), Payload::Prim(prim)),
                        (
                            "equal".into(),
                            Payload::Text {
                                text: equal.to_string(),
                                json: Value::Bool(equal),
                            },
                        ),
                    ])
                }
            };
            let basis = basis.to_possible_value().unwrap().get_name().to_string();
            Outcome {
                parameters: params(&[("degree", json!(n)), ("basis", json!(basis))]),
                payload,
                failed: false,
            }
        }
        Command::Coeff { monomial, method } => {
            let w = Monomial::parse(monomial)?;
            check_degree(w.degree(), cap)?;
            let via_series = || bch_monomial(w.degree()).coeff(&w);
            let payload = match method {
                CoeffMethod::Cuts => Payload::Rational(coefficient_via_cuts(&w)),
                CoeffMethod::Series => Payload::Rational(via_series()),
                CoeffMethod::Both => {
                    let a = coefficient_via_cuts(&w);
                    let b = via_series();
                    let same = a == b;
                    Payload::Lines(vec![
                        ("cuts".into(), Payload::Rational(a)),
                        ("series".into(), Payload::Rational(b)),
                        (
                            "match".into(),
                            Payload::Text {
                                text: same.to_string(),
                                json: Value::Bool(same),
                            },
                        ),
                    ])
                }
            };
            let method = method.to_possible_value().unwrap().get_name().to_string();
            Outcome {
                parameters: params(&[("monomial", json!(w.to_string())), ("method", json!(method))]),
                payload,
                failed: false,
            }
        }
        Command::Check { suite, degree } => {
            check_degree(*degree, cap)?;
            let name = suite.to_possible_value().unwrap().get_name().to_string();
            let suite: Suite = name.parse()?;
            let report = run_suite(suite, *degree, Strategy::default());
            Outcome {
                parameters: params(&[("suite", json!(name)), ("degree", json!(degree))]),
                failed: !report.all_passed(),
                payload: Payload::Text {
                    text: report.to_string(),
                    json: report.to_json(),
                },
            }
        }
        Command::Bernoulli { k, method } => {
            if *k == 0 {
                return Err(Error::InvalidArgument("k must be at least 1".into()));
            }
            let value = match method {
                BernoulliMethod::Woon => woon_level_sum(*k)?,
                BernoulliMethod::Fuchs => fuchs_level_sum(*k, &bernoulli_weights(*k))?,
                BernoulliMethod::Nj => nj_tree_sum(&Composition::ones(*k)?),
                BernoulliMethod::Recurrence => bernoulli(*k) * inv_factorial(*k),
            };
            let method = method.to_possible_value().unwrap().get_name().to_string();
            Outcome {
                parameters: params(&[("k", json!(k)), ("method", json!(method))]),
                payload: Payload::Rational(value),
                failed: false,
            }
        }
        Command::Nj { tuple } => {
            let j: Composition = tuple.parse()?;
            let payload = Payload::Rational(n_coeff(&j));
            Outcome {
                parameters: params(&[("tuple", json!(j.to_string()))]),
                payload,
                failed: false,
            }
        }
        Command::Tau { n } => {
            check_degree(n + 1, cap)?;
            let t = tau_components(*n).swap_remove(*n);
            Outcome {
                parameters: params(&[("n", json!(n))]),
                payload: Payload::Prim(t),
                failed: false,
            }
        }
        Command::Log { target, degree } => {
            check_degree(*degree, cap)?;
            let n = *degree;
            let x = Series::x(n);
            let s = match target {
                LogTarget::OnePlusX => log_l_one_plus_x(n),
                LogTarget::ExpL => Series::log_l(&Series::exp_l(&x, n)?, n)?,
                LogTarget::ExpR => Series::log_l(&Series::exp_r(&x, n)?, n)?,
                LogTarget::Bch => bch_monomial(n),
            };
            let target = target.to_possible_value().unwrap().get_name().to_string();
            Outcome {
                parameters: params(&[("target", json!(target)), ("degree", json!(n))]),
                payload: Payload::Series(s),
                failed: false,
            }
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Expand { .. } => "expand",
        Command::Coeff { .. } => "coeff",
        Command::Check { .. } => "check",
        Command::Bernoulli { .. } => "bernoulli",
        Command::Nj { .. } => "nj",
        Command::Tau { .. } => "tau",
        Command::Log { .. } => "log",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.format == Format::Json {
                let envelope = json!({
                    "command": command_name(&cli.command),
                    "parameters": Value::Object(out.parameters),
                    "result": out.payload.to_json(),
                    "version": SCHEMA_VERSION,
                });
                println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
            } else {
                println!("{}", out.payload.render(cli.format));
            }
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
