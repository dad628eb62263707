//! `gcsd`: command-line front end for the scattering-diagram engine.

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use gcsd_core::data::{InitialData, SideFunction};
use gcsd_core::dyck::DyckPath;
use gcsd_core::expr::parse_side;
use gcsd_core::grading::{enumerate_tight_gradings, Grading, TightParams};
use gcsd_core::gw::gw_extract;
use gcsd_core::json as js;
use gcsd_core::scattering::{compare_tight_vs_oracle, wall_function_tight, ScatteringDiagram};
use gcsd_core::thetagreedy::{
    default_endpoint, enumerate_broken_lines, greedy_element, theta_function, BrokenLineQuery,
    ClusterSeed, Point,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Engine(#[from] gcsd_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("check failed")]
    CheckFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use gcsd_core::Error as E;
        match self {
            CliError::CheckFailed => 1,
            CliError::Engine(
                E::Inconsistent(_)
                | E::NotDivisible(_)
                | E::Normalization(_)
                | E::ExpansionDiverged(_),
            ) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "gcsd",
    version,
    about = "Exact rank-2 generalized cluster scattering diagrams"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true, env = "GCSD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

#[derive(Args, Clone)]
struct Output {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct DataArgs {
    /// Initial function on the x-axis, e.g. "1+p[1,1]*x+p[1,2]*x^2".
    #[arg(long)]
    p1: Option<String>,
    /// Initial function on the y-axis, e.g. "(1+t*y)^2".
    #[arg(long)]
    p2: Option<String>,
    /// Degree of a fully symbolic P1 (used when --p1 is absent).
    #[arg(long)]
    l1: Option<u32>,
    /// Degree of a fully symbolic P2 (used when --p2 is absent).
    #[arg(long)]
    l2: Option<u32>,
}

impl DataArgs {
    fn side(expr: &Option<String>, l: Option<u32>, side: u8) -> Result<SideFunction> {
        match (expr, l) {
            (Some(e), _) => Ok(parse_side(e, side)?),
            (None, Some(l)) => Ok(SideFunction::symbolic(side, l)),
            (None, None) => Err(CliError::Usage(format!(
                "give --p{side} or --l{side} for the initial function on side {side}"
            ))),
        }
    }

    fn data(&self) -> Result<InitialData> {
        Ok(InitialData::new(
            Self::side(&self.p1, self.l1, 1)?,
            Self::side(&self.p2, self.l2, 2)?,
        ))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Wall-function of one ray from tight gradings.
    #[command(allow_negative_numbers = true)]
    Wallfn {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        order: u32,
        /// Sign of the domain equation, 1 or -1.
        #[arg(long, default_value_t = 1)]
        epsilon: i8,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Full diagram, from tight gradings or by consistency completion.
    #[command(allow_negative_numbers = true)]
    Scatter {
        #[arg(long)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Method::Tight)]
        method: Method,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Greedy element x[a1, a2].
    #[command(allow_negative_numbers = true)]
    Greedy {
        #[arg(long)]
        a1: i64,
        #[arg(long)]
        a2: i64,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Theta function of (m1, m2) from broken lines.
    #[command(allow_negative_numbers = true)]
    Theta {
        #[arg(long)]
        m1: i64,
        #[arg(long)]
        m2: i64,
        #[arg(long)]
        order: u32,
        /// Endpoint "x,y" with rational coordinates such as "1,1000004/1000003".
        #[arg(long)]
        endpoint: Option<String>,
        /// Include every broken line in the output.
        #[arg(long)]
        lines: bool,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Cluster variables x_k and their normalizations.
    #[command(allow_negative_numbers = true)]
    Clustervar {
        /// Smallest index.
        #[arg(long)]
        from: i64,
        /// Largest index.
        #[arg(long)]
        to: i64,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Invariants N_k from the logarithm of a binomially specialized ray.
    #[command(allow_negative_numbers = true)]
    Gw {
        #[arg(long)]
        l1: u32,
        #[arg(long)]
        l2: u32,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Compares tight sums with the completion and checks consistency and positivity.
    #[command(allow_negative_numbers = true)]
    Check {
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        out: Output,
    },
    /// SVG of a grading's rectangle tiling or a diagram's ray fan.
    #[command(allow_negative_numbers = true)]
    Render {
        #[command(subcommand)]
        what: RenderWhat,
    },
}

#[derive(Subcommand)]
enum RenderWhat {
    /// Tiling of a grading given by its edge values, or of the i-th tight grading.
    #[command(allow_negative_numbers = true)]
    Tiling {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated edge values in path order.
        #[arg(long)]
        values: Option<String>,
        /// Tight grading parameters: vertical total.
        #[arg(long)]
        beta1: Option<u64>,
        /// Tight grading parameters: horizontal total.
        #[arg(long)]
        beta2: Option<u64>,
        #[arg(long, default_value_t = 1)]
        epsilon: i8,
        /// Which tight grading, in enumeration order.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Ray fan of the completed diagram.
    #[command(allow_negative_numbers = true)]
    Fan {
        #[arg(long)]
        order: u32,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Tight,
    Complete,
}

fn emit(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(out: &Output, kind: &str, body: Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(&js::document(kind, body)).expect("serializable");
    s.push('\n');
    emit(&out.output, &s)
}

fn format_of(out: &Output, allowed: &[Format]) -> Result<Format> {
    let f = out.format.unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "format {:?} is not available for this command",
            f
        )))
    }
}

fn rational(s: &str) -> Result<BigRational> {
    let bad = || CliError::Usage(format!("not a rational number: {s}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn endpoint(s: &Option<String>) -> Result<Point> {
    match s {
        None => Ok(default_endpoint()),
        Some(s) => {
            let (x, y) = s
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("endpoint must be \"x,y\": {s}")))?;
            Ok((rational(x)?, rational(y)?))
        }
    }
}

fn completed(data: &InitialData, order: u32) -> Result<ScatteringDiagram> {
    Ok(ScatteringDiagram::two_line(data, order)?.ks_complete()?)
}

fn diagram_text(d: &ScatteringDiagram) -> String {
    let mut s = String::new();
    for w in d.walls() {
        let (a, b) = w.direction();
        s.push_str(&format!(
            "{} ({}, {}): {}\n",
            w.kind.as_str(),
            a,
            b,
            w.function
        ));
    }
    s
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Wallfn {
            a,
            b,
            order,
            epsilon,
            data,
            out,
        } => {
            let f = wall_function_tight(a, b, &data.data()?, order, epsilon)?;
            match format_of(&out, &[Format::Json, Format::Text])? {
                Format::Json => emit_json(&out, "wall_function", js::wall_function(&f)),
                _ => emit(&out.output, &format!("{f}\n")),
            }
        }
        Command::Scatter {
            order,
            method,
            data,
            out,
        } => {
            let data = data.data()?;
            let d = match method {
                Method::Tight => ScatteringDiagram::tight(&data, order, 1)?,
                Method::Complete => completed(&data, order)?,
            };
            match format_of(&out, &[Format::Json, Format::Text])? {
                Format::Json => emit_json(&out, "diagram", js::diagram(&d)),
                _ => emit(&out.output, &diagram_text(&d)),
            }
        }
        Command::Greedy { a1, a2, data, out } => {
            let g = greedy_element(a1, a2, &data.data()?)?;
            match format_of(&out, &[Format::Json, Format::Text])? {
                Format::Json => emit_json(&out, "greedy_element", js::pointed(&g)),
                _ => emit(&out.output, &format!("{}\n", g)),
            }
        }
        Command::Theta {
            m1,
            m2,
            order,
            endpoint: q,
            lines,
            data,
            out,
        } => {
            let d = completed(&data.data()?, order)?;
            let q = endpoint(&q)?;
            let t = theta_function(&d, (m1, m2), &q)?;
            let format = format_of(&out, &[Format::Json, Format::Text])?;
            let all = if lines {
                enumerate_broken_lines(&d, (m1, m2), &q, &BrokenLineQuery::default())?
            } else {
                Vec::new()
            };
            match format {
                Format::Json => {
                    let mut body = js::pointed(&t);
                    body["endpoint"] = js::point(&q);
                    if lines {
                        body["broken_lines"] =
                            Value::Array(all.iter().map(js::broken_line).collect());
                    }
                    emit_json(&out, "theta_function", body)
                }
                _ => {
                    let mut s = format!("{}\n", t);
                    for l in &all {
                        let exps: Vec<String> = l
                            .exponents()
                            .iter()
                            .map(|e| format!("({}, {})", e.0, e.1))
                            .collect();
                        s.push_str(&format!(
                            "line {} weight {}\n",
                            exps.join(" -> "),
                            l.weight()
                        ));
                    }
                    emit(&out.output, &s)
                }
            }
        }
        Command::Clustervar {
            from,
            to,
            data,
            out,
        } => {
            if from > to {
                return Err(CliError::Usage("--from must not exceed --to".into()));
            }
            let seed = ClusterSeed::new(data.data()?)?;
            let mut vars = Vec::new();
            for (k, x) in seed.pre_variables(from, to)? {
                vars.push(seed.normalize(k, x)?);
            }
            match format_of(&out, &[Format::Json, Format::Text])? {
                Format::Json => emit_json(
                    &out,
                    "cluster_variables",
                    Value::Array(vars.iter().map(js::cluster_variable).collect()),
                ),
                _ => {
                    let mut s = String::new();
                    for v in &vars {
                        s.push_str(&format!(
                            "x_{} = {}\nX_{} = {}\n",
                            v.k, v.pre, v.k, v.normalized
                        ));
                    }
                    emit(&out.output, &s)
                }
            }
        }
        Command::Gw {
            l1,
            l2,
            a,
            b,
            order,
            out,
        } => {
            let t = gw_extract(l1, l2, a, b, order)?;
            match format_of(&out, &[Format::Csv, Format::Json, Format::Text])? {
                Format::Json => emit_json(&out, "gw_table", js::gw_table(&t)),
                _ => emit(&out.output, &js::gw_csv(&t)),
            }
        }
        Command::Check { order, data, out } => {
            let data = data.data()?;
            let report = compare_tight_vs_oracle(&data, order, 1)?;
            let d = completed(&data, order)?;
            let consistent = d.is_consistent()?;
            let positive = d.check_positivity();
            let ok = report.is_equal() && consistent && positive;
            match format_of(&out, &[Format::Text, Format::Json])? {
                Format::Json => emit_json(
                    &out,
                    "check",
                    json!({
                        "ok": ok,
                        "comparison": js::comparison(&report),
                        "consistent": consistent,
                        "positive": positive,
                        "diagram": js::diagram(&d),
                    }),
                )?,
                _ => {
                    let mut s = format!(
                        "{}\nconsistent: {}\npositive: {}\n",
                        report, consistent, positive
                    );
                    s.push_str(&diagram_text(&d));
                    emit(&out.output, &s)?
                }
            }
            if ok {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
        Command::Render { what } => match what {
            RenderWhat::Tiling {
                m,
                n,
                values,
                beta1,
                beta2,
                epsilon,
                index,
                data,
                output,
            } => {
                let g = match (values, beta1, beta2) {
                    (Some(v), _, _) => {
                        let (m, n) = m
                            .zip(n)
                            .ok_or_else(|| CliError::Usage("--values needs --m and --n".into()))?;
                        let vals = v
                            .split(',')
                            .map(|x| x.trim().parse::<u32>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| CliError::Usage(format!("bad --values: {v}")))?;
                        Grading::new(std::sync::Arc::new(DyckPath::maximal(m, n)), vals)?
                    }
                    (None, Some(b1), Some(b2)) => {
                        let params = match m.zip(n) {
                            Some((m, n)) => TightParams::with_domain(b1, b2, epsilon, m, n)?,
                            None => TightParams::new(b1, b2, epsilon)?,
                        };
                        let all = enumerate_tight_gradings(&params, &data.data()?.bounds())?;
                        let count = all.len();
                        all.into_iter().nth(index).ok_or_else(|| {
                            CliError::Usage(format!(
                                "only {count} tight gradings, index {index} is out of range"
                            ))
                        })?
                    }
                    _ => {
                        return Err(CliError::Usage(
                            "give --values or --beta1 and --beta2".into(),
                        ))
                    }
                };
                emit(&output, &render::tiling(&g))
            }
            RenderWhat::Fan {
                order,
                data,
                output,
            } => {
                let d = completed(&data.data()?, order)?;
                emit(&output, &render::fan(&d))
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("gcsd: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gcsd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
