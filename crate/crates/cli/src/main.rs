use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use kolrank_cli::{render, run, CliError, Command, Request};

/// Numerical polynomials, ordinal ranks and their finite shadows.
///
/// Every invocation prints one JSON document. With `--input` and no
/// subcommand the file holds a whole request; with a subcommand it holds
/// that command's payload, and flags override its fields.
#[derive(Parser, Debug)]
#[command(name = "kolrank", version)]
struct Cli {
    /// Request or payload file, `-` for stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for `verify`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest order for `ncgrowth`.
    #[arg(long, global = true)]
    tmax: Option<usize>,
    /// Cases per suite for `verify`.
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Lift the enumeration caps.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Dimension polynomial of a leader set.
    Dimpoly(DimpolyArgs),
    /// Binomial decomposition of a polynomial.
    Decompose(PolyArgs),
    /// Rank of a polynomial with its bounds.
    Rank(PolyArgs),
    /// Chain of types up to a target ordinal.
    Chain(ChainArgs),
    /// Growth of free words over a noncommuting alphabet.
    Ncgrowth(NcgrowthArgs),
    /// Invertibility quadruples over a prime field.
    Probe(ProbeArgs),
    /// Randomized self-check suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct DimpolyArgs {
    #[arg(long)]
    m: Option<usize>,
    /// Leaders per coordinate as JSON, e.g. `[[[2,0]],[[0,1]]]`.
    #[arg(long)]
    coords: Option<String>,
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Coefficients in the basis `C(T,i)`, lowest first, e.g. `4,2`.
    #[arg(long)]
    coeffs: Option<String>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eta: Option<String>,
    /// Comma-separated ordinals below `eta`.
    #[arg(long)]
    samples: Option<String>,
}

#[derive(Args, Debug)]
struct NcgrowthArgs {
    #[arg(long)]
    m: Option<usize>,
    /// Leader words separated by `;`, letters by `,`, e.g. `2,1;1,1,2`.
    #[arg(long, allow_hyphen_values = true)]
    leaders: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Words to test for pairwise incomparability, same format as `--leaders`.
    #[arg(long)]
    incomparable: Option<String>,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long)]
    p: Option<u64>,
    /// `qr`, `all`, `lo..hi`, `lo..=hi` or a comma list.
    #[arg(long)]
    set: Option<String>,
    /// `all` or a single nonzero element.
    #[arg(long)]
    alpha: Option<String>,
    /// `NAME=SET`, repeatable.
    #[arg(long = "family")]
    families: Vec<String>,
    /// `a,b`: the fiber of the invertibility set over `(a, b)`.
    #[arg(long)]
    fiber: Option<String>,
    /// `a,b,NAME,threshold`.
    #[arg(long)]
    query: Option<String>,
    #[arg(long)]
    orbit_limit: Option<usize>,
    /// List the quadruples for a single alpha.
    #[arg(long)]
    list: bool,
    /// Output format; only `json` exists.
    #[arg(long, default_value = "json", value_parser = ["json"])]
    report: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long)]
    suite: Option<String>,
}

fn read_input(path: &PathBuf) -> Result<Value, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Schema(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Schema(e.to_string()))
}

fn split_list(s: &str, sep: char) -> Vec<String> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    s.split(sep).map(|x| x.trim().to_string()).collect()
}

fn parse_json_arg(flag: &str, s: &str) -> Result<Value, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Schema(format!("--{flag}: {e}")))
}

fn parse_pair(flag: &str, s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Schema(format!("--{flag} expects a,b"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn coeff_array(s: &str) -> Result<Value, CliError> {
    let coeffs = split_list(s, ',')
        .into_iter()
        .map(|c| {
            c.parse::<i64>()
                .map(Value::from)
                .or_else(|_| {
                    // Big coefficients travel as decimal strings.
                    c.trim_start_matches('-')
                        .chars()
                        .all(|ch| ch.is_ascii_digit())
                        .then(|| Value::String(c.clone()))
                        .ok_or(())
                })
                .map_err(|_| CliError::Schema(format!("--coeffs: bad coefficient {c:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Value::Array(coeffs))
}

fn set(payload: &mut Map<String, Value>, key: &str, value: Option<Value>) {
    if let Some(v) = value {
        payload.insert(key.to_string(), v);
    }
}

fn build_request(cli: &Cli) -> Result<Request, CliError> {
    let Some(sub) = &cli.command else {
        let path = cli
            .input
            .as_ref()
            .ok_or_else(|| CliError::Schema("give a subcommand or --input".into()))?;
        let mut req: Request =
            serde_json::from_value(read_input(path)?).map_err(|e| CliError::Schema(e.to_string()))?;
        apply_globals(cli, req.command, &mut req);
        return Ok(req);
    };

    let mut payload = match &cli.input {
        Some(path) => match read_input(path)? {
            Value::Object(m) => m,
            _ => return Err(CliError::Schema("payload must be a JSON object".into())),
        },
        None => Map::new(),
    };
    let p = &mut payload;
    let command = match sub {
        Sub::Dimpoly(a) => {
            set(p, "m", a.m.map(Value::from));
            if let Some(c) = &a.coords {
                p.insert("coords".into(), parse_json_arg("coords", c)?);
            }
            Command::Dimpoly
        }
        Sub::Decompose(a) | Sub::Rank(a) => {
            if let Some(c) = &a.coeffs {
                p.insert("binomial_coeffs".into(), coeff_array(c)?);
            }
            if matches!(sub, Sub::Rank(_)) {
                Command::Rank
            } else {
                Command::Decompose
            }
        }
        Sub::Chain(a) => {
            set(p, "m", a.m.map(Value::from));
            set(p, "eta", a.eta.clone().map(Value::from));
            set(p, "samples", a.samples.as_deref().map(|s| json!(split_list(s, ','))));
            Command::Chain
        }
        Sub::Ncgrowth(a) => {
            set(p, "m", a.m.map(Value::from));
            set(p, "leaders", a.leaders.as_deref().map(|s| json!(split_list(s, ';'))));
            set(p, "max_degree", a.max_degree.map(Value::from));
            set(p, "incomparable_check", a.incomparable.as_deref().map(|s| json!(split_list(s, ';'))));
            Command::Ncgrowth
        }
        Sub::Probe(a) => {
            set(p, "p", a.p.map(Value::from));
            set(p, "set", a.set.clone().map(Value::from));
            set(p, "alpha", a.alpha.clone().map(Value::from));
            if !a.families.is_empty() {
                let mut fams = Map::new();
                for f in &a.families {
                    let (name, spec) = f
                        .split_once('=')
                        .ok_or_else(|| CliError::Schema(format!("--family expects NAME=SET, got {f:?}")))?;
                    fams.insert(name.trim().to_string(), Value::from(spec.trim()));
                }
                p.insert("families".into(), Value::Object(fams));
            }
            if let Some(f) = &a.fiber {
                let (x, y) = parse_pair("fiber", f)?;
                p.insert("fiber".into(), json!({ "a": x, "b": y }));
            }
            if let Some(q) = &a.query {
                let parts = split_list(q, ',');
                let bad = || CliError::Schema("--query expects a,b,NAME,threshold".into());
                let [x, y, z, th] = parts.as_slice() else { return Err(bad()) };
                p.insert(
                    "family_query".into(),
                    json!({
                        "a": x.parse::<u64>().map_err(|_| bad())?,
                        "b": y.parse::<u64>().map_err(|_| bad())?,
                        "z": z,
                        "threshold": th.parse::<usize>().map_err(|_| bad())?,
                    }),
                );
            }
            set(p, "orbit_limit", a.orbit_limit.map(Value::from));
            if a.list {
                p.insert("list_quadruples".into(), Value::Bool(true));
            }
            Command::Probe
        }
        Sub::Verify(a) => {
            set(p, "suite", a.suite.clone().map(Value::from));
            Command::Verify
        }
    };
    let mut req = Request {
        command,
        payload: Value::Object(payload),
        caps: Default::default(),
    };
    apply_globals(cli, command, &mut req);
    Ok(req)
}

fn apply_globals(cli: &Cli, command: Command, req: &mut Request) {
    if cli.allow_large {
        req.caps.allow_large = true;
    }
    let Value::Object(p) = &mut req.payload else { return };
    match command {
        Command::Verify => {
            set(p, "seed", cli.seed.map(Value::from));
            set(p, "cases", cli.cases.map(Value::from));
        }
        Command::Ncgrowth => set(p, "t_max", cli.tmax.map(Value::from)),
        _ => {}
    }
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match build_request(&cli).and_then(|req| run(&req)) {
        Ok(report) => {
            emit(&render(&report, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(e) => {
            emit(&render(&e.to_json(), cli.pretty));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
