use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use coinfock::verify::{
    verify_algebra, verify_evolution, verify_mixing, verify_partitions, verify_spectrum,
    verify_two_particle, Check,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] coinfock::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(coinfock::Error::NumericalFailure(_)) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Field-operator identities on the truncated Fock space.
    VerifyAlgebra,
    /// Partition, indicator and measure identities.
    VerifyPartitions,
    /// Spectrum of the discretized point-interaction Laplacian.
    Spectrum,
    /// Time evolution from the point-node state.
    Evolve,
    /// Angles between the point-node state and the eigenvectors.
    Mixing,
}

#[derive(Debug, Parser)]
#[command(name = "coinfock", version, about = "Coincidence Fock space checks and free-Hamiltonian solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// File of `key = value` lines; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "L", global = true)]
    l: Option<usize>,
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,
    #[arg(long = "k-max", global = true)]
    k_max: Option<usize>,
    #[arg(long = "h-max", global = true)]
    h_max: Option<usize>,
    #[arg(long = "J", global = true)]
    j: Option<usize>,
    #[arg(long = "R", global = true)]
    r: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    mass: Option<f64>,
    /// Center grid size; when set, `spectrum` also solves the two-particle pencil.
    #[arg(long = "Lc", global = true)]
    lc: Option<usize>,
    #[arg(long = "t-max", global = true)]
    t_max: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

/// Resolved parameters: flag, then config file, then default.
#[derive(Clone, Debug, Serialize)]
struct Params {
    #[serde(rename = "L")]
    l: usize,
    n_max: usize,
    k_max: usize,
    h_max: usize,
    #[serde(rename = "J")]
    j: usize,
    #[serde(rename = "R")]
    r: f64,
    lambda: f64,
    mass: f64,
    #[serde(rename = "Lc")]
    lc: Option<usize>,
    t_max: f64,
    steps: usize,
    seed: u64,
}

fn read_config(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", no + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('-', "_");
        let key = match key.as_str() {
            "L" | "l" => "l".to_string(),
            "J" | "j" => "j".to_string(),
            "R" | "r" => "r".to_string(),
            "Lc" | "lc" | "LC" => "lc".to_string(),
            _ => key,
        };
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn pick_opt<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match file.get(key) {
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| CliError::Config(format!("bad value for {key}: {v}"))),
        None => Ok(None),
    }
}

fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    file: &BTreeMap<String, String>,
    key: &str,
    default: T,
) -> Result<T, CliError> {
    Ok(pick_opt(flag, file, key)?.unwrap_or(default))
}

const KNOWN_KEYS: [&str; 15] = [
    "l", "n_max", "k_max", "h_max", "j", "r", "lambda", "mass", "lc", "t_max", "steps", "seed",
    "out", "format", "config",
];

fn resolve(cli: &Cli) -> Result<(Params, Option<PathBuf>, Format), CliError> {
    let file = match &cli.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    if let Some(k) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(CliError::Config(format!("unknown key {k}")));
    }
    let params = Params {
        l: pick(cli.l, &file, "l", 3)?,
        n_max: pick(cli.n_max, &file, "n_max", 4)?,
        k_max: pick(cli.k_max, &file, "k_max", 2)?,
        h_max: pick(cli.h_max, &file, "h_max", 2)?,
        j: pick(cli.j, &file, "j", 200)?,
        r: pick(cli.r, &file, "r", 10.0)?,
        lambda: pick(cli.lambda, &file, "lambda", 1.0)?,
        mass: pick(cli.mass, &file, "mass", 1.0)?,
        lc: pick_opt(cli.lc, &file, "lc")?,
        t_max: pick(cli.t_max, &file, "t_max", 10.0)?,
        steps: pick(cli.steps, &file, "steps", 100)?,
        seed: pick(cli.seed, &file, "seed", 0)?,
    };
    let out = cli.out.clone().or_else(|| file.get("out").map(PathBuf::from));
    let format = match (cli.format, file.get("format").map(String::as_str)) {
        (Some(f), _) => f,
        (None, None) | (None, Some("json")) => Format::Json,
        (None, Some("csv")) => Format::Csv,
        (None, Some(other)) => return Err(CliError::Config(format!("bad format {other}"))),
    };
    Ok((params, out, format))
}

fn checks_csv(checks: &[Check]) -> String {
    let mut s = String::from("name,residual,bound,pass\n");
    for c in checks {
        s.push_str(&format!("{},{:e},{:e},{}\n", c.name, c.residual, c.bound, c.pass));
    }
    s
}

/// Runs the command; returns the checks, extra JSON results and the CSV body.
fn run(cmd: Command, p: &Params) -> Result<(Vec<Check>, Value, String), CliError> {
    Ok(match cmd {
        Command::VerifyAlgebra => {
            let c = verify_algebra(p.l, p.n_max, p.k_max, p.h_max, p.seed)?;
            let csv = checks_csv(&c);
            (c, Value::Null, csv)
        }
        Command::VerifyPartitions => {
            let c = verify_partitions(p.l, p.n_max, p.seed)?;
            let csv = checks_csv(&c);
            (c, Value::Null, csv)
        }
        Command::Spectrum => {
            let (s, mut c) = verify_spectrum(p.j, p.r, p.lambda, p.mass)?;
            let mut results = json!({ "eigenvalues": s.values });
            if let Some(lc) = p.lc {
                let (s2, c2) = verify_two_particle(p.j, p.r, lc, p.lambda, p.mass)?;
                c.extend(c2);
                results["two_particle_eigenvalues"] = json!(s2.values);
            }
            (c, results, s.to_csv())
        }
        Command::Evolve => {
            let (t, c) = verify_evolution(p.j, p.r, p.lambda, p.mass, p.t_max, p.steps)?;
            let results = json!({
                "times": t.times,
                "norm_total": t.norm_total,
                "norm_singular": t.norm_singular,
                "norm_regular": t.norm_regular,
            });
            (c, results, t.to_csv())
        }
        Command::Mixing => {
            let (report, sweep, c) = verify_mixing(p.j, p.r, p.lambda, p.mass)?;
            let mut csv = String::from("index,angle\n");
            for (i, a) in report.angles.iter().enumerate() {
                csv.push_str(&format!("{i},{a:e}\n"));
            }
            let results = json!({
                "min_angle": report.min_angle,
                "closest": report.closest,
                "angles": report.angles,
                "lambda_sweep": sweep.iter().map(|(l, a)| json!({"lambda": l, "min_angle": a})).collect::<Vec<_>>(),
            });
            (c, results, csv)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("coinfock: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let (params, out, format) = resolve(cli)?;
    let (checks, results, csv) = run(cli.command, &params)?;
    let passed = checks.iter().filter(|c| c.pass).count();
    let body = match format {
        Format::Json => {
            let mut report = json!({
                "meta": {
                    "version": env!("CARGO_PKG_VERSION"),
                    "seed": params.seed,
                    "params": params,
                },
                "checks": checks,
                "summary": { "total": checks.len(), "passed": passed },
            });
            if !results.is_null() {
                report["results"] = results;
            }
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let header = serde_json::to_string(&params).expect("params serialize");
            format!("# {header}\n{csv}")
        }
    };
    match out {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    for c in checks.iter().filter(|c| !c.pass) {
        eprintln!("failed: {} (residual {:e}, bound {:e})", c.name, c.residual, c.bound);
    }
    Ok(passed == checks.len())
}
