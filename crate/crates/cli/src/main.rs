//! `psdcone` command-line interface.
//!
//! Exit codes: 0 on success (or membership), 2 when a matrix is not a
//! member or a verification row is flagged, 1 on any error.

mod args;
mod manifest;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use serde::Serialize;

use psdcone::analysis::{
    rows_to_csv, rows_to_json, sampled_distance, snk_bounds, verify_theorem, Normalization,
    SamplerConfig, SetId, Theorem,
};
use psdcone::cones::{self, Cone};
use psdcone::constructions::{
    make_g, make_star, sdd_trace_worst, ExtremeCandidate, SignPattern,
};
use psdcone::matcore::dist_to_psd;
use psdcone::textfmt::{fmt_num, read_matrix, round_json, write_matrix};
use psdcone::SymMat;

use args::{
    BoundsArgs, Cli, Command, ConeArg, Format, MakeArgs, MakeKind, MembershipArgs, NormArg,
    ProjectArgs, SampleArgs, SetArg, VerifyArgs,
};
use manifest::RunManifest;

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;

struct Outcome {
    command: &'static str,
    parameters: BTreeMap<String, String>,
    seed: Option<u64>,
    stdout: String,
    /// Primary output written to a file instead of (or besides) stdout.
    file: Option<(PathBuf, String)>,
    exit: u8,
}

impl Outcome {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: BTreeMap::new(),
            seed: None,
            stdout: String::new(),
            file: None,
            exit: EXIT_OK,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug)]
struct CliError {
    message: String,
    usage: Option<String>,
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError {
            message: e.to_string(),
            usage: None,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<SymMat> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    read_matrix(&text).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("serializable");
    round_json(&mut v);
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

fn membership(a: MembershipArgs) -> CliResult<Outcome> {
    let cone = match (a.cone, a.k) {
        (ConeArg::KPsd, Some(k)) => Cone::KPsd(k),
        (ConeArg::KPsd, None) => return Err("--cone k-psd requires --k".into()),
        (_, Some(_)) => return Err("--k is only valid with --cone k-psd".into()),
        (ConeArg::Psd, None) => Cone::Psd,
        (ConeArg::DdStar, None) => Cone::DdStar,
        (ConeArg::SddStar, None) => Cone::SddStar,
        (ConeArg::Dd, None) => Cone::Dd,
    };
    let x = read_input(&a.input)?;
    let tol = a.tol.unwrap_or_else(|| cones::default_tol(&x));
    let report = cones::contains(cone, &x, tol)?;

    let mut out = Outcome::new("membership")
        .param("cone", a.cone.to_possible_value().expect("named variant").get_name())
        .param("input", a.input.display())
        .param("tol", fmt_num(tol));
    if let Some(k) = a.k {
        out = out.param("k", k);
    }
    out.stdout = to_json(&report);
    out.exit = if report.verdict { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(out)
}

fn project(a: ProjectArgs) -> CliResult<Outcome> {
    let x = read_input(&a.input)?;
    let d = dist_to_psd(&x)?;
    let mut out = Outcome::new("project")
        .param("input", a.input.display())
        .param("output", a.output.display());
    out.file = Some((a.output, write_matrix(&d.projection)));
    out.stdout = format!("{}\n", fmt_num(d.distance));
    Ok(out)
}

fn make(a: MakeArgs) -> CliResult<Outcome> {
    let (name, built) = match &a.kind {
        MakeKind::G { a, b, n } => ("g", make_g(*a, *b, *n)),
        MakeKind::Star { n, signs } => (
            "star",
            signs.parse::<SignPattern>().and_then(|s| make_star(*n, &s)),
        ),
        MakeKind::WorstSdd { n } => ("worst-sdd", sdd_trace_worst(*n)),
        MakeKind::Candidate { n, q, signs } => (
            "candidate",
            signs
                .parse::<SignPattern>()
                .and_then(|s| ExtremeCandidate::new(*n, *q, s))
                .map(|c| c.realize()),
        ),
    };
    let x = built.map_err(|e| CliError {
        message: e.to_string(),
        usage: Some({
            let mut cmd = Cli::command();
            cmd.build();
            cmd.find_subcommand_mut("make")
                .and_then(|m| m.find_subcommand_mut(name))
                .map(|c| c.render_usage().to_string())
                .unwrap_or_default()
        }),
    })?;

    let mut out = Outcome::new("make").param("kind", name);
    out = match &a.kind {
        MakeKind::G { a, b, n } => out.param("a", a).param("b", b).param("n", n),
        MakeKind::Star { n, signs } => out.param("n", n).param("signs", signs),
        MakeKind::WorstSdd { n } => out.param("n", n),
        MakeKind::Candidate { n, q, signs } => out.param("n", n).param("q", q).param("signs", signs),
    };
    let text = write_matrix(&x);
    match a.output {
        Some(path) => {
            out = out.param("output", path.display());
            out.file = Some((path, text));
        }
        None => out.stdout = text,
    }
    Ok(out)
}

fn verify(a: VerifyArgs) -> CliResult<Outcome> {
    let theorem = Theorem::from_id(a.theorem)?;
    let cfg = SamplerConfig::new(a.seed, a.samples, SetId::DdStar, Normalization::Trace)
        .with_mixture(a.mixture);
    let rows = verify_theorem(theorem, a.n.clone(), &cfg)?;
    let body = match a.format {
        Format::Csv => rows_to_csv(&rows),
        Format::Json => rows_to_json(&rows),
    };

    let mut out = Outcome::new("verify")
        .param("theorem", a.theorem)
        .param("n", format!("{}..{}", a.n.start(), a.n.end()))
        .param("samples", a.samples)
        .param("mixture", a.mixture)
        .param("format", a.format.to_possible_value().expect("named variant").get_name());
    out.seed = Some(a.seed);
    match a.output {
        Some(path) => {
            out = out.param("output", path.display());
            out.file = Some((path, body));
        }
        None => out.stdout = body,
    }
    out.exit = if rows.iter().any(|r| r.violation) { EXIT_NEGATIVE } else { EXIT_OK };
    Ok(out)
}

fn bounds(a: BoundsArgs) -> CliResult<Outcome> {
    #[derive(Serialize)]
    struct BoundsOut {
        n: usize,
        k: usize,
        lower: f64,
        upper: f64,
    }
    let b = snk_bounds(a.n, a.k)?;
    let mut out = Outcome::new("bounds").param("n", a.n).param("k", a.k);
    out.stdout = to_json(&BoundsOut {
        n: a.n,
        k: a.k,
        lower: b.lower,
        upper: b.upper,
    });
    Ok(out)
}

fn sample(a: SampleArgs) -> CliResult<Outcome> {
    let set = match a.set {
        SetArg::DdStar => SetId::DdStar,
        SetArg::SddStar => SetId::SddStar,
    };
    let normalization = match a.normalization {
        NormArg::Trace => Normalization::Trace,
        NormArg::Frobenius => Normalization::Frobenius,
    };
    let cfg = SamplerConfig::new(a.seed, a.samples, set, normalization).with_mixture(a.mixture);
    let report = sampled_distance(&cfg, a.n)?;

    let mut v = serde_json::to_value(&report).expect("serializable");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("witness");
        obj.insert("n".into(), a.n.into());
        if report.theory.is_none() {
            obj.insert("note".into(), "no theoretical reference".into());
        }
    }
    let mut out = Outcome::new("sample")
        .param("set", set)
        .param("normalization", normalization)
        .param("n", a.n)
        .param("samples", a.samples)
        .param("mixture", a.mixture);
    out.seed = Some(a.seed);
    out.stdout = to_json(&v);
    Ok(out)
}

fn run(cli: Cli) -> CliResult<u8> {
    let manifest_path = cli.manifest.clone();
    let out = match cli.command {
        Command::Membership(a) => membership(a)?,
        Command::Project(a) => project(a)?,
        Command::Make(a) => make(a)?,
        Command::Verify(a) => verify(a)?,
        Command::Bounds(a) => bounds(a)?,
        Command::Sample(a) => sample(a)?,
    };

    let mut primary = Vec::new();
    if let Some((path, text)) = &out.file {
        fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        primary.extend_from_slice(text.as_bytes());
    }
    primary.extend_from_slice(out.stdout.as_bytes());
    print!("{}", out.stdout);

    if let Some(path) = manifest_path {
        let m = RunManifest::new(out.command, out.parameters, out.seed, &primary);
        fs::write(&path, m.to_json())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_ERROR),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            if let Some(usage) = e.usage {
                eprintln!("\n{usage}");
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
