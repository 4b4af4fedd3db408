//! The `proetale` command line: reads a scheme configuration, and validates
//! it, builds its fundamental-group presentation, checks that presentation
//! against the cover oracle, or prints the splitting plan and rank.
//!
//! Every command produces one JSON document and an exit code:
//! 0 success, 1 verification mismatch, 2 semantic or option error,
//! 3 schema or I/O error, 4 resource limit.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use proetale_core::bounds::HARD_MAX_DEGREE;
use proetale_core::oracle::first_failure;
use proetale_core::{
    compare, count_homs_with, free_rank, pi1_closed_form, pi1_connected_singular, pi1_devissage,
    Bounds, Diagnostic, Fraction, OracleReport, Pi1Options, Pi1Result, Plan, SchemeConfig, VkForm,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_SEMANTIC: u8 = 2;
pub const EXIT_SCHEMA: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "proetale",
    version,
    about = "Fundamental groups of singular schemes from dual-graph data"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Largest order accepted for any group in the configuration.
    #[arg(long, global = true, default_value_t = 5040)]
    pub bound_order: usize,
    /// Largest symmetric-group degree used for counting.
    #[arg(long, global = true, default_value_t = 5)]
    pub bound_degree: usize,
    /// Largest number of candidate tuples the cover oracle may walk.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    pub ceiling: u128,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            bound_order: 5040,
            bound_degree: 5,
            ceiling: 100_000_000,
            output: None,
        }
    }
}

impl GlobalOpts {
    pub fn bounds(&self) -> Bounds {
        Bounds {
            max_group_order: self.bound_order,
            max_degree: self.bound_degree,
            oracle_ceiling: self.ceiling,
            ..Bounds::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// The recursive route; handles every valid configuration.
    Auto,
    Connected,
    Devissage,
    Closed,
}

#[derive(Debug, Clone, Args)]
pub struct PresentArgs {
    #[arg(long, value_enum, default_value_t = Route::Auto)]
    pub route: Route,
    /// Van Kampen form: i, ii, iii or iv.
    #[arg(long, default_value = "i")]
    pub form: VkForm,
    /// Simplify the lowered presentation.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub simplify: bool,
    /// Override the splitting order (comma-separated singular ids).
    #[arg(long, value_delimiter = ',')]
    pub order: Vec<String>,
}

impl Default for PresentArgs {
    fn default() -> Self {
        PresentArgs {
            route: Route::Auto,
            form: VkForm::Conjugation,
            simplify: true,
            order: Vec::new(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a configuration against every structural invariant.
    Validate { path: PathBuf },
    /// Build the fundamental-group presentation.
    Present {
        path: PathBuf,
        #[command(flatten)]
        args: PresentArgs,
        /// Also count homomorphisms into Sym(d) for these degrees.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
    },
    /// Compare the presentation with the cover oracle at degrees 2..=D.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree_max: usize,
        #[command(flatten)]
        args: PresentArgs,
        /// Also compare connected covers with transitive actions.
        #[arg(long)]
        connected: bool,
    },
    /// Print the splitting order and the rank arithmetic of every split.
    Plan { path: PathBuf },
    /// Print the free rank and the cycle rank of the incidence graph.
    Rank { path: PathBuf },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] proetale_core::Error),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
    #[error("invalid option: {0}")]
    Option(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(proetale_core::Error::Schema { .. }) => EXIT_SCHEMA,
            CliError::Core(proetale_core::Error::Resource { .. }) => EXIT_RESOURCE,
            CliError::Core(proetale_core::Error::Internal(_)) => EXIT_MISMATCH,
            CliError::Core(_) | CliError::Option(_) => EXIT_SEMANTIC,
            CliError::Read { .. } | CliError::Write { .. } => EXIT_SCHEMA,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(proetale_core::Error::Schema { .. }) => "schema",
            CliError::Core(proetale_core::Error::Resource { .. }) => "resource",
            CliError::Core(proetale_core::Error::Internal(_)) => "internal",
            CliError::Core(_) => "precondition",
            CliError::Option(_) => "option",
            CliError::Read { .. } | CliError::Write { .. } => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Core(proetale_core::Error::Schema { path, .. }) = self {
            body["path"] = json!(path);
        }
        json!({ "error": body })
    }
}

/// A command's JSON result and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub body: Value,
}

impl Outcome {
    fn ok<T: Serialize>(body: &T) -> Self {
        Outcome {
            code: EXIT_OK,
            body: serde_json::to_value(body).expect("outputs serialise"),
        }
    }

    fn with_code<T: Serialize>(code: u8, body: &T) -> Self {
        Outcome {
            code,
            body: serde_json::to_value(body).expect("outputs serialise"),
        }
    }
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome {
            code: e.exit_code(),
            body: e.to_json(),
        }
    }
}

/// What a run was asked to do, checked before any computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input: PathBuf,
    pub options: BTreeMap<String, Value>,
    pub output: Option<PathBuf>,
}

impl RunManifest {
    pub fn from_cli(cli: &Cli) -> Self {
        let (command, path, mut options) = match &cli.command {
            Command::Validate { path } => ("validate", path, BTreeMap::new()),
            Command::Plan { path } => ("plan", path, BTreeMap::new()),
            Command::Rank { path } => ("rank", path, BTreeMap::new()),
            Command::Present {
                path,
                args,
                degrees,
            } => {
                let mut o = present_options(args);
                o.insert("degrees".into(), json!(degrees));
                ("present", path, o)
            }
            Command::Verify {
                path,
                degree_max,
                args,
                connected,
            } => {
                let mut o = present_options(args);
                o.insert("degree_max".into(), json!(degree_max));
                o.insert("connected".into(), json!(connected));
                ("verify", path, o)
            }
        };
        let g = &cli.global;
        options.insert("bound_order".into(), json!(g.bound_order));
        options.insert("bound_degree".into(), json!(g.bound_degree));
        options.insert("ceiling".into(), json!(g.ceiling));
        RunManifest {
            command: command.into(),
            input: path.clone(),
            options,
            output: g.output.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let num = |k: &str| {
            self.options
                .get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
        };
        let max_degree = num("bound_degree").unwrap_or(5);
        if max_degree == 0 || max_degree > HARD_MAX_DEGREE {
            return Err(CliError::Option(format!(
                "--bound-degree must lie in 1..={HARD_MAX_DEGREE}"
            )));
        }
        if num("bound_order") == Some(0) {
            return Err(CliError::Option("--bound-order must be positive".into()));
        }
        if let Some(ds) = self.options.get("degrees").and_then(Value::as_array) {
            for d in ds.iter().filter_map(Value::as_u64) {
                if d == 0 || d as usize > max_degree {
                    return Err(CliError::Option(format!(
                        "degree {d} outside 1..={max_degree}"
                    )));
                }
            }
        }
        if let Some(dm) = num("degree_max") {
            if dm < 2 || dm > max_degree {
                return Err(CliError::Option(format!(
                    "--degree-max must lie in 2..={max_degree}"
                )));
            }
        }
        Ok(())
    }
}

fn present_options(args: &PresentArgs) -> BTreeMap<String, Value> {
    let mut o = BTreeMap::new();
    o.insert("route".into(), json!(args.route));
    o.insert("form".into(), json!(args.form));
    o.insert("simplify".into(), json!(args.simplify));
    o.insert("order".into(), json!(args.order));
    o
}

/// Reads and parses a configuration and applies the group-order bound.
pub fn load(path: &Path, global: &GlobalOpts) -> Result<SchemeConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let cfg = SchemeConfig::from_json_str(&text)?;
    let groups = cfg
        .components
        .iter()
        .map(|c| (&c.id, &c.group))
        .chain(cfg.singulars.iter().map(|s| (&s.id, &s.group)))
        .chain(cfg.branches.iter().map(|b| (&b.id, &b.group)));
    for (id, g) in groups {
        if g.order() > global.bound_order {
            return Err(proetale_core::Error::Resource {
                what: format!("order of the group of `{id}`"),
                estimate: g.order() as u128,
                limit: global.bound_order as u128,
            }
            .into());
        }
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateOutput {
    pub valid: bool,
    pub n: usize,
    pub m: usize,
    pub m_tilde: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
}

pub fn cmd_validate(path: &Path, global: &GlobalOpts) -> Outcome {
    let cfg = match load(path, global) {
        Ok(c) => c,
        Err(e) => return e.into(),
    };
    let diagnostic = cfg.validate().err();
    let out = ValidateOutput {
        valid: diagnostic.is_none(),
        n: cfg.n(),
        m: cfg.m(),
        m_tilde: cfg.m_tilde(),
        diagnostic,
    };
    Outcome::with_code(if out.valid { EXIT_OK } else { EXIT_SEMANTIC }, &out)
}

/// Runs the selected route.
pub fn build(cfg: &SchemeConfig, args: &PresentArgs) -> Result<Pi1Result, CliError> {
    let opts = Pi1Options {
        form: args.form,
        simplify: args.simplify,
        order: (!args.order.is_empty()).then(|| args.order.clone()),
    };
    let result = match args.route {
        Route::Auto | Route::Devissage => pi1_devissage(cfg, &opts),
        Route::Connected => pi1_connected_singular(cfg, &opts),
        Route::Closed => pi1_closed_form(cfg, true, &opts),
    };
    Ok(result?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentOutput {
    pub route: Route,
    #[serde(flatten)]
    pub result: Pi1Result,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom_counts: Option<BTreeMap<usize, u64>>,
}

pub fn cmd_present(
    path: &Path,
    args: &PresentArgs,
    degrees: &[usize],
    global: &GlobalOpts,
) -> Outcome {
    let run = || -> Result<PresentOutput, CliError> {
        let cfg = load(path, global)?;
        let result = build(&cfg, args)?;
        let hom_counts = if degrees.is_empty() {
            None
        } else {
            let b = global.bounds();
            Some(
                degrees
                    .iter()
                    .map(|&d| Ok((d, count_homs_with(&result.presentation, d, &b)?)))
                    .collect::<Result<_, CliError>>()?,
            )
        };
        Ok(PresentOutput {
            route: args.route,
            result,
            hom_counts,
        })
    };
    match run() {
        Ok(out) => Outcome::ok(&out),
        Err(e) => e.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeError {
    pub degree: usize,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub degree: usize,
    pub oracle_count: Fraction,
    pub presentation_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub reports: Vec<OracleReport>,
    pub errors: Vec<DegreeError>,
    pub first_failure: Option<Mismatch>,
}

pub fn cmd_verify(
    path: &Path,
    degree_max: usize,
    args: &PresentArgs,
    connected: bool,
    global: &GlobalOpts,
) -> Outcome {
    let cfg = match load(path, global) {
        Ok(c) => c,
        Err(e) => return e.into(),
    };
    let result = match build(&cfg, args) {
        Ok(r) => r,
        Err(e) => return e.into(),
    };
    let bounds = global.bounds();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for d in 2..=degree_max {
        match compare(&cfg, d, &result, &bounds, connected) {
            Ok(r) => reports.push(r),
            Err(e) => {
                let e = CliError::from(e);
                errors.push(DegreeError {
                    degree: d,
                    kind: e.kind().into(),
                    message: e.to_string(),
                });
                break;
            }
        }
    }
    let first = first_failure(&reports).map(|(degree, oracle, presentation_count)| Mismatch {
        degree,
        oracle_count: oracle.into(),
        presentation_count,
    });
    let out = VerifyOutput {
        passed: errors.is_empty() && first.is_none(),
        reports,
        errors,
        first_failure: first,
    };
    let code = if out.first_failure.is_some() {
        EXIT_MISMATCH
    } else if !out.errors.is_empty() {
        match out.errors[0].kind.as_str() {
            "resource" => EXIT_RESOURCE,
            _ => EXIT_SEMANTIC,
        }
    } else {
        EXIT_OK
    };
    Outcome::with_code(code, &out)
}

pub fn cmd_plan(path: &Path, global: &GlobalOpts) -> Outcome {
    match load(path, global).and_then(|cfg| Ok(proetale_core::scheme::plan(&cfg)?)) {
        Ok(p) => Outcome::ok::<Plan>(&p),
        Err(e) => e.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOutput {
    pub n: usize,
    pub m: usize,
    pub m_tilde: usize,
    pub free_rank: usize,
    pub cycle_rank: usize,
}

pub fn cmd_rank(path: &Path, global: &GlobalOpts) -> Outcome {
    let run = || -> Result<RankOutput, CliError> {
        let cfg = load(path, global)?;
        Ok(RankOutput {
            n: cfg.n(),
            m: cfg.m(),
            m_tilde: cfg.m_tilde(),
            free_rank: free_rank(&cfg)?,
            cycle_rank: cfg.cycle_rank(),
        })
    };
    match run() {
        Ok(r) => Outcome::ok(&r),
        Err(e) => e.into(),
    }
}

/// Validates the options, then dispatches.
pub fn run(cli: &Cli) -> Outcome {
    if let Err(e) = RunManifest::from_cli(cli).validate() {
        return e.into();
    }
    let g = &cli.global;
    match &cli.command {
        Command::Validate { path } => cmd_validate(path, g),
        Command::Present {
            path,
            args,
            degrees,
        } => cmd_present(path, args, degrees, g),
        Command::Verify {
            path,
            degree_max,
            args,
            connected,
        } => cmd_verify(path, *degree_max, args, *connected, g),
        Command::Plan { path } => cmd_plan(path, g),
        Command::Rank { path } => cmd_rank(path, g),
    }
}

/// Writes the outcome's JSON to `output` or standard output; returns the
/// final exit code.
pub fn emit(outcome: &Outcome, output: Option<&Path>) -> u8 {
    let text = serde_json::to_string_pretty(&outcome.body).expect("JSON values serialise");
    match output {
        Some(p) => match fs::write(p, format!("{text}\n")) {
            Ok(()) => outcome.code,
            Err(e) => {
                let err = CliError::Write {
                    path: p.display().to_string(),
                    message: e.to_string(),
                };
                eprintln!("{err}");
                err.exit_code()
            }
        },
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => EXIT_SCHEMA,
                _ => outcome.code,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("proetale").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn manifest_records_every_option() {
        let cli = parse(&[
            "present",
            "x.json",
            "--form",
            "iii",
            "--simplify",
            "false",
            "--degrees",
            "2,3",
            "--ceiling",
            "9",
        ]);
        let m = RunManifest::from_cli(&cli);
        assert_eq!(m.command, "present");
        assert_eq!(m.options["form"], json!("iii"));
        assert_eq!(m.options["simplify"], json!(false));
        assert_eq!(m.options["degrees"], json!([2, 3]));
        assert_eq!(m.options["ceiling"], json!(9));
        assert!(m.validate().is_ok());
    }

    #[test]
    fn manifest_rejects_bad_degrees() {
        for args in [
            &["present", "x.json", "--degrees", "0"][..],
            &["present", "x.json", "--degrees", "6"],
            &["verify", "x.json", "--degree-max", "1"],
            &["rank", "x.json", "--bound-degree", "0"],
            &["rank", "x.json", "--bound-order", "0"],
        ] {
            let err = RunManifest::from_cli(&parse(args)).validate().unwrap_err();
            assert_eq!(err.exit_code(), EXIT_SEMANTIC, "{args:?}");
        }
        let ok = parse(&["present", "x.json", "--degrees", "6", "--bound-degree", "6"]);
        assert!(RunManifest::from_cli(&ok).validate().is_ok());
    }

    #[test]
    fn exit_codes_follow_error_kinds() {
        let code = |e: proetale_core::Error| CliError::from(e).exit_code();
        assert_eq!(
            code(proetale_core::Error::schema("$.x", "bad")),
            EXIT_SCHEMA
        );
        assert_eq!(
            code(proetale_core::Error::precondition("no")),
            EXIT_SEMANTIC
        );
        assert_eq!(code(proetale_core::Error::input("no")), EXIT_SEMANTIC);
        assert_eq!(
            code(proetale_core::Error::Resource {
                what: "x".into(),
                estimate: 2,
                limit: 1
            }),
            EXIT_RESOURCE
        );
        assert_eq!(
            code(proetale_core::Error::Internal("x".into())),
            EXIT_MISMATCH
        );
    }

    #[test]
    fn forms_parse_by_numeral_and_name() {
        assert_eq!(
            parse(&["present", "x", "--form", "ii"]).command_form(),
            VkForm::Copies
        );
        assert!(Cli::try_parse_from(["proetale", "present", "x", "--form", "v"]).is_err());
    }

    impl Cli {
        fn command_form(&self) -> VkForm {
            match &self.command {
                Command::Present { args, .. } | Command::Verify { args, .. } => args.form,
                _ => VkForm::Conjugation,
            }
        }
    }
}
