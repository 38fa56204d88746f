//! Command-line driver: read a program, build its LTS, write it out.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rosa_core::{
    build_lts, check_guarded, parse_program, to_dot, to_json, to_text, AstError, BuildConfig, BuildError,
    DefinitionEnv, ExportOptions, NodeLabels, ParseError, SemanticsError,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNBOUND: u8 = 3;

const EXIT_CODES: &str = "\
Exit codes:
  0  success, including truncated builds (a warning goes to stderr)
  1  the input or output file could not be read or written
  2  syntax or validation error, reported as line:column
  3  unbound process variable or unguarded recursion";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Labels {
    Id,
    Expr,
    #[default]
    Both,
}

impl From<Labels> for NodeLabels {
    fn from(labels: Labels) -> Self {
        match labels {
            Labels::Id => NodeLabels::Id,
            Labels::Expr => NodeLabels::Expression,
            Labels::Both => NodeLabels::Both,
        }
    }
}

/// Builds the labelled transition system of a ROSA program.
#[derive(Debug, Clone, Parser)]
#[command(name = "rosa-lts", version, after_help = EXIT_CODES)]
pub struct CliArgs {
    /// Program file, or `-` to read standard input.
    pub input: String,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Definition to start from instead of the default root.
    #[arg(long)]
    pub root: Option<String>,
    /// Stop exploring after this many states.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
    /// What node labels show.
    #[arg(long, value_enum, default_value_t = Labels::Both)]
    pub labels: Labels,
    /// Only parse and validate the program.
    #[arg(long)]
    pub check: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn source_name(args: &CliArgs) -> &str {
    if args.input == "-" {
        "<stdin>"
    } else {
        &args.input
    }
}

fn parse_failure(args: &CliArgs, err: ParseError) -> Failure {
    let code = match err {
        ParseError::UnboundVariable { .. } => EXIT_UNBOUND,
        _ => EXIT_INVALID,
    };
    Failure::new(code, format!("{}:{}", source_name(args), err))
}

fn semantics_failure(err: SemanticsError) -> Failure {
    match err {
        SemanticsError::UnguardedRecursion(_) | SemanticsError::Unbound(_) => Failure::new(EXIT_UNBOUND, err.to_string()),
        SemanticsError::NotApplicable { .. } => Failure::new(EXIT_INVALID, err.to_string()),
    }
}

fn read_input(args: &CliArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut source = String::new();
    let read = if args.input == "-" {
        stdin.read_to_string(&mut source).map(|_| ())
    } else {
        fs::read(&args.input).and_then(|bytes| {
            source = String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            Ok(())
        })
    };
    read.map_err(|e| Failure::new(EXIT_IO, format!("{}: {}", source_name(args), e)))?;
    Ok(source)
}

fn load(args: &CliArgs, stdin: &mut dyn Read) -> Result<DefinitionEnv, Failure> {
    let source = read_input(args, stdin)?;
    let mut env = parse_program(&source).map_err(|e| parse_failure(args, e))?;
    if let Some(root) = &args.root {
        env = env.with_root(root).map_err(|e| match e {
            AstError::UnboundVariable(_) => Failure::new(EXIT_UNBOUND, format!("--root: {}", e)),
            AstError::InvalidName(_) => Failure::new(EXIT_INVALID, format!("--root: {}", e)),
        })?;
    }
    check_guarded(&env).map_err(semantics_failure)?;
    Ok(env)
}

fn render(args: &CliArgs, env: &DefinitionEnv, stderr: &mut dyn Write) -> Result<String, Failure> {
    let config = BuildConfig {
        max_states: usize::try_from(args.max_states).unwrap_or(usize::MAX),
        ..BuildConfig::default()
    };
    let lts = build_lts(env, config).map_err(|e| match e {
        BuildError::Semantics(e) => semantics_failure(e),
        BuildError::InvalidConfig(_) => Failure::new(EXIT_INVALID, e.to_string()),
    })?;
    if lts.truncated {
        let _ = writeln!(
            stderr,
            "warning: state limit of {} reached, the LTS is truncated",
            args.max_states
        );
    }
    let opts = ExportOptions {
        node_labels: args.labels.into(),
        ..ExportOptions::default()
    };
    Ok(match args.format {
        Format::Text => to_text(&lts, &opts),
        Format::Dot => to_dot(&lts, &opts),
        Format::Json => {
            let mut json = to_json(&lts);
            json.push('\n');
            json
        }
    })
}

fn write_output(args: &CliArgs, artifact: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let written = match &args.out {
        Some(path) => fs::write(path, artifact).map_err(|e| (path.display().to_string(), e)),
        None => stdout
            .write_all(artifact.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| ("<stdout>".to_string(), e)),
    };
    written.map_err(|(target, e)| Failure::new(EXIT_IO, format!("{}: {}", target, e)))
}

fn execute(args: &CliArgs, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let env = load(args, stdin)?;
    if args.check {
        return Ok(());
    }
    let artifact = render(args, &env, stderr)?;
    write_output(args, &artifact, stdout)
}

/// Runs one invocation and returns its exit code. The artifact goes to
/// `stdout` (or `--out`), everything else to `stderr`.
pub fn run(args: &CliArgs, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match execute(args, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}
