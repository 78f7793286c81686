//! Command-line front end. Results and errors are JSON on stdout (or the
//! `--output` file); logs go to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arithmetic::{trivialize_coboundary, ArithmeticOptions};
use crate::csa::{present, AmitsurPresentation, PresentOptions, RngSeed, StructureConstantAlgebra};
use crate::error::Error;
use crate::pipeline::{
    explicit_isomorphism, generate_instance, verify, Instance, IsomorphismCertificate, PipelineOptions, Witness,
};

#[derive(Parser, Debug)]
#[command(name = "amitsur", version, about = "Explicit isomorphisms of split central simple algebras over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a conjugated matrix algebra.
    Gen {
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Present an algebra as A(F, c).
    Present(#[command(flatten)] Common),
    /// Trivialise the cocycle of a presentation and build the certificate.
    Trivialize(#[command(flatten)] Common),
    /// Run the whole pipeline on an algebra.
    Split(#[command(flatten)] Common),
    /// Re-check a certificate.
    Verify(#[command(flatten)] Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `split-u` or `none`; by default a witness in the input is used.
    #[arg(long)]
    pub witness: Option<Witness>,
    #[arg(long, default_value = "1000000")]
    pub max_disc: BigInt,
    #[arg(long)]
    pub max_tries: Option<usize>,
    /// Input file; stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Use the 12 log^2 |disc| factor base for class groups.
    #[arg(long)]
    pub bach_bound: bool,
}

/// Output of `present`, input of `trivialize`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentedAlgebra {
    #[serde(rename = "A")]
    pub algebra: StructureConstantAlgebra,
    pub presentation: AmitsurPresentation,
}

/// Failure of a CLI run: an exit code and a JSON error object.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub tag: String,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotACoboundary(_) => 2,
            Error::UnsupportedDegree(_) | Error::DiscriminantTooLarge { .. } => 3,
            Error::Malformed(_) => 4,
            _ => 1,
        };
        Failure { code, tag: e.tag().into(), message: e.to_string() }
    }
}

fn malformed(message: impl ToString) -> Failure {
    Failure { code: 4, tag: "Malformed".into(), message: message.to_string() }
}

impl Common {
    fn pipeline_options(&self, witness_u: Option<Vec<crate::exact::Rational>>) -> PipelineOptions {
        let witness_u = match self.witness {
            Some(Witness::None) => None,
            _ => witness_u,
        };
        PipelineOptions {
            present: PresentOptions { max_tries: self.max_tries, max_disc: self.max_disc.clone(), witness_u },
            arithmetic: ArithmeticOptions { max_disc: self.max_disc.clone(), bach_bound: self.bach_bound },
        }
    }

    fn read_input(&self) -> Result<String, Failure> {
        match &self.input {
            Some(p) => fs::read_to_string(p).map_err(|e| malformed(format!("{}: {e}", p.display()))),
            None => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(malformed)?;
                Ok(s)
            }
        }
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self) -> Result<T, Failure> {
        serde_json::from_str(&self.read_input()?).map_err(malformed)
    }
}

/// Accepts an [`Instance`] or a bare algebra.
fn parse_instance(common: &Common) -> Result<Instance, Failure> {
    let v: serde_json::Value = common.parse()?;
    if v.get("A").is_some() {
        serde_json::from_value(v).map_err(malformed)
    } else {
        let algebra = serde_json::from_value(v).map_err(malformed)?;
        Ok(Instance { algebra, witness_u: None })
    }
}

/// Run a parsed command: the JSON result and the exit code.
pub fn execute(command: &Command) -> (serde_json::Value, i32, Option<PathBuf>) {
    let common = match command {
        Command::Gen { common, .. } => common,
        Command::Present(c) | Command::Trivialize(c) | Command::Split(c) | Command::Verify(c) => c,
    };
    let result: Result<(serde_json::Value, i32), Failure> = (|| {
        let seed = RngSeed(common.seed);
        match command {
            Command::Gen { degree, common } => {
                let inst = generate_instance(*degree, seed, common.witness.unwrap_or_default())?;
                Ok((serde_json::to_value(inst).map_err(malformed)?, 0))
            }
            Command::Present(c) => {
                let inst = parse_instance(c)?;
                let opts = c.pipeline_options(inst.witness_u);
                let presentation = present(&inst.algebra, seed, &opts.present)?;
                let out = PresentedAlgebra { algebra: inst.algebra, presentation };
                Ok((serde_json::to_value(out).map_err(malformed)?, 0))
            }
            Command::Trivialize(c) => {
                let p: PresentedAlgebra = c.parse()?;
                let opts = c.pipeline_options(None);
                let d = p.presentation.algebra().degree();
                let trivialisation = trivialize_coboundary(&p.presentation.c, &opts.arithmetic)?;
                let cert = IsomorphismCertificate::assemble(p.algebra, d, p.presentation, trivialisation)?;
                Ok((serde_json::to_value(cert).map_err(malformed)?, 0))
            }
            Command::Split(c) => {
                let inst = parse_instance(c)?;
                let opts = c.pipeline_options(inst.witness_u);
                let cert = explicit_isomorphism(&inst.algebra, seed, &opts)?;
                Ok((serde_json::to_value(cert).map_err(malformed)?, 0))
            }
            Command::Verify(c) => {
                let cert: IsomorphismCertificate = c.parse()?;
                let report = verify(&cert);
                let code = if report.passed { 0 } else { 1 };
                Ok((serde_json::to_value(report).map_err(malformed)?, code))
            }
        }
    })();
    match result {
        Ok((v, code)) => (v, code, common.output.clone()),
        Err(f) => (json!({ "error": f.tag, "message": f.message }), f.code, common.output.clone()),
    }
}

fn emit(value: &serde_json::Value, output: Option<&PathBuf>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

/// Parse `argv`, run, write the JSON result and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            let v = json!({ "error": "Malformed", "message": e.kind().to_string() });
            let _ = emit(&v, None);
            return 4;
        }
    };
    let (value, code, output) = execute(&cli.command);
    if let Some(msg) = value.get("message").and_then(|m| m.as_str()) {
        eprintln!("amitsur: {msg}");
    }
    if let Err(e) = emit(&value, output.as_ref()) {
        eprintln!("amitsur: cannot write output: {e}");
        return 1;
    }
    code
}
