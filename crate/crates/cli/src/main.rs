use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vbgpd::error::Error;
use vbgpd::harness::fixtures::write_fixtures;
use vbgpd::harness::gen::Bounds;
use vbgpd::harness::instance::{convert, recorded_witness, Instance, InstanceFile, Kind};
use vbgpd::harness::mutate::fuzz;
use vbgpd::harness::pipeline::{roundtrip, Pipeline};
use vbgpd::report::Report;

#[derive(Parser)]
#[command(name = "vbgpd", version, about = "Validate, convert and stress-test representations up to homotopy, weak representations and VB-groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the validator of an instance file's kind, and check any recorded witness.
    Validate {
        file: PathBuf,
        /// Expected kind; the file's own tag must agree.
        #[arg(long)]
        kind: Option<Kind>,
        #[command(flatten)]
        out: Output,
    },
    /// Convert an instance along one edge: ruth↔wrep, ruth→vb, wrep→vb, vb→wrep.
    Convert {
        file: PathBuf,
        #[arg(long)]
        from: Option<Kind>,
        #[arg(long)]
        to: Kind,
        /// Write here instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run a round-trip pipeline on random instances or on a seed file.
    Roundtrip {
        /// Seed instance used by every lap in place of a random one.
        file: Option<PathBuf>,
        #[arg(long)]
        pipeline: Pipeline,
        #[command(flatten)]
        gen: Generation,
        #[command(flatten)]
        out: Output,
    },
    /// Mutate random valid instances and check that every breaking mutation is flagged.
    Fuzz {
        #[command(flatten)]
        gen: Generation,
        #[command(flatten)]
        out: Output,
    },
    /// Print a saved JSON report; the exit code follows its verdict.
    Report {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Write the canonical fixture set.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Generation {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    max_objects: usize,
    #[arg(long, default_value_t = 12)]
    max_arrows: usize,
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
}

impl Generation {
    fn bounds(&self) -> Result<Bounds, Error> {
        if self.max_objects == 0 || self.max_arrows < self.max_objects {
            return Err(Error::Usage("need 1 <= max-objects <= max-arrows".into()));
        }
        Ok(Bounds { max_objects: self.max_objects, max_arrows: self.max_arrows, max_dim: self.max_dim })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(InstanceFile, Instance), Error> {
    let f = InstanceFile::parse(&read(path)?)?;
    let i = Instance::from_file(&f)?;
    Ok((f, i))
}

fn expect_kind(found: Kind, want: Option<Kind>) -> Result<(), Error> {
    match want {
        Some(k) if k != found => Err(Error::Usage(format!("file holds a {found} instance, not a {k}"))),
        _ => Ok(()),
    }
}

fn report_json(r: &Report) -> String {
    let mut v = serde_json::to_value(r).expect("reports serialize");
    v.as_object_mut().expect("reports are objects").insert("verdict".into(), r.verdict().into());
    serde_json::to_string_pretty(&v).expect("reports serialize")
}

fn emit(mut r: Report, out: &Output, start: Instant) -> ExitCode {
    if out.timing {
        r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    match out.format {
        Format::Text => print!("{}", r.to_text()),
        Format::Json => println!("{}", report_json(&r)),
    }
    if r.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let start = Instant::now();
    match cli.command {
        Command::Validate { file, kind, out } => {
            let (f, i) = load(&file)?;
            expect_kind(f.kind, kind)?;
            let mut r = i.validate();
            if let Some(w) = recorded_witness(&f)? {
                r.merge_prefixed("witness", w.validate()?);
            }
            Ok(emit(r, &out, start))
        }
        Command::Convert { file, from, to, output } => {
            let (f, i) = load(&file)?;
            expect_kind(f.kind, from)?;
            let json = convert(&i, to)?.to_json();
            match output {
                Some(p) => std::fs::write(&p, json).map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?,
                None => print!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Roundtrip { file, pipeline, gen, out } => {
            let seed = file.map(|p| load(&p)).transpose()?.map(|(_, i)| i.to_seed()).transpose()?;
            let r = roundtrip(pipeline, gen.seed, gen.trials, gen.bounds()?, seed.as_ref())?;
            Ok(emit(r, &out, start))
        }
        Command::Fuzz { gen, out } => Ok(emit(fuzz(gen.seed, gen.trials, gen.bounds()?), &out, start)),
        Command::Report { file, out } => {
            let r: Report = serde_json::from_str(&read(&file)?).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(emit(r, &Output { format: out.format, timing: false }, start))
        }
        Command::Fixtures { out } => {
            for p in write_fixtures(&out)? {
                println!("{}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("vbgpd: {e}");
            match e {
                Error::Usage(_) | Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
