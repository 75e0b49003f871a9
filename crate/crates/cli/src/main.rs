use std::io::Write;
use std::process::ExitCode;

use bgg_cli::{envelope, error_envelope, exit_code, run, Command, JobSpec};
use bgg_core::BggError;
use clap::{Args, Parser, Subcommand};

/// Exact computations for relative BGG complexes in type A.
#[derive(Parser)]
#[command(name = "bgg", version)]
struct Cli {
    /// Plain-text output instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Write the report to a file.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Run a job given as `command key=value ...`.
    #[arg(long)]
    job: Option<String>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args)]
struct Alg {
    /// Algebra, e.g. A3.
    algebra: String,
}

#[derive(Args)]
struct Pair {
    /// Algebra, e.g. A3.
    algebra: String,
    /// Crossed nodes of p, e.g. 1 or - for none.
    #[arg(long, default_value = "-", allow_hyphen_values = true)]
    p: String,
    /// Crossed nodes of q, e.g. 1,2.
    #[arg(long)]
    q: String,
}

#[derive(Args)]
struct Labelled {
    #[command(flatten)]
    pair: Pair,
    /// Coefficient weight in fundamental coordinates, e.g. 0,1/2,0.
    #[arg(long, allow_hyphen_values = true)]
    hw: String,
}

#[derive(Args)]
struct Operator {
    #[command(flatten)]
    lab: Labelled,
    #[arg(long, default_value_t = 0)]
    degree: u64,
    /// Seed for the filtration-raising perturbation; omitted means none.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Sub {
    /// Root system data.
    Rootsys(Alg),
    /// Graded relative Hasse quotient, optionally with affine images.
    Hasse {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        hw: Option<String>,
    },
    /// Affine Weyl orbit of a weight, or the action of one word.
    Orbit {
        #[command(flatten)]
        alg: Alg,
        #[arg(long, allow_hyphen_values = true)]
        hw: String,
        /// Letters of a Weyl word, e.g. 1,2.
        #[arg(long)]
        word: Option<String>,
    },
    /// Chain complex, Hodge dimensions and homology.
    Homology(Labelled),
    /// Laplacian blocks and spectra per filtration degree.
    Spectrum(Labelled),
    /// Laplacian eigenvalues against Casimir differences.
    KostantCheck {
        #[command(flatten)]
        lab: Labelled,
        /// trace or killing
        #[arg(long)]
        scale: Option<String>,
    },
    /// Homology of q₊ against the iterated homology through p₊.
    Kunneth(Labelled),
    /// Splitting operator and its verdicts.
    Splitting(Operator),
    /// Inverse operator Q and its verdicts.
    Qop(Operator),
    /// Compressed operator and sequence checks.
    Compressed {
        #[command(flatten)]
        op: Operator,
        /// model, conjugated or independent
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Insertion stability of a submodule of forms.
    Insertion {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        hw: Option<String>,
        #[arg(long)]
        degree: Option<u64>,
        /// Crossed nodes of the intermediate parabolic.
        #[arg(long)]
        inner: Option<String>,
        /// Preset for E: full, zero, wedge-inner, wedge-mixed, wedge-inner-q.
        #[arg(long)]
        e: Option<String>,
        /// Preset for F.
        #[arg(long)]
        f: Option<String>,
    },
    /// Path geometry sequence for (w, k, l).
    Pathgeom {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        w: String,
        #[arg(long, default_value_t = 0)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        l: u64,
        /// Cross-check against the homology engine.
        #[arg(long)]
        validate: bool,
    },
    /// Runs the acceptance criteria.
    Selftest {
        /// none, flip-action-sign or killing-scale
        #[arg(long)]
        mutate: Option<String>,
        /// Comma-separated criterion numbers.
        #[arg(long)]
        criteria: Option<String>,
    },
}

fn tokens(cmd: Command) -> Vec<String> {
    vec![cmd.name().to_string()]
}

fn push(t: &mut Vec<String>, key: &str, value: Option<impl ToString>) {
    if let Some(v) = value {
        t.push(format!("{key}={}", v.to_string()));
    }
}

fn pair_tokens(t: &mut Vec<String>, p: &Pair) {
    push(t, "algebra", Some(&p.algebra));
    push(t, "p", Some(&p.p));
    push(t, "q", Some(&p.q));
}

fn lab_tokens(t: &mut Vec<String>, l: &Labelled) {
    pair_tokens(t, &l.pair);
    push(t, "hw", Some(&l.hw));
}

fn op_tokens(t: &mut Vec<String>, o: &Operator) {
    lab_tokens(t, &o.lab);
    push(t, "degree", Some(o.degree));
    push(t, "seed", o.seed);
}

/// Builds the job line; values are validated by [`JobSpec::parse`].
fn job_line(sub: &Sub) -> Result<String, BggError> {
    let mut t;
    match sub {
        Sub::Rootsys(a) => {
            t = tokens(Command::Rootsys);
            push(&mut t, "algebra", Some(&a.algebra));
        }
        Sub::Hasse { pair, hw } => {
            t = tokens(Command::Hasse);
            pair_tokens(&mut t, pair);
            push(&mut t, "hw", hw.as_ref());
        }
        Sub::Orbit { alg, hw, word } => {
            t = tokens(Command::Orbit);
            push(&mut t, "algebra", Some(&alg.algebra));
            push(&mut t, "hw", Some(hw));
            push(&mut t, "word", word.as_ref());
        }
        Sub::Homology(l) | Sub::Spectrum(l) | Sub::Kunneth(l) => {
            t = tokens(match sub {
                Sub::Homology(_) => Command::Homology,
                Sub::Spectrum(_) => Command::Spectrum,
                _ => Command::Kunneth,
            });
            lab_tokens(&mut t, l);
        }
        Sub::KostantCheck { lab, scale } => {
            t = tokens(Command::KostantCheck);
            lab_tokens(&mut t, lab);
            push(&mut t, "scale", scale.as_ref());
        }
        Sub::Splitting(o) | Sub::Qop(o) => {
            t = tokens(if matches!(sub, Sub::Splitting(_)) { Command::Splitting } else { Command::Qop });
            op_tokens(&mut t, o);
        }
        Sub::Compressed { op, sequence } => {
            t = tokens(Command::Compressed);
            op_tokens(&mut t, op);
            push(&mut t, "sequence", sequence.as_ref());
        }
        Sub::Insertion { pair, hw, degree, inner, e, f } => {
            t = tokens(Command::Insertion);
            pair_tokens(&mut t, pair);
            push(&mut t, "hw", hw.as_ref());
            push(&mut t, "degree", *degree);
            push(&mut t, "inner", inner.as_ref());
            push(&mut t, "e", e.as_ref());
            push(&mut t, "f", f.as_ref());
        }
        Sub::Pathgeom { w, k, l, validate } => {
            t = tokens(Command::Pathgeom);
            push(&mut t, "w", Some(w));
            push(&mut t, "k", Some(k));
            push(&mut t, "l", Some(l));
            push(&mut t, "validate", Some(validate));
        }
        Sub::Selftest { mutate, criteria } => {
            t = tokens(Command::Selftest);
            push(&mut t, "mutate", mutate.as_ref());
            push(&mut t, "criteria", criteria.as_ref());
        }
    }
    if t.iter().any(|x| x.chars().any(char::is_whitespace)) {
        return Err(BggError::Parse("arguments must not contain whitespace".into()));
    }
    Ok(t.join(" "))
}

fn emit(text: &str, out: Option<&str>) -> Result<(), BggError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| BggError::Internal(format!("writing {path}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(BggError::Internal(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn fail(e: &BggError) -> ExitCode {
    let text = serde_json::to_string_pretty(&error_envelope(e)).expect("json");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(exit_code(e) as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => return fail(&BggError::Parse(e.to_string().trim().to_string())),
    };
    let line = match (&cli.job, &cli.command) {
        (Some(_), Some(_)) => return fail(&BggError::Parse("--job cannot be combined with a subcommand".into())),
        (Some(j), None) => j.clone(),
        (None, Some(sub)) => match job_line(sub) {
            Ok(l) => l,
            Err(e) => return fail(&e),
        },
        (None, None) => return fail(&BggError::Parse("no command given; see --help".into())),
    };
    let mut job = match JobSpec::parse(&line) {
        Ok(j) => j,
        Err(e) => return fail(&e),
    };
    if cli.out.is_some() {
        job.output = cli.out.clone();
    }
    let out = match run(&job) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    for (id, secs, limit) in &out.timings {
        eprintln!("criterion {id:>2}: {secs:.3}s (limit {limit}s)");
    }
    let text = if cli.plain {
        out.plain.clone()
    } else {
        serde_json::to_string_pretty(&envelope(&job, &out)).expect("json") + "\n"
    };
    if let Err(e) = emit(&text, job.output.as_deref()) {
        return fail(&e);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}
