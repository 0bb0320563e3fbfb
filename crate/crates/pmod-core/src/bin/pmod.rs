//! Command-line surface over the persistence-module library.
//!
//! Every invocation emits a line-oriented report (stable field order,
//! bit-exact rationals) describing what ran, on which inputs (by hash), and
//! with what verdicts. Derived artifacts go to `--output` or to stdout;
//! when the artifact uses stdout, the report moves to stderr so pipelines
//! stay clean. Exit codes: 0 success/accepted, 1 rejected or existence
//! false, 2 input/parameter error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use pmod_core::barcode::{decompose, from_barcode, Barcode};
use pmod_core::bridge::{compose_fg, compose_gf, discretize, realify};
use pmod_core::error::Error;
use pmod_core::format::{
    parse_barcode, parse_certificate, parse_module, parse_presentation, serialize_barcode,
    serialize_certificate, serialize_module, serialize_presentation,
};
use pmod_core::generate::{random_barcode, random_raw_module};
use pmod_core::graded::{graded_to_nat, nat_to_graded};
use pmod_core::interleave::{
    bottleneck_distance, brute_force_interleaving_exists, canonical_fg_interleaving,
    canonical_gf_interleaving, canonical_pixel_interleaving, canonical_shift_interleaving,
    equivalence_report, promote_weak_to_strong, verify_strong, verify_weak, CertificateKind,
    InterleavingCertificate, Verdict, DEFAULT_BRUTE_BUDGET,
};
use pmod_core::module::{IndexKind, TameModule};
use pmod_core::rational::Rational;

#[derive(Parser)]
#[command(
    name = "pmod",
    about = "Exact persistence modules: barcodes, graded presentations, interleaving certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; `-` reads standard input.
    input: String,
    /// Where to write the derived artifact; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a module into its barcode.
    Decompose(IoArgs),
    /// Realize a barcode as a direct sum of interval modules.
    Compose {
        #[command(flatten)]
        io: IoArgs,
        /// Field modulus (default: $PMOD_FIELD or 2).
        #[arg(long)]
        field: Option<u64>,
    },
    /// Shift a module: evaluation at q becomes evaluation at p+q.
    Translate {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        p: String,
    },
    /// Make a module constant on the lattice cells [x0+kε, x0+(k+1)ε).
    Pixelize {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        x0: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Sample a real module at (n+1)·ε into a natural module.
    Discretize {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        epsilon: String,
    },
    /// Spread a natural module out as x ↦ N(⌊x/ε⌋+1).
    Realify {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        epsilon: String,
    },
    /// Discretize then realify (real → real composite).
    Gf {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        epsilon: String,
    },
    /// Realify then discretize (natural → natural composite).
    Fg {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long)]
        epsilon: String,
    },
    /// Present a natural module by graded generators and relations.
    ToGraded(IoArgs),
    /// Realize a graded presentation as a natural module.
    FromGraded {
        #[command(flatten)]
        io: IoArgs,
        /// Degree horizon; defaults to the largest degree + 1.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Build a canonical interleaving certificate.
    Canonical {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum)]
        kind: CanonicalKind,
        #[arg(long)]
        epsilon: String,
        /// Basepoint for the pixel construction (default 0).
        #[arg(long)]
        x0: Option<String>,
    },
    /// Verify a certificate; dispatches strong/weak by its header.
    Check {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Promote a verified weak certificate to a strong one at twice the shift.
    Promote {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Distance between two artifacts (modules or barcodes).
    Distance {
        a: String,
        b: String,
        #[arg(long, value_enum)]
        method: DistanceMethod,
        /// Shift to test (bruteforce only).
        #[arg(long)]
        epsilon: Option<String>,
        /// Search budget for the brute-force method.
        #[arg(long, default_value_t = DEFAULT_BRUTE_BUDGET)]
        budget: u64,
    },
    /// Run the full equivalence pipeline for one module at one scale.
    Report {
        input: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Deterministic random instance generation.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        bars: usize,
        #[arg(long, default_value_t = 10)]
        max_endpoint: u64,
        #[arg(long, value_enum, default_value_t = KindArg::Real)]
        kind: KindArg,
        /// Field modulus (default: $PMOD_FIELD or 2).
        #[arg(long)]
        field: Option<u64>,
        /// Emit the interval-sum module instead of the barcode.
        #[arg(long)]
        module: bool,
        /// Emit a raw random module (random matrices) instead.
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = 5)]
        max_grid: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Allow infinite bars.
        #[arg(long)]
        allow_inf: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CanonicalKind {
    Shift,
    Pixel,
    Gf,
    Fg,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceMethod {
    Bottleneck,
    Bruteforce,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Real,
    Nat,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Real => IndexKind::Real,
            KindArg::Nat => IndexKind::Nat,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

// ------------------------------------------------------------------ report

struct Report {
    lines: Vec<String>,
    started: Instant,
}

impl Report {
    fn new(operation: &str) -> Self {
        Report {
            lines: vec!["report v1".into(), format!("operation {operation}")],
            started: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("param {key} {value}"));
    }

    fn input(&mut self, role: &str, name: &str, content: &str) {
        let digest = Sha256::digest(content.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            hex.push_str(&format!("{byte:02x}"));
        }
        self.lines.push(format!("input {role} sha256 {hex} {name}"));
    }

    fn output(&mut self, target: &str) {
        self.lines.push(format!("output {target}"));
    }

    fn result(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("result {key} {value}"));
    }

    fn verdict(&mut self, name: &str, verdict: &Verdict) {
        let state = if verdict.accepted() {
            "accepted"
        } else {
            "rejected"
        };
        self.lines.push(format!("verdict {name} {state}"));
        if let Some(w) = verdict.witness() {
            self.lines
                .push(format!("witness check {}", w.check.as_str()));
            self.lines.push(format!("witness point {}", w.point));
            self.lines
                .push(format!("witness left {}", matrix_text(&w.left)));
            self.lines
                .push(format!("witness right {}", matrix_text(&w.right)));
        }
    }

    fn render(self) -> String {
        let mut out = self.lines.join("\n");
        out.push_str(&format!(
            "\ntime_ms {}\n",
            self.started.elapsed().as_millis()
        ));
        out
    }
}

fn matrix_text(m: &pmod_core::matrix::Matrix) -> String {
    let mut body = String::new();
    for i in 0..m.rows() {
        if i > 0 {
            body.push_str("; ");
        }
        for j in 0..m.cols() {
            if j > 0 {
                body.push(' ');
            }
            body.push_str(&m.at(i, j).to_string());
        }
    }
    format!("{}x{} [{body}]", m.rows(), m.cols())
}

// ------------------------------------------------------------------- io

fn read_input(name: &str) -> Result<String, Error> {
    if name == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(name)?)
    }
}

fn parse_rational(text: &str) -> Result<Rational, Error> {
    text.parse()
}

fn default_field(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("PMOD_FIELD")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(2)
}

/// Writes the artifact and the report to the right streams.
fn emit(artifact: &str, output: Option<&Path>, report: Report) -> Result<i32, Error> {
    match output {
        Some(path) => {
            std::fs::write(path, artifact)?;
            print!("{}", report.render());
        }
        None => {
            print!("{artifact}");
            eprint!("{}", report.render());
        }
    }
    Ok(0)
}

fn load_module(name: &str, report: &mut Report) -> Result<TameModule, Error> {
    let text = read_input(name)?;
    report.input("module", name, &text);
    parse_module(&text)
}

// Modules and barcodes are both accepted where a barcode is wanted.
fn load_barcode_like(name: &str, role: &str, report: &mut Report) -> Result<Barcode, Error> {
    let text = read_input(name)?;
    report.input(role, name, &text);
    if text.starts_with("barcode") {
        parse_barcode(&text)
    } else {
        decompose(&parse_module(&text)?)
    }
}

fn load_module_like(
    name: &str,
    role: &str,
    field: u64,
    report: &mut Report,
) -> Result<TameModule, Error> {
    let text = read_input(name)?;
    report.input(role, name, &text);
    if text.starts_with("barcode") {
        from_barcode(&parse_barcode(&text)?, field)
    } else {
        parse_module(&text)
    }
}

fn load_certificate(path: &Path, report: &mut Report) -> Result<InterleavingCertificate, Error> {
    let text = std::fs::read_to_string(path)?;
    report.input("cert", &path.display().to_string(), &text);
    parse_certificate(&text, path.parent())
}

// ------------------------------------------------------------------- run

fn transform(
    op: &str,
    io: &IoArgs,
    params: &[(&str, &dyn std::fmt::Display)],
    apply: impl FnOnce(&TameModule) -> Result<String, Error>,
) -> Result<i32, Error> {
    let mut report = Report::new(op);
    for (k, v) in params {
        report.param(k, v);
    }
    let module = load_module(&io.input, &mut report)?;
    let artifact = apply(&module)?;
    report.output(
        io.output
            .as_deref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "-".into())
            .as_str(),
    );
    emit(&artifact, io.output.as_deref(), report)
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Decompose(io) => transform("decompose", &io, &[], |m| {
            Ok(serialize_barcode(&decompose(m)?))
        }),
        Command::Compose { io, field } => {
            let p = default_field(field);
            let mut report = Report::new("compose");
            report.param("field", p);
            let text = read_input(&io.input)?;
            report.input("barcode", &io.input, &text);
            let barcode = parse_barcode(&text)?;
            let module = from_barcode(&barcode, p)?;
            report.output(
                io.output
                    .as_deref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
                    .as_str(),
            );
            emit(&serialize_module(&module), io.output.as_deref(), report)
        }
        Command::Translate { io, p } => {
            let shift = parse_rational(&p)?;
            transform("translate", &io, &[("p", &shift)], |m| {
                Ok(serialize_module(&m.translate(&shift)?))
            })
        }
        Command::Pixelize { io, x0, epsilon } => {
            let x0 = parse_rational(&x0)?;
            let eps = parse_rational(&epsilon)?;
            transform("pixelize", &io, &[("x0", &x0), ("epsilon", &eps)], |m| {
                Ok(serialize_module(&m.pixelize(&x0, &eps)?))
            })
        }
        Command::Discretize { io, epsilon } => {
            let eps = parse_rational(&epsilon)?;
            transform("discretize", &io, &[("epsilon", &eps)], |m| {
                Ok(serialize_module(&discretize(m, &eps)?))
            })
        }
        Command::Realify { io, epsilon } => {
            let eps = parse_rational(&epsilon)?;
            transform("realify", &io, &[("epsilon", &eps)], |m| {
                Ok(serialize_module(&realify(m, &eps)?))
            })
        }
        Command::Gf { io, epsilon } => {
            let eps = parse_rational(&epsilon)?;
            transform("gf", &io, &[("epsilon", &eps)], |m| {
                Ok(serialize_module(&compose_gf(m, &eps)?))
            })
        }
        Command::Fg { io, epsilon } => {
            let eps = parse_rational(&epsilon)?;
            transform("fg", &io, &[("epsilon", &eps)], |m| {
                Ok(serialize_module(&compose_fg(m, &eps)?))
            })
        }
        Command::ToGraded(io) => transform("to-graded", &io, &[], |m| {
            Ok(serialize_presentation(&nat_to_graded(m)?))
        }),
        Command::FromGraded { io, horizon } => {
            let mut report = Report::new("from-graded");
            let text = read_input(&io.input)?;
            report.input("presentation", &io.input, &text);
            let pres = parse_presentation(&text)?;
            let horizon = horizon.unwrap_or_else(|| pres.max_degree() + 1);
            report.param("horizon", horizon);
            let module = graded_to_nat(&pres, horizon)?;
            report.output(
                io.output
                    .as_deref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
                    .as_str(),
            );
            emit(&serialize_module(&module), io.output.as_deref(), report)
        }
        Command::Canonical {
            io,
            kind,
            epsilon,
            x0,
        } => {
            let eps = parse_rational(&epsilon)?;
            let x0 = match x0 {
                Some(text) => parse_rational(&text)?,
                None => Rational::zero(),
            };
            let mut report = Report::new("canonical");
            report.param(
                "kind",
                match kind {
                    CanonicalKind::Shift => "shift",
                    CanonicalKind::Pixel => "pixel",
                    CanonicalKind::Gf => "gf",
                    CanonicalKind::Fg => "fg",
                },
            );
            report.param("epsilon", &eps);
            if matches!(kind, CanonicalKind::Pixel) {
                report.param("x0", &x0);
            }
            let module = load_module(&io.input, &mut report)?;
            let cert = match kind {
                CanonicalKind::Shift => canonical_shift_interleaving(&module, &eps)?,
                CanonicalKind::Pixel => canonical_pixel_interleaving(&module, &x0, &eps)?,
                CanonicalKind::Gf => canonical_gf_interleaving(&module, &eps)?,
                CanonicalKind::Fg => canonical_fg_interleaving(&module, &eps)?,
            };
            report.output(
                io.output
                    .as_deref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
                    .as_str(),
            );
            emit(&serialize_certificate(&cert), io.output.as_deref(), report)
        }
        Command::Check { cert } => {
            let mut report = Report::new("check");
            let certificate = load_certificate(&cert, &mut report)?;
            report.param("epsilon", certificate.shift());
            let verdict = match certificate.kind() {
                CertificateKind::Strong => {
                    report.param("kind", "strong");
                    verify_strong(&certificate)?
                }
                CertificateKind::Weak(x0) => {
                    report.param("kind", format!("weak {x0}"));
                    verify_weak(&certificate)?
                }
            };
            let code = if verdict.accepted() { 0 } else { 1 };
            report.verdict("certificate", &verdict);
            print!("{}", report.render());
            Ok(code)
        }
        Command::Promote { cert, output } => {
            let mut report = Report::new("promote");
            let certificate = load_certificate(&cert, &mut report)?;
            report.param("epsilon", certificate.shift());
            let promoted = promote_weak_to_strong(&certificate)?;
            report.param("promoted-epsilon", promoted.shift());
            report.output(
                output
                    .as_deref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
                    .as_str(),
            );
            emit(&serialize_certificate(&promoted), output.as_deref(), report)
        }
        Command::Distance {
            a,
            b,
            method,
            epsilon,
            budget,
        } => match method {
            DistanceMethod::Bottleneck => {
                let mut report = Report::new("distance");
                report.param("method", "bottleneck");
                let left = load_barcode_like(&a, "left", &mut report)?;
                let right = load_barcode_like(&b, "right", &mut report)?;
                let d = bottleneck_distance(&left, &right)?;
                report.result("distance", &d);
                print!("{}", report.render());
                Ok(0)
            }
            DistanceMethod::Bruteforce => {
                let eps =
                    parse_rational(epsilon.as_deref().ok_or_else(|| {
                        Error::Param("bruteforce distance needs --epsilon".into())
                    })?)?;
                let mut report = Report::new("distance");
                report.param("method", "bruteforce");
                report.param("epsilon", &eps);
                report.param("budget", budget);
                let left = load_module_like(&a, "left", 2, &mut report)?;
                let right = load_module_like(&b, "right", 2, &mut report)?;
                let exists = brute_force_interleaving_exists(&left, &right, &eps, budget)?;
                report.result("exists", exists);
                print!("{}", report.render());
                Ok(if exists { 0 } else { 1 })
            }
        },
        Command::Report { input, epsilon } => {
            let eps = parse_rational(&epsilon)?;
            let mut report = Report::new("report");
            report.param("epsilon", &eps);
            let module = {
                let text = read_input(&input)?;
                report.input("module", &input, &text);
                parse_module(&text)?
            };
            report.param("side", module.kind().as_str());
            let eq = equivalence_report(&module, &eps)?;
            report.verdict("primary", &eq.primary);
            report.verdict("strong-informational", &eq.strong_informational);
            report.verdict("promoted", &eq.promoted);
            if let Some(se) = eq.shift_equality {
                report.result("shift-equality", se);
            }
            report.result("bottleneck", &eq.bottleneck);
            report.result("bottleneck-bound", &eq.bottleneck_bound);
            report.result("bottleneck-within-bound", eq.bottleneck_within_bound());
            let code = if eq.all_accepted() { 0 } else { 1 };
            print!("{}", report.render());
            Ok(code)
        }
        Command::Gen {
            seed,
            bars,
            max_endpoint,
            kind,
            field,
            module,
            raw,
            max_grid,
            max_dim,
            allow_inf,
            output,
        } => {
            let p = default_field(field);
            let kind: IndexKind = kind.into();
            let mut report = Report::new("gen");
            report.param("seed", seed);
            report.param("kind", kind.as_str());
            report.param("field", p);
            let artifact = if raw {
                report.param("shape", "raw");
                report.param("max-grid", max_grid);
                report.param("max-dim", max_dim);
                serialize_module(&random_raw_module(seed, max_grid, max_dim, kind, p)?)
            } else {
                report.param("bars", bars);
                report.param("max-endpoint", max_endpoint);
                report.param("allow-inf", allow_inf);
                let barcode = random_barcode(seed, bars, max_endpoint, kind, allow_inf);
                if module {
                    serialize_module(&from_barcode(&barcode, p)?)
                } else {
                    serialize_barcode(&barcode)
                }
            };
            report.output(
                output
                    .as_deref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".into())
                    .as_str(),
            );
            emit(&artifact, output.as_deref(), report)
        }
    }
}
