use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use planar_lnd::automorphism::{rectify_coordinate, AutError};
use planar_lnd::derivation::{
    is_locally_nilpotent, kernel_generator, rentschler_decompose, DerivationError, LndVerdict, NotLndReason,
};
use planar_lnd::expr::{parse_poly, ParseError};
use planar_lnd::lie::{lie_closure, lower_central_series, rank_over_a, DEFAULT_DIM_CAP};
use planar_lnd::triangular::{is_triangular, triangularize, verify_conjugation, TriangularError};
use planar_lnd::{Derivation, PolyAut};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{read_theta, AutJson, DerivationJson, ResultDocument, Status, SCHEMA_VERSION};
use crate::fuzz::{run_fuzz, FuzzConfig};

#[derive(Debug, Parser)]
#[command(name = "planar-lnd", version, about = "Locally nilpotent derivations of Q[x, y]")]
pub struct Cli {
    /// Print a JSON result document instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Record wall-clock time in the JSON document
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket [D1, D2] of D1 = P1 ∂x + Q1 ∂y and D2 = P2 ∂x + Q2 ∂y
    Bracket {
        #[arg(allow_hyphen_values = true)]
        p1: String,
        #[arg(allow_hyphen_values = true)]
        q1: String,
        #[arg(allow_hyphen_values = true)]
        p2: String,
        #[arg(allow_hyphen_values = true)]
        q2: String,
    },
    /// D(H) for D = P ∂x + Q ∂y
    Apply {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
        #[arg(allow_hyphen_values = true)]
        h: String,
    },
    /// Divergence P_x + Q_y
    Div {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Jacobian derivation -F_y ∂x + F_x ∂y
    Jac {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Decide local nilpotency, with a certificate
    IsLnd {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Least-degree kernel generator by exact linear algebra
    Kernel {
        /// Largest degree searched
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Write D as f'(a) D_a
    Rentschler {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Find an automorphism sending A to x
    Rectify {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Lie algebra generated by derivations given as P Q pairs
    Closure {
        /// Stop once the dimension exceeds this
        #[arg(long, default_value_t = DEFAULT_DIM_CAP)]
        cap: usize,
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true, value_name = "P Q")]
        fields: Vec<String>,
    },
    /// Conjugate the generated Lie algebra into u2
    Triangularize {
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true, value_name = "P Q")]
        fields: Vec<String>,
    },
    /// Check that the automorphism in THETA_FILE conjugates the generated
    /// Lie algebra into u2
    Verify {
        theta_file: PathBuf,
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true, value_name = "P Q")]
        fields: Vec<String>,
    },
    /// Randomized end-to-end and identity checks
    Fuzz {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        cases: usize,
        /// Degree bound for random polynomials
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        #[arg(long, default_value_t = 4)]
        max_generators: usize,
        /// Add a derivation that is not locally nilpotent to every case
        #[arg(long)]
        inject_non_lnd: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("argument {index}: {source}")]
    Parse { index: usize, source: ParseError },
    #[error("{0}")]
    Internal(String),
}

/// A finished command: text for humans and the JSON payload.
#[derive(Debug)]
pub struct Report {
    pub status: Status,
    pub text: String,
    pub payload: Value,
}

impl Report {
    fn ok(text: String, payload: Value) -> Self {
        Report {
            status: Status::Ok,
            text,
            payload,
        }
    }

    fn negative(text: String, payload: Value) -> Self {
        Report {
            status: Status::Negative,
            text,
            payload,
        }
    }
}

/// Process output: exit code and the two streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Ok => 0,
        Status::Negative => 2,
        Status::Error => 1,
    }
}

/// Runs the command line `argv` (including the program name).
pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let started = Instant::now();
    let result = execute(&cli.command);
    let elapsed = started.elapsed().as_secs_f64() * 1000.0;
    let echo: Vec<String> = argv.iter().skip(1).cloned().collect();
    let (status, text, payload, err) = match result {
        Ok(r) => (r.status, r.text, r.payload, None),
        Err(e) => {
            let msg = e.to_string();
            (Status::Error, String::new(), json!({ "error": msg }), Some(msg))
        }
    };
    let code = exit_code(status);
    if cli.json {
        let doc = ResultDocument {
            schema_version: SCHEMA_VERSION,
            command: echo,
            status,
            payload,
            timing_ms: cli.timing.then_some(elapsed),
        };
        let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
        out.push('\n');
        return Outcome {
            code,
            stdout: out,
            stderr: err.map(|m| format!("error: {m}\n")).unwrap_or_default(),
        };
    }
    match err {
        Some(m) => Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn poly_arg(text: &str, index: usize) -> Result<planar_lnd::Poly, CliError> {
    parse_poly(text).map_err(|source| CliError::Parse { index, source })
}

fn derivation_arg(p: &str, q: &str, index: usize) -> Result<Derivation, CliError> {
    Ok(Derivation::new(poly_arg(p, index)?, poly_arg(q, index + 1)?))
}

fn derivation_list(fields: &[String]) -> Result<Vec<Derivation>, CliError> {
    if fields.len() % 2 != 0 {
        return Err(CliError::Usage(format!(
            "derivations are given as P Q pairs, got {} polynomials",
            fields.len()
        )));
    }
    fields
        .chunks(2)
        .enumerate()
        .map(|(i, pq)| derivation_arg(&pq[0], &pq[1], 2 * i + 1))
        .collect()
}

fn djson(d: &Derivation) -> Value {
    serde_json::to_value(DerivationJson::from(d)).expect("serializable")
}

fn aut_json(theta: &PolyAut) -> Value {
    serde_json::to_value(AutJson::from(theta)).expect("serializable")
}

fn chain_text(theta: &PolyAut) -> String {
    let mut out = String::new();
    if theta.chain().is_empty() {
        out.push_str("  identity\n");
    }
    for e in theta.chain() {
        out.push_str(&format!("  {e}\n"));
    }
    out.push_str(&format!("theta(x) = {}\ntheta(y) = {}\n", theta.image_x(), theta.image_y()));
    out
}

/// Certificate of a locally nilpotent derivation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub a: String,
    pub f: String,
    pub mate: String,
    pub index_x: usize,
    pub index_y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum ReasonJson {
    NonzeroDivergence { divergence: String },
    EigenvectorFound { h: String, c: String },
    KernelGeneratorNotCoordinate { a: String },
}

fn reason_json(d: &Derivation, r: &NotLndReason) -> ReasonJson {
    match r {
        NotLndReason::NonzeroDivergence => ReasonJson::NonzeroDivergence {
            divergence: d.divergence().to_string(),
        },
        NotLndReason::EigenvectorFound { h, c } => ReasonJson::EigenvectorFound {
            h: h.to_string(),
            c: c.to_string(),
        },
        NotLndReason::KernelGeneratorNotCoordinate { a } => ReasonJson::KernelGeneratorNotCoordinate { a: a.to_string() },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LndPayload {
    pub lnd: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<ReasonJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosurePayload {
    pub dimension: usize,
    pub rounds: usize,
    pub capped: bool,
    pub basis: Vec<DerivationJson>,
    pub rank: usize,
    /// Entries `(i, j, k, c)`: `[b_i, b_j]` has coefficient `c` on `b_k`,
    /// for `i < j` and `c ≠ 0`.
    pub structure: Option<Vec<(usize, usize, usize, String)>>,
    pub series: Option<SeriesJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub dims: Vec<usize>,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularPayload {
    pub case: String,
    pub theta: AutJson,
    pub basis: Vec<DerivationJson>,
    pub images: Vec<DerivationJson>,
    pub verified: bool,
}

fn lnd_report(d: &Derivation) -> Report {
    match is_locally_nilpotent(d) {
        LndVerdict::Lnd { form, index_x, index_y } => {
            let cert = CertificateJson {
                a: form.a.to_string(),
                f: form.f.to_string(),
                mate: form.witness_mate.to_string(),
                index_x,
                index_y,
            };
            let text = format!(
                "LND\na = {}\nf = {}\nmate = {}\nindex on x = {}\nindex on y = {}\n",
                cert.a, cert.f, cert.mate, index_x, index_y
            );
            let payload = LndPayload {
                lnd: true,
                certificate: Some(cert),
                refutation: None,
            };
            Report::ok(text, serde_json::to_value(payload).expect("serializable"))
        }
        LndVerdict::NotLnd(reason) => {
            let payload = LndPayload {
                lnd: false,
                certificate: None,
                refutation: Some(reason_json(d, &reason)),
            };
            Report::negative(
                format!("not LND: {reason}\n"),
                serde_json::to_value(payload).expect("serializable"),
            )
        }
    }
}

fn closure_report(gens: &[Derivation], cap: usize) -> Report {
    let r = lie_closure(gens, cap);
    let rank = rank_over_a(&r.basis);
    let structure = r.basis.structure().map(|s| {
        let mut entries = Vec::new();
        for (i, row) in s.iter().enumerate() {
            for (j, coords) in row.iter().enumerate().skip(i + 1) {
                for (k, c) in coords.iter().enumerate() {
                    if *c != num_traits::Zero::zero() {
                        entries.push((i, j, k, c.to_string()));
                    }
                }
            }
        }
        entries
    });
    let series = lower_central_series(&r.basis).ok().map(|s| SeriesJson {
        dims: s.dims,
        nilpotent: s.nilpotent,
    });
    let mut text = format!(
        "dimension {}{}\nrounds {}\nrank {}\n",
        r.dimension,
        if r.capped { " (capped)" } else { "" },
        r.rounds,
        rank
    );
    for (i, b) in r.basis.basis().iter().enumerate() {
        text.push_str(&format!("b{i} = {b}\n"));
    }
    if let Some(s) = &series {
        text.push_str(&format!(
            "lower central series {:?}, {}\n",
            s.dims,
            if s.nilpotent { "nilpotent" } else { "not nilpotent" }
        ));
    }
    let payload = ClosurePayload {
        dimension: r.dimension,
        rounds: r.rounds,
        capped: r.capped,
        basis: r.basis.basis().iter().map(DerivationJson::from).collect(),
        rank,
        structure,
        series,
    };
    Report::ok(text, serde_json::to_value(payload).expect("serializable"))
}

fn triangularize_report(gens: &[Derivation]) -> Result<Report, CliError> {
    match triangularize(gens) {
        Ok(r) => {
            let mut text = format!("case {}\ntheta:\n{}", r.case, chain_text(&r.theta));
            for (b, e) in r.closure.basis().iter().zip(&r.images) {
                text.push_str(&format!("{b}  ->  {e}\n"));
            }
            text.push_str(&format!("verified {}\n", r.verified));
            let payload = TriangularPayload {
                case: r.case.to_string(),
                theta: AutJson::from(&r.theta),
                basis: r.closure.basis().iter().map(DerivationJson::from).collect(),
                images: r.images.iter().map(DerivationJson::from).collect(),
                verified: r.verified,
            };
            let value = serde_json::to_value(payload).expect("serializable");
            Ok(if r.verified {
                Report::ok(text, value)
            } else {
                Report::negative(text, value)
            })
        }
        Err(TriangularError::NotLocallyNilpotent { witness, reason }) => Ok(Report::negative(
            format!("not LND: {witness}: {reason}\n"),
            json!({
                "witness": djson(&witness),
                "refutation": serde_json::to_value(reason_json(&witness, &reason)).expect("serializable"),
            }),
        )),
        Err(e) => Err(CliError::Internal(e.to_string())),
    }
}

fn verify_report(path: &PathBuf, gens: &[Derivation]) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let theta = read_theta(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let closure = lie_closure(gens, DEFAULT_DIM_CAP);
    if closure.capped {
        return Ok(Report::negative(
            "false (closure exceeded the dimension cap)\n".to_string(),
            json!({ "verified": false, "capped": true }),
        ));
    }
    let basis = closure.basis.basis();
    let images: Vec<Derivation> = basis.iter().map(|d| theta.conjugate(d)).collect();
    let ok = verify_conjugation(&theta, basis, &images);
    let mut out = String::new();
    for e in &images {
        out.push_str(&format!("{e}{}\n", if is_triangular(e) { "" } else { "  (not triangular)" }));
    }
    out.push_str(&format!("{ok}\n"));
    let payload = json!({
        "verified": ok,
        "images": images.iter().map(djson).collect::<Vec<_>>(),
    });
    Ok(if ok { Report::ok(out, payload) } else { Report::negative(out, payload) })
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Bracket { p1, q1, p2, q2 } => {
            let d1 = derivation_arg(p1, q1, 1)?;
            let d2 = derivation_arg(p2, q2, 3)?;
            let b = d1.bracket(&d2);
            Ok(Report::ok(format!("{b}\n"), json!({ "derivation": djson(&b) })))
        }
        Command::Apply { p, q, h } => {
            let d = derivation_arg(p, q, 1)?;
            let r = d.apply(&poly_arg(h, 3)?);
            Ok(Report::ok(format!("{r}\n"), json!({ "result": r.to_string() })))
        }
        Command::Div { p, q } => {
            let r = derivation_arg(p, q, 1)?.divergence();
            Ok(Report::ok(format!("{r}\n"), json!({ "divergence": r.to_string() })))
        }
        Command::Jac { f } => {
            let d = Derivation::jacobian(&poly_arg(f, 1)?);
            Ok(Report::ok(format!("{d}\n"), json!({ "derivation": djson(&d) })))
        }
        Command::IsLnd { p, q } => Ok(lnd_report(&derivation_arg(p, q, 1)?)),
        Command::Kernel { bound, p, q } => {
            let d = derivation_arg(p, q, 1)?;
            match kernel_generator(&d, *bound) {
                Ok(a) => Ok(Report::ok(format!("{a}\n"), json!({ "generator": a.to_string() }))),
                Err(e @ (DerivationError::NoKernelElementWithinBound { .. } | DerivationError::ZeroDerivation)) => {
                    Ok(Report::negative(format!("{e}\n"), json!({ "generator": null, "detail": e.to_string() })))
                }
                Err(e) => Err(CliError::Internal(e.to_string())),
            }
        }
        Command::Rentschler { p, q } => {
            let d = derivation_arg(p, q, 1)?;
            match rentschler_decompose(&d) {
                Ok(form) => {
                    let text = format!("a = {}\nf = {}\nmate = {}\n", form.a, form.f, form.witness_mate);
                    Ok(Report::ok(
                        text,
                        json!({ "a": form.a.to_string(), "f": form.f.to_string(), "mate": form.witness_mate.to_string() }),
                    ))
                }
                Err(DerivationError::NotLocallyNilpotent(reason)) => Ok(Report::negative(
                    format!("not LND: {reason}\n"),
                    json!({ "refutation": serde_json::to_value(reason_json(&d, &reason)).expect("serializable") }),
                )),
                Err(e) => Err(CliError::Internal(e.to_string())),
            }
        }
        Command::Rectify { a } => {
            let a = poly_arg(a, 1)?;
            match rectify_coordinate(&a) {
                Ok(theta) => {
                    let mate = theta.inverse_image_y();
                    let text = format!("theta:\n{}mate = {mate}\n", chain_text(&theta));
                    Ok(Report::ok(text, json!({ "theta": aut_json(&theta), "mate": mate.to_string() })))
                }
                Err(AutError::NotCoordinate { stage, witness }) => Ok(Report::negative(
                    format!("not a coordinate: {stage}: {witness}\n"),
                    json!({ "stage": stage.to_string(), "witness": witness.to_string() }),
                )),
                Err(AutError::ConstantInput) => Ok(Report::negative(
                    "not a coordinate: constant\n".to_string(),
                    json!({ "stage": "constant", "witness": a.to_string() }),
                )),
                Err(e) => Err(CliError::Internal(e.to_string())),
            }
        }
        Command::Closure { cap, fields } => {
            if *cap == 0 {
                return Err(CliError::Usage("--cap must be at least 1".to_string()));
            }
            Ok(closure_report(&derivation_list(fields)?, *cap))
        }
        Command::Triangularize { fields } => triangularize_report(&derivation_list(fields)?),
        Command::Verify { theta_file, fields } => verify_report(theta_file, &derivation_list(fields)?),
        Command::Fuzz {
            seed,
            cases,
            max_degree,
            max_generators,
            inject_non_lnd,
        } => {
            if *max_generators == 0 {
                return Err(CliError::Usage("--max-generators must be at least 1".to_string()));
            }
            let config = FuzzConfig {
                seed: *seed,
                cases: *cases,
                max_degree: *max_degree,
                max_generators: *max_generators,
                inject_non_lnd: *inject_non_lnd,
            };
            let report = run_fuzz(&config);
            let text = report.summary();
            let status = if report.failed == 0 { Status::Ok } else { Status::Negative };
            Ok(Report {
                status,
                text,
                payload: serde_json::to_value(&report).expect("serializable"),
            })
        }
    }
}
