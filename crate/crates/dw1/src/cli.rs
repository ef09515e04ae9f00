//! Command-line front end: presets, projections, certificates, witness
//! packs, function-space operations, and the fuzz suites, with table, TSV
//! and JSON output.
//!
//! Output is deterministic for a fixed argument list; every report embeds
//! the tool version and a hash of the resolved configuration. The process
//! exits nonzero when a checked invariant is refuted.

use crate::enclosure::Enclosure;
use crate::fspace::{
    continuity_experiment, fnorm, metric_projection_set, minimizing_sequence_probe,
    property_s_residuals, shrinking_bump_family, two_point_preset, ConstraintClass, FNormSpec,
    GridFunction, GridSpace, ProjectionOptions,
};
use crate::fuzz;
use crate::norms::{lorentz_norm, variation_cumulative};
use crate::projection::{project_exact, strong_unicity_estimate, CoupledInstance};
use crate::selection::{
    admits_continuous_selection, build_witnesses, find_certificate_finite,
    oscillation_subsequence, preset, verify_chebyshev_certificate, verify_separation,
    ChebyshevVerdict, PresetId, SelectionVerdict,
};
use crate::seq::format_rational;
use crate::weight::{Continuation, Weight};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(
    name = "dw1",
    version,
    about = "Best approximations in weighted-rearrangement sequence spaces and discretized function spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the bundled example instances and tabulate their verdicts.
    Examples(ExamplesArgs),
    /// Best-approximation interval for a finite instance in d(w,1).
    Project(ProjectArgs),
    /// Certificate and continuous-selection checks for a preset.
    Selection(SelectionArgs),
    /// Witness packs and separation checks for an oscillating preset.
    Witness(WitnessArgs),
    /// Function-space operations on JSON grids and norm specs.
    Fspace(FspaceArgs),
    /// Projection-continuity experiments.
    Continuity(ContinuityArgs),
    /// Seeded randomized invariant suites.
    Fuzz(FuzzArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Emit tab-separated rows instead of a table.
    #[arg(long, global = true, conflicts_with = "json")]
    tsv: bool,
    /// Output destination: a path, or one of `table`, `tsv`, `json` to
    /// force that format on stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args, Debug)]
struct ExamplesArgs {
    /// Bundled example set to run.
    #[arg(long, default_value = "section5")]
    paper: String,
    /// Tolerance for the certificate checks.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Horizon for the independent recomputation of stored variation
    /// sequences.
    #[arg(long, default_value_t = 100_000)]
    trunc: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    /// Target sequence, comma-separated rationals.
    #[arg(long, default_value = "3,1")]
    x: String,
    /// Direction sequence spanning the one-dimensional subspace.
    #[arg(long, default_value = "1,-2")]
    y: String,
    /// Weight: `harmonic`, `power:<alpha>`, or `table:<r1,r2,...>`.
    #[arg(long, default_value = "harmonic")]
    weight: String,
    /// Tolerance for the certified route (used when the weight has no
    /// exact values).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SelectionArgs {
    /// Preset name: example1..example4.
    #[arg(long)]
    preset: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Horizon for the variation-consistency recomputation.
    #[arg(long, default_value_t = 10_000)]
    trunc: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct WitnessArgs {
    /// Preset name; needs an oscillating target (example3).
    #[arg(long, default_value = "example3")]
    preset: String,
    /// Number of witness pairs.
    #[arg(long, default_value_t = 4)]
    count: usize,
    /// Tolerance for the separation check.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FspaceArgs {
    #[command(subcommand)]
    op: FspaceOp,
}

#[derive(Subcommand, Debug)]
enum FspaceOp {
    /// Evaluate the F-norm of a grid function.
    Norm(FspaceNormArgs),
    /// Additive-splitting residuals on the shrinking-bump family.
    PropertyS(FspacePropertySArgs),
    /// Metric projection onto a constraint class.
    Project(FspaceProjectArgs),
    /// Continuity experiment from JSON inputs.
    Continuity(FspaceContinuityArgs),
}

#[derive(Args, Debug)]
struct FspaceNormArgs {
    /// Norm specification (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Grid (JSON).
    #[arg(long)]
    grid: PathBuf,
    /// Function values (JSON).
    #[arg(long)]
    function: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FspacePropertySArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Smallest grid refinement exponent (2^k cells).
    #[arg(long, default_value_t = 6)]
    min_exp: u32,
    /// Largest grid refinement exponent.
    #[arg(long, default_value_t = 12)]
    max_exp: u32,
    /// Exponent applied to the norms in the residual.
    #[arg(long, default_value_t = 1.0)]
    p_exp: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FspaceProjectArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    grid: PathBuf,
    #[arg(long)]
    function: PathBuf,
    /// Constraint class (JSON).
    #[arg(long)]
    class: PathBuf,
    /// Also run the descent probe and report its agreement.
    #[arg(long)]
    probe: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FspaceContinuityArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    grid: PathBuf,
    #[arg(long)]
    function: PathBuf,
    #[arg(long)]
    class: PathBuf,
    /// Perturbed targets, JSON array of value arrays.
    #[arg(long)]
    perturbations: PathBuf,
    /// Radii for the ball-intersection criterion.
    #[arg(long, default_value = "0.25,0.5,1.0")]
    eps: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ContinuityPreset {
    TwoPoint,
}

#[derive(Args, Debug)]
struct ContinuityArgs {
    /// Bundled experiment.
    #[arg(long, value_enum, default_value_t = ContinuityPreset::TwoPoint)]
    preset: ContinuityPreset,
    /// Number of perturbations.
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Cases per randomized suite.
    #[arg(long, default_value_t = 2000)]
    cases: usize,
    #[command(flatten)]
    output: OutputArgs,
}

// --- report plumbing ---------------------------------------------------------------

#[derive(Copy, Clone, PartialEq, Eq)]
enum Format {
    Table,
    Tsv,
    Json,
}

struct Report {
    title: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: serde_json::Value,
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn resolve_output(args: &OutputArgs) -> (Format, Option<PathBuf>) {
    let mut format = if args.json {
        Format::Json
    } else if args.tsv {
        Format::Tsv
    } else {
        Format::Table
    };
    let path = match args.out.as_deref() {
        Some("table") => {
            format = Format::Table;
            None
        }
        Some("tsv") => {
            format = Format::Tsv;
            None
        }
        Some("json") => {
            format = Format::Json;
            None
        }
        Some(p) => Some(PathBuf::from(p)),
        None => None,
    };
    (format, path)
}

fn emit(report: &Report, args: &OutputArgs, config_hash: u64) -> Result<()> {
    let (format, path) = resolve_output(args);
    let version = env!("CARGO_PKG_VERSION");
    let mut buf = Vec::new();
    match format {
        Format::Json => {
            let envelope = json!({
                "tool": {
                    "name": "dw1",
                    "version": version,
                    "config_hash": format!("{config_hash:016x}"),
                },
                "title": report.title,
                "columns": report.columns,
                "report": report.json,
            });
            writeln!(buf, "{}", serde_json::to_string_pretty(&envelope)?)?;
        }
        Format::Tsv => {
            writeln!(buf, "# dw1 {version} config {config_hash:016x}")?;
            writeln!(buf, "{}", report.columns.join("\t"))?;
            for row in &report.rows {
                writeln!(buf, "{}", row.join("\t"))?;
            }
        }
        Format::Table => {
            writeln!(buf, "# dw1 {version} config {config_hash:016x}")?;
            writeln!(buf, "# {}", report.title)?;
            let mut widths: Vec<usize> = report.columns.iter().map(|c| c.len()).collect();
            for row in &report.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let header: Vec<String> = report
                .columns
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            writeln!(buf, "{}", header.join("  ").trim_end())?;
            for row in &report.rows {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                writeln!(buf, "{}", cells.join("  ").trim_end())?;
            }
        }
    }
    match path {
        Some(p) => std::fs::write(p, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn fmt_enc(e: &Enclosure) -> String {
    format!("{:.9e}±{:.1e}", e.value, e.error)
}

fn fmt_enc_opt(e: &Option<Enclosure>) -> String {
    e.as_ref().map(|v| fmt_enc(v)).unwrap_or_else(|| "-".into())
}

// --- argument parsing helpers ---------------------------------------------------------

fn parse_rationals(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            BigRational::from_str(p)
                .or_else(|_| {
                    // Accept decimal literals with a short mantissa.
                    p.parse::<f64>().map_err(|_| ()).and_then(|v| {
                        BigRational::from_float(v).ok_or(())
                    })
                })
                .map_err(|_| Error::InvalidSeq(format!("cannot parse rational '{p}'")))
        })
        .collect()
}

fn parse_weight(s: &str) -> Result<Weight> {
    if s == "harmonic" {
        return Ok(Weight::harmonic());
    }
    if let Some(alpha) = s.strip_prefix("power:") {
        let a: f64 = alpha
            .parse()
            .map_err(|_| Error::InvalidWeight(format!("bad exponent '{alpha}'")))?;
        return Weight::power(a);
    }
    if let Some(vals) = s.strip_prefix("table:") {
        return Weight::table(parse_rationals(vals)?, Continuation::Harmonic);
    }
    Err(Error::InvalidWeight(format!(
        "unknown weight '{s}' (harmonic | power:<alpha> | table:<r1,r2,...>)"
    )))
}

fn parse_preset(s: &str) -> Result<PresetId> {
    PresetId::parse(s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

// --- dispatch --------------------------------------------------------------------------

/// Parses the process arguments, runs the command, and returns the exit
/// code: 0 on success, 1 when an invariant was refuted, 2 on errors.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let config_hash = fnv1a64(format!("{:?}", cli.command).as_bytes());
    match cli.command {
        Command::Examples(a) => run_examples(a, config_hash),
        Command::Project(a) => run_project(a, config_hash),
        Command::Selection(a) => run_selection(a, config_hash),
        Command::Witness(a) => run_witness(a, config_hash),
        Command::Fspace(a) => match a.op {
            FspaceOp::Norm(n) => run_fspace_norm(n, config_hash),
            FspaceOp::PropertyS(p) => run_fspace_property_s(p, config_hash),
            FspaceOp::Project(p) => run_fspace_project(p, config_hash),
            FspaceOp::Continuity(c) => run_fspace_continuity(c, config_hash),
        },
        Command::Continuity(a) => run_continuity(a, config_hash),
        Command::Fuzz(a) => run_fuzz(a, config_hash),
    }
}

// --- examples ---------------------------------------------------------------------------

/// Independent recheck of a stored cumulative-variation sequence: rebuild
/// it from the permuted target at log-spaced indices and report the largest
/// center discrepancy.
fn variation_agreement(
    cert: &crate::selection::SelectionCertificate,
    trunc: u64,
) -> Result<Option<f64>> {
    let upto = trunc.clamp(8, 200_000);
    let anchor = upto.saturating_mul(2).max(upto + 8);
    let fresh = variation_cumulative(&cert.permuted, upto, anchor)?;
    let mut j = 1u64;
    let mut worst: f64 = 0.0;
    while j <= upto {
        let a = fresh.value(j);
        let b = cert.variation.value_enc(j);
        let gap = (a.value - b.value).abs();
        if !a.overlaps(&b.widen(1e-12)) {
            return Err(Error::InvalidCertificate(format!(
                "stored variation disagrees with recomputation at {j}: {} vs {}",
                a.value, b.value
            )));
        }
        worst = worst.max(gap);
        j = if j < 16 { j + 1 } else { j * 2 };
    }
    Ok(Some(worst))
}

fn run_examples(a: ExamplesArgs, config_hash: u64) -> Result<i32> {
    if a.paper != "section5" {
        return Err(Error::Other(format!(
            "unknown example set '{}' (bundled: section5)",
            a.paper
        )));
    }
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut refuted = false;
    for id in PresetId::ALL {
        let p = preset(id)?;
        let (cert_col, selection_col, alignment_col, norm_col, note) = match &p.certificate {
            Some(cert) => {
                let report = verify_chebyshev_certificate(&p.y, &p.weight, cert, a.tol)?;
                let selection = admits_continuous_selection(&p.y, Some(cert))?;
                if report.verdict == ChebyshevVerdict::Refuted {
                    refuted = true;
                }
                let agree = variation_agreement(cert, a.trunc)?;
                let verdict_str = match report.verdict {
                    ChebyshevVerdict::CertifiedNonChebyshev => "non-chebyshev",
                    ChebyshevVerdict::Refuted => "refuted",
                    ChebyshevVerdict::Inconclusive => "inconclusive",
                };
                let sel_str = selection_verdict_str(&selection.verdict);
                items.push(json!({
                    "preset": id.name(),
                    "summary": p.summary,
                    "certificate": report.to_json(),
                    "selection": selection.to_json(),
                    "variation_recheck": agree,
                }));
                (
                    verdict_str.to_string(),
                    sel_str,
                    fmt_enc_opt(&report.alignment),
                    fmt_enc_opt(&report.base_norm),
                    agree
                        .map(|g| format!("variation recheck ≤ {g:.1e}"))
                        .unwrap_or_default(),
                )
            }
            None => {
                // Finite target: exhaustive certificate search plus the
                // strong-unicity estimate on the bundled probe point.
                let y_fin = p.y.head_exact()?;
                let found = find_certificate_finite(&y_fin, &p.weight, None)?;
                let selection = admits_continuous_selection(&p.y, None)?;
                let norm = lorentz_norm(&p.y, &p.weight, a.tol)?;
                let mut note = String::new();
                if let Some(probe) = &p.unicity_probe {
                    let est = strong_unicity_estimate(probe, &y_fin, &p.weight)?;
                    note = format!(
                        "strong unicity rate {} at probe",
                        format_rational(&est.rate)
                    );
                    items.push(json!({
                        "preset": id.name(),
                        "summary": p.summary,
                        "certificate": null,
                        "selection": selection.to_json(),
                        "unicity_rate": format_rational(&est.rate),
                    }));
                }
                (
                    match found {
                        Some(_) => "found".to_string(),
                        None => "none (search exhausted)".to_string(),
                    },
                    selection_verdict_str(&selection.verdict),
                    "-".to_string(),
                    fmt_enc(&norm),
                    note,
                )
            }
        };
        rows.push(vec![
            id.name().to_string(),
            cert_col,
            selection_col,
            alignment_col,
            norm_col,
            note,
        ]);
    }
    let report = Report {
        title: "bundled examples",
        columns: vec![
            "example",
            "certificate",
            "selection",
            "alignment",
            "norm",
            "note",
        ],
        rows,
        json: serde_json::Value::Array(items),
    };
    emit(&report, &a.output, config_hash)?;
    Ok(if refuted { 1 } else { 0 })
}

fn selection_verdict_str(v: &SelectionVerdict) -> String {
    match v {
        SelectionVerdict::Yes { monotone_from } => match monotone_from {
            Some(n) => format!("yes (monotone from {n})"),
            None => "yes".to_string(),
        },
        SelectionVerdict::No { oscillation } => {
            format!("no (oscillation at {:?})", &oscillation)
        }
        SelectionVerdict::Unknown => "unknown".to_string(),
    }
}

// --- project -----------------------------------------------------------------------------

fn run_project(a: ProjectArgs, config_hash: u64) -> Result<i32> {
    let x = parse_rationals(&a.x)?;
    let y = parse_rationals(&a.y)?;
    let w = parse_weight(&a.weight)?;
    let (rows, payload) = if w.is_exact() {
        let p = project_exact(&x, &y, &w)?;
        let rows = vec![vec![
            format_rational(&p.lo),
            format_rational(&p.hi),
            format_rational(&p.dist),
            if p.is_singleton() { "yes" } else { "no" }.to_string(),
        ]];
        let payload = json!({
            "lo": format_rational(&p.lo),
            "hi": format_rational(&p.hi),
            "dist": format_rational(&p.dist),
            "singleton": p.is_singleton(),
            "route": "exact",
        });
        (rows, payload)
    } else {
        let xs = crate::Seq::from_rationals(x);
        let ys = crate::Seq::from_rationals(y);
        let inst = CoupledInstance::from_finite(&xs, &ys, &w)?;
        // A coefficient window that certainly contains every minimizer:
        // beyond ‖x‖/‖y(1)w(1)‖-style bounds h grows, so a generous span
        // suffices for the certified search.
        let m = inst.minimize(-64.0, 64.0, a.tol)?;
        let rows = vec![vec![
            format!("{:.12}", m.lo),
            format!("{:.12}", m.hi),
            fmt_enc(&m.dist),
            "certified".to_string(),
        ]];
        let payload = json!({
            "lo": m.lo,
            "hi": m.hi,
            "dist": { "value": m.dist.value, "error": m.dist.error },
            "route": "certified",
        });
        (rows, payload)
    };
    let report = Report {
        title: "best-approximation interval",
        columns: vec!["lo", "hi", "dist", "singleton"],
        rows,
        json: payload,
    };
    emit(&report, &a.output, config_hash)?;
    Ok(0)
}

// --- selection ----------------------------------------------------------------------------

fn run_selection(a: SelectionArgs, config_hash: u64) -> Result<i32> {
    let id = parse_preset(&a.preset)?;
    let p = preset(id)?;
    let mut rows = Vec::new();
    let mut refuted = false;
    let payload = match &p.certificate {
        Some(cert) => {
            let report = verify_chebyshev_certificate(&p.y, &p.weight, cert, a.tol)?;
            let report_alt = verify_chebyshev_certificate(&p.y, &p.weight_alt, cert, a.tol)?;
            let selection = admits_continuous_selection(&p.y, Some(cert))?;
            refuted = report.verdict == ChebyshevVerdict::Refuted;
            let agree = variation_agreement(cert, a.trunc)?;
            for c in &report.checks {
                rows.push(vec![
                    c.name.to_string(),
                    format!("{:?}", c.outcome).to_lowercase(),
                    c.detail.clone(),
                ]);
            }
            rows.push(vec![
                "selection".into(),
                selection_verdict_str(&selection.verdict),
                selection.reason.clone(),
            ]);
            if let Some(g) = agree {
                rows.push(vec![
                    "variation-recheck".into(),
                    "pass".into(),
                    format!("max deviation {g:.1e} up to {}", a.trunc),
                ]);
            }
            json!({
                "preset": id.name(),
                "summary": p.summary,
                "certificate": report.to_json(),
                "certificate_alt_weight": report_alt.to_json(),
                "selection": selection.to_json(),
            })
        }
        None => {
            let y_fin = p.y.head_exact()?;
            let found = find_certificate_finite(&y_fin, &p.weight, None)?;
            let selection = admits_continuous_selection(&p.y, None)?;
            rows.push(vec![
                "certificate-search".into(),
                match &found {
                    Some(_) => "found".into(),
                    None => "exhausted".into(),
                },
                "balanced sign/permutation assignment over the support".into(),
            ]);
            rows.push(vec![
                "selection".into(),
                selection_verdict_str(&selection.verdict),
                selection.reason.clone(),
            ]);
            json!({
                "preset": id.name(),
                "summary": p.summary,
                "certificate_found": found.is_some(),
                "selection": selection.to_json(),
            })
        }
    };
    let report = Report {
        title: "certificate and selection checks",
        columns: vec!["check", "outcome", "detail"],
        rows,
        json: payload,
    };
    emit(&report, &a.output, config_hash)?;
    Ok(if refuted { 1 } else { 0 })
}

// --- witness -------------------------------------------------------------------------------

fn run_witness(a: WitnessArgs, config_hash: u64) -> Result<i32> {
    let id = parse_preset(&a.preset)?;
    let p = preset(id)?;
    let cert = p.certificate.as_ref().ok_or_else(|| {
        Error::InvalidCertificate(format!("preset {} has no certificate", id.name()))
    })?;
    if a.count == 0 {
        return Err(Error::Other("need at least one witness pair".into()));
    }
    let needed = 2 * a.count + 1;
    let indices = oscillation_subsequence(&cert.permuted, needed)?
        .ok_or_else(|| Error::Other("target has no oscillation run to witness".into()))?;
    let pack = build_witnesses(cert, &p.weight, &indices, a.count)?;
    let separation = verify_separation(&pack, cert, &p.weight, a.tol)?;

    let mut rows = Vec::new();
    for (point, check) in pack
        .minus_points
        .iter()
        .chain(pack.plus_points.iter())
        .zip(separation.checks.iter())
    {
        rows.push(vec![
            point.index.to_string(),
            point.claimed_side.as_str().to_string(),
            fmt_enc(&point.rearranged_gap),
            fmt_enc(&point.displacement_bound),
            check.outcome.to_string(),
        ]);
    }
    let holds = separation.holds;
    let report = Report {
        title: "witness packs and separation",
        columns: vec!["index", "side", "rearranged_gap", "gap_bound", "separation"],
        rows,
        json: json!({
            "preset": id.name(),
            "pack": pack.report(),
            "separation": separation.to_json(),
        }),
    };
    emit(&report, &a.output, config_hash)?;
    Ok(if holds { 0 } else { 1 })
}

// --- fspace --------------------------------------------------------------------------------

fn run_fspace_norm(a: FspaceNormArgs, config_hash: u64) -> Result<i32> {
    let spec: FNormSpec = read_json(&a.spec)?;
    let grid: GridSpace = read_json(&a.grid)?;
    let f: GridFunction = read_json(&a.function)?;
    let value = fnorm(&f, &grid, &spec)?;
    let report = Report {
        title: "F-norm value",
        columns: vec!["norm"],
        rows: vec![vec![format!("{value:.12}")]],
        json: json!({ "norm": value }),
    };
    emit(&report, &a.output, config_hash)?;
    Ok(0)
}

fn run_fspace_property_s(a: FspacePropertySArgs, config_hash: u64) -> Result<i32> {
    if a.min_exp < 1 || a.max_exp < a.min_exp || a.max_exp > 16 {
        return Err(Error::Other("need 1 ≤ min-exp ≤ max-exp ≤ 16".into()));
    }
    let spec: FNormSpec = read_json(&a.spec)?;
    let family = shrinking_bump_family(a.min_exp..=a.max_exp)?;
    let residuals = property_s_residuals(&family, &spec, a.p_exp)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut monotone = true;
    let mut prev: Option<f64> = None;
    for (inst, r) in family.iter().zip(&residuals) {
        let ratio = r.abs() / inst.bump_measure;
        rows.push(vec![
            inst.grid.cells().to_string(),
            format!("{:.6e}", inst.bump_measure),
            format!("{r:.6e}"),
            format!("{ratio:.6}"),
        ]);
        if let Some(p) = prev {
            if r.abs() >= p {
                monotone = false;
            }
        }
        prev = Some(r.abs());
        items.push(json!({
            "cells": inst.grid.cells(),
            "bump_measure": inst.bump_measure,
            "residual": r,
            "ratio": ratio,
        }));
    }
    let report = Report {
        title: "additive-splitting residuals on the shrinking-bump family",
        columns: vec!["cells", "bump_measure", "residual", "residual/bump"],
        rows,
        json: json!({ "rows": items, "residuals_decreasing": monotone }),
    };
    emit(&report, &a.output, config_hash)?;
    Ok(if monotone { 0 } else { 1 })
}

fn run_fspace_project(a: FspaceProjectArgs, config_hash: u64) -> Result<i32> {
    let spec: FNormSpec = read_json(&a.spec)?;
    let grid: GridSpace = read_json(&a.grid)?;
    let f: GridFunction = read_json(&a.function)?;
    let class: ConstraintClass = read_json(&a.class)?;
    let opts = ProjectionOptions::default();
    let set = metric_projection_set(&f, &class, &grid, &spec, &opts)?;
    let mut json_payload = json!({
        "dist": set.dist,
        "quantized_dist": set.quantized_dist,
        "best": set.best,
        "minimizers": set.minimizers,
    });
    let mut rows = vec![vec![
        format!("{:.12}", set.dist),
        format!("{:.12}", set.quantized_dist),
        format!("{:?}", set.best),
        set.minimizers.len().to_string(),
    ]];
    if a.probe {
        let probe = minimizing_sequence_probe(&f, &class, &grid, &spec, 200_000)?;
        let gap = (probe.value - set.dist).abs();
        json_payload["probe"] = json!({
            "value": probe.value,
            "converged": probe.converged,
            "agreement_gap": gap,
        });
        rows.push(vec![
            format!("{:.12}", probe.value),
            "-".into(),
            format!("{:?}", probe.limit),
            format!("probe gap {gap:.2e}"),
        ]);
    }
    let report = Report {
        title: "metric projection",
        columns: vec!["dist", "quantized_dist", "best", "minimizers"],
        rows,
        json: json_payload,
    };
    emit(&report, &a.output, config_hash)?;
    Ok(0)
}

fn parse_eps(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Other(format!("bad radius '{p}'")))
        })
        .collect()
}

fn continuity_report_rows(report: &crate::fspace::ContinuityReport) -> Vec<Vec<String>> {
    report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                format!("{:.9}", r.forward_sup),
                format!("{:.9}", r.reverse_sup),
                format!("{:.9}", r.hausdorff),
            ]
        })
        .collect()
}

fn run_fspace_continuity(a: FspaceContinuityArgs, config_hash: u64) -> Result<i32> {
    let spec: FNormSpec = read_json(&a.spec)?;
    let grid: GridSpace = read_json(&a.grid)?;
    let f: GridFunction = read_json(&a.function)?;
    let class: ConstraintClass = read_json(&a.class)?;
    let perturbations: Vec<GridFunction> = read_json::<Vec<Vec<f64>>>(&a.perturbations)?
        .into_iter()
        .map(GridFunction::new)
        .collect();
    let eps = parse_eps(&a.eps)?;
    let report = continuity_experiment(
        &f,
        &perturbations,
        &class,
        &grid,
        &spec,
        &eps,
        &ProjectionOptions::default(),
    )?;
    let out = Report {
        title: "projection continuity",
        columns: vec!["n", "forward_sup", "reverse_sup", "hausdorff"],
        rows: continuity_report_rows(&report),
        json: serde_json::to_value(&report)?,
    };
    emit(&out, &a.output, config_hash)?;
    Ok(0)
}

fn run_continuity(a: ContinuityArgs, config_hash: u64) -> Result<i32> {
    match a.preset {
        ContinuityPreset::TwoPoint => {
            let p = two_point_preset(a.count)?;
            let report = continuity_experiment(
                &p.f,
                &p.perturbations,
                &p.class,
                &p.grid,
                &p.spec,
                &p.eps_grid,
                &ProjectionOptions::default(),
            )?;
            let out = Report {
                title: "two-point discontinuity witness",
                columns: vec!["n", "forward_sup", "reverse_sup", "hausdorff"],
                rows: continuity_report_rows(&report),
                json: serde_json::to_value(&report)?,
            };
            emit(&out, &a.output, config_hash)?;
            Ok(0)
        }
    }
}

// --- fuzz ----------------------------------------------------------------------------------

fn run_fuzz(a: FuzzArgs, config_hash: u64) -> Result<i32> {
    let reports = fuzz::run_all(a.seed, a.cases)?;
    let mut rows = Vec::new();
    let mut items = Vec::new();
    let mut failed = false;
    for r in &reports {
        failed |= !r.passed();
        rows.push(vec![
            r.suite.to_string(),
            r.cases.to_string(),
            if r.passed() { "pass" } else { "FAIL" }.to_string(),
            r.failures.first().cloned().unwrap_or_default(),
        ]);
        items.push(json!({
            "suite": r.suite,
            "cases": r.cases,
            "passed": r.passed(),
            "failures": r.failures,
        }));
    }
    let report = Report {
        title: "randomized invariant suites",
        columns: vec!["suite", "cases", "outcome", "first_failure"],
        rows,
        json: serde_json::Value::Array(items),
    };
    emit(&report, &a.output, config_hash)?;
    Ok(if failed { 1 } else { 0 })
}
