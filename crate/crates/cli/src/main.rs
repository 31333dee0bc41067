use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use holosim::algebra::scalar::{format_rational, parse_rational};
use holosim::algebra::{exact_kernel, Matrix, MatrixFamily, Rational, Scalar};
use holosim::cocycle::{assemble_global_similarity, verify_cocycle, verify_commutant_valued, verify_equivalence, CheckMode, MatrixCocycle};
use holosim::curves::{curve_similarity_obstruction, local_pair, obstruction_kernel, CurveSpec, JetSystem, ObstructionReport};
use holosim::json;
use holosim::smith::{smith_similarity, wasow_similarity, SimilarityGerm};
use holosim::sylvester::{build_intertwiner, LocusDescription};
use holosim::topology::sphere::{h_poly, h_star_poly, sphere_context};
use holosim::topology::{sphere_example, splitting_obstruction, winding_number, SampledLoop};
use holosim::Error;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "holosim", version, about = "Exact similarity analysis of polynomial matrix families")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel dimension and jump locus of Phi -> A*Phi - Phi*B.
    Intertwine {
        /// Matrix family A (JSON).
        a: PathBuf,
        /// Matrix family B; defaults to A (the commutant).
        b: Option<PathBuf>,
        /// Point at which to compute the kernel, e.g. `0` or `1/2,3`.
        #[arg(long)]
        at: Option<Point>,
    },
    /// Extend Phi to a holomorphic intertwiner via the local Smith form (one variable).
    Smith {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        at: Scalar,
        /// Value at the base point (JSON grid); defaults to the identity.
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Extend Phi to a holomorphic intertwiner where the kernel dimension is locally constant.
    Wasow {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        at: Point,
        #[arg(long)]
        phi: Option<PathBuf>,
    },
    /// Decide non-similarity of the local pair at the origin along a curve.
    Obstruct {
        #[arg(long, default_value_t = 0)]
        ell: u32,
        /// `full`, `cusp:P,Q` or `lines:S1,S2,...`.
        #[arg(long)]
        curve: CurveSpec,
        /// Truncation degree; defaults to a safe value for the curve.
        #[arg(long = "N", visible_alias = "truncation")]
        truncation: Option<u32>,
        /// Also tabulate this jet system (weighted-sum, intertwiner, commutant).
        #[arg(long)]
        system: Option<JetSystem>,
    },
    /// Reproduce the local counterexample: identities, ball estimate and obstructions.
    Counterexample {
        #[arg(long, default_value_t = 0)]
        ell: u32,
        /// Curves to test; defaults to the full germ, a cusp and 2l+5 lines.
        #[arg(long)]
        curve: Vec<CurveSpec>,
        /// Grid size for the floating-point ball estimate.
        #[arg(long, default_value_t = 12)]
        grid: usize,
    },
    /// Verify a cocycle, or assemble a global similarity from local ones.
    Cocycle {
        covering: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Validate the sphere example and compute splitting obstructions.
    Sphere {
        #[arg(long, default_value = "1/10", value_parser = parse_rational)]
        epsilon: Rational,
        #[arg(long, default_value_t = 0)]
        ell: u32,
        #[arg(long, value_enum)]
        obstruction: Option<Symbol>,
    },
    /// Winding number of a sampled loop given as `[[re, im], ...]`.
    Winding { samples: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Symbolic,
    Sampled,
}

impl From<Mode> for CheckMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Auto => CheckMode::Auto,
            Mode::Symbolic => CheckMode::Symbolic,
            Mode::Sampled => CheckMode::Sampled,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Symbol {
    /// h = x1 + i x2
    H,
    /// h* = x1 - i x2
    #[value(name = "hstar", alias = "h-star")]
    HStar,
}

#[derive(Clone, Debug)]
struct Point(Vec<Scalar>);

impl FromStr for Point {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',').map(|t| t.trim().parse::<Scalar>().map_err(|e| e.to_string())).collect::<Result<_, _>>().map(Point)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Exit status: verdicts such as "obstructed", "none" or "rejected" are
/// distinct from errors.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Negative,
}

struct Report {
    status: Status,
    headline: String,
    details: Vec<String>,
    json: Value,
}

impl Report {
    fn new(status: Status, headline: impl Into<String>, json: Value) -> Self {
        Report { status, headline: headline.into(), details: Vec::new(), json }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }
}

struct CliError(String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load<T, E: fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> CliResult<T> {
    parse(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_phi(path: Option<&Path>, n: usize) -> CliResult<Matrix<Scalar>> {
    match path {
        None => Ok(Matrix::scalar_identity(n)),
        Some(p) => load(p, |s| json::parse_value(s).and_then(|v| json::scalar_matrix_from_json(&v))),
    }
}

fn point_json(p: &[Scalar]) -> Value {
    Value::Array(p.iter().map(json::scalar_to_json).collect())
}

fn intertwine(a: &Path, b: Option<&Path>, at: Option<&Point>) -> CliResult<Report> {
    let a = load(a, json::parse_matrix)?;
    let b = match b {
        Some(p) => load(p, json::parse_matrix)?,
        None => a.clone(),
    };
    let op = build_intertwiner(&a, &b)?;
    let generic = op.generic_kernel_dim();
    let locus = op.jump_locus();
    let (locus_text, locus_json) = match &locus.description {
        _ if locus.is_empty() => ("empty".to_string(), json!({"empty": true})),
        LocusDescription::Univariate(p) => (format!("roots of {p}"), json!({"empty": false, "polynomial": p.to_string()})),
        LocusDescription::Minors(ms) => (
            format!("common zeros of {} minors of size {}", ms.len(), locus.generic_rank),
            json!({"empty": false, "minors": ms.iter().map(ToString::to_string).collect::<Vec<_>>()}),
        ),
    };
    let mut out = json!({
        "command": "intertwine",
        "generic_rank": op.generic_rank(),
        "generic_kernel_dim": generic,
        "jump_locus": locus_json,
        "convention": holosim::sylvester::BASIS_CONVENTION,
    });
    let mut details = vec![format!("generic kernel dimension {generic}")];
    let dim = match at {
        None => generic,
        Some(Point(pt)) => {
            let n = op.n();
            let basis = exact_kernel(&op.at(pt)?);
            let wasow = op.wasow_criterion(pt)?;
            details.push(format!("at {}: wasow criterion {}", Point(pt.clone()), if wasow { "holds" } else { "fails" }));
            for (k, v) in basis.iter().enumerate() {
                details.push(format!("basis element {k}:\n{}", Matrix::unvectorize(n, n, v.clone())));
            }
            out["at"] = json!({
                "point": point_json(pt),
                "kernel_dim": basis.len(),
                "wasow_criterion": wasow,
                "kernel_basis": basis.iter().map(|v| json::scalar_matrix_to_json(&Matrix::unvectorize(n, n, v.clone()))).collect::<Vec<_>>(),
            });
            basis.len()
        }
    };
    let mut r = Report::new(Status::Success, format!("kernel dimension {dim}, jump locus {locus_text}"), out);
    r.details = details;
    Ok(r)
}

fn germ_report(command: &str, a: &MatrixFamily, b: &MatrixFamily, germ: &SimilarityGerm, phi: &Matrix<Scalar>) -> Report {
    let intertwines = germ.intertwines(a, b);
    let value_ok = &germ.value_at_base() == phi;
    let invertible = germ.invertible_at_base();
    let mut out = json!({
        "command": command,
        "verdict": "similarity",
        "base": point_json(&germ.base),
        "h": json::frac_to_json(&germ.h),
        "checks": {"A*H = H*B": intertwines, "H(base) = Phi": value_ok, "det H(base) != 0": invertible},
    });
    if let Some(entries) = germ.entries() {
        out["germ"] = json::pointed_grid_to_json(&entries);
    }
    let headline = if invertible { "similarity germ found" } else { "intertwiner found (singular at the base point)" };
    let mut r = Report::new(Status::Success, headline, out);
    r.line(format!("H =\n{}", germ.h));
    r.line(format!("A*H = H*B: {intertwines}"));
    r.line(format!("H(base) = Phi: {value_ok}"));
    r.line(format!("det H(base) != 0: {invertible}"));
    r
}

fn smith(a: &Path, b: &Path, at: &Scalar, phi: Option<&Path>) -> CliResult<Report> {
    let (a, b) = (load(a, json::parse_matrix)?, load(b, json::parse_matrix)?);
    let phi = load_phi(phi, a.rows())?;
    Ok(match smith_similarity(&a, &b, at, &phi)? {
        Some(germ) => germ_report("smith", &a, &b, &germ, &phi),
        None => {
            let out = json!({"command": "smith", "verdict": "none", "base": point_json(std::slice::from_ref(at))});
            let mut r = Report::new(Status::Negative, "none: Phi does not extend to an intertwiner", out);
            r.line("the value vector is not in the span of kernel germ values at the base point");
            r
        }
    })
}

fn wasow(a: &Path, b: &Path, at: &Point, phi: Option<&Path>) -> CliResult<Report> {
    let (a, b) = (load(a, json::parse_matrix)?, load(b, json::parse_matrix)?);
    let phi = load_phi(phi, a.rows())?;
    match wasow_similarity(&a, &b, &at.0, &phi) {
        Ok(germ) => Ok(germ_report("wasow", &a, &b, &germ, &phi)),
        Err(Error::CriterionNotSatisfied(msg)) => {
            let out = json!({"command": "wasow", "verdict": "rejected", "reason": msg, "base": point_json(&at.0)});
            Ok(Report::new(Status::Negative, format!("rejected: {msg}"), out))
        }
        Err(e) => Err(e.into()),
    }
}

fn table(report: &ObstructionReport) -> (Vec<String>, Value) {
    let mut lines = vec![format!(
        "{} system on {}, N = {}: kernel dimension {}",
        report.system, report.curve, report.truncation, report.kernel_dim
    )];
    let mut rows = Vec::new();
    for v in &report.verdicts {
        let witness = v.witness.as_ref().map(|w| w.verified);
        let status = match witness {
            None => "forced to 0".to_string(),
            Some(ok) => format!("free (witness {})", if ok { "verified" } else { "NOT verified" }),
        };
        lines.push(format!("  {:<8} {status}", v.name));
        rows.push(json!({"name": v.name, "forced_zero": v.forced_zero, "witness_verified": witness}));
    }
    let out = json!({
        "system": report.system.to_string(),
        "curve": json::curve_to_json(&report.curve),
        "truncation": report.truncation,
        "kernel_dim": report.kernel_dim,
        "functionals": rows,
        "constant_space": report.constant_space.iter().map(|v| point_json(v)).collect::<Vec<_>>(),
        "constant_forced_singular": report.constant_forced_singular(),
    });
    (lines, out)
}

fn obstruct(ell: u32, curve: &CurveSpec, truncation: Option<u32>, system: Option<JetSystem>) -> CliResult<Report> {
    let n = truncation.unwrap_or_else(|| curve.default_truncation(ell));
    let verdict = curve_similarity_obstruction(ell, curve, n)?;
    let (mut lines, main) = table(verdict.report());
    let singular = verdict.report().constant_forced_singular();
    lines.push(format!("every admissible H(0) singular: {}", singular == Some(true)));
    let mut out = json!({
        "command": "obstruct",
        "ell": ell,
        "verdict": if verdict.is_obstructed() { "obstructed" } else { "inconclusive" },
        "intertwiner": main,
    });
    if let Some(sys) = system.filter(|s| *s != JetSystem::Intertwiner) {
        let (extra_lines, extra) = table(&obstruction_kernel(ell, curve, n, sys)?);
        lines.extend(extra_lines);
        out["extra"] = extra;
    }
    let (status, headline) = if verdict.is_obstructed() {
        (Status::Negative, format!("obstructed: no invertible holomorphic H with A*H = H*B at the origin along {curve}"))
    } else {
        (Status::Success, format!("inconclusive: an invertible H(0) survives at N = {n}"))
    };
    let mut r = Report::new(status, headline, out);
    r.details = lines;
    Ok(r)
}

fn counterexample(ell: u32, curves: &[CurveSpec], grid: usize) -> CliResult<Report> {
    let pair = local_pair(ell);
    let weighted = pair.weighted_identity_holds();
    let similar = pair.similarity_identity_holds();
    if !(weighted && similar) {
        return Err(CliError(format!("local pair identities fail (weighted: {weighted}, A*S = S*B: {similar})")));
    }
    let ball = pair.ball_check(grid);
    let curves: Vec<CurveSpec> = if curves.is_empty() {
        vec![
            CurveSpec::FullGerm,
            CurveSpec::cusp(ell + 4, ell + 3)?,
            CurveSpec::integer_lines(2 * ell as usize + 5),
        ]
    } else {
        curves.to_vec()
    };
    let mut lines = vec![
        "weighted identity: holds".to_string(),
        "A*S = S*B: holds".to_string(),
        format!("ball estimate on a {grid}-point grid: {}", if ball.passed() { "passed" } else { "failed" }),
    ];
    let mut per_curve = Vec::new();
    let mut all_obstructed = true;
    for curve in &curves {
        let n = curve.default_truncation(ell);
        let w = obstruction_kernel(ell, curve, n, JetSystem::WeightedSum)?;
        let verdict = curve_similarity_obstruction(ell, curve, n)?;
        all_obstructed &= verdict.is_obstructed();
        let (wl, wj) = table(&w);
        let (hl, hj) = table(verdict.report());
        lines.push(format!("{curve}: {}", if verdict.is_obstructed() { "obstructed" } else { "inconclusive" }));
        lines.extend(wl);
        lines.extend(hl);
        per_curve.push(json!({"curve": json::curve_to_json(curve), "obstructed": verdict.is_obstructed(), "weighted_sum": wj, "intertwiner": hj}));
    }
    let out = json!({
        "command": "counterexample",
        "ell": ell,
        "verdict": if all_obstructed { "obstructed" } else { "inconclusive" },
        "identities": {"weighted": weighted, "A*S = S*B": similar},
        "ball_check_passed": ball.passed(),
        "curves": per_curve,
    });
    let (status, headline) = if all_obstructed {
        (Status::Negative, format!("obstructed: A and B are not holomorphically similar at the origin (l = {ell})"))
    } else {
        (Status::Success, "inconclusive on at least one curve".to_string())
    };
    let mut r = Report::new(status, headline, out);
    r.details = lines;
    Ok(r)
}

fn rejected(command: &str, msg: String) -> Report {
    let out = json!({"command": command, "verdict": "rejected", "reason": msg});
    Report::new(Status::Negative, format!("rejected: {msg}"), out)
}

fn cocycle(path: &Path, mode: CheckMode) -> CliResult<Report> {
    let data = load(path, json::parse_covering)?;
    let cov = data.cocycle.covering();
    if let (Some(a), Some(locals), Some(split)) = (&data.a, &data.locals, &data.splitting) {
        let b = data.b.as_ref().unwrap_or(a);
        return Ok(match assemble_global_similarity(cov, a, b, locals, split, mode) {
            Ok(g) => {
                let pieces: Vec<Value> = g.pieces().iter().map(json::frac_to_json).collect();
                let names: Vec<&str> = (0..cov.len()).map(|i| cov.name(i)).collect();
                let out = json!({"command": "cocycle", "verdict": "assembled", "charts": names, "pieces": pieces});
                let mut r = Report::new(Status::Success, format!("global similarity assembled on {} charts", cov.len()), out);
                r.line(g.to_string());
                r
            }
            Err(e @ (Error::Cocycle(_) | Error::Precondition(_))) => rejected("cocycle", e.to_string()),
            Err(e) => return Err(e.into()),
        });
    }
    let c: &MatrixCocycle = &data.cocycle;
    if !verify_cocycle(c, mode) {
        return Ok(rejected("cocycle", "cocycle identities fail".into()));
    }
    let mut checks = vec![("cocycle identities", true)];
    if let Some(a) = &data.a {
        let ok = verify_commutant_valued(c, a, mode)?;
        checks.push(("commutant valued", ok));
        if !ok {
            return Ok(rejected("cocycle", "some entry does not commute with A".into()));
        }
    }
    if let Some(split) = &data.splitting {
        let id = MatrixCocycle::identity(cov.clone(), c.size());
        let ok = verify_equivalence(c, &id, split, mode)?;
        checks.push(("split by h", ok));
        if !ok {
            return Ok(rejected("cocycle", "the splitting does not trivialize the cocycle".into()));
        }
    }
    let out = json!({"command": "cocycle", "verdict": "verified", "checks": checks.iter().map(|(k, v)| json!({"check": k, "holds": v})).collect::<Vec<_>>()});
    let mut r = Report::new(Status::Success, "cocycle verified", out);
    for (k, v) in checks {
        r.line(format!("{k}: {v}"));
    }
    Ok(r)
}

fn sphere(epsilon: &Rational, ell: u32, obstruction: Option<Symbol>) -> CliResult<Report> {
    let ex = sphere_example(epsilon, ell)?;
    let rep = ex.report();
    let to_f64 = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
    let mut out = json!({
        "command": "sphere",
        "epsilon": format_rational(epsilon),
        "ell": ell,
        "max_band_deviation": format_rational(&rep.max_band_deviation),
        "min_re_det": format_rational(&rep.min_re_det),
        "below_half": rep.below_half.len(),
        "band_samples": ex.band().len(),
        "cap_det_one": rep.cap_det_one,
    });
    let mut lines = vec![
        format!("max |hh* - 1| on the band: {:.6} (< 1/2: {})", to_f64(&rep.max_band_deviation), rep.band_bound_holds()),
        format!("min Re det C+: {:.6}; below 1/2 at {} of {} samples", to_f64(&rep.min_re_det), rep.below_half.len(), ex.band().len()),
        format!("det C+ = 1 on the cap: {}", rep.cap_det_one),
    ];
    let (status, headline) = match obstruction {
        Some(sym) => {
            let ctx = sphere_context();
            let (name, g) = match sym {
                Symbol::H => ("h", h_poly(&ctx)),
                Symbol::HStar => ("h*", h_star_poly(&ctx)),
            };
            let k = splitting_obstruction(&ex, &g)?;
            out["symbol"] = json!(name);
            out["obstruction"] = json!(k);
            lines.push(format!("winding of {name} along the equator: {k}"));
            if k == 0 {
                (Status::Success, "obstruction integer 0".to_string())
            } else {
                out["verdict"] = json!("obstructed");
                (Status::Negative, format!("obstruction integer {k}"))
            }
        }
        None if rep.band_bound_holds() && rep.cap_det_one => (Status::Success, "sphere example validated".to_string()),
        None => (Status::Negative, "rejected: the band or cap check fails".to_string()),
    };
    let mut r = Report::new(status, headline, out);
    r.details = lines;
    Ok(r)
}

fn winding(path: &Path) -> CliResult<Report> {
    let samples = load(path, |s| json::parse_value(s).and_then(|v| json::loop_from_json(&v)))?;
    let lp = SampledLoop::new(samples)?;
    let k = winding_number(&lp)?;
    let out = json!({"command": "winding", "samples": lp.len(), "winding_number": k});
    Ok(Report::new(Status::Success, format!("winding number {k}"), out))
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Intertwine { a, b, at } => intertwine(a, b.as_deref(), at.as_ref()),
        Command::Smith { a, b, at, phi } => smith(a, b, at, phi.as_deref()),
        Command::Wasow { a, b, at, phi } => wasow(a, b, at, phi.as_deref()),
        Command::Obstruct { ell, curve, truncation, system } => obstruct(*ell, curve, *truncation, *system),
        Command::Counterexample { ell, curve, grid } => counterexample(*ell, curve, *grid),
        Command::Cocycle { covering, mode } => cocycle(covering, (*mode).into()),
        Command::Sphere { epsilon, ell, obstruction } => sphere(epsilon, *ell, *obstruction),
        Command::Winding { samples } => winding(samples),
    }
}

fn main() -> ExitCode {
    // usage errors exit 1 like any other error; 2 is reserved for verdicts
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Text => {
                    println!("{}", report.headline);
                    for d in &report.details {
                        println!("{d}");
                    }
                }
                Format::Json => {
                    let mut v = report.json;
                    v["summary"] = json!(report.headline);
                    println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
                }
            }
            match report.status {
                Status::Success => ExitCode::SUCCESS,
                Status::Negative => ExitCode::from(2),
            }
        }
        Err(CliError(msg)) => {
            if cli.format == Format::Json {
                println!("{}", json!({"error": msg}));
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
