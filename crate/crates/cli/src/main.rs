//! Command-line front end: JSON in, JSON/CSV/PGM out.
//!
//! Exit codes: 0 success, 1 domain error (valid input, failed
//! computation), 2 input error (parse or schema violation).

mod emit;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use scatter_core::degenerations::{
    channel_factorizations, check_stability, enumerate_multidegrees, mhv_structural_check,
    nodal_genus1_lambda, nodal_genus1_preimages, theta_vector, twochannel_discriminant,
    twochannel_genus1_lambda, DualGraph, Multidegree, StabilityKind, StabilityReport,
};
use scatter_core::hypertrees::{
    amplitude_pullback, from_triangulation, inverse_scattering, trinity_match, CtVerdict,
    Hypertree, Triangulation,
};
use scatter_core::mumford::{
    amplitude_branch, jacobian_add, lax_flow, moduli_chart, mumford_from_points,
    mumford_validate, scattering_slopes, MumfordTriple,
};
use scatter_core::realscatter::{
    elementary_cremona, find_preimages_real, genus1_density,
    montecarlo_pushforward, special_points_table, ComponentIndex, CurveSpec, MCurve,
};
use scatter_core::scalars::{Poly, ProjPoint, C};
use scatter_core::Error;

#[derive(Parser)]
#[command(name = "scatter", about = "Amplitude maps, forms and measures of algebraic curves")]
struct Cli {
    /// RNG seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numeric tolerance override for validation reports.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Output file for grid/histogram data.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Parse and validate inputs, skip the computation.
    #[arg(long, global = true)]
    validate_only: bool,
    #[command(subcommand)]
    cmd: Group,
}

#[derive(Subcommand)]
enum Group {
    /// CT hypertrees and triangulations.
    #[command(subcommand)]
    Hypertree(HypertreeCmd),
    /// Dual graphs and multidegrees.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// The hyperelliptic matrix model.
    #[command(subcommand)]
    Mm(MmCmd),
    /// Pushforward densities and sampling.
    #[command(subcommand)]
    Density(DensityCmd),
    /// Genus-1 nodal closed forms.
    #[command(subcommand)]
    Nodal(NodalCmd),
}

#[derive(Subcommand)]
enum HypertreeCmd {
    /// Check the covering condition.
    Check { file: PathBuf },
    /// Check strictness of the covering condition.
    Irreducible { file: PathBuf },
    /// Extract the two hypertrees of a checkerboard triangulation.
    FromTri { file: PathBuf },
    /// Perfect matching of interior vertices to interior white faces.
    Trinity {
        file: PathBuf,
        /// Index of the outer white face.
        #[arg(long, default_value_t = 0)]
        outer: usize,
    },
    /// Recover the component maps and torus coordinates at a target
    /// configuration.
    Invert {
        file: PathBuf,
        /// Comma-separated target values (floats or `inf`).
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
    },
    /// Pullback density of the dlog amplitude form at a configuration.
    Pullback {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        targets: String,
        /// Chart quadruples like `1,2,3,4;1,2,3,5`.
        #[arg(long)]
        chart: String,
    },
}

#[derive(Args)]
struct GraphArgs {
    file: PathBuf,
    /// Comma-separated multidegree, one integer per vertex.
    #[arg(long, allow_hyphen_values = true)]
    degrees: String,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Arithmetic genus of the dual graph.
    Genus { file: PathBuf },
    /// Rational polarization parameters of a multidegree.
    Theta(GraphArgs),
    /// Stability verdict of a multidegree.
    Stability(GraphArgs),
    /// All (semi)stable multidegrees of a total degree.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        degree: i64,
        #[arg(long, value_parser = ["stable", "semistable"])]
        kind: String,
    },
    /// Structural gates plus the full trivalent verdict.
    Mhv(GraphArgs),
    /// One- and two-channel separations.
    Channels(GraphArgs),
}

#[derive(Subcommand)]
enum MmCmd {
    /// Build a triple from divisor points.
    Build {
        #[arg(long)]
        curve: PathBuf,
        /// Comma-separated divisor x-coordinates.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Comma-separated sheet signs (+ or -), one per point.
        #[arg(long)]
        sheets: String,
    },
    /// Residual and degree diagnostics of a triple.
    Validate {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
    },
    /// Integrate the Lax flow.
    Flow {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        time: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Eigenspace slopes at the marked points.
    Slopes {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
    },
    /// Real preimages of a chart target per component.
    Preimages {
        #[arg(long)]
        curve: PathBuf,
        /// Comma-separated chart values (floats or `inf`).
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Components like `H 1 2 3` or `13` for the oval set {1,3}.
        #[arg(long, num_args = 1..)]
        components: Vec<String>,
    },
    /// Amplitude branch density at a triple.
    Amplitude {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        /// Comma-separated flow parameters, one per genus.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Add two classes in the chart.
    Add {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// Cremona action on a configuration of slopes.
    Cremona {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        /// Even 1-based index subset, comma-separated.
        #[arg(long)]
        subset: String,
    },
    /// The sixteen genus-2 special classes per component.
    Special {
        #[arg(long)]
        curve: PathBuf,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Genus-1 pushforward density on the chart circle.
    G1 {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "H")]
        component: String,
        #[arg(long, default_value_t = 801)]
        resolution: usize,
    },
    /// Genus-2 pushforward density grid.
    G2 {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "H")]
        component: String,
        #[arg(long, default_value_t = 61)]
        resolution: usize,
        /// Two cross-ratio quadruples like `1,3,4,5;2,3,4,5`.
        #[arg(long)]
        chart: Option<String>,
        /// Optional PGM rendering path.
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Monte Carlo pushforward histogram.
    Mc {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "H")]
        component: String,
        #[arg(long, default_value_t = 48)]
        resolution: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum NodalCmd {
    /// Irreducible nodal genus-1 amplitude map.
    G1 {
        /// Marked points p1..p4, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Evaluate the map at this class coordinate.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        /// Find the two class preimages of this chart value.
        #[arg(long, allow_hyphen_values = true)]
        preimages: Option<f64>,
    },
    /// Two-channel genus-1 amplitude map.
    Twochannel {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        /// Print the branch-value discriminant coefficients.
        #[arg(long)]
        discriminant: bool,
    },
}

/// A triple as JSON: real coefficient lists in ascending degree order.
#[derive(Serialize, Deserialize)]
struct TripleSpec {
    u: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl TripleSpec {
    fn to_triple(&self) -> MumfordTriple {
        MumfordTriple {
            u: Poly::from_real_coeffs(&self.u),
            v: Poly::from_real_coeffs(&self.v),
            w: Poly::from_real_coeffs(&self.w),
        }
    }

    fn of(m: &MumfordTriple) -> TripleSpec {
        let reals = |p: &Poly<C>| p.coeffs().iter().map(|c| c.re).collect();
        TripleSpec { u: reals(&m.u), v: reals(&m.v), w: reals(&m.w) }
    }
}

enum CliError {
    Input(String),
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::Capacity(_) | Error::RepeatedNode(..) => {
                CliError::Input(e.to_string())
            }
            other => CliError::Domain(other.to_string()),
        }
    }
}

type CliResult = Result<Value, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Input(format!("bad number {t:?}: {e}")))
        })
        .collect()
}

fn parse_proj(s: &str) -> Result<Vec<ProjPoint>, CliError> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if t == "inf" || t == "oo" {
                Ok(ProjPoint::infinity())
            } else {
                t.parse::<f64>()
                    .map(ProjPoint::real)
                    .map_err(|e| CliError::Input(format!("bad value {t:?}: {e}")))
            }
        })
        .collect()
}

fn parse_component(s: &str, genus: usize) -> Result<ComponentIndex, CliError> {
    if s.eq_ignore_ascii_case("h") {
        return Ok(ComponentIndex::huisman(genus));
    }
    if s.is_empty() || s.eq_ignore_ascii_case("e") || s == "{}" {
        return Ok(ComponentIndex::empty());
    }
    let ovals: Result<Vec<usize>, _> = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as usize)
                .ok_or_else(|| CliError::Input(format!("bad component token {s:?}")))
        })
        .collect();
    let ovals = ovals?;
    if ovals.iter().any(|&o| o == 0 || o > genus + 1) {
        return Err(CliError::Input(format!("component ovals out of range in {s:?}")));
    }
    Ok(ComponentIndex::from_ovals(&ovals))
}

fn parse_degrees(s: &str) -> Result<Multidegree, CliError> {
    let d: Result<Vec<i64>, _> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::Input(format!("bad degree {t:?}: {e}"))))
        .collect();
    Ok(Multidegree::new(d?))
}

fn proj_json(p: &ProjPoint) -> Value {
    match p.value() {
        Some(v) if v.im.abs() <= 1e-12 * v.norm().max(1.0) => json!(v.re),
        Some(v) => json!({ "re": v.re, "im": v.im }),
        None => json!("inf"),
    }
}

fn component_label(c: ComponentIndex) -> String {
    let ovals = c.ovals();
    if ovals.is_empty() {
        "{}".into()
    } else {
        format!("{{{}}}", ovals.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.cmd {
        Group::Hypertree(cmd) => run_hypertree(cli, cmd),
        Group::Graph(cmd) => run_graph(cli, cmd),
        Group::Mm(cmd) => run_mm(cli, cmd),
        Group::Density(cmd) => run_density(cli, cmd),
        Group::Nodal(cmd) => run_nodal(cli, cmd),
    }
}

fn run_hypertree(cli: &Cli, cmd: &HypertreeCmd) -> CliResult {
    match cmd {
        HypertreeCmd::Check { file } => {
            let ht: Hypertree = read_json(file)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            Ok(match ht.check_ct()? {
                CtVerdict::Ct => json!({"verdict": "CT"}),
                CtVerdict::Violating(s) => json!({
                    "verdict": "violating",
                    "subset": s.iter().map(|j| j + 1).collect::<Vec<_>>(),
                }),
            })
        }
        HypertreeCmd::Irreducible { file } => {
            let ht: Hypertree = read_json(file)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            Ok(json!({"irreducible": ht.is_irreducible()?}))
        }
        HypertreeCmd::FromTri { file } => {
            let tri: Triangulation = read_json(file)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let (black, white) = from_triangulation(&tri)?;
            Ok(json!({"black": black, "white": white}))
        }
        HypertreeCmd::Trinity { file, outer } => {
            let tri: Triangulation = read_json(file)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let m = trinity_match(&tri, *outer)?;
            Ok(json!({
                "outer": outer,
                "pairs": m.pairs.iter().map(|&(v, f)| json!({"vertex": v, "face": f})).collect::<Vec<_>>(),
            }))
        }
        HypertreeCmd::Invert { file, targets } => {
            let ht: Hypertree = read_json(file)?;
            let q = parse_proj(targets)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let inv = inverse_scattering(&ht, &q)?;
            Ok(json!({
                "genus": ht.genus(),
                "cycles": inv.torus.cycles,
                "z": inv.torus.z.iter().map(|z| json!({"re": z.re, "im": z.im})).collect::<Vec<_>>(),
            }))
        }
        HypertreeCmd::Pullback { file, targets, chart } => {
            let ht: Hypertree = read_json(file)?;
            let q = parse_proj(targets)?;
            let quads: Result<Vec<[usize; 4]>, CliError> = chart
                .split(';')
                .map(|quad| {
                    let idx: Result<Vec<usize>, _> = quad
                        .split(',')
                        .map(|t| t.trim().parse::<usize>())
                        .collect();
                    let idx = idx.map_err(|e| CliError::Input(format!("bad chart {quad:?}: {e}")))?;
                    idx.try_into()
                        .map_err(|_| CliError::Input(format!("chart {quad:?} is not a quadruple")))
                })
                .collect();
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let value = amplitude_pullback(&ht, &q, &quads?)?;
            Ok(match value.finite() {
                Some(x) => json!({"pullback": x}),
                None => json!({"pullback": "singular"}),
            })
        }
    }
}

fn run_graph(cli: &Cli, cmd: &GraphCmd) -> CliResult {
    match cmd {
        GraphCmd::Genus { file } => {
            let g: DualGraph = read_json(file)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            Ok(json!({"genus": g.genus()}))
        }
        GraphCmd::Theta(args) => {
            let g: DualGraph = read_json(&args.file)?;
            let d = parse_degrees(&args.degrees)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let t = theta_vector(&g, &d)?;
            Ok(json!({
                "theta": t.theta.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            }))
        }
        GraphCmd::Stability(args) => {
            let g: DualGraph = read_json(&args.file)?;
            let d = parse_degrees(&args.degrees)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            Ok(match check_stability(&g, &d)? {
                StabilityReport::Stable => json!({"verdict": "stable"}),
                StabilityReport::StrictlySemistable { witness } => json!({
                    "verdict": "strictly-semistable",
                    "witness": witness.iter().map(|v| v + 1).collect::<Vec<_>>(),
                }),
                StabilityReport::Unstable { witness } => json!({
                    "verdict": "unstable",
                    "witness": witness.iter().map(|v| v + 1).collect::<Vec<_>>(),
                }),
            })
        }
        GraphCmd::Enumerate { file, degree, kind } => {
            let g: DualGraph = read_json(file)?;
            let kind = match kind.as_str() {
                "stable" => StabilityKind::Stable,
                _ => StabilityKind::Semistable,
            };
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let found = enumerate_multidegrees(&g, *degree, kind)?;
            Ok(json!({
                "count": found.len(),
                "multidegrees": found.iter().map(|m| m.d.clone()).collect::<Vec<_>>(),
            }))
        }
        GraphCmd::Mhv(args) => {
            let g: DualGraph = read_json(&args.file)?;
            let d = parse_degrees(&args.degrees)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            use scatter_core::degenerations::MhvVerdict;
            Ok(match mhv_structural_check(&g, &d)? {
                MhvVerdict::Mhv { hypertree } => json!({"verdict": "MHV", "hypertree": hypertree}),
                MhvVerdict::PassesStructuralChecks => json!({"verdict": "passes-structural-checks"}),
                MhvVerdict::Rejected(f) => json!({"verdict": "rejected", "reason": format!("{f:?}")}),
            })
        }
        GraphCmd::Channels(args) => {
            let g: DualGraph = read_json(&args.file)?;
            let d = parse_degrees(&args.degrees)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            use scatter_core::degenerations::{CutKind, TwoChannelCase};
            let cuts = channel_factorizations(&g, &d)?;
            Ok(json!({
                "cuts": cuts
                    .iter()
                    .map(|c| {
                        let kind = match c.kind {
                            CutKind::OneChannel => "one-channel",
                            CutKind::TwoChannel(TwoChannelCase::CaseI) => "two-channel-I",
                            CutKind::TwoChannel(TwoChannelCase::CaseII) => "two-channel-II",
                            CutKind::TwoChannel(TwoChannelCase::Invalid) => "two-channel-invalid",
                        };
                        json!({
                            "kind": kind,
                            "side_a": c.side_a.iter().map(|v| v + 1).collect::<Vec<_>>(),
                            "side_b": c.side_b.iter().map(|v| v + 1).collect::<Vec<_>>(),
                        })
                    })
                    .collect::<Vec<_>>(),
            }))
        }
    }
}

fn load_mcurve(path: &Path) -> Result<MCurve, CliError> {
    let spec: CurveSpec = read_json(path)?;
    MCurve::from_spec(&spec).map_err(CliError::from)
}

fn run_mm(cli: &Cli, cmd: &MmCmd) -> CliResult {
    match cmd {
        MmCmd::Build { curve, t, sheets } => {
            let mc = load_mcurve(curve)?;
            let ts = parse_floats(t)?;
            let signs: Result<Vec<f64>, CliError> = sheets
                .split(',')
                .map(|s| match s.trim() {
                    "+" | "+1" | "1" => Ok(1.0),
                    "-" | "-1" => Ok(-1.0),
                    other => Err(CliError::Input(format!("bad sheet {other:?}"))),
                })
                .collect();
            let signs = signs?;
            if signs.len() != ts.len() {
                return Err(CliError::Input("t and sheets lengths differ".into()));
            }
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let tc: Vec<C> = ts.iter().map(|&x| C::new(x, 0.0)).collect();
            let sc: Vec<C> = ts
                .iter()
                .zip(&signs)
                .map(|(&x, &sg)| C::new(mc.curve().f().eval(&C::new(x, 0.0)).re.max(0.0).sqrt() * sg, 0.0))
                .collect();
            let m = mumford_from_points(mc.curve(), &tc, &sc)?;
            Ok(serde_json::to_value(TripleSpec::of(&m)).unwrap())
        }
        MmCmd::Validate { curve, triple } => {
            let mc = load_mcurve(curve)?;
            let spec: TripleSpec = read_json(triple)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let report = mumford_validate(&spec.to_triple(), mc.curve());
            Ok(json!({
                "residual": report.residual,
                "degrees_ok": report.degrees_ok,
                "ok": report.ok(cli.tol.max(1e-12)),
            }))
        }
        MmCmd::Flow { curve, triple, c, time, steps } => {
            let mc = load_mcurve(curve)?;
            let spec: TripleSpec = read_json(triple)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let out = lax_flow(mc.curve(), &spec.to_triple(), C::new(*c, 0.0), *time, *steps)?;
            let result = TripleSpec::of(&out.triple);
            Ok(json!({
                "completed": out.completed,
                "time_reached": out.time_reached,
                "triple": serde_json::to_value(result).unwrap(),
                "residual": mumford_validate(&out.triple, mc.curve()).residual,
            }))
        }
        MmCmd::Slopes { curve, triple } => {
            let mc = load_mcurve(curve)?;
            let spec: TripleSpec = read_json(triple)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let m = spec.to_triple();
            let q = scattering_slopes(&m, mc.curve())?;
            let lam = moduli_chart(&q, mc.genus())?;
            Ok(json!({
                "slopes": q.iter().map(proj_json).collect::<Vec<_>>(),
                "lambda": lam.iter().map(proj_json).collect::<Vec<_>>(),
            }))
        }
        MmCmd::Preimages { curve, target, components } => {
            let mc = load_mcurve(curve)?;
            let lam = parse_proj(target)?;
            let comps: Result<Vec<ComponentIndex>, CliError> = components
                .iter()
                .map(|s| parse_component(s, mc.genus()))
                .collect();
            let comps = comps?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let target_u: Vec<f64> = lam
                .iter()
                .map(|p| match p.value() {
                    Some(v) => v.re.atan(),
                    None => std::f64::consts::FRAC_PI_2,
                })
                .collect();
            let hits = find_preimages_real(&mc, &target_u, &comps)?;
            Ok(json!({
                "found": hits.iter().filter(|h| h.triple.is_some()).count(),
                "preimages": hits
                    .iter()
                    .map(|h| {
                        json!({
                            "component": component_label(h.component),
                            "found": h.triple.is_some(),
                            "residual": h.residual,
                            "triple": h.triple.as_ref().map(|m| serde_json::to_value(TripleSpec::of(m)).unwrap()),
                        })
                    })
                    .collect::<Vec<_>>(),
            }))
        }
        MmCmd::Amplitude { curve, triple, c } => {
            let mc = load_mcurve(curve)?;
            let spec: TripleSpec = read_json(triple)?;
            let cs: Vec<C> = parse_floats(c)?.iter().map(|&x| C::new(x, 0.0)).collect();
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let b = amplitude_branch(&spec.to_triple(), mc.curve(), &cs)?;
            Ok(match b.finite() {
                Some(x) => json!({"branch": x}),
                None => json!({"branch": "singular"}),
            })
        }
        MmCmd::Add { curve, triple, other } => {
            let mc = load_mcurve(curve)?;
            let a: TripleSpec = read_json(triple)?;
            let b: TripleSpec = read_json(other)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let sum = jacobian_add(mc.curve(), &a.to_triple(), &b.to_triple())?;
            Ok(serde_json::to_value(TripleSpec::of(&sum)).unwrap())
        }
        MmCmd::Cremona { curve, triple, subset } => {
            let mc = load_mcurve(curve)?;
            let spec: TripleSpec = read_json(triple)?;
            let idx: Result<Vec<usize>, _> = subset.split(',').map(|t| t.trim().parse::<usize>()).collect();
            let idx = idx.map_err(|e| CliError::Input(format!("bad subset: {e}")))?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let m = spec.to_triple();
            let q = scattering_slopes(&m, mc.curve())?;
            let zs: Vec<ProjPoint> = mc
                .curve()
                .marked()
                .iter()
                .map(|p| ProjPoint::finite(p.z))
                .collect();
            let out = elementary_cremona(&zs, &q, &idx)?;
            Ok(json!({
                "transformed": out.iter().map(proj_json).collect::<Vec<_>>(),
            }))
        }
        MmCmd::Special { curve } => {
            let mc = load_mcurve(curve)?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let table = special_points_table(&mc)?;
            Ok(json!({
                "entries": table
                    .entries
                    .iter()
                    .map(|e| {
                        let name = match &e.indices {
                            None => "delta".to_string(),
                            Some(v) if v.len() == 1 => format!("delta_{}", v[0]),
                            Some(v) => format!("delta_{}{}", v[0], v[1]),
                        };
                        json!({
                            "class": name,
                            "component": e.component.map(component_label),
                            "real": e.component.is_some(),
                        })
                    })
                    .collect::<Vec<_>>(),
            }))
        }
    }
}

fn run_density(cli: &Cli, cmd: &DensityCmd) -> CliResult {
    match cmd {
        DensityCmd::G1 { curve, component, resolution } => {
            let mc = load_mcurve(curve)?;
            let comp = parse_component(component, mc.genus())?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let grid = genus1_density(&mc, comp, *resolution)?;
            if let Some(path) = &cli.out {
                emit::emit_csv(&grid, path).map_err(CliError::Domain)?;
            }
            Ok(json!({
                "mass": grid.mass,
                "empty_cells": grid.empty_cells,
                "normalization": grid.normalization,
                "csv": cli.out.as_ref().map(|p| p.display().to_string()),
            }))
        }
        DensityCmd::G2 { curve, component, resolution, chart, pgm } => {
            let mc = load_mcurve(curve)?;
            let comp = parse_component(component, mc.genus())?;
            let quads = chart
                .as_ref()
                .map(|s| -> Result<[[usize; 4]; 2], CliError> {
                    let parts: Vec<&str> = s.split(';').collect();
                    if parts.len() != 2 {
                        return Err(CliError::Input("chart needs two quadruples".into()));
                    }
                    let mut out = [[0usize; 4]; 2];
                    for (k, part) in parts.iter().enumerate() {
                        let idx: Result<Vec<usize>, _> =
                            part.split(',').map(|t| t.trim().parse::<usize>()).collect();
                        let idx = idx
                            .map_err(|e| CliError::Input(format!("bad chart {part:?}: {e}")))?;
                        out[k] = idx
                            .try_into()
                            .map_err(|_| CliError::Input(format!("chart {part:?} is not a quadruple")))?;
                    }
                    Ok(out)
                })
                .transpose()?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let grid = scatter_core::realscatter::genus2_density_grid_in(&mc, comp, *resolution, quads)?;
            if let Some(path) = &cli.out {
                emit::emit_csv(&grid, path).map_err(CliError::Domain)?;
            }
            if let Some(path) = pgm {
                emit::emit_pgm(&grid, path).map_err(CliError::Domain)?;
            }
            Ok(json!({
                "mass": grid.mass,
                "empty_cells": grid.empty_cells,
                "normalization": grid.normalization,
                "csv": cli.out.as_ref().map(|p| p.display().to_string()),
                "pgm": pgm.as_ref().map(|p| p.display().to_string()),
            }))
        }
        DensityCmd::Mc { curve, component, resolution, samples } => {
            let mc = load_mcurve(curve)?;
            let comp = parse_component(component, mc.genus())?;
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let hist = montecarlo_pushforward(&mc, comp, *resolution, *samples, cli.seed)?;
            if let Some(path) = &cli.out {
                let mut s = String::from("cell,count\n");
                for (i, c) in hist.counts.iter().enumerate() {
                    s.push_str(&format!("{i},{c}\n"));
                }
                emit::write_atomic(path, s.as_bytes())
                    .map_err(|e| CliError::Domain(e.to_string()))?;
            }
            Ok(json!({
                "samples": hist.samples,
                "resolution": hist.resolution,
                "warnings": hist.warnings,
                "csv": cli.out.as_ref().map(|p| p.display().to_string()),
            }))
        }
    }
}

fn run_nodal(cli: &Cli, cmd: &NodalCmd) -> CliResult {
    match cmd {
        NodalCmd::G1 { p, z, preimages } => {
            let ps = parse_floats(p)?;
            if ps.len() != 4 {
                return Err(CliError::Input("need exactly four marked points".into()));
            }
            let pc: [C; 4] = [
                C::new(ps[0], 0.0),
                C::new(ps[1], 0.0),
                C::new(ps[2], 0.0),
                C::new(ps[3], 0.0),
            ];
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let mut out = serde_json::Map::new();
            if let Some(zv) = z {
                let lam = nodal_genus1_lambda(C::new(*zv, 0.0), &pc)?;
                out.insert("lambda".into(), proj_json(&lam));
            }
            if let Some(target) = preimages {
                let roots = nodal_genus1_preimages(&ProjPoint::real(*target), &pc)?;
                out.insert(
                    "preimages".into(),
                    json!(roots.iter().map(|r| json!({"re": r.re, "im": r.im})).collect::<Vec<_>>()),
                );
            }
            Ok(Value::Object(out))
        }
        NodalCmd::Twochannel { p, z, discriminant } => {
            let ps = parse_floats(p)?;
            if ps.len() != 4 {
                return Err(CliError::Input("need exactly four marked points".into()));
            }
            let pc: [C; 4] = [
                C::new(ps[0], 0.0),
                C::new(ps[1], 0.0),
                C::new(ps[2], 0.0),
                C::new(ps[3], 0.0),
            ];
            if cli.validate_only {
                return Ok(json!({"validated": true}));
            }
            let mut out = serde_json::Map::new();
            if let Some(zv) = z {
                let lam = twochannel_genus1_lambda(C::new(*zv, 0.0), &pc)?;
                out.insert("lambda".into(), proj_json(&lam));
            }
            if *discriminant {
                let f2 = twochannel_discriminant(&pc)?;
                out.insert(
                    "discriminant".into(),
                    json!(f2.coeffs().iter().map(|c| c.re).collect::<Vec<_>>()),
                );
            }
            Ok(Value::Object(out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            let report = json!({"ok": true, "result": result});
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            let report = json!({"ok": false, "kind": "domain", "error": msg});
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            let report = json!({"ok": false, "kind": "input", "error": msg});
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::from(2)
        }
    }
}
