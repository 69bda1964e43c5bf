//! Batch front end for qphase: parses flags or a JSON config, runs one
//! command, and writes a JSON result document plus plot-ready CSV files.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use qphase::experiments::{
    branch_overlap, cat_experiment, cat_phase_estimation_with, cat_state, qubit_phase_game, rotate_cat, rotated_cat_target,
    CatConfig, DetectorArray, Grid,
};
use qphase::geometry::{speed_equals_uncertainty, triangle_survey};
use qphase::linalg::{random_hermitian, random_state, seeded_rng, C64};
use qphase::measurement::{coherent_pointer_shift, qubit_state, weak_value, PrePostPair};
use qphase::modular::{crt_relabel_check, gcd, modular_spin_ops, product_shift_orbits, CrtFactorization, RingSpace};
use qphase::oscillator::CoherentAmplitude;
use qphase::qspace::{finite_fourier, momentum_phase_op, position_translation_op, unitary_pow, weyl_residual, FiniteSpace};
use qphase::weyl_wigner::{ww_inverse, ww_transform, wigner_negativity, WWBasis};
use qphase::{OperatorMatrix, StateVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error(transparent)]
    Library(#[from] qphase::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qphase::Error as E;
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Library(E::Numerical(_) | E::Io(_)) | CliError::Io(_) => EXIT_RUNTIME,
            CliError::Library(_) => EXIT_VALIDATION,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "qps", version, about = "Finite quantum phase-space toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run config; its values take precedence over flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "QPS_SEED")]
    pub seed: Option<u64>,
    /// Also write a gnuplot script next to each CSV file.
    #[arg(long, global = true)]
    pub gnuplot_script: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shift/clock/Fourier identities on a cyclic space.
    Kinematics(KinematicsParams),
    /// Phase-point operator identities and the Wigner map of a basis state.
    Wigner(WignerParams),
    /// Qubit weak value read out by a coherent pointer.
    Weak(WeakParams),
    /// Bargmann phase against solid angle, and projective speed.
    Geometry(GeometryParams),
    /// Modular spin algebra and Chinese-remainder relabelling.
    Modular(ModularParams),
    /// Two-branch cat interference with a detector array.
    Cat(CatParams),
    /// Single-qubit phase game.
    Game(GameParams),
    /// Run whatever command the `--config` file names.
    Run,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Kinematics,
    Wigner,
    Weak,
    Geometry,
    Modular,
    Cat,
    Game,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Kinematics => "kinematics",
            CommandName::Wigner => "wigner",
            CommandName::Weak => "weak",
            CommandName::Geometry => "geometry",
            CommandName::Modular => "modular",
            CommandName::Cat => "cat",
            CommandName::Game => "game",
        }
    }
}

/// Config file layout. Unknown keys are rejected.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub parameters: Option<Value>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KinematicsCheck {
    Weyl,
    Cycle,
    Fourier,
    All,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct KinematicsParams {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum)]
    pub check: Option<KinematicsCheck>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WignerState {
    /// Position eigenstate `|u_k>`.
    Position,
    /// Momentum eigenstate `|v_k>`.
    Momentum,
    /// `(|u_k> + |u_{k+1}>)/sqrt(2)`.
    Plus,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct WignerParams {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum)]
    pub state: Option<WignerState>,
    #[arg(long)]
    pub index: Option<i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct WeakParams {
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub pointer_abs: Option<f64>,
    #[arg(long)]
    pub cutoff: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct GeometryParams {
    #[arg(long)]
    pub triangles: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ModularParams {
    /// Factor pair, e.g. `--crt 2,3`.
    #[arg(long, value_delimiter = ',')]
    pub crt: Option<Vec<usize>>,
    /// Ring size for the spin algebra check.
    #[arg(long)]
    pub ring: Option<usize>,
}

/// `"default"` or an explicit array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DetectorSpec {
    Named(String),
    Custom { centers: Vec<f64>, half_width: f64 },
}

fn parse_detectors(s: &str) -> Result<DetectorSpec, String> {
    if s == "default" {
        return Ok(DetectorSpec::Named(s.into()));
    }
    serde_json::from_str(s).map_err(|e| format!("expected \"default\" or a JSON object: {e}"))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct CatParams {
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub separation: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, value_parser = parse_detectors)]
    pub detectors: Option<DetectorSpec>,
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Grid step of the density CSV.
    #[arg(long)]
    pub step: Option<f64>,
    /// Also sample a centered detector this many times.
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct GameParams {
    /// Phase choices, comma separated.
    #[arg(long = "alpha", value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub shots: Option<u64>,
}

/// One invariant check; passes when `value <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub parameters: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    /// `(suffix, csv text, gnuplot body)`.
    pub series: Vec<(String, String, String)>,
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    command: &'a str,
    timestamp: String,
    seed: u64,
    parameters: &'a Value,
    results: &'a Value,
    checks: &'a [Check],
    series: Vec<&'a str>,
    passed: bool,
}

#[derive(Debug)]
pub struct Outcome {
    pub document: PathBuf,
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_TOLERANCE
        }
    }
}

/// Overlays the config's parameter object on the flag values.
fn merged<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&Value>) -> Result<T, CliError> {
    let mut base = match serde_json::to_value(flags).map_err(|e| invalid(e.to_string()))? {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    base.retain(|_, v| !v.is_null());
    match file {
        None | Some(Value::Null) => {}
        Some(Value::Object(over)) => {
            for (k, v) in over {
                base.insert(k.clone(), v.clone());
            }
        }
        Some(_) => return Err(invalid("`parameters` must be an object")),
    }
    serde_json::from_value(Value::Object(base)).map_err(|e| invalid(e.to_string()))
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Parses, dispatches, and writes output. `notes` receives human-readable
/// remarks destined for standard error.
pub fn execute(cli: &Cli, notes: &mut Vec<String>) -> Result<Outcome, CliError> {
    let config = match &cli.config {
        Some(p) => {
            notes.push(format!("note: --config {} given; its values take precedence over command-line flags", p.display()));
            Some(load_config(p)?)
        }
        None => None,
    };
    let file_params = config.as_ref().and_then(|c| c.parameters.as_ref());
    let name = match (&cli.command, &config) {
        (Command::Run, Some(c)) => c.command,
        (Command::Run, None) => return Err(invalid("`run` needs --config")),
        (cmd, c) => {
            let name = command_name(cmd);
            if let Some(c) = c {
                if c.command != name {
                    return Err(invalid(format!("config names `{}` but `{}` was invoked", c.command.as_str(), name.as_str())));
                }
            }
            name
        }
    };
    let seed = config.as_ref().and_then(|c| c.seed).or(cli.seed).unwrap_or(0);
    let out_dir = config.as_ref().and_then(|c| c.output_dir.clone()).or_else(|| cli.out.clone()).unwrap_or_else(|| PathBuf::from("."));

    let report = match (&cli.command, name) {
        (Command::Kinematics(p), _) => run_kinematics(&merged(p, file_params)?)?,
        (Command::Wigner(p), _) => run_wigner(&merged(p, file_params)?)?,
        (Command::Weak(p), _) => run_weak(&merged(p, file_params)?)?,
        (Command::Geometry(p), _) => run_geometry(&merged(p, file_params)?, seed)?,
        (Command::Modular(p), _) => run_modular(&merged(p, file_params)?)?,
        (Command::Cat(p), _) => run_cat(&merged(p, file_params)?, seed)?,
        (Command::Game(p), _) => run_game(&merged(p, file_params)?, seed)?,
        (Command::Run, CommandName::Kinematics) => run_kinematics(&merged(&KinematicsParams::default(), file_params)?)?,
        (Command::Run, CommandName::Wigner) => run_wigner(&merged(&WignerParams::default(), file_params)?)?,
        (Command::Run, CommandName::Weak) => run_weak(&merged(&WeakParams::default(), file_params)?)?,
        (Command::Run, CommandName::Geometry) => run_geometry(&merged(&GeometryParams::default(), file_params)?, seed)?,
        (Command::Run, CommandName::Modular) => run_modular(&merged(&ModularParams::default(), file_params)?)?,
        (Command::Run, CommandName::Cat) => run_cat(&merged(&CatParams::default(), file_params)?, seed)?,
        (Command::Run, CommandName::Game) => run_game(&merged(&GameParams::default(), file_params)?, seed)?,
    };
    write_outputs(name, seed, &report, &out_dir, cli.gnuplot_script)
}

fn command_name(cmd: &Command) -> CommandName {
    match cmd {
        Command::Kinematics(_) => CommandName::Kinematics,
        Command::Wigner(_) => CommandName::Wigner,
        Command::Weak(_) => CommandName::Weak,
        Command::Geometry(_) => CommandName::Geometry,
        Command::Modular(_) => CommandName::Modular,
        Command::Cat(_) => CommandName::Cat,
        Command::Game(_) => CommandName::Game,
        Command::Run => unreachable!("resolved from the config file"),
    }
}

fn write_outputs(name: CommandName, seed: u64, report: &Report, out_dir: &Path, gnuplot: bool) -> Result<Outcome, CliError> {
    fs::create_dir_all(out_dir)?;
    let now = chrono::Utc::now();
    let stem = format!("{}_{}", name.as_str(), now.format("%Y%m%dT%H%M%S%.3fZ"));
    let passed = report.checks.iter().all(|c| c.passed);
    let doc = Document {
        command: name.as_str(),
        timestamp: now.to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        seed,
        parameters: &report.parameters,
        results: &report.results,
        checks: &report.checks,
        series: report.series.iter().map(|(s, _, _)| s.as_str()).collect(),
        passed,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    text.push('\n');
    let document = out_dir.join(format!("{stem}.json"));
    fs::write(&document, text)?;
    let mut files = Vec::new();
    for (suffix, csv, plot) in &report.series {
        let csv_name = format!("{stem}_{suffix}.csv");
        let path = out_dir.join(&csv_name);
        fs::write(&path, csv)?;
        files.push(path);
        if gnuplot {
            let script = out_dir.join(format!("{stem}_{suffix}.gp"));
            fs::write(&script, format!("set datafile separator ','\nset key autotitle columnhead\nfile = '{csv_name}'\n{plot}\n"))?;
            files.push(script);
        }
    }
    Ok(Outcome { document, files, passed })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("plain data serializes")
}

const EXACT: f64 = 1e-12;

pub fn run_kinematics(p: &KinematicsParams) -> Result<Report, CliError> {
    let dim = p.dim.unwrap_or(5);
    if !(2..=64).contains(&dim) {
        return Err(invalid(format!("dim must be in 2..=64, got {dim}")));
    }
    let check = p.check.unwrap_or(KinematicsCheck::All);
    let space = FiniteSpace::new(dim)?;
    let v = position_translation_op(space);
    let u = momentum_phase_op(space);
    let f = finite_fourier(space);
    let id = OperatorMatrix::identity(dim);
    let n = dim as i64;
    let mut results = Map::new();
    let mut checks = Vec::new();

    if matches!(check, KinematicsCheck::Weyl | KinematicsCheck::All) {
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                worst = worst.max(weyl_residual(space, j, k));
            }
        }
        results.insert("weyl_residual".into(), json!(worst));
        checks.push(Check::at_most("weyl_relation", worst, EXACT));
    }
    if matches!(check, KinematicsCheck::Cycle | KinematicsCheck::All) {
        let vn = unitary_pow(&v, n).max_abs_diff(&id);
        let un = unitary_pow(&u, n).max_abs_diff(&id);
        results.insert("shift_cycle_residual".into(), json!(vn));
        results.insert("clock_cycle_residual".into(), json!(un));
        checks.push(Check::at_most("shift_cycle", vn, EXACT));
        checks.push(Check::at_most("clock_cycle", un, EXACT));
    }
    if matches!(check, KinematicsCheck::Fourier | KinematicsCheck::All) {
        let f4 = f.pow(4).max_abs_diff(&id);
        let fd = f.adjoint();
        let vu = (&(&fd * &v) * &f).max_abs_diff(&u);
        let uv = (&(&fd * &u) * &f).max_abs_diff(&v.adjoint());
        let mut mult = [0usize; 4];
        for ev in f.normal_eigenvalues()? {
            let roots = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)];
            let best = (0..4).min_by(|&a, &b| (ev - roots[a]).norm().total_cmp(&(ev - roots[b]).norm())).unwrap();
            mult[best] += 1;
        }
        results.insert("fourier_fourth_power_residual".into(), json!(f4));
        results.insert("fourier_conjugates_shift_residual".into(), json!(vu));
        results.insert("fourier_conjugates_clock_residual".into(), json!(uv));
        results.insert("fourier_multiplicities".into(), json!({"1": mult[0], "-1": mult[1], "i": mult[2], "-i": mult[3]}));
        checks.push(Check::at_most("fourier_fourth_power", f4, EXACT));
        checks.push(Check::at_most("fourier_conjugation", vu.max(uv), EXACT));
    }
    Ok(Report {
        parameters: json!({"dim": dim, "check": check}),
        results: Value::Object(results),
        checks,
        series: Vec::new(),
    })
}

pub fn run_wigner(p: &WignerParams) -> Result<Report, CliError> {
    let dim = p.dim.unwrap_or(3);
    if dim % 2 == 0 || !(3..=31).contains(&dim) {
        return Err(invalid(format!("dim must be odd and in 3..=31, got {dim}")));
    }
    let state = p.state.unwrap_or(WignerState::Position);
    let index = p.index.unwrap_or(0);
    let space = FiniteSpace::new(dim)?;
    let psi = match state {
        WignerState::Position => space.position_ket(index),
        WignerState::Momentum => space.momentum_ket(index),
        WignerState::Plus => space.position_ket(index).add(&space.position_ket(index + 1)).renormalize()?,
    };
    let basis = WWBasis::new(space)?;
    let id = OperatorMatrix::identity(dim);
    let f2 = finite_fourier(space).pow(2);
    let c0 = basis.orthogonality_constant();
    let (mut herm, mut square, mut spread) = (0.0f64, 0.0f64, 0.0f64);
    for d in basis.points() {
        herm = herm.max(d.hermiticity_defect());
        square = square.max((d * d).max_abs_diff(&id.scale_re(4.0)));
        spread = spread.max((d.hs_inner(d).re - c0).abs());
    }
    let origin = basis.point(0, 0).max_abs_diff(&f2.scale_re(2.0));
    let rho = psi.projector();
    let map = ww_transform(&basis, &rho)?;
    let imag = map.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    let round_trip = ww_inverse(&basis, &map)?.max_abs_diff(&rho);

    let checks = vec![
        Check::at_most("point_hermiticity", herm, EXACT),
        Check::at_most("point_square", square, EXACT),
        Check::at_most("origin_point", origin, EXACT),
        Check::at_most("orthogonality_spread", spread, EXACT),
        Check::at_most("map_imaginary_part", imag, EXACT),
        Check::at_most("round_trip", round_trip, EXACT),
    ];
    let values: Vec<Vec<f64>> = (0..dim).map(|j| (0..dim).map(|k| map.get(j, k).re).collect()).collect();
    let csv = map.to_csv_string()?;
    let plot = "set view map\nset xlabel 'k'\nset ylabel 'j'\nsplot file using 2:1:3 with image notitle".to_string();
    Ok(Report {
        parameters: json!({"dim": dim, "state": state, "index": index}),
        results: json!({
            "orthogonality_constant": c0,
            "negativity": wigner_negativity(&map),
            "values": values,
        }),
        checks,
        series: vec![("wigner".into(), csv, plot)],
    })
}

pub fn run_weak(p: &WeakParams) -> Result<Report, CliError> {
    let theta = p.theta.unwrap_or(FRAC_PI_2);
    let phi = p.phi.unwrap_or(0.0);
    let eps = p.eps.unwrap_or(1e-3);
    let pointer_abs = p.pointer_abs.unwrap_or(2.0);
    let cutoff = p.cutoff.unwrap_or(64);
    if !(0.0..PI).contains(&theta) || !phi.is_finite() {
        return Err(invalid("theta must lie in [0, pi) and phi must be finite"));
    }
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(invalid(format!("eps must be in (0, 0.1], got {eps}")));
    }
    if !(pointer_abs > 0.0 && pointer_abs <= 4.0) {
        return Err(invalid(format!("pointer_abs must be in (0, 4], got {pointer_abs}")));
    }
    if !(8..=512).contains(&cutoff) {
        return Err(invalid(format!("cutoff must be in 8..=512, got {cutoff}")));
    }
    let sigma1 = OperatorMatrix::from_rows(&[&[C64::from(0.0), C64::from(1.0)], &[C64::from(1.0), C64::from(0.0)]]);
    let pair = PrePostPair::new(qubit_state(theta, phi), StateVector::basis(2, 0), sigma1)?;
    let ow = weak_value(&pair)?;
    let closed = C64::from_polar((theta / 2.0).tan(), phi);
    let shift = coherent_pointer_shift(CoherentAmplitude::new(C64::new(0.0, pointer_abs)), &pair, eps, cutoff)?;
    let checks = vec![
        Check::at_most("weak_value_closed_form", (ow - closed).norm(), EXACT),
        Check::at_most("pointer_shift_second_order", shift.quadrature_residual(), 5.0 * eps * eps),
    ];
    Ok(Report {
        parameters: json!({"theta": theta, "phi": phi, "eps": eps, "pointer_abs": pointer_abs, "cutoff": cutoff}),
        results: json!({"weak_value": {"re": ow.re, "im": ow.im}, "shift": to_value(&shift)}),
        checks,
        series: Vec::new(),
    })
}

pub fn run_geometry(p: &GeometryParams, seed: u64) -> Result<Report, CliError> {
    let triangles = p.triangles.unwrap_or(200);
    let dim = p.dim.unwrap_or(4);
    let dt = p.dt.unwrap_or(1e-2);
    if !(1..=100_000).contains(&triangles) {
        return Err(invalid(format!("triangles must be in 1..=100000, got {triangles}")));
    }
    if !(2..=64).contains(&dim) {
        return Err(invalid(format!("dim must be in 2..=64, got {dim}")));
    }
    if !(dt > 0.0 && dt <= 0.1) {
        return Err(invalid(format!("dt must be in (0, 0.1], got {dt}")));
    }
    let survey = triangle_survey(triangles, seed)?;
    let mut rng = seeded_rng(seed);
    let h = random_hermitian(dim, &mut rng);
    let psi = random_state(dim, &mut rng);
    let coarse = speed_equals_uncertainty(&h, &psi, dt)?;
    let fine = speed_equals_uncertainty(&h, &psi, dt / 2.0)?;
    let checks = vec![
        Check::at_most("bargmann_vs_solid_angle", survey.max_residual, 1e-9),
        Check::at_most("speed_residual_halving", fine.residual(), 0.5 * coarse.residual()),
    ];
    Ok(Report {
        parameters: json!({"triangles": triangles, "dim": dim, "dt": dt}),
        results: json!({
            "max_phase_residual": survey.max_residual,
            "speed": {"dt": dt, "projective_speed": coarse.lhs, "energy_uncertainty": coarse.rhs, "residual": coarse.residual()},
            "speed_half_step": {"dt": dt / 2.0, "projective_speed": fine.lhs, "energy_uncertainty": fine.rhs, "residual": fine.residual()},
        }),
        checks,
        series: Vec::new(),
    })
}

pub fn run_modular(p: &ModularParams) -> Result<Report, CliError> {
    let ring_sites = p.ring.unwrap_or(16);
    if ring_sites % 4 != 0 || !(4..=256).contains(&ring_sites) {
        return Err(invalid(format!("ring must be a multiple of 4 in 4..=256, got {ring_sites}")));
    }
    let spins = modular_spin_ops(RingSpace::new(ring_sites, 1.0)?);
    let pauli = spins.pauli_residual();
    let leakage = spins.span_leakage();
    let mut checks = vec![Check::at_most("pauli_algebra", pauli, EXACT), Check::at_most("slit_span_leakage", leakage, EXACT)];
    let mut results = json!({"ring": {"sites": ring_sites, "pauli_residual": pauli, "span_leakage": leakage}});
    let mut series = Vec::new();
    let mut params = json!({"ring": ring_sites});

    if let Some(pair) = &p.crt {
        let [na, nb] = pair[..] else {
            return Err(invalid("crt needs exactly two factors"));
        };
        if !(2..=64).contains(&na) || !(2..=64).contains(&nb) {
            return Err(invalid("crt factors must be in 2..=64"));
        }
        params["crt"] = json!([na, nb]);
        let orbits = product_shift_orbits(na, nb);
        let coprime = gcd(na, nb) == 1;
        let lengths: Vec<usize> = orbits.iter().map(Vec::len).collect();
        let mut crt = json!({
            "coprime": coprime,
            "orbit_count": orbits.len(),
            "orbit_lengths": lengths,
            "single_line": orbits.len() == 1,
        });
        if coprime {
            let residual = crt_relabel_check(&CrtFactorization::new(na, nb)?);
            crt["relabel_residual"] = json!(residual);
            checks.push(Check::at_most("crt_relabel", residual, EXACT));
            checks.push(Check::at_most("crt_orbit_count_minus_one", (orbits.len() - 1) as f64, 0.0));
        }
        let mut csv = String::from("orbit,a,b\n");
        for (i, line) in orbits.iter().enumerate() {
            for (a, b) in line {
                csv.push_str(&format!("{i},{a},{b}\n"));
            }
        }
        let plot = "plot file using 2:3:1 with points pt 7 palette notitle".to_string();
        series.push(("orbits".into(), csv, plot));
        results["crt"] = crt;
    }
    Ok(Report { parameters: params, results, checks, series })
}

pub fn run_cat(p: &CatParams, seed: u64) -> Result<Report, CliError> {
    let separation = p.separation.unwrap_or(10.0);
    let alpha = p.alpha.unwrap_or(0.0);
    let t = p.t.unwrap_or(FRAC_PI_2);
    let cutoff = p.cutoff.unwrap_or(256);
    let step = p.step.unwrap_or(0.01);
    if !(separation > 0.0 && separation <= 20.0) {
        return Err(invalid(format!("L must be in (0, 20], got {separation}")));
    }
    if !alpha.is_finite() || !t.is_finite() {
        return Err(invalid("alpha and t must be finite"));
    }
    if cutoff > 1024 {
        return Err(invalid(format!("cutoff must be at most 1024, got {cutoff}")));
    }
    if !(step >= 1e-4 && step <= 1.0) {
        return Err(invalid(format!("step must be in [1e-4, 1], got {step}")));
    }
    if let Some(0) = p.shots {
        return Err(invalid("shots must be at least 1"));
    }
    let detectors = match p.detectors.clone().unwrap_or(DetectorSpec::Named("default".into())) {
        DetectorSpec::Named(n) if n == "default" => DetectorArray::standard(),
        DetectorSpec::Named(n) => return Err(invalid(format!("unknown detector array `{n}`"))),
        DetectorSpec::Custom { centers, half_width } => DetectorArray::new(centers, half_width)?,
    };
    let config = CatConfig::new(separation, alpha, cutoff)?;
    let w = config.faithful_half_width();
    let grid = Grid::new(-w, w, step)?;
    let experiment = cat_experiment(&config, t, &detectors, Some(&grid))?;

    let rotated = rotate_cat(&cat_state(&config)?, t);
    let target = rotated_cat_target(&config, t)?;
    let infidelity = 1.0 - target.inner(&rotated).norm_sqr();
    let overlap = branch_overlap(&config)?;
    let click = experiment.value("click_probability").unwrap_or(f64::NAN);

    let mut checks = vec![
        Check::at_most("rotation_infidelity", infidelity.abs(), 1e-8),
        Check::at_most("branch_overlap_truncation", (overlap.truncated - overlap.analytic).abs(), 1e-20 + 1e-6 * overlap.analytic),
    ];
    let mut results = json!({
        "click_probability": click,
        "branch_overlap_analytic": overlap.analytic,
        "branch_overlap_truncated": overlap.truncated,
        "rotation_infidelity": infidelity,
    });
    if let Some(closed) = experiment.value("click_probability_closed_form") {
        results["click_probability_closed_form"] = json!(closed);
        checks.push(Check::at_most("click_probability_vs_closed_form", (click - closed).abs(), 1e-6));
    }
    let mut params = json!({
        "L": separation, "alpha": alpha, "t": t, "cutoff": cutoff, "step": step,
        "detectors": {"centers": detectors.centers(), "half_width": detectors.half_width()},
    });
    if let Some(shots) = p.shots {
        params["shots"] = json!(shots);
        let est = cat_phase_estimation_with(&config, detectors.half_width(), shots, seed)?;
        results["phase_estimation"] = to_value(&est.scalars);
    }
    let rows = &experiment.series["density"].rows;
    let mut csv = String::from("x,density\n");
    for r in rows {
        csv.push_str(&format!("{:.15e},{:.15e}\n", r[0], r[1]));
    }
    let plot = "set xlabel 'x'\nset ylabel 'density'\nplot file using 1:2 with lines notitle".to_string();
    Ok(Report { parameters: params, results, checks, series: vec![("density".into(), csv, plot)] })
}

pub fn run_game(p: &GameParams, seed: u64) -> Result<Report, CliError> {
    let alphas = p.alphas.clone().unwrap_or_else(|| vec![0.0, FRAC_PI_3, FRAC_PI_2, PI]);
    let shots = p.shots.unwrap_or(10_000);
    if alphas.is_empty() || alphas.iter().any(|a| !a.is_finite()) {
        return Err(invalid("alphas must be a non-empty list of finite numbers"));
    }
    if !(1..=100_000_000).contains(&shots) {
        return Err(invalid(format!("shots must be in 1..=1e8, got {shots}")));
    }
    let res = qubit_phase_game(&alphas, shots, seed)?;
    let mut checks = Vec::new();
    for (i, &alpha) in alphas.iter().enumerate() {
        let tag = format!("alpha[{i}]");
        let mean = res.value(&format!("{tag}.sigma1_mean")).unwrap_or(f64::NAN);
        let tol = match res.value(&format!("{tag}.sigma1_stderr")) {
            Some(se) => 5.0 * se,
            None => EXACT,
        };
        checks.push(Check::at_most(&format!("{tag}.sigma1_mean"), (mean - alpha.cos()).abs(), tol));
    }
    let rows = &res.series["outcomes"].rows;
    let mut csv = String::from("alpha,sigma1_mean,sigma1_stderr,sigma2_mean\n");
    for r in rows {
        csv.push_str(&format!("{:.15e},{:.15e},{:.15e},{:.15e}\n", r[0], r[1], r[2], r[3]));
    }
    let plot = "set xlabel 'alpha'\nplot file using 1:2:3 with yerrorbars title 'sigma1', cos(x) title 'cos'".to_string();
    Ok(Report {
        parameters: json!({"alphas": alphas, "shots": shots}),
        results: to_value(&res.scalars),
        checks,
        series: vec![("outcomes".into(), csv, plot)],
    })
}
