//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input error,
//! 3 numerical-resolution error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::compiler::{compile, schedule_propagator, verify, EquivalenceReport, PulseSchedule};
use crate::dynamics::{forbidden_scaling, log_sweep, simulate_schedule, IntegrationConfig, SimulationReport};
use crate::error::Error;
use crate::gates::GateSpec;
use crate::pulse::PulseParams;
use crate::schedule_file;
use crate::spin_system::{spectrum, transition_table, Q2Form, Spectrum, SpectrumMethod, SpinSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Deviation above which `simulate` warns that the idealized model is off.
pub const SIMULATION_WARN_DEVIATION: f64 = 1e-2;

const GRAMMAR_HINT: &str = "gate grammar: KIND \":\" CONTROLS \"->\" TARGET, KIND in NOT|CNOT|CCNOT|UT|CUT|CCUT, \
CONTROLS in {\"\", Q, R, S, QR, RS, QS}; UT-family gates append (phi,f) in radians, e.g. CCUT:QR->S(1.2,0.4)";

#[derive(Debug, Parser)]
#[command(
    name = "spin72",
    version,
    about = "Three virtual qubits on one spin-7/2: compile, verify and simulate RF pulse gates"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// TOML file with default values for the flags below
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Zeeman frequency (frequency unit)
    #[arg(long, global = true, value_parser = parse_number)]
    pub omega0: Option<f64>,
    /// Quadrupole frequency
    #[arg(long = "omegaQ", global = true, value_parser = parse_number)]
    pub omega_q: Option<f64>,
    /// Polar angle of the gradient axis, radians (accepts e.g. pi/5)
    #[arg(long, global = true, value_parser = parse_number)]
    pub theta: Option<f64>,
    /// Azimuthal angle of the gradient axis, radians
    #[arg(long, global = true, value_parser = parse_number)]
    pub phi: Option<f64>,
    /// Spectrum used to resolve frequencies
    #[arg(long, global = true, value_enum)]
    pub method: Option<MethodArg>,
    /// RF drive amplitude γH_rf
    #[arg(long = "gammaHrf", global = true, value_parser = parse_number)]
    pub gamma_hrf: Option<f64>,
    /// Angular form of the rank-2 lattice coefficient
    #[arg(long = "q2-form", global = true, value_enum)]
    pub q2_form: Option<Q2FormArg>,
    /// Output format (each command has its own default)
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the result here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Pert,
    Exact,
}

impl From<MethodArg> for SpectrumMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Pert => SpectrumMethod::PerturbativeFirstOrder,
            MethodArg::Exact => SpectrumMethod::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Q2FormArg {
    AsPrinted,
    SinSquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Table,
    Csv,
    St,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition table of all 28 level pairs
    Spectrum,
    /// Compile a gate into a resolved pulse schedule
    Compile {
        /// Gate, e.g. CCNOT:QR->S
        gate: String,
    },
    /// Compile (or replay a schedule file) and check it against the textbook gate
    Verify {
        /// Gate, e.g. CNOT:R->Q
        gate: Option<String>,
        /// Replay this schedule file instead of compiling
        #[arg(long, value_name = "FILE")]
        schedule: Option<PathBuf>,
    },
    /// Forbidden-transition matrix element against omegaQ/omega0
    Sweep {
        /// Level pair, e.g. 5,7
        #[arg(long, value_parser = parse_pair)]
        pair: (usize, usize),
        #[arg(long, default_value_t = 1e-4, value_parser = parse_number)]
        from: f64,
        #[arg(long, default_value_t = 1e-2, value_parser = parse_number)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Integrate the physical drive of a schedule file
    Simulate {
        schedule: PathBuf,
        #[arg(long, default_value_t = IntegrationConfig::default().steps_per_shortest_period)]
        steps_per_period: u32,
        #[arg(long, default_value_t = IntegrationConfig::default().max_steps)]
        max_steps: u64,
    },
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub omega0: f64,
    #[serde(rename = "omegaQ")]
    pub omega_q: f64,
    pub theta: f64,
    pub phi: f64,
    pub method: MethodArg,
    #[serde(rename = "gammaHrf")]
    pub gamma_hrf: f64,
    #[serde(rename = "q2-form")]
    pub q2_form: Q2FormArg,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            omega_q: 0.01,
            theta: std::f64::consts::PI / 5.0,
            phi: 0.0,
            method: MethodArg::Exact,
            gamma_hrf: 1e-3,
            q2_form: Q2FormArg::AsPrinted,
        }
    }
}

/// Config-file contents; every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    omega0: Option<f64>,
    #[serde(rename = "omegaQ")]
    omega_q: Option<f64>,
    theta: Option<f64>,
    phi: Option<f64>,
    method: Option<MethodArg>,
    #[serde(rename = "gammaHrf")]
    gamma_hrf: Option<f64>,
    #[serde(rename = "q2-form")]
    q2_form: Option<Q2FormArg>,
    format: Option<FormatArg>,
}

impl RunConfig {
    pub fn system(&self) -> Result<SpinSystem, Error> {
        let form = match self.q2_form {
            Q2FormArg::AsPrinted => Q2Form::AsPrinted,
            Q2FormArg::SinSquared => Q2Form::SinSquared,
        };
        Ok(SpinSystem::new(self.omega0, self.omega_q, self.theta, self.phi)?.with_q2_form(form))
    }

    pub fn pulse_params(&self) -> Result<PulseParams, Error> {
        PulseParams::new(self.gamma_hrf)
    }
}

/// Accepts plain floats and multiples of pi: `0.3`, `pi/5`, `2pi/3`, `-pi`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| format!("bad denominator in `{s}`"))?),
        None => (t.as_str(), 1.0),
    };
    let coeff = num
        .strip_suffix("pi")
        .map(|c| c.trim_end_matches('*'))
        .ok_or_else(|| format!("`{s}` is not a number or multiple of pi"))?;
    let k = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient in `{s}`"))?,
    };
    Ok(k * std::f64::consts::PI / den)
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once([',', '-', ':'])
        .ok_or_else(|| format!("pair must look like 5,7, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad level `{a}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad level `{b}`"))?;
    if a > 7 || b > 7 || a == b {
        return Err(format!("pair needs two distinct levels in 0..=7, got `{s}`"));
    }
    Ok((a.min(b), a.max(b)))
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnderResolved { .. } | Error::StepBudgetExceeded { .. } | Error::AmbiguousLabeling { .. } => {
                EXIT_NUMERICAL
            }
            _ => EXIT_INPUT,
        };
        let mut message = e.to_string();
        if matches!(e, Error::GateParse { .. }) {
            message = format!("{message}\n{GRAMMAR_HINT}");
        }
        Failure { code, message }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, err) {
        Ok((text, code)) => {
            if let Some(path) = &cli.common.out {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            } else if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn resolve_config(
    common: &CommonArgs,
    schedule: Option<&PulseSchedule>,
) -> Result<(RunConfig, Option<FormatArg>), Failure> {
    let mut cfg = RunConfig::default();
    if let Some(p) = schedule.and_then(|s| s.parameters) {
        cfg.omega0 = p.omega0;
        cfg.omega_q = p.omega_q;
        cfg.theta = p.theta;
        cfg.phi = p.phi;
        cfg.gamma_hrf = p.gamma_hrf;
    }
    if let Some(m) = schedule.and_then(|s| s.spectrum_method) {
        cfg.method = match m {
            SpectrumMethod::PerturbativeFirstOrder => MethodArg::Pert,
            SpectrumMethod::Exact => MethodArg::Exact,
        };
    }
    let mut format = None;
    if let Some(path) = &common.config {
        let text = read(path)?;
        let file: ConfigFile =
            toml::from_str(&text).map_err(|e| input_failure(format!("config {}: {e}", path.display())))?;
        cfg.omega0 = file.omega0.unwrap_or(cfg.omega0);
        cfg.omega_q = file.omega_q.unwrap_or(cfg.omega_q);
        cfg.theta = file.theta.unwrap_or(cfg.theta);
        cfg.phi = file.phi.unwrap_or(cfg.phi);
        cfg.method = file.method.unwrap_or(cfg.method);
        cfg.gamma_hrf = file.gamma_hrf.unwrap_or(cfg.gamma_hrf);
        cfg.q2_form = file.q2_form.unwrap_or(cfg.q2_form);
        format = file.format;
    }
    cfg.omega0 = common.omega0.unwrap_or(cfg.omega0);
    cfg.omega_q = common.omega_q.unwrap_or(cfg.omega_q);
    cfg.theta = common.theta.unwrap_or(cfg.theta);
    cfg.phi = common.phi.unwrap_or(cfg.phi);
    cfg.method = common.method.unwrap_or(cfg.method);
    cfg.gamma_hrf = common.gamma_hrf.unwrap_or(cfg.gamma_hrf);
    cfg.q2_form = common.q2_form.unwrap_or(cfg.q2_form);
    Ok((cfg, common.format.or(format)))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))
}

fn load_schedule(path: &Path) -> Result<PulseSchedule, Failure> {
    schedule_file::from_toml(&read(path)?).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<(String, i32), Failure> {
    match &cli.command {
        Command::Spectrum => {
            let (cfg, format) = resolve_config(&cli.common, None)?;
            cmd_spectrum(&cfg, format.unwrap_or(FormatArg::Table), err).map(|s| (s, EXIT_OK))
        }
        Command::Compile { gate } => {
            let (cfg, format) = resolve_config(&cli.common, None)?;
            let spec: GateSpec = gate.parse()?;
            cmd_compile(&spec, &cfg, format.unwrap_or(FormatArg::St), err).map(|s| (s, EXIT_OK))
        }
        Command::Verify { gate, schedule } => {
            let (spec, u) = match (gate, schedule) {
                (_, Some(path)) => {
                    let sched = load_schedule(path)?;
                    if let Some(g) = gate {
                        let named: GateSpec = g.parse()?;
                        if named != sched.gate {
                            return Err(input_failure(format!(
                                "schedule {} is for {}, not {named}",
                                path.display(),
                                sched.gate
                            )));
                        }
                    }
                    let u = schedule_propagator(&sched)?;
                    (sched.gate, u)
                }
                (Some(g), None) => {
                    let spec: GateSpec = g.parse()?;
                    let u = schedule_propagator(&compile(&spec)?)?;
                    (spec, u)
                }
                (None, None) => {
                    return Err(input_failure(format!(
                        "verify needs a gate or --schedule FILE\n{GRAMMAR_HINT}"
                    )))
                }
            };
            let (_, format) = resolve_config(&cli.common, None)?;
            let report = verify(&spec, &u);
            let code = if report.verdict.is_verified() {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            Ok((render_verify(&spec, &report, format.unwrap_or(FormatArg::Table)), code))
        }
        Command::Sweep { pair, from, to, points } => {
            let (cfg, format) = resolve_config(&cli.common, None)?;
            cmd_sweep(*pair, *from, *to, *points, &cfg, format.unwrap_or(FormatArg::Csv), err).map(|s| (s, EXIT_OK))
        }
        Command::Simulate {
            schedule,
            steps_per_period,
            max_steps,
        } => {
            let sched = load_schedule(schedule)?;
            let (cfg, format) = resolve_config(&cli.common, Some(&sched))?;
            let icfg = IntegrationConfig {
                steps_per_shortest_period: *steps_per_period,
                max_steps: *max_steps,
                ..Default::default()
            };
            let report = simulate_schedule(&cfg.system()?, &sched, &cfg.pulse_params()?, &icfg)?;
            if report.deviation > SIMULATION_WARN_DEVIATION {
                let _ = writeln!(
                    err,
                    "warning: deviation {:.3e} from the idealized propagator exceeds {SIMULATION_WARN_DEVIATION:e}; \
                     drive too strong or too detuned for the two-level pulse model",
                    report.deviation
                );
            }
            Ok((
                render_simulation(&sched, &cfg, &report, format.unwrap_or(FormatArg::Table)),
                EXIT_OK,
            ))
        }
    }
}

fn warn_regime(spec: &Spectrum, cfg: &RunConfig, err: &mut dyn Write) {
    if spec.outside_perturbative_regime {
        let _ = writeln!(
            err,
            "warning: omegaQ/omega0 = {} is outside the first-order regime (< 0.1)",
            cfg.omega_q / cfg.omega0
        );
    }
}

fn cmd_spectrum(cfg: &RunConfig, format: FormatArg, err: &mut dyn Write) -> Result<String, Failure> {
    let sys = cfg.system()?;
    let spec = spectrum(&sys, cfg.method.into())?;
    warn_regime(&spec, cfg, err);
    let rows = transition_table(&spec);
    let w0 = cfg.omega0;
    let mut s = String::new();
    match format {
        FormatArg::Csv => {
            s.push_str("upper,lower,omega,element,kind\n");
            for t in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    t.upper,
                    t.lower,
                    t.omega / w0,
                    t.element,
                    kind(t.allowed)
                );
            }
        }
        FormatArg::St => {
            #[derive(Serialize)]
            struct Row {
                upper: usize,
                lower: usize,
                omega: f64,
                element: f64,
                allowed: bool,
            }
            #[derive(Serialize)]
            struct Doc {
                spectrum_method: &'static str,
                energies: Vec<f64>,
                parameters: RunConfig,
                transitions: Vec<Row>,
            }
            let doc = Doc {
                spectrum_method: spec.method.short_name(),
                energies: spec.energies.iter().map(|e| e / w0).collect(),
                parameters: *cfg,
                transitions: rows
                    .iter()
                    .map(|t| Row {
                        upper: t.upper,
                        lower: t.lower,
                        omega: t.omega / w0,
                        element: t.element,
                        allowed: t.allowed,
                    })
                    .collect(),
            };
            s = toml::to_string(&doc).expect("spectrum document serializes");
        }
        FormatArg::Table => {
            let _ = writeln!(
                s,
                "# spectrum ({}), omega0={} omegaQ={} theta={} phi={}; frequencies in units of omega0",
                spec.method.short_name(),
                cfg.omega0,
                cfg.omega_q,
                cfg.theta,
                cfg.phi
            );
            let _ = writeln!(
                s,
                "{:>5} {:>5} {:>16} {:>14}  kind",
                "upper", "lower", "omega", "|<n|Ix|m>|"
            );
            for t in &rows {
                let _ = writeln!(
                    s,
                    "{:>5} {:>5} {:>16.12} {:>14.6e}  {}",
                    t.upper,
                    t.lower,
                    t.omega / w0,
                    t.element,
                    kind(t.allowed)
                );
            }
        }
    }
    Ok(s)
}

fn kind(allowed: bool) -> &'static str {
    if allowed {
        "allowed"
    } else {
        "forbidden"
    }
}

fn cmd_compile(spec: &GateSpec, cfg: &RunConfig, format: FormatArg, err: &mut dyn Write) -> Result<String, Failure> {
    let sys = cfg.system()?;
    let spectrum = spectrum(&sys, cfg.method.into())?;
    warn_regime(&spectrum, cfg, err);
    let sched = compile(spec)?.resolve(&sys, &spectrum, &cfg.pulse_params()?);
    for st in sched.groups.iter().flatten().filter(|st| st.duration.is_none()) {
        let _ = writeln!(
            err,
            "warning: pair ({},{}) has no Ix matrix element here; duration omitted",
            st.tone.upper, st.tone.lower
        );
    }
    Ok(match format {
        FormatArg::St => schedule_file::to_toml(&sched),
        FormatArg::Csv => {
            let mut s = String::from("group,upper,lower,angle_rad,phase_rad,axis,omega,duration\n");
            for (g, group) in sched.groups.iter().enumerate() {
                for st in group {
                    let _ = writeln!(
                        s,
                        "{g},{},{},{},{},{},{},{}",
                        st.tone.upper,
                        st.tone.lower,
                        st.tone.angle,
                        st.tone.phase,
                        st.tone.axis,
                        opt(st.omega),
                        opt(st.duration)
                    );
                }
            }
            s
        }
        FormatArg::Table => {
            let mut s = format!(
                "# {} -> {} tone(s) in {} group(s)\n",
                sched.gate,
                sched.tone_count(),
                sched.groups.len()
            );
            for (g, group) in sched.groups.iter().enumerate() {
                for st in group {
                    let _ = writeln!(
                        s,
                        "group {g}: ({},{}) angle={:.6} phase={:.6} axis={} omega={} duration={}",
                        st.tone.upper,
                        st.tone.lower,
                        st.tone.angle,
                        st.tone.phase,
                        st.tone.axis,
                        opt(st.omega),
                        opt(st.duration)
                    );
                }
            }
            s
        }
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_verify(spec: &GateSpec, report: &EquivalenceReport, format: FormatArg) -> String {
    match format {
        FormatArg::Csv => format!(
            "gate,verdict,max_deviation\n{},{},{:e}\n",
            spec,
            report.verdict.as_str(),
            report.max_deviation
        ),
        FormatArg::St => {
            #[derive(Serialize)]
            struct Entry {
                row: usize,
                col: usize,
                re: f64,
                im: f64,
            }
            #[derive(Serialize)]
            struct Doc {
                gate: String,
                verdict: &'static str,
                max_deviation: f64,
                phase_map: Vec<Entry>,
            }
            let doc = Doc {
                gate: spec.to_string(),
                verdict: report.verdict.as_str(),
                max_deviation: report.max_deviation,
                phase_map: report
                    .phase_map
                    .iter()
                    .map(|p| Entry {
                        row: p.row,
                        col: p.col,
                        re: p.factor.re,
                        im: p.factor.im,
                    })
                    .collect(),
            };
            toml::to_string(&doc).expect("report serializes")
        }
        FormatArg::Table => {
            let mut s = format!(
                "{spec}: {} (max deviation {:.3e})\n",
                report.verdict.as_str(),
                report.max_deviation
            );
            for p in &report.phase_map {
                let _ = writeln!(
                    s,
                    "  <{}|U|{}> / target = {:+.6}{:+.6}i",
                    p.row, p.col, p.factor.re, p.factor.im
                );
            }
            s
        }
    }
}

fn cmd_sweep(
    pair: (usize, usize),
    from: f64,
    to: f64,
    points: usize,
    cfg: &RunConfig,
    format: FormatArg,
    err: &mut dyn Write,
) -> Result<String, Failure> {
    let base = cfg.system()?;
    let ratios = log_sweep(from, to, points)?;
    let sweep = forbidden_scaling(&base, pair, &ratios)?;
    let label = format!("{}-{}", sweep.upper, sweep.lower);
    let mut s = String::new();
    match format {
        FormatArg::Table => {
            let _ = writeln!(
                s,
                "{:>14} {:>6} {:>14} {:>10}",
                "omegaQ/omega0", "pair", "element", "slope"
            );
            for p in &sweep.points {
                let local = p.local_slope.map(|v| format!("{v:.4}")).unwrap_or_default();
                let _ = writeln!(s, "{:>14.6e} {:>6} {:>14.6e} {:>10}", p.ratio, label, p.element, local);
            }
            let _ = writeln!(s, "fitted slope ({label}) = {:.6}", sweep.slope);
        }
        FormatArg::Csv | FormatArg::St => {
            s.push_str("omegaQ_over_omega0,pair,element,slope_window\n");
            for p in &sweep.points {
                let _ = writeln!(s, "{},{},{},{}", p.ratio, label, p.element, opt(p.local_slope));
            }
            let _ = writeln!(err, "fitted slope ({label}) = {:.6}", sweep.slope);
        }
    }
    Ok(s)
}

pub fn render_simulation(
    sched: &PulseSchedule,
    cfg: &RunConfig,
    report: &SimulationReport,
    format: FormatArg,
) -> String {
    match format {
        FormatArg::St => {
            #[derive(Serialize)]
            struct Doc<'a> {
                gate: String,
                deviation: f64,
                total_duration: f64,
                steps: u64,
                parameters: RunConfig,
                transfers: &'a [crate::dynamics::Transfer],
            }
            toml::to_string(&Doc {
                gate: sched.gate.to_string(),
                deviation: report.deviation,
                total_duration: report.total_duration,
                steps: report.steps,
                parameters: *cfg,
                transfers: &report.transfers,
            })
            .expect("simulation report serializes")
        }
        FormatArg::Csv => {
            let mut s = String::from("input,output,probability\n");
            for t in &report.transfers {
                let _ = writeln!(s, "{},{},{}", t.input, t.output, t.probability);
            }
            s
        }
        FormatArg::Table => {
            let mut s = format!(
                "{}: rwa deviation {:.3e}, duration {:.6} (1/omega0), {} steps\n",
                sched.gate, report.deviation, report.total_duration, report.steps
            );
            for t in &report.transfers {
                let _ = writeln!(s, "  |{}> -> |{}>  p = {:.6}", t.input, t.output, t.probability);
            }
            s
        }
    }
}
