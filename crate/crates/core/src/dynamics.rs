//! Time-dependent simulation of the driven spin.
//!
//! The driven Hamiltonian is
//!
//! ```text
//! H(t) = H_static - Σ_k 2 a_k I_axis cos(Ω_k t - f_k)
//! ```
//!
//! i.e. a linearly polarized field whose two counter-rotating halves each have
//! amplitude `a_k = γH_rf`. With this normalization a resonant tone of length
//! `T` rotates its pair by `φ = 2 T a |⟨n|Ix|m⟩|` with phase
//! `f + arg⟨ψ_m|I_axis|ψ_n⟩`, which is what the idealized propagator assumes.
//!
//! Propagation multiplies exact exponentials of the slice-averaged
//! Hamiltonian over uniform slices, in the interaction picture of a diagonal
//! reference Hamiltonian. Every entry is a finite sum of `e^{iwt}` terms, so
//! the slice average is exact.

use std::f64::consts::{PI, TAU};

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::compiler::{schedule_propagator, PulseSchedule};
use crate::error::{Error, Result};
use crate::linalg::{c, diag, expm_taylor, max_diff, re, Mat8, DIM};
use crate::pulse::{pulse_duration, pulse_propagator, Axis, PulseParams, Tone, FORBIDDEN_ELEMENT};
use crate::spin_system::{build_hamiltonian, exact_spectrum, projection, Spectrum, SpinSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Frame {
    #[default]
    Lab,
    /// Frame rotating about z at `omega0`; the Zeeman term drops out.
    RotatingAtOmega0,
}

/// One RF component `2 a I_axis cos(Ω t - f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveTone {
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub axis: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    pub tones: Vec<DriveTone>,
    /// Absolute start time; drive phases refer to `t = 0`.
    pub start: f64,
    pub duration: f64,
    pub frame: Frame,
}

impl DriveSpec {
    pub fn lab(tones: Vec<DriveTone>, duration: f64) -> Self {
        Self {
            tones,
            start: 0.0,
            duration,
            frame: Frame::Lab,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration.is_finite() && self.duration >= 0.0) {
            return Err(invalid(
                "duration",
                format!("must be finite and >= 0, got {}", self.duration),
            ));
        }
        if !self.start.is_finite() {
            return Err(invalid("start", format!("must be finite, got {}", self.start)));
        }
        for t in &self.tones {
            if !(t.amplitude.is_finite() && t.amplitude >= 0.0) {
                return Err(invalid(
                    "amplitude",
                    format!("must be finite and >= 0, got {}", t.amplitude),
                ));
            }
            if !(t.omega.is_finite() && t.phase.is_finite()) {
                return Err(invalid("omega", "drive frequency and phase must be finite".into()));
            }
        }
        Ok(())
    }
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationMethod {
    #[default]
    PiecewiseConstantExponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub steps_per_shortest_period: u32,
    pub method: IntegrationMethod,
    /// Refuse to integrate beyond this many slices.
    pub max_steps: u64,
}

/// Fewest slices per period of the fastest component.
pub const MIN_STEPS_PER_PERIOD: u32 = 20;

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            steps_per_shortest_period: 40,
            method: IntegrationMethod::default(),
            max_steps: 20_000_000,
        }
    }
}

impl IntegrationConfig {
    pub fn with_steps(steps_per_shortest_period: u32) -> Self {
        Self {
            steps_per_shortest_period,
            ..Self::default()
        }
    }
}

/// Hamiltonian in the interaction picture of a diagonal reference `diag(ε)`:
/// entry `(j, l)` of a component `A e^{iνt}` oscillates at `ν + ε_j - ε_l`.
struct FramedHamiltonian {
    /// Reference energies defining the picture.
    energies: [f64; DIM],
    /// Basis change from `|χ_m⟩` to the reference eigenbasis (columns).
    basis: Mat8,
    /// `(coefficient, angular frequency, row, col)` for each nonzero entry.
    entries: Vec<(Complex64, f64, usize, usize)>,
}

impl FramedHamiltonian {
    fn build(sys: &SpinSystem, drive: &DriveSpec) -> Self {
        let mut components: Vec<(f64, Mat8)> = Vec::new();
        for t in drive.tones.iter().filter(|t| t.amplitude > 0.0) {
            let op = match t.axis {
                Axis::X => sys.ops.ix,
                Axis::Y => sys.ops.iy,
            } * re(-t.amplitude);
            components.push((t.omega, op * Complex64::from_polar(1.0, -t.phase)));
            components.push((-t.omega, op * Complex64::from_polar(1.0, t.phase)));
        }
        let (energies, basis) = match drive.frame {
            Frame::Lab => {
                let eig = SymmetricEigen::new(build_hamiltonian(sys));
                let mut e = [0.0; DIM];
                e.copy_from_slice(eig.eigenvalues.as_slice());
                (e, eig.eigenvectors)
            }
            Frame::RotatingAtOmega0 => {
                components.push((0.0, sys.quadrupole_hamiltonian()));
                let mut e = [0.0; DIM];
                for (label, v) in e.iter_mut().enumerate() {
                    *v = -sys.omega0 * projection(label);
                }
                (e, Mat8::identity())
            }
        };
        let mut entries = Vec::new();
        for (nu, a) in components {
            let a = basis.adjoint() * a * basis;
            for j in 0..DIM {
                for l in 0..DIM {
                    if a[(j, l)].norm() > 0.0 {
                        entries.push((a[(j, l)], nu + energies[j] - energies[l], j, l));
                    }
                }
            }
        }
        Self {
            energies,
            basis,
            entries,
        }
    }

    fn max_frequency(&self) -> f64 {
        self.entries.iter().map(|e| e.1.abs()).fold(0.0, f64::max)
    }

    /// Time-ordered propagator of the framed Hamiltonian over `[start, start + steps·dt]`.
    fn propagate(&self, start: f64, dt: f64, steps: u64) -> Mat8 {
        // slice average of e^{iwt} over [mid - dt/2, mid + dt/2] is e^{iw·mid} sinc(w dt/2)
        let mut coeffs: Vec<Complex64> = self
            .entries
            .iter()
            .map(|&(a, w, _, _)| {
                let x = 0.5 * w * dt;
                let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                a * sinc
            })
            .collect();
        let advance: Vec<Complex64> = self
            .entries
            .iter()
            .map(|e| Complex64::from_polar(1.0, e.1 * dt))
            .collect();
        let mut u = Mat8::identity();
        for k in 0..steps {
            let mid = start + (k as f64 + 0.5) * dt;
            if k % 4096 == 0 {
                // re-anchor the phase recurrence
                for (coef, (&(a, w, _, _), _)) in coeffs.iter_mut().zip(self.entries.iter().zip(&advance)) {
                    let x = 0.5 * w * dt;
                    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
                    *coef = a * sinc * Complex64::from_polar(1.0, w * mid);
                }
            } else {
                for (coef, step) in coeffs.iter_mut().zip(&advance) {
                    *coef *= step;
                }
            }
            let mut h = Mat8::zeros();
            for (coef, &(_, _, j, l)) in coeffs.iter().zip(&self.entries) {
                h[(j, l)] += coef;
            }
            let h = (h + h.adjoint()) * re(0.5);
            u = expm_taylor(&(h * c(0.0, -dt))) * u;
        }
        u
    }

    /// `exp(-i diag(ε) t)` in the `|χ_m⟩` basis.
    fn reference_evolution(&self, t: f64) -> Mat8 {
        let phases = self.energies.map(|e| Complex64::from_polar(1.0, -e * t));
        self.basis * diag(&phases) * self.basis.adjoint()
    }
}

/// Number of uniform slices needed for `drive` under `cfg`.
pub fn required_steps(sys: &SpinSystem, drive: &DriveSpec, cfg: &IntegrationConfig) -> Result<u64> {
    if cfg.steps_per_shortest_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::UnderResolved {
            steps: cfg.steps_per_shortest_period,
            min: MIN_STEPS_PER_PERIOD,
        });
    }
    let ham = FramedHamiltonian::build(sys, drive);
    Ok(step_count(&ham, drive.duration, cfg))
}

fn step_count(ham: &FramedHamiltonian, duration: f64, cfg: &IntegrationConfig) -> u64 {
    let nu = ham.max_frequency();
    if nu == 0.0 || duration == 0.0 {
        return 1;
    }
    let periods = duration * nu / TAU;
    ((periods * f64::from(cfg.steps_per_shortest_period)).ceil() as u64).max(1)
}

/// Time-ordered propagator over `[start, start + duration]`, `|χ_m⟩` basis.
///
/// `Frame::Lab` returns the laboratory propagator; it is integrated in the
/// interaction picture of the exact static Hamiltonian, so only the drive is
/// sliced. `Frame::RotatingAtOmega0` returns `R(t1)† U_lab R(t0)` and is
/// integrated directly from the rotating-frame Hamiltonian, quadrupole
/// coupling included. The shortest period is that of the fastest entry of the
/// sliced Hamiltonian.
pub fn evolve(sys: &SpinSystem, drive: &DriveSpec, cfg: &IntegrationConfig) -> Result<Mat8> {
    drive.validate()?;
    if cfg.steps_per_shortest_period < MIN_STEPS_PER_PERIOD {
        return Err(Error::UnderResolved {
            steps: cfg.steps_per_shortest_period,
            min: MIN_STEPS_PER_PERIOD,
        });
    }
    if drive.duration == 0.0 {
        return Ok(Mat8::identity());
    }
    let ham = FramedHamiltonian::build(sys, drive);
    let steps = step_count(&ham, drive.duration, cfg);
    if steps > cfg.max_steps {
        return Err(Error::StepBudgetExceeded {
            required: steps,
            budget: cfg.max_steps,
        });
    }
    let dt = drive.duration / steps as f64;
    let framed = ham.basis * ham.propagate(drive.start, dt, steps) * ham.basis.adjoint();
    Ok(match drive.frame {
        Frame::Lab => {
            let end = drive.start + drive.duration;
            ham.reference_evolution(end) * framed * ham.reference_evolution(-drive.start)
        }
        Frame::RotatingAtOmega0 => framed,
    })
}

/// `R(t) = exp(i ω0 Iz t)`, the map from rotating-frame to lab-frame states.
pub fn rotating_frame_operator(sys: &SpinSystem, t: f64) -> Mat8 {
    let mut entries = [re(0.0); DIM];
    for (label, e) in entries.iter_mut().enumerate() {
        *e = Complex64::from_polar(1.0, sys.omega0 * projection(label) * t);
    }
    diag(&entries)
}

/// Lab propagator over `[t_start, t_end]` expressed in the dressed basis and
/// the interaction frame of the static Hamiltonian.
pub fn interaction_frame(u_lab: &Mat8, spectrum: &Spectrum, t_start: f64, t_end: f64) -> Mat8 {
    let phases = |t: f64, sign: f64| {
        let mut e = [re(0.0); DIM];
        for (label, z) in e.iter_mut().enumerate() {
            *z = Complex64::from_polar(1.0, sign * spectrum.energies[label] * t);
        }
        diag(&e)
    };
    phases(t_end, 1.0) * spectrum.dressed(u_lab) * phases(t_start, -1.0)
}

/// Drive component that realizes `tone` at amplitude `amplitude` on `spectrum`.
///
/// The RF phase compensates the phase of `⟨ψ_upper|Ix|ψ_lower⟩`; a negative
/// angle is realized as `|φ|` with the phase advanced by π.
pub fn drive_for_tone(tone: &Tone, spectrum: &Spectrum, amplitude: f64, omega: Option<f64>) -> DriveTone {
    let element = spectrum.ix_element(tone.upper, tone.lower);
    let flip = if tone.angle < 0.0 { PI } else { 0.0 };
    DriveTone {
        omega: omega.unwrap_or_else(|| spectrum.transition_frequency(tone.upper, tone.lower)),
        amplitude,
        phase: tone.phase + flip - element.arg(),
        axis: tone.axis,
    }
}

/// Max entrywise gap between the simulated interaction-frame propagator of a
/// single rectangular pulse and the idealized two-level propagator.
pub fn rwa_deviation(sys: &SpinSystem, tone: &Tone, params: &PulseParams, cfg: &IntegrationConfig) -> Result<f64> {
    if tone.angle == 0.0 {
        return Ok(0.0);
    }
    let spectrum = exact_spectrum(sys)?;
    let element = spectrum.ix_element(tone.upper, tone.lower).norm();
    let duration = pulse_duration(tone.angle, params, element).map_err(|_| Error::ForbiddenTransition {
        upper: tone.upper,
        lower: tone.lower,
    })?;
    let drive = DriveSpec::lab(vec![drive_for_tone(tone, &spectrum, params.gamma_hrf, None)], duration);
    let u_lab = evolve(sys, &drive, cfg)?;
    let u = interaction_frame(&u_lab, &spectrum, 0.0, duration);
    Ok(max_diff(&u, &pulse_propagator(tone)))
}

/// One point of a forbidden-transition sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub ratio: f64,
    pub element: f64,
    /// Local log-log slope from neighbouring points.
    pub local_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSweep {
    pub upper: usize,
    pub lower: usize,
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln element` against `ln(omega_q / omega0)`.
    pub slope: f64,
}

/// `n` ratios spaced evenly in log between `from` and `to` inclusive.
pub fn log_sweep(from: f64, to: f64, n: usize) -> Result<Vec<f64>> {
    if !(from > 0.0 && to > 0.0 && from.is_finite() && to.is_finite()) || n < 2 {
        return Err(invalid(
            "sweep",
            format!("need 0 < from, to and at least 2 points, got {from}..{to} x{n}"),
        ));
    }
    let (a, b) = (from.ln(), to.ln());
    Ok((0..n)
        .map(|i| match i {
            0 => from,
            i if i == n - 1 => to,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect())
}

/// `|⟨ψ_lower|Ix|ψ_upper⟩|` from the exact spectrum across `omega_q / omega0`
/// values, with its fitted log-log slope.
pub fn forbidden_scaling(base: &SpinSystem, pair: (usize, usize), ratios: &[f64]) -> Result<ScalingSweep> {
    let (upper, lower) = (pair.0.min(pair.1), pair.0.max(pair.1));
    crate::pulse::projector(upper, lower)?;
    let elements = ratios
        .par_iter()
        .map(|&r| {
            let sys = base.with_omega_q(r * base.omega0)?;
            Ok(exact_spectrum(&sys)?.ix_element(upper, lower).norm())
        })
        .collect::<Result<Vec<f64>>>()?;

    let usable: Vec<(f64, f64)> = ratios
        .iter()
        .zip(&elements)
        .filter(|(_, &e)| e >= FORBIDDEN_ELEMENT)
        .map(|(&r, &e)| (r.ln(), e.ln()))
        .collect();
    if usable.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "pair ({upper},{lower}): {} of {} elements are above {FORBIDDEN_ELEMENT:e}, nothing to fit",
            usable.len(),
            ratios.len()
        )));
    }
    let slope = least_squares_slope(&usable);

    let logs: Vec<Option<(f64, f64)>> = ratios
        .iter()
        .zip(&elements)
        .map(|(&r, &e)| (e >= FORBIDDEN_ELEMENT).then(|| (r.ln(), e.ln())))
        .collect();
    let points = (0..ratios.len())
        .map(|i| {
            let lo = logs[i.saturating_sub(1)];
            let hi = logs[(i + 1).min(ratios.len() - 1)];
            let local_slope = match (lo, hi) {
                (Some(a), Some(b)) if b.0 != a.0 => Some((b.1 - a.1) / (b.0 - a.0)),
                _ => None,
            };
            ScalingPoint {
                ratio: ratios[i],
                element: elements[i],
                local_slope,
            }
        })
        .collect();
    Ok(ScalingSweep {
        upper,
        lower,
        points,
        slope,
    })
}

/// Ordinary least-squares slope of `(x, y)` points.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Default coherence budget, in units of `1/omega0`.
pub const DEFAULT_COHERENCE_BUDGET: f64 = 1e5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffRow {
    pub gamma_hrf: f64,
    pub duration: f64,
    pub exceeds_budget: bool,
}

/// Pulse length needed for `target_angle` on `pair` at each drive amplitude.
pub fn pulse_strength_tradeoff(
    sys: &SpinSystem,
    pair: (usize, usize),
    target_angle: f64,
    amplitudes: &[f64],
    coherence_budget: f64,
) -> Result<Vec<TradeoffRow>> {
    let (upper, lower) = (pair.0.min(pair.1), pair.0.max(pair.1));
    crate::pulse::projector(upper, lower)?;
    let element = exact_spectrum(sys)?.ix_element(upper, lower).norm();
    if element < FORBIDDEN_ELEMENT {
        return Err(Error::ForbiddenTransition { upper, lower });
    }
    amplitudes
        .iter()
        .map(|&g| {
            let duration = pulse_duration(target_angle, &PulseParams::new(g)?, element)?;
            Ok(TradeoffRow {
                gamma_hrf: g,
                duration,
                exceeds_budget: duration > coherence_budget,
            })
        })
        .collect()
}

/// Probability that basis input `input` lands on the ideal output `output`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transfer {
    pub input: usize,
    pub output: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    /// Idealized schedule propagator.
    pub ideal: Mat8,
    /// Simulated propagator in the dressed interaction frame.
    pub simulated: Mat8,
    pub deviation: f64,
    pub transfers: Vec<Transfer>,
    pub total_duration: f64,
    pub steps: u64,
}

/// Integrates the physical drive realizing `sched` on `sys`.
///
/// Tones in a group start and stop together. The group lasts as long as its
/// slowest tone needs at `gamma_hrf`; faster tones have their amplitude
/// scaled down to fit. Stored tone frequencies are used when present, so a
/// schedule resolved on the first-order spectrum plays slightly detuned.
pub fn simulate_schedule(
    sys: &SpinSystem,
    sched: &PulseSchedule,
    params: &PulseParams,
    cfg: &IntegrationConfig,
) -> Result<SimulationReport> {
    sched.validate()?;
    let spectrum = exact_spectrum(sys)?;
    let mut u_lab = Mat8::identity();
    let mut t = 0.0;
    let mut steps = 0;
    for group in &sched.groups {
        let mut longest: f64 = 0.0;
        let mut elements = Vec::with_capacity(group.len());
        for st in group {
            let x = spectrum.ix_element(st.tone.upper, st.tone.lower).norm();
            if st.tone.angle != 0.0 {
                let d = pulse_duration(st.tone.angle, params, x).map_err(|_| Error::ForbiddenTransition {
                    upper: st.tone.upper,
                    lower: st.tone.lower,
                })?;
                longest = longest.max(d);
            }
            elements.push(x);
        }
        if longest == 0.0 {
            continue;
        }
        let tones = group
            .iter()
            .zip(&elements)
            .filter(|(st, _)| st.tone.angle != 0.0)
            .map(|(st, &x)| {
                let amplitude = st.tone.angle.abs() / (2.0 * longest * x);
                drive_for_tone(&st.tone, &spectrum, amplitude, st.omega)
            })
            .collect();
        let drive = DriveSpec {
            tones,
            start: t,
            duration: longest,
            frame: Frame::Lab,
        };
        steps += required_steps(sys, &drive, cfg)?;
        if steps > cfg.max_steps {
            return Err(Error::StepBudgetExceeded {
                required: steps,
                budget: cfg.max_steps,
            });
        }
        u_lab = evolve(sys, &drive, cfg)? * u_lab;
        t += longest;
    }

    let ideal = schedule_propagator(sched)?;
    let simulated = if t == 0.0 {
        Mat8::identity()
    } else {
        interaction_frame(&u_lab, &spectrum, 0.0, t)
    };
    let transfers = (0..DIM)
        .map(|input| {
            let output = (0..DIM)
                .max_by(|&a, &b| ideal[(a, input)].norm().total_cmp(&ideal[(b, input)].norm()))
                .unwrap();
            Transfer {
                input,
                output,
                probability: simulated[(output, input)].norm_sqr(),
            }
        })
        .collect();
    Ok(SimulationReport {
        deviation: max_diff(&simulated, &ideal),
        ideal,
        simulated,
        transfers,
        total_duration: t,
        steps,
    })
}

/// Population moved from `from` to `to` by `u` (dressed-basis indices).
pub fn transfer_probability(u: &Mat8, from: usize, to: usize) -> f64 {
    u[(to, from)].norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_error;

    fn system() -> SpinSystem {
        SpinSystem::new(1.0, 0.05, PI / 6.0, 0.0).unwrap()
    }

    #[test]
    fn free_evolution_is_diagonal_phase() {
        let sys = system();
        let spec = exact_spectrum(&sys).unwrap();
        let t = 3.7;
        let u = evolve(&sys, &DriveSpec::lab(vec![], t), &IntegrationConfig::default()).unwrap();
        let dressed = spec.dressed(&u);
        for a in 0..DIM {
            for b in 0..DIM {
                let expected = if a == b {
                    Complex64::from_polar(1.0, -spec.energies[a] * t)
                } else {
                    re(0.0)
                };
                assert!((dressed[(a, b)] - expected).norm() < 1e-12);
            }
        }
        let zero_amp = DriveTone {
            omega: 0.9,
            amplitude: 0.0,
            phase: 0.0,
            axis: Axis::X,
        };
        let u2 = evolve(&sys, &DriveSpec::lab(vec![zero_amp], t), &IntegrationConfig::default()).unwrap();
        assert!(max_diff(&u, &u2) < 1e-12);
    }

    #[test]
    fn under_resolution_is_an_error() {
        let sys = system();
        let drive = DriveSpec::lab(vec![], 1.0);
        let err = evolve(&sys, &drive, &IntegrationConfig::with_steps(10)).unwrap_err();
        assert_eq!(err, Error::UnderResolved { steps: 10, min: 20 });
    }

    #[test]
    fn step_budget_is_enforced() {
        let sys = system();
        let tone = DriveTone {
            omega: 1.0,
            amplitude: 1e-3,
            phase: 0.0,
            axis: Axis::X,
        };
        let cfg = IntegrationConfig {
            max_steps: 100,
            ..IntegrationConfig::default()
        };
        let err = evolve(&sys, &DriveSpec::lab(vec![tone], 1e4), &cfg).unwrap_err();
        assert!(matches!(err, Error::StepBudgetExceeded { .. }));
    }

    #[test]
    fn driven_propagator_is_unitary() {
        let sys = system();
        let tone = DriveTone {
            omega: 0.93,
            amplitude: 2e-2,
            phase: 0.4,
            axis: Axis::Y,
        };
        let u = evolve(&sys, &DriveSpec::lab(vec![tone], 50.0), &IntegrationConfig::default()).unwrap();
        assert!(unitarity_error(&u) < 1e-10);
    }

    #[test]
    fn zero_duration_pulse_has_no_deviation() {
        let sys = system();
        let tone = Tone::new(6, 7, 0.0, 0.0, Axis::X).unwrap();
        let d = rwa_deviation(
            &sys,
            &tone,
            &PulseParams::new(1e-3).unwrap(),
            &IntegrationConfig::default(),
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn forbidden_pair_is_rejected() {
        let sys = SpinSystem::new(1.0, 0.05, 0.0, 0.0).unwrap();
        let tone = Tone::pi(5, 7).unwrap();
        let err = rwa_deviation(
            &sys,
            &tone,
            &PulseParams::new(1e-3).unwrap(),
            &IntegrationConfig::default(),
        );
        assert_eq!(err, Err(Error::ForbiddenTransition { upper: 5, lower: 7 }));
        let err = pulse_strength_tradeoff(&sys, (5, 7), PI, &[1.0], DEFAULT_COHERENCE_BUDGET);
        assert_eq!(err, Err(Error::ForbiddenTransition { upper: 5, lower: 7 }));
    }

    #[test]
    fn log_sweep_endpoints() {
        let r = log_sweep(1e-4, 1e-2, 3).unwrap();
        assert!((r[0] - 1e-4).abs() < 1e-18 && (r[1] - 1e-3).abs() < 1e-15 && (r[2] - 1e-2).abs() < 1e-15);
        assert!(log_sweep(0.0, 1.0, 5).is_err());
        assert!(log_sweep(1e-3, 1.0, 1).is_err());
    }

    #[test]
    fn slope_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|i| (f64::from(i), 1.5 * f64::from(i) + 0.2)).collect();
        assert!((least_squares_slope(&pts) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn tradeoff_examples() {
        let sys = SpinSystem::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let rows = pulse_strength_tradeoff(&sys, (6, 7), PI, &[1.0, 0.5], DEFAULT_COHERENCE_BUDGET).unwrap();
        assert!((rows[0].duration - PI / 7f64.sqrt()).abs() < 1e-12);
        assert!((rows[1].duration - 2.0 * rows[0].duration).abs() < 1e-12);
        assert!(!rows[0].exceeds_budget);
        let rows = pulse_strength_tradeoff(&sys, (6, 7), PI, &[1e-6], 100.0).unwrap();
        assert!(rows[0].exceeds_budget);
    }
}
