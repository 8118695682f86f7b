//! Gate-to-pulse compilation and equivalence checking.
//!
//! Every gate compiles to a single group of simultaneous tones: one tone for
//! a doubly controlled gate, two for a singly controlled gate and four for
//! an uncontrolled one. Each tone addresses a level pair `(a, a | target)`
//! whose control bits are all set.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{target_gate, GateSpec};
use crate::linalg::{c, max_abs, Mat8, DIM};
use crate::pulse::{check_disjoint, multi_tone_propagator, pulse_duration, Axis, PulseParams, Tone, FORBIDDEN_ELEMENT};
use crate::spin_system::{transition_table, Spectrum, SpectrumMethod, SpinSystem};

/// A tone plus the physical quantities it resolves to on a given spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledTone {
    pub tone: Tone,
    /// Resonance frequency `E_upper - E_lower`, in units of `omega0`.
    pub omega: Option<f64>,
    /// Pulse length at the schedule's `gamma_hrf`; absent for forbidden pairs.
    pub duration: Option<f64>,
}

impl From<Tone> for ScheduledTone {
    fn from(tone: Tone) -> Self {
        Self {
            tone,
            omega: None,
            duration: None,
        }
    }
}

/// Physical parameters a schedule was resolved against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleParameters {
    pub omega0: f64,
    #[serde(rename = "omegaQ")]
    pub omega_q: f64,
    pub theta: f64,
    pub phi: f64,
    #[serde(rename = "gammaHrf")]
    pub gamma_hrf: f64,
}

/// Ordered pulse groups; tones inside a group are simultaneous.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    pub gate: GateSpec,
    pub groups: Vec<Vec<ScheduledTone>>,
    pub spectrum_method: Option<SpectrumMethod>,
    pub parameters: Option<ScheduleParameters>,
}

impl PulseSchedule {
    pub fn tones(&self) -> impl Iterator<Item = &Tone> {
        self.groups.iter().flatten().map(|st| &st.tone)
    }

    pub fn tone_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// Checks that every group addresses disjoint level pairs.
    pub fn validate(&self) -> Result<()> {
        for group in &self.groups {
            let tones: Vec<Tone> = group.iter().map(|st| st.tone).collect();
            check_disjoint(&tones)?;
        }
        Ok(())
    }

    /// Fills in resonance frequencies and durations from `spectrum`.
    pub fn resolve(&self, sys: &SpinSystem, spectrum: &Spectrum, params: &PulseParams) -> PulseSchedule {
        let table = transition_table(spectrum);
        let element = |a: usize, b: usize| {
            let (u, l) = (a.min(b), a.max(b));
            table
                .iter()
                .find(|t| t.upper == u && t.lower == l)
                .map(|t| t.element)
                .unwrap_or(0.0)
        };
        let groups = self
            .groups
            .iter()
            .map(|group| {
                group
                    .iter()
                    .map(|st| {
                        let t = st.tone;
                        let x = element(t.upper, t.lower);
                        ScheduledTone {
                            tone: t,
                            omega: Some(spectrum.transition_frequency(t.upper, t.lower)),
                            duration: (x >= FORBIDDEN_ELEMENT)
                                .then(|| pulse_duration(t.angle, params, x).ok())
                                .flatten(),
                        }
                    })
                    .collect()
            })
            .collect();
        PulseSchedule {
            gate: self.gate.clone(),
            groups,
            spectrum_method: Some(spectrum.method),
            parameters: Some(ScheduleParameters {
                omega0: sys.omega0,
                omega_q: sys.omega_q,
                theta: sys.theta,
                phi: sys.phi,
                gamma_hrf: params.gamma_hrf,
            }),
        }
    }
}

pub fn compile(spec: &GateSpec) -> Result<PulseSchedule> {
    let (angle, phase) = match spec.rotation {
        Some(r) => (r.angle, r.phase),
        None => (std::f64::consts::PI, 0.0),
    };
    let group = spec
        .addressed_pairs()
        .into_iter()
        .map(|(upper, lower)| Tone::new(upper, lower, angle, phase, Axis::X).map(ScheduledTone::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(PulseSchedule {
        gate: spec.clone(),
        groups: vec![group],
        spectrum_method: None,
        parameters: None,
    })
}

/// Time-ordered product of group propagators (later groups act on the left).
pub fn schedule_propagator(sched: &PulseSchedule) -> Result<Mat8> {
    let mut u = Mat8::identity();
    for group in &sched.groups {
        let tones: Vec<Tone> = group.iter().map(|st| st.tone).collect();
        u = multi_tone_propagator(&tones)? * u;
    }
    Ok(u)
}

/// Schedules played back to back, first element first.
pub fn sequence_propagator(schedules: &[PulseSchedule]) -> Result<Mat8> {
    schedules
        .iter()
        .try_fold(Mat8::identity(), |acc, s| Ok(schedule_propagator(s)? * acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Exact,
    EqualUpToI,
    EqualUpToGlobalPhase,
    Mismatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Exact => "exact",
            Verdict::EqualUpToI => "equal-up-to-i",
            Verdict::EqualUpToGlobalPhase => "equal-up-to-global-phase",
            Verdict::Mismatch => "mismatch",
        }
    }

    /// `exact` and `equal-up-to-i` count as a verified gate.
    pub fn is_verified(self) -> bool {
        matches!(self, Verdict::Exact | Verdict::EqualUpToI)
    }
}

/// `U[row, col] / T[row, col]` for a nonzero entry of the textbook target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEntry {
    pub row: usize,
    pub col: usize,
    pub factor: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    pub max_deviation: f64,
    pub phase_map: Vec<PhaseEntry>,
}

/// Entrywise tolerance for a positive verdict.
pub const VERIFY_TOLERANCE: f64 = 1e-12;

/// Multiplies every nonzero off-diagonal entry by `i`.
pub fn with_i_convention(target: &Mat8) -> Mat8 {
    let mut out = *target;
    for row in 0..DIM {
        for col in 0..DIM {
            if row != col {
                out[(row, col)] *= c(0.0, 1.0);
            }
        }
    }
    out
}

pub fn verify(spec: &GateSpec, u: &Mat8) -> EquivalenceReport {
    compare(&target_gate(spec), u)
}

/// Compares `u` against a product of textbook targets, applied first to last.
pub fn verify_sequence(specs: &[GateSpec], u: &Mat8) -> EquivalenceReport {
    let target = specs.iter().fold(Mat8::identity(), |acc, s| target_gate(s) * acc);
    compare(&target, u)
}

fn compare(target: &Mat8, u: &Mat8) -> EquivalenceReport {
    let dev_exact = max_abs(&(u - target));
    let dev_i = max_abs(&(u - with_i_convention(target)));
    let overlap: Complex64 = target.iter().zip(u.iter()).map(|(t, v)| t.conj() * v).sum();
    let global = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    let dev_global = max_abs(&(u - target * global));

    let (verdict, max_deviation) = if dev_exact < VERIFY_TOLERANCE {
        (Verdict::Exact, dev_exact)
    } else if dev_i < VERIFY_TOLERANCE {
        (Verdict::EqualUpToI, dev_i)
    } else if dev_global < VERIFY_TOLERANCE {
        (Verdict::EqualUpToGlobalPhase, dev_global)
    } else {
        (Verdict::Mismatch, dev_exact.min(dev_i).min(dev_global))
    };

    let mut phase_map = Vec::new();
    for col in 0..DIM {
        for row in 0..DIM {
            let t = target[(row, col)];
            if t.norm() > VERIFY_TOLERANCE {
                phase_map.push(PhaseEntry {
                    row,
                    col,
                    factor: u[(row, col)] / t,
                });
            }
        }
    }
    EquivalenceReport {
        verdict,
        max_deviation,
        phase_map,
    }
}

/// Where one basis state is sent by a permutation-like propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthRow {
    pub input: usize,
    pub output: usize,
    pub phase: Complex64,
}

/// Amplitude tolerance for reading a column as a basis vector.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// Reads off the classical action of `u`; fails if a column is not a basis vector.
pub fn truth_table_of(u: &Mat8) -> Result<Vec<TruthRow>> {
    (0..DIM)
        .map(|input| {
            let col = u.column(input);
            let hits: Vec<usize> = (0..DIM).filter(|&r| col[r].norm() > BASIS_TOLERANCE).collect();
            match hits.as_slice() {
                [output] if (col[*output].norm() - 1.0).abs() <= BASIS_TOLERANCE => Ok(TruthRow {
                    input,
                    output: *output,
                    phase: col[*output],
                }),
                _ => Err(Error::NotPermutation(input)),
            }
        })
        .collect()
}

/// Classical truth table of the compiled bit-flip gate.
pub fn truth_table(spec: &GateSpec) -> Result<Vec<TruthRow>> {
    if !spec.kind.is_not_family() {
        return Err(Error::MalformedGate(format!(
            "truth table needs a bit-flip gate, got {}",
            spec.kind.name()
        )));
    }
    truth_table_of(&schedule_propagator(&compile(spec)?)?)
}
