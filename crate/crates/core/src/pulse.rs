//! Matrix units and idealized resonant-pulse propagators.
//!
//! Everything here is expressed in the dressed eigenbasis `|ψ_M⟩`, so a
//! resonant pulse acts only inside its two-level block.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, re, Mat8, DIM};

/// Matrix unit `P_mn = |ψ_m⟩⟨ψ_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Projector {
    pub m: usize,
    pub n: usize,
}

impl Projector {
    pub fn matrix(&self) -> Mat8 {
        let mut p = Mat8::zeros();
        p[(self.m, self.n)] = re(1.0);
        p
    }

    /// `P_kl P_mn = δ_lm P_kn`; `None` stands for the zero matrix.
    pub fn compose(&self, rhs: &Projector) -> Option<Projector> {
        (self.n == rhs.m).then_some(Projector { m: self.m, n: rhs.n })
    }

    pub fn adjoint(&self) -> Projector {
        Projector { m: self.n, n: self.m }
    }
}

pub fn projector(m: usize, n: usize) -> Result<Projector> {
    check_level(m)?;
    check_level(n)?;
    Ok(Projector { m, n })
}

pub(crate) fn check_level(level: usize) -> Result<()> {
    if level < DIM {
        Ok(())
    } else {
        Err(Error::LevelOutOfRange(level))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Axis {
    #[default]
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
        })
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "X" | "x" => Ok(Axis::X),
            "Y" | "y" => Ok(Axis::Y),
            other => Err(Error::ScheduleFormat(format!("unknown axis `{other}`"))),
        }
    }
}

/// One resonant tone on the pair `(upper, lower)`, `E_upper > E_lower`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub upper: usize,
    pub lower: usize,
    /// Rotation angle in radians. Not reduced modulo 4π.
    pub angle: f64,
    /// RF phase in radians.
    pub phase: f64,
    pub axis: Axis,
}

impl Tone {
    pub fn new(upper: usize, lower: usize, angle: f64, phase: f64, axis: Axis) -> Result<Self> {
        check_level(upper)?;
        check_level(lower)?;
        if upper == lower {
            return Err(Error::DegenerateTone(upper));
        }
        if !angle.is_finite() {
            return Err(Error::InvalidParameter {
                name: "angle",
                reason: format!("not finite: {angle}"),
            });
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                reason: format!("not finite: {phase}"),
            });
        }
        Ok(Self {
            upper,
            lower,
            angle,
            phase,
            axis,
        })
    }

    /// Bit-flip tone: angle π, phase 0, X axis.
    pub fn pi(upper: usize, lower: usize) -> Result<Self> {
        Self::new(upper, lower, std::f64::consts::PI, 0.0, Axis::X)
    }

    /// Phase entering the propagator; a Y-axis field adds π/2.
    pub fn effective_phase(&self) -> f64 {
        match self.axis {
            Axis::X => self.phase,
            Axis::Y => self.phase + FRAC_PI_2,
        }
    }

    pub fn levels(&self) -> [usize; 2] {
        [self.upper, self.lower]
    }

    /// Two-level block `[[cos, i e^{if} sin], [i e^{-if} sin, cos]]` in the
    /// `(upper, lower)` ordering.
    pub fn block(&self) -> [[Complex64; 2]; 2] {
        two_level_block(self.angle, self.effective_phase())
    }
}

pub(crate) fn two_level_block(angle: f64, phase: f64) -> [[Complex64; 2]; 2] {
    let (s, co) = (0.5 * angle).sin_cos();
    let off = c(0.0, s);
    [
        [re(co), off * Complex64::from_polar(1.0, phase)],
        [off * Complex64::from_polar(1.0, -phase), re(co)],
    ]
}

/// `V = 1 + (P_nn + P_mm)(cos φ/2 - 1) + i (P_mn e^{if} + P_nm e^{-if}) sin φ/2`
/// with `m = upper`, `n = lower`.
pub fn pulse_propagator(tone: &Tone) -> Mat8 {
    let b = tone.block();
    let levels = tone.levels();
    let mut v = Mat8::identity();
    for (i, &r) in levels.iter().enumerate() {
        for (j, &k) in levels.iter().enumerate() {
            v[(r, k)] = b[i][j];
        }
    }
    v
}

/// Rejects tone sets that share a level.
pub fn check_disjoint(tones: &[Tone]) -> Result<()> {
    let mut used = [false; DIM];
    for tone in tones {
        for level in tone.levels() {
            if std::mem::replace(&mut used[level], true) {
                return Err(Error::OverlappingTones(level));
            }
        }
    }
    Ok(())
}

/// Simultaneous tones on disjoint pairs; the product is order-independent.
pub fn multi_tone_propagator(tones: &[Tone]) -> Result<Mat8> {
    check_disjoint(tones)?;
    Ok(tones.iter().fold(Mat8::identity(), |acc, t| acc * pulse_propagator(t)))
}

/// Drive amplitude `γH_rf` and start time of a rectangular pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub gamma_hrf: f64,
    pub t0: f64,
}

impl PulseParams {
    pub fn new(gamma_hrf: f64) -> Result<Self> {
        if !(gamma_hrf.is_finite() && gamma_hrf > 0.0) {
            return Err(Error::InvalidParameter {
                name: "gammaHrf",
                reason: format!("must be finite and > 0, got {gamma_hrf}"),
            });
        }
        Ok(Self { gamma_hrf, t0: 0.0 })
    }
}

/// Below this `|⟨n|Ix|m⟩|` a transition is treated as strictly forbidden.
pub const FORBIDDEN_ELEMENT: f64 = 1e-14;

/// Pulse length `t - t0 = |φ| / (2 γH_rf |⟨n|Ix|m⟩|)`.
///
/// A negative angle is the same rotation with the phase advanced by π, so it
/// costs the same time as `|φ|`.
pub fn pulse_duration(angle: f64, params: &PulseParams, ix_element: f64) -> Result<f64> {
    if ix_element.abs() < FORBIDDEN_ELEMENT {
        return Err(Error::ZeroElement);
    }
    Ok(angle.abs() / (2.0 * params.gamma_hrf * ix_element.abs()))
}
