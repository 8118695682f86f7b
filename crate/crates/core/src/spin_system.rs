//! Spin-7/2 operators, the Zeeman + quadrupole Hamiltonian and its spectrum.
//!
//! Row/column index `M = 0..=7` is the level label; it maps to the spin
//! projection `m = M - 7/2`. With `ħ = 1` energies and frequencies share units,
//! and `omega0` is normally taken as the unit.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, re, Mat8, Vec8, DIM};

/// Spin quantum number `I`.
pub const SPIN: f64 = 3.5;

/// `I(I+1)/3 = 21/4`, the shift that makes `Q0` traceless.
const Q0_SHIFT: f64 = SPIN * (SPIN + 1.0) / 3.0;

/// Ratio `omega_q / omega0` beyond which first-order theory is flagged.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Spin projection `m` for level label `M`.
#[inline]
pub fn projection(label: usize) -> f64 {
    label as f64 - SPIN
}

/// Cartesian and ladder spin matrices in the `|χ_m⟩` (Iz eigen-) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub ix: Mat8,
    pub iy: Mat8,
    pub iz: Mat8,
    pub iplus: Mat8,
    pub iminus: Mat8,
}

impl SpinOperators {
    pub fn dimension(&self) -> usize {
        DIM
    }
}

pub fn make_spin_operators() -> SpinOperators {
    let mut iz = Mat8::zeros();
    let mut iplus = Mat8::zeros();
    for label in 0..DIM {
        let m = projection(label);
        iz[(label, label)] = re(m);
        if label + 1 < DIM {
            // I+ |m⟩ = sqrt(I(I+1) - m(m+1)) |m+1⟩
            iplus[(label + 1, label)] = re((SPIN * (SPIN + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let iminus = iplus.adjoint();
    let ix = (iplus + iminus) * re(0.5);
    let iy = (iplus - iminus) * c(0.0, -0.5);
    SpinOperators {
        ix,
        iy,
        iz,
        iplus,
        iminus,
    }
}

/// Angular form of the `q_{±2}` coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Q2Form {
    /// `½ sin 2θ e^{±2iφ}`.
    #[default]
    AsPrinted,
    /// `½ sin²θ e^{±2iφ}`, the usual axially-symmetric gradient form.
    SinSquared,
}

/// Physical parameters of a spin-7/2 in a static field and an axially
/// symmetric electric field gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    pub omega0: f64,
    pub omega_q: f64,
    pub theta: f64,
    pub phi: f64,
    pub q2_form: Q2Form,
    pub ops: SpinOperators,
}

impl SpinSystem {
    pub fn new(omega0: f64, omega_q: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(invalid("omega0", format!("must be finite and > 0, got {omega0}")));
        }
        if !(omega_q.is_finite() && omega_q >= 0.0) {
            return Err(invalid("omegaQ", format!("must be finite and >= 0, got {omega_q}")));
        }
        if !(theta.is_finite() && (0.0..=std::f64::consts::PI).contains(&theta)) {
            return Err(invalid("theta", format!("must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(invalid("phi", format!("must be finite, got {phi}")));
        }
        Ok(Self {
            omega0,
            omega_q,
            theta,
            phi,
            q2_form: Q2Form::default(),
            ops: make_spin_operators(),
        })
    }

    pub fn with_q2_form(mut self, form: Q2Form) -> Self {
        self.q2_form = form;
        self
    }

    /// Same orientation and field, different quadrupole strength.
    pub fn with_omega_q(&self, omega_q: f64) -> Result<Self> {
        Ok(Self::new(self.omega0, omega_q, self.theta, self.phi)?.with_q2_form(self.q2_form))
    }

    pub fn ratio(&self) -> f64 {
        self.omega_q / self.omega0
    }

    /// Lattice coefficient `q_α` for `α ∈ {-2, ..., 2}`.
    pub fn q(&self, alpha: i32) -> Complex64 {
        let (st, ct) = self.theta.sin_cos();
        let sign = f64::from(alpha.signum());
        match alpha.abs() {
            0 => re(3.0 * ct * ct - 1.0),
            1 => Complex64::from_polar(st * ct, sign * self.phi),
            2 => {
                let amp = match self.q2_form {
                    Q2Form::AsPrinted => 0.5 * (2.0 * self.theta).sin(),
                    Q2Form::SinSquared => 0.5 * st * st,
                };
                Complex64::from_polar(amp, 2.0 * sign * self.phi)
            }
            _ => panic!("q_alpha defined for |alpha| <= 2, got {alpha}"),
        }
    }

    /// Spin-space quadrupole operator `Q_α`.
    pub fn quadrupole_operator(&self, alpha: i32) -> Mat8 {
        let o = &self.ops;
        let ladder = if alpha >= 0 { &o.iplus } else { &o.iminus };
        match alpha.abs() {
            0 => o.iz * o.iz - Mat8::identity() * re(Q0_SHIFT),
            1 => o.iz * ladder + ladder * o.iz,
            2 => ladder * ladder,
            _ => panic!("Q_alpha defined for |alpha| <= 2, got {alpha}"),
        }
    }

    /// Quadrupole part `ω_Q Σ_α Q_α q_{-α}`.
    pub fn quadrupole_hamiltonian(&self) -> Mat8 {
        let mut h = Mat8::zeros();
        for alpha in -2..=2 {
            h += self.quadrupole_operator(alpha) * self.q(-alpha);
        }
        h * re(self.omega_q)
    }

    pub fn zeeman_hamiltonian(&self) -> Mat8 {
        self.ops.iz * re(-self.omega0)
    }
}

fn invalid(name: &'static str, reason: String) -> Error {
    Error::InvalidParameter { name, reason }
}

/// Static Hamiltonian in the `|χ_m⟩` basis.
pub fn build_hamiltonian(sys: &SpinSystem) -> Mat8 {
    sys.zeeman_hamiltonian() + sys.quadrupole_hamiltonian()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    PerturbativeFirstOrder,
    Exact,
}

impl SpectrumMethod {
    pub fn short_name(self) -> &'static str {
        match self {
            SpectrumMethod::PerturbativeFirstOrder => "pert",
            SpectrumMethod::Exact => "exact",
        }
    }
}

/// Eight labelled levels. Column `M` of `states` is `|ψ_M⟩` expanded in `|χ_m⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: [f64; DIM],
    pub states: Mat8,
    pub method: SpectrumMethod,
    /// Set when `omega_q / omega0` is outside the first-order regime.
    pub outside_perturbative_regime: bool,
}

impl Spectrum {
    pub fn state(&self, label: usize) -> Vec8 {
        self.states.column(label).into_owned()
    }

    /// Operator expressed in the dressed basis: `V† A V`.
    pub fn dressed(&self, op: &Mat8) -> Mat8 {
        self.states.adjoint() * op * self.states
    }

    /// `E_upper - E_lower`.
    pub fn transition_frequency(&self, upper: usize, lower: usize) -> f64 {
        self.energies[upper] - self.energies[lower]
    }

    /// Signed matrix element `⟨ψ_upper|Ix|ψ_lower⟩`.
    pub fn ix_element(&self, upper: usize, lower: usize) -> Complex64 {
        let ix = make_spin_operators().ix;
        (self.state(upper).adjoint() * ix * self.state(lower))[(0, 0)]
    }

    pub fn trace(&self) -> f64 {
        self.energies.iter().sum()
    }
}

/// First-order energies and states. Never fails; the regime flag is set
/// when `omega_q / omega0 >= 0.1`.
pub fn perturbative_spectrum(sys: &SpinSystem) -> Spectrum {
    let q0 = sys.q(0).re;
    let mut energies = [0.0; DIM];
    for (label, e) in energies.iter_mut().enumerate() {
        let m = projection(label);
        *e = -sys.omega0 * m + sys.omega_q * q0 * (m * m - Q0_SHIFT);
    }

    let hq = sys.quadrupole_hamiltonian();
    let mut raw = Mat8::identity();
    for col in 0..DIM {
        for row in 0..DIM {
            if row != col {
                // denominator ħω0(k - m); k - m equals the label difference
                let gap = sys.omega0 * (row as f64 - col as f64);
                raw[(row, col)] = hq[(row, col)] / gap;
            }
        }
    }

    Spectrum {
        energies,
        states: symmetric_orthonormalize(&raw),
        method: SpectrumMethod::PerturbativeFirstOrder,
        outside_perturbative_regime: sys.ratio() >= PERTURBATIVE_LIMIT,
    }
}

/// Löwdin orthonormalization `V (V†V)^{-1/2}`.
fn symmetric_orthonormalize(v: &Mat8) -> Mat8 {
    let overlap = v.adjoint() * v;
    let eig = SymmetricEigen::new(overlap);
    let inv_sqrt = eig.eigenvalues.map(|l| re(1.0 / l.sqrt()));
    let s_inv_half = eig.eigenvectors * Mat8::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
    v * s_inv_half
}

/// Minimum ratio between the best and second-best overlap of a label.
pub const LABEL_OVERLAP_RATIO: f64 = 2.0;

/// Dense diagonalization of [`build_hamiltonian`], labelled by maximal
/// overlap with the first-order states rather than by energy order.
///
/// Each state's phase is fixed so its overlap with the reference state is
/// real and positive.
pub fn exact_spectrum(sys: &SpinSystem) -> Result<Spectrum> {
    let reference = perturbative_spectrum(sys).states;
    let eig = SymmetricEigen::new(build_hamiltonian(sys));
    let overlaps = reference.adjoint() * eig.eigenvectors;

    let mut energies = [0.0; DIM];
    let mut states = Mat8::zeros();
    let mut taken = [false; DIM];
    for label in 0..DIM {
        let mut ranked: Vec<(usize, f64)> = (0..DIM).map(|j| (j, overlaps[(label, j)].norm_sqr())).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (best, best_ov) = ranked[0];
        let second_ov = ranked[1].1;
        if best_ov < LABEL_OVERLAP_RATIO * second_ov || taken[best] {
            return Err(Error::AmbiguousLabeling {
                label,
                best: best_ov,
                second: second_ov,
            });
        }
        taken[best] = true;
        let ov = overlaps[(label, best)];
        let phase = ov.conj() / ov.norm();
        energies[label] = eig.eigenvalues[best];
        states.set_column(label, &(eig.eigenvectors.column(best) * phase));
    }

    Ok(Spectrum {
        energies,
        states,
        method: SpectrumMethod::Exact,
        outside_perturbative_regime: sys.ratio() >= PERTURBATIVE_LIMIT,
    })
}

pub fn spectrum(sys: &SpinSystem, method: SpectrumMethod) -> Result<Spectrum> {
    match method {
        SpectrumMethod::PerturbativeFirstOrder => Ok(perturbative_spectrum(sys)),
        SpectrumMethod::Exact => exact_spectrum(sys),
    }
}

/// One row of the transition table. `upper < lower` in label order, which is
/// the higher-energy level whenever the Zeeman term dominates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub upper: usize,
    pub lower: usize,
    pub omega: f64,
    pub element: f64,
    pub allowed: bool,
}

/// All 28 level pairs with frequency and `|⟨ψ_lower|Ix|ψ_upper⟩|`.
pub fn transition_table(spec: &Spectrum) -> Vec<Transition> {
    let ix = spec.dressed(&make_spin_operators().ix);
    let mut rows = Vec::with_capacity(DIM * (DIM - 1) / 2);
    for upper in 0..DIM {
        for lower in upper + 1..DIM {
            rows.push(Transition {
                upper,
                lower,
                omega: spec.transition_frequency(upper, lower),
                element: ix[(upper, lower)].norm(),
                allowed: lower - upper == 1,
            });
        }
    }
    rows
}
