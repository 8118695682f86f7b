//! Virtual-qubit labels and textbook target gates.
//!
//! Level `M` carries three virtual spins as the binary digits of `M`:
//! `|M⟩ = |m_Q m_R m_S⟩` with `Q` the most significant bit. Bit 1 means
//! `m = +1/2`, bit 0 means `m = -1/2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_diff, re, Mat8, DIM};
use crate::pulse::two_level_block;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VirtualSpin {
    Q,
    R,
    S,
}

impl VirtualSpin {
    pub const ALL: [VirtualSpin; 3] = [VirtualSpin::Q, VirtualSpin::R, VirtualSpin::S];

    /// Bit mask of this spin inside a level label.
    pub fn mask(self) -> usize {
        match self {
            VirtualSpin::Q => 0b100,
            VirtualSpin::R => 0b010,
            VirtualSpin::S => 0b001,
        }
    }

    pub fn letter(self) -> char {
        match self {
            VirtualSpin::Q => 'Q',
            VirtualSpin::R => 'R',
            VirtualSpin::S => 'S',
        }
    }

    fn from_letter(ch: char) -> Option<Self> {
        match ch {
            'Q' => Some(VirtualSpin::Q),
            'R' => Some(VirtualSpin::R),
            'S' => Some(VirtualSpin::S),
            _ => None,
        }
    }
}

/// A level label together with its virtual-spin bits `(m_Q, m_R, m_S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VirtualLabel {
    pub index: usize,
    pub bits: [u8; 3],
}

impl VirtualLabel {
    pub fn bit(&self, spin: VirtualSpin) -> u8 {
        u8::from(self.index & spin.mask() != 0)
    }

    /// Spin projections `(m_Q, m_R, m_S)`, each ±1/2.
    pub fn projections(&self) -> [f64; 3] {
        self.bits.map(|b| if b == 1 { 0.5 } else { -0.5 })
    }
}

impl fmt::Display for VirtualLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [q, r, s] = self.bits;
        write!(f, "|{q}{r}{s}⟩")
    }
}

pub fn encode(index: usize) -> Result<VirtualLabel> {
    if index >= DIM {
        return Err(Error::LevelOutOfRange(index));
    }
    let bits = [VirtualSpin::Q, VirtualSpin::R, VirtualSpin::S].map(|spin| u8::from(index & spin.mask() != 0));
    Ok(VirtualLabel { index, bits })
}

pub fn decode(bits: [u8; 3]) -> Result<usize> {
    if let Some(bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::LevelOutOfRange(usize::from(*bad)));
    }
    Ok(usize::from(bits[0]) << 2 | usize::from(bits[1]) << 1 | usize::from(bits[2]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Not,
    Cnot,
    Ccnot,
    Ut,
    Cut,
    Ccut,
}

impl GateKind {
    pub fn control_count(self) -> usize {
        match self {
            GateKind::Not | GateKind::Ut => 0,
            GateKind::Cnot | GateKind::Cut => 1,
            GateKind::Ccnot | GateKind::Ccut => 2,
        }
    }

    /// Bit-flip gates, as opposed to the rotation (UT) generalizations.
    pub fn is_not_family(self) -> bool {
        matches!(self, GateKind::Not | GateKind::Cnot | GateKind::Ccnot)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::Ccnot => "CCNOT",
            GateKind::Ut => "UT",
            GateKind::Cut => "CUT",
            GateKind::Ccut => "CCUT",
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "NOT" => Ok(GateKind::Not),
            "CNOT" => Ok(GateKind::Cnot),
            "CCNOT" => Ok(GateKind::Ccnot),
            "UT" => Ok(GateKind::Ut),
            "CUT" => Ok(GateKind::Cut),
            "CCUT" => Ok(GateKind::Ccut),
            other => Err(format!("unknown gate kind `{other}`")),
        }
    }
}

/// Two-level rotation payload `(φ, f)` of the UT family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation {
    pub angle: f64,
    pub phase: f64,
}

/// Symbolic target gate. Controls are kept sorted (Q < R < S).
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub target: VirtualSpin,
    pub controls: Vec<VirtualSpin>,
    /// `Some` exactly for the UT family.
    pub rotation: Option<Rotation>,
}

impl GateSpec {
    pub fn new(
        kind: GateKind,
        target: VirtualSpin,
        controls: &[VirtualSpin],
        rotation: Option<Rotation>,
    ) -> Result<Self> {
        let mut sorted = controls.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != controls.len() {
            return Err(Error::MalformedGate("repeated control spin".into()));
        }
        if sorted.contains(&target) {
            return Err(Error::MalformedGate(format!(
                "target {} is also a control",
                target.letter()
            )));
        }
        if sorted.len() != kind.control_count() {
            return Err(Error::MalformedGate(format!(
                "{} takes {} control(s), got {}",
                kind.name(),
                kind.control_count(),
                sorted.len()
            )));
        }
        match (kind.is_not_family(), rotation) {
            (true, Some(_)) => {
                return Err(Error::MalformedGate(format!(
                    "{} takes no (phi,f) payload",
                    kind.name()
                )))
            }
            (false, None) => return Err(Error::MalformedGate(format!("{} needs a (phi,f) payload", kind.name()))),
            (false, Some(r)) if !(r.angle.is_finite() && r.phase.is_finite()) => {
                return Err(Error::MalformedGate("payload angles must be finite".into()))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            target,
            controls: sorted,
            rotation,
        })
    }

    pub fn not(target: VirtualSpin) -> Result<Self> {
        Self::new(GateKind::Not, target, &[], None)
    }

    pub fn cnot(control: VirtualSpin, target: VirtualSpin) -> Result<Self> {
        Self::new(GateKind::Cnot, target, &[control], None)
    }

    pub fn ccnot(a: VirtualSpin, b: VirtualSpin, target: VirtualSpin) -> Result<Self> {
        Self::new(GateKind::Ccnot, target, &[a, b], None)
    }

    pub fn ut(target: VirtualSpin, angle: f64, phase: f64) -> Result<Self> {
        Self::new(GateKind::Ut, target, &[], Some(Rotation { angle, phase }))
    }

    pub fn cut(control: VirtualSpin, target: VirtualSpin, angle: f64, phase: f64) -> Result<Self> {
        Self::new(GateKind::Cut, target, &[control], Some(Rotation { angle, phase }))
    }

    pub fn ccut(a: VirtualSpin, b: VirtualSpin, target: VirtualSpin, angle: f64, phase: f64) -> Result<Self> {
        Self::new(GateKind::Ccut, target, &[a, b], Some(Rotation { angle, phase }))
    }

    pub fn control_mask(&self) -> usize {
        self.controls.iter().map(|c| c.mask()).sum()
    }

    /// Whether basis label `index` satisfies every control.
    pub fn controls_satisfied(&self, index: usize) -> bool {
        let mask = self.control_mask();
        index & mask == mask
    }

    /// Level pairs `(a, a | target)` with target bit 0 in `a` and all controls set.
    pub fn addressed_pairs(&self) -> Vec<(usize, usize)> {
        let t = self.target.mask();
        (0..DIM)
            .filter(|&a| a & t == 0 && self.controls_satisfied(a))
            .map(|a| (a, a | t))
            .collect()
    }
}

/// The twelve bit-flip gates: three NOT, six CNOT, three CCNOT.
pub fn not_family() -> Vec<GateSpec> {
    use VirtualSpin::*;
    let mut gates = Vec::with_capacity(12);
    for t in VirtualSpin::ALL {
        gates.push(GateSpec::not(t).unwrap());
    }
    for c in VirtualSpin::ALL {
        for t in VirtualSpin::ALL {
            if c != t {
                gates.push(GateSpec::cnot(c, t).unwrap());
            }
        }
    }
    for (a, b, t) in [(Q, R, S), (Q, S, R), (R, S, Q)] {
        gates.push(GateSpec::ccnot(a, b, t).unwrap());
    }
    gates
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.name())?;
        if !self.controls.is_empty() {
            for c in &self.controls {
                write!(f, "{}", c.letter())?;
            }
            write!(f, "->")?;
        }
        write!(f, "{}", self.target.letter())?;
        if let Some(r) = self.rotation {
            write!(f, "({},{})", r.angle, r.phase)?;
        }
        Ok(())
    }
}

impl FromStr for GateSpec {
    type Err = Error;

    /// `KIND ":" [CONTROLS "->"] TARGET ["(" phi "," f ")"]`.
    fn from_str(input: &str) -> Result<Self> {
        let fail = |reason: &str| Error::GateParse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();

        let (kind_str, rest) = s.split_once(':').ok_or_else(|| fail("missing `:` after gate kind"))?;
        let kind: GateKind = kind_str.to_ascii_uppercase().parse().map_err(|e: String| fail(&e))?;

        let (body, payload) = match rest.find('(') {
            Some(open) => {
                let inner = rest[open..]
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| fail("unbalanced `(phi,f)` payload"))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| fail("payload must be `(phi,f)`"))?;
                let angle: f64 = a.parse().map_err(|_| fail("payload phi is not a number"))?;
                let phase: f64 = b.parse().map_err(|_| fail("payload f is not a number"))?;
                (&rest[..open], Some(Rotation { angle, phase }))
            }
            None => (rest, None),
        };

        let (controls_str, target_str) = match body.split_once("->") {
            Some((c, t)) => (c, t),
            None => ("", body),
        };
        let spin = |ch: char| {
            VirtualSpin::from_letter(ch.to_ascii_uppercase())
                .ok_or_else(|| fail(&format!("`{ch}` is not one of Q, R, S")))
        };
        let mut target_chars = target_str.chars();
        let target = match (target_chars.next(), target_chars.next()) {
            (Some(ch), None) => spin(ch)?,
            _ => return Err(fail("target must be exactly one of Q, R, S")),
        };
        let controls = controls_str
            .chars()
            .filter(|&ch| ch != ',')
            .map(spin)
            .collect::<Result<Vec<_>>>()?;

        GateSpec::new(kind, target, &controls, payload).map_err(|e| match e {
            Error::MalformedGate(reason) => fail(&reason),
            other => other,
        })
    }
}

/// Target matrix in the `M`-ordered basis.
///
/// Bit-flip gates are real permutation matrices. UT-family gates apply the
/// block `[[cos φ/2, i e^{if} sin φ/2], [i e^{-if} sin φ/2, cos φ/2]]`
/// (rows/columns: target bit 0, target bit 1) wherever the controls are set.
pub fn target_gate(spec: &GateSpec) -> Mat8 {
    let mut u = Mat8::zeros();
    let t = spec.target.mask();
    match spec.rotation {
        None => {
            for col in 0..DIM {
                let row = if spec.controls_satisfied(col) { col ^ t } else { col };
                u[(row, col)] = re(1.0);
            }
        }
        Some(r) => {
            let b = two_level_block(r.angle, r.phase);
            for col in 0..DIM {
                if !spec.controls_satisfied(col) {
                    u[(col, col)] = re(1.0);
                } else if col & t == 0 {
                    let hi = col | t;
                    u[(col, col)] = b[0][0];
                    u[(col, hi)] = b[0][1];
                    u[(hi, col)] = b[1][0];
                    u[(hi, hi)] = b[1][1];
                }
            }
        }
    }
    u
}

pub fn is_involution(gate: &Mat8) -> bool {
    max_diff(&(gate * gate), &Mat8::identity()) < 1e-12
}
