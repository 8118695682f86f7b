//! TOML form of a [`PulseSchedule`].
//!
//! ```toml
//! gate = "CNOT:R->S"
//! spectrum_method = "exact"
//! groups = [[
//!     { upper = 2, lower = 3, angle_rad = 3.141592653589793, phase_rad = 0.0, axis = "X", omega = 0.98, duration = 1187.4 },
//!     { upper = 6, lower = 7, angle_rad = 3.141592653589793, phase_rad = 0.0, axis = "X", omega = 0.88, duration = 1187.4 },
//! ]]
//!
//! [parameters]
//! omega0 = 1.0
//! omegaQ = 0.01
//! theta = 0.6283185307179586
//! phi = 0.0
//! gammaHrf = 0.001
//! ```
//!
//! `omega` is in units of `omega0`; `omega`, `duration`, `spectrum_method`
//! and `parameters` are absent on an unresolved schedule. Floats are written
//! in shortest round-trip form, so parsing a written file is lossless.

use serde::{Deserialize, Serialize};

use crate::compiler::{PulseSchedule, ScheduleParameters, ScheduledTone};
use crate::error::{Error, Result};
use crate::gates::GateSpec;
use crate::pulse::{Axis, Tone};
use crate::spin_system::SpectrumMethod;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleRecord {
    gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spectrum_method: Option<String>,
    groups: Vec<Vec<ToneRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parameters: Option<ScheduleParameters>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToneRecord {
    upper: usize,
    lower: usize,
    angle_rad: f64,
    phase_rad: f64,
    axis: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duration: Option<f64>,
}

pub fn to_toml(sched: &PulseSchedule) -> String {
    let record = ScheduleRecord {
        gate: sched.gate.to_string(),
        spectrum_method: sched.spectrum_method.map(|m| m.short_name().to_string()),
        groups: sched
            .groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|st| ToneRecord {
                        upper: st.tone.upper,
                        lower: st.tone.lower,
                        angle_rad: st.tone.angle,
                        phase_rad: st.tone.phase,
                        axis: st.tone.axis,
                        omega: st.omega,
                        duration: st.duration,
                    })
                    .collect()
            })
            .collect(),
        parameters: sched.parameters,
    };
    toml::to_string(&record).expect("schedule record is always representable")
}

pub fn from_toml(text: &str) -> Result<PulseSchedule> {
    let record: ScheduleRecord = toml::from_str(text).map_err(|e| Error::ScheduleFormat(e.to_string()))?;
    let gate: GateSpec = record.gate.parse()?;
    let spectrum_method = match record.spectrum_method.as_deref() {
        None => None,
        Some("pert") => Some(SpectrumMethod::PerturbativeFirstOrder),
        Some("exact") => Some(SpectrumMethod::Exact),
        Some(other) => return Err(Error::ScheduleFormat(format!("unknown spectrum_method `{other}`"))),
    };
    let groups = record
        .groups
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|r| {
                    let tone = Tone::new(r.upper, r.lower, r.angle_rad, r.phase_rad, r.axis)?;
                    Ok(ScheduledTone {
                        tone,
                        omega: r.omega,
                        duration: r.duration,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sched = PulseSchedule {
        gate,
        groups,
        spectrum_method,
        parameters: record.parameters,
    };
    sched.validate()?;
    Ok(sched)
}
