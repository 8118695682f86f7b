//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use spin72::cli;
use spin72::compiler::{compile, schedule_propagator, truth_table, verify, Verdict};
use spin72::dynamics::{
    drive_for_tone, evolve, forbidden_scaling, interaction_frame, least_squares_slope, log_sweep, rwa_deviation,
    transfer_probability, DriveSpec, IntegrationConfig,
};
use spin72::gates::{decode, encode, not_family, GateKind, GateSpec, Rotation, VirtualSpin};
use spin72::linalg::{max_diff, unitarity_error, Mat8};
use spin72::pulse::{multi_tone_propagator, projector, pulse_duration, pulse_propagator, Axis, PulseParams, Tone};
use spin72::spin_system::{exact_spectrum, perturbative_spectrum, SpinSystem};

type Check = Box<dyn FnOnce() -> Outcome>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let pass = parts.iter().all(|p| p.pass);
    let detail = parts
        .iter()
        .map(|p| {
            if p.pass {
                p.detail.clone()
            } else {
                format!("FAILED {}", p.detail)
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    outcome(pass, detail)
}

fn timed(limit_s: Option<f64>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let o = f();
    let secs = start.elapsed().as_secs_f64();
    match limit_s {
        Some(limit) => {
            let fast = secs < limit;
            let note = if fast { "" } else { "FAILED " };
            outcome(
                o.pass && fast,
                format!("{}; {note}runtime {secs:.2}s < {limit}s", o.detail),
            )
        }
        None => outcome(o.pass, format!("{} (runtime {secs:.2}s)", o.detail)),
    }
}

fn default_system() -> SpinSystem {
    SpinSystem::new(1.0, 0.01, PI / 5.0, 0.0).unwrap()
}

fn criterion_1_gate_identities() -> Outcome {
    let mut parts = Vec::new();
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for spec in not_family() {
        let report = verify(&spec, &schedule_propagator(&compile(&spec).unwrap()).unwrap());
        worst = worst.max(report.max_deviation);
        if report.verdict != Verdict::EqualUpToI || report.max_deviation >= 1e-12 {
            bad.push(format!("{spec}={}", report.verdict.as_str()));
        }
    }
    parts.push(outcome(
        bad.is_empty(),
        format!("12 NOT-family gates equal-up-to-i, max dev {worst:.1e} < 1e-12 {bad:?}"),
    ));

    let p = |m, n| projector(m, n).unwrap().matrix();
    let v67 = pulse_propagator(&Tone::pi(6, 7).unwrap());
    let closed = Mat8::identity() - (p(7, 7) + p(6, 6)) + (p(6, 7) + p(7, 6)) * Complex64::i();
    let d = max_diff(&v67, &closed);
    parts.push(outcome(d < 1e-12, format!("V_X(pi_67,0) closed form dev {d:.1e}")));

    let labels_ok = encode(6).unwrap().bits == [1, 1, 0]
        && encode(7).unwrap().bits == [1, 1, 1]
        && decode([1, 1, 0]).unwrap() == 6
        && decode([1, 1, 1]).unwrap() == 7;
    parts.push(outcome(labels_ok, "P_67 + P_76 = |110><111| + |111><110|"));

    let ccut = GateSpec::ccut(VirtualSpin::Q, VirtualSpin::R, VirtualSpin::S, 1.2, 0.4).unwrap();
    let r = verify(&ccut, &schedule_propagator(&compile(&ccut).unwrap()).unwrap());
    parts.push(outcome(
        r.verdict == Verdict::Exact && r.max_deviation < 1e-12,
        format!("CCUT:QR->S(1.2,0.4) {} dev {:.1e}", r.verdict.as_str(), r.max_deviation),
    ));
    all(parts)
}

fn criterion_2_truth_tables() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for spec in not_family() {
        let rows = match truth_table(&spec) {
            Ok(rows) => rows,
            Err(e) => {
                bad.push(format!("{spec}: {e}"));
                continue;
            }
        };
        for row in rows {
            let expected = if spec.controls_satisfied(row.input) {
                row.input ^ spec.target.mask()
            } else {
                row.input
            };
            checked += 1;
            if row.output != expected || (row.phase.norm() - 1.0).abs() > 1e-10 {
                bad.push(format!("{spec}: {} -> {}", row.input, row.output));
            }
        }
    }
    outcome(
        bad.is_empty() && checked == 96,
        format!("{checked} input rows over 12 gates match, |amp| = 1 +- 1e-10 {bad:?}"),
    )
}

fn criterion_3_spectrum() -> Outcome {
    let base = default_system();
    let ratios = log_sweep(1e-4, 1e-2, 20).unwrap();
    let points: Vec<(f64, f64)> = ratios
        .iter()
        .map(|&r| {
            let sys = base.with_omega_q(r).unwrap();
            let pert = perturbative_spectrum(&sys);
            let exact = exact_spectrum(&sys).unwrap();
            let err = (0..8)
                .map(|m| (pert.energies[m] - exact.energies[m]).abs())
                .fold(0.0, f64::max);
            (r.ln(), err.ln())
        })
        .collect();
    let slope = least_squares_slope(&points);
    let sys0 = SpinSystem::new(1.0, 0.01, 0.0, 0.0).unwrap();
    let w67_pert = perturbative_spectrum(&sys0).transition_frequency(6, 7);
    let w67_exact = exact_spectrum(&sys0).unwrap().transition_frequency(6, 7);
    all(vec![
        outcome(
            (slope - 2.0).abs() <= 0.15,
            format!("energy error slope {slope:.4} in 2 +- 0.15"),
        ),
        outcome(
            (w67_pert - 0.88).abs() <= 1e-12 && (w67_exact - 0.88).abs() <= 1e-12,
            format!("Omega_67(theta=0) = {w67_pert:.15} (pert), {w67_exact:.15} (exact)"),
        ),
    ])
}

fn criterion_4_forbidden_scaling() -> Outcome {
    let base = default_system();
    let ratios = log_sweep(1e-4, 1e-2, 20).unwrap();
    let s57 = forbidden_scaling(&base, (5, 7), &ratios).unwrap();
    let s37 = forbidden_scaling(&base, (3, 7), &ratios).unwrap();
    all(vec![
        outcome(
            (0.85..=1.15).contains(&s57.slope),
            format!("slope(5,7) = {:.4} in [0.85, 1.15]", s57.slope),
        ),
        outcome(
            s37.slope >= 1.0,
            format!("slope(3,7) = {:.4} (measured; expected >= 1)", s37.slope),
        ),
    ])
}

fn criterion_5_dynamics() -> Outcome {
    let sys = SpinSystem::new(1.0, 0.05, PI / 6.0, 0.0).unwrap();
    let spectrum = exact_spectrum(&sys).unwrap();
    let cfg = IntegrationConfig::default();
    let tone = Tone::pi(6, 7).unwrap();
    let gamma = 1e-3;
    let element = spectrum.ix_element(6, 7).norm();
    let duration = pulse_duration(PI, &PulseParams::new(gamma).unwrap(), element).unwrap();
    let drive = DriveSpec::lab(vec![drive_for_tone(&tone, &spectrum, gamma, None)], duration);
    let u = interaction_frame(&evolve(&sys, &drive, &cfg).unwrap(), &spectrum, 0.0, duration);
    let p = transfer_probability(&u, 6, 7);

    let gammas = [1e-2, 3e-3, 1e-3];
    let devs: Vec<f64> = gammas
        .iter()
        .map(|&g| rwa_deviation(&sys, &tone, &PulseParams::new(g).unwrap(), &cfg).unwrap())
        .collect();
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    all(vec![
        outcome(
            p > 0.99,
            format!("|<psi_7|U|psi_6>|^2 = {p:.6} > 0.99 at gammaHrf 1e-3"),
        ),
        outcome(
            monotone,
            format!(
                "rwa deviation {:.3e} > {:.3e} > {:.3e} for gammaHrf 1e-2, 3e-3, 1e-3",
                devs[0], devs[1], devs[2]
            ),
        ),
    ])
}

fn all_tones() -> Vec<Tone> {
    let mut tones = Vec::new();
    for lower in 0..8 {
        for upper in 0..lower {
            for (k, angle) in [PI, PI / 2.0, -0.7, 2.3].into_iter().enumerate() {
                let axis = if k % 2 == 0 { Axis::X } else { Axis::Y };
                tones.push(Tone::new(upper, lower, angle, 0.3 * k as f64 - 0.5, axis).unwrap());
            }
        }
    }
    tones
}

fn criterion_6_algebra() -> Outcome {
    let mut projector_ok = true;
    for m in 0..8 {
        for n in 0..8 {
            for k in 0..8 {
                for l in 0..8 {
                    let lhs = projector(m, n).unwrap().matrix() * projector(k, l).unwrap().matrix();
                    let rhs = if n == k {
                        projector(m, l).unwrap().matrix()
                    } else {
                        Mat8::zeros()
                    };
                    projector_ok &= lhs == rhs;
                }
            }
        }
    }

    let mut unitary: f64 = 0.0;
    for tone in all_tones() {
        unitary = unitary.max(unitarity_error(&pulse_propagator(&tone)));
    }
    for spec in grammar_gates() {
        unitary = unitary.max(unitarity_error(&schedule_propagator(&compile(&spec).unwrap()).unwrap()));
    }

    let not_s: Vec<Tone> = compile(&GateSpec::not(VirtualSpin::S).unwrap())
        .unwrap()
        .tones()
        .copied()
        .collect();
    let reference = multi_tone_propagator(&not_s).unwrap();
    let mut order: f64 = 0.0;
    for perm in permutations(4) {
        let tones: Vec<Tone> = perm.iter().map(|&i| not_s[i]).collect();
        order = order.max(max_diff(&multi_tone_propagator(&tones).unwrap(), &reference));
    }

    let mut additivity: f64 = 0.0;
    for tone in all_tones() {
        for b in [0.4, -1.1, PI] {
            let second = Tone { angle: b, ..tone };
            let sum = Tone {
                angle: tone.angle + b,
                ..tone
            };
            additivity = additivity.max(max_diff(
                &(pulse_propagator(&second) * pulse_propagator(&tone)),
                &pulse_propagator(&sum),
            ));
        }
    }
    all(vec![
        outcome(projector_ok, "P_mn P_kl = delta_nk P_ml exactly over 8^4 index sets"),
        outcome(unitary < 1e-12, format!("unitarity {unitary:.1e} < 1e-12")),
        outcome(order < 1e-14, format!("order independence {order:.1e} < 1e-14")),
        outcome(
            additivity < 1e-12,
            format!("composition additivity {additivity:.1e} < 1e-12"),
        ),
    ])
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every kind, target and control set the gate grammar admits.
fn grammar_gates() -> Vec<GateSpec> {
    let mut gates = Vec::new();
    for kind in [
        GateKind::Not,
        GateKind::Cnot,
        GateKind::Ccnot,
        GateKind::Ut,
        GateKind::Cut,
        GateKind::Ccut,
    ] {
        for target in VirtualSpin::ALL {
            let others: Vec<VirtualSpin> = VirtualSpin::ALL.into_iter().filter(|&s| s != target).collect();
            let control_sets: Vec<Vec<VirtualSpin>> = match kind.control_count() {
                0 => vec![vec![]],
                1 => others.iter().map(|&s| vec![s]).collect(),
                _ => vec![others.clone()],
            };
            for controls in control_sets {
                let rotation = (!kind.is_not_family()).then_some(Rotation { angle: 1.2, phase: 0.4 });
                gates.push(GateSpec::new(kind, target, &controls, rotation).unwrap());
            }
        }
    }
    gates
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("spin72").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn criterion_7_cli() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut roundtrip_bad = Vec::new();
    let gates = grammar_gates();
    for (i, spec) in gates.iter().enumerate() {
        let gate = spec.to_string();
        let path = dir.path().join(format!("g{i}.toml"));
        let path = path.to_str().unwrap();
        let (c1, _, e1) = run_cli(&["compile", &gate, "--out", path]);
        let (c2, _, e2) = run_cli(&["verify", &gate, "--schedule", path]);
        if c1 != 0 || c2 != 0 {
            roundtrip_bad.push(format!("{gate}: compile {c1} verify {c2} {e1}{e2}"));
        }
    }

    let good = dir.path().join("ccnot.toml");
    let bad = dir.path().join("corrupt.toml");
    run_cli(&["compile", "CCNOT:QR->S", "--out", good.to_str().unwrap()]);
    let text = std::fs::read_to_string(&good).unwrap();
    std::fs::write(
        &bad,
        text.replacen("angle_rad = 3.141592653589793", "angle_rad = 1.5707963267948966", 1),
    )
    .unwrap();
    let (corrupt, _, _) = run_cli(&["verify", "--schedule", bad.to_str().unwrap()]);

    let malformed = ["CCNOT:Q->S", "FOO:S", "CNOT:R->R", "NOT:", "UT:S", "CNOT:QR->S"];
    let malformed_codes: Vec<i32> = malformed.iter().map(|g| run_cli(&["verify", g]).0).collect();
    all(vec![
        outcome(
            roundtrip_bad.is_empty(),
            format!(
                "compile -> verify exits 0 for all {} grammar gates {roundtrip_bad:?}",
                gates.len()
            ),
        ),
        outcome(
            corrupt == cli::EXIT_MISMATCH,
            format!("corrupted schedule exits {corrupt}"),
        ),
        outcome(
            malformed_codes.iter().all(|&c| c == cli::EXIT_INPUT),
            format!("malformed gate strings exit {malformed_codes:?}"),
        ),
    ])
}

fn main() {
    let criteria: Vec<(&str, Check)> = vec![
        (
            "1 gate identities",
            Box::new(|| timed(Some(1.0), criterion_1_gate_identities)),
        ),
        ("2 truth tables", Box::new(|| timed(None, criterion_2_truth_tables))),
        ("3 spectrum cross-check", Box::new(|| timed(None, criterion_3_spectrum))),
        (
            "4 forbidden-transition scaling",
            Box::new(|| timed(Some(10.0), criterion_4_forbidden_scaling)),
        ),
        ("5 exact dynamics", Box::new(|| timed(Some(60.0), criterion_5_dynamics))),
        ("6 algebra", Box::new(|| timed(None, criterion_6_algebra))),
        ("7 cli contract", Box::new(|| timed(None, criterion_7_cli))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
