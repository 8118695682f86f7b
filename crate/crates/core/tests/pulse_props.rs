use std::f64::consts::PI;

use proptest::prelude::*;
use spin72::linalg::{max_diff, unitarity_error, Mat8};
use spin72::pulse::{multi_tone_propagator, projector, pulse_propagator, Axis, Tone};

fn pair() -> impl Strategy<Value = (usize, usize)> {
    (0usize..8, 0usize..8)
        .prop_filter("distinct levels", |(a, b)| a != b)
        .prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y)]
}

fn tone() -> impl Strategy<Value = Tone> {
    (pair(), -4.0 * PI..4.0 * PI, -PI..PI, axis())
        .prop_map(|((u, l), angle, phase, axis)| Tone::new(u, l, angle, phase, axis).unwrap())
}

proptest! {
    #[test]
    fn propagators_are_unitary(t in tone()) {
        prop_assert!(unitarity_error(&pulse_propagator(&t)) < 1e-12);
    }

    #[test]
    fn angles_add_on_a_shared_pair(t in tone(), b in -2.0 * PI..2.0 * PI) {
        let second = Tone { angle: b, ..t };
        let sum = Tone { angle: t.angle + b, ..t };
        prop_assert!(max_diff(&(pulse_propagator(&second) * pulse_propagator(&t)), &pulse_propagator(&sum)) < 1e-12);
    }

    #[test]
    fn four_pi_is_identity_two_pi_flips_the_block(t in tone()) {
        let four = pulse_propagator(&Tone { angle: 4.0 * PI, ..t });
        prop_assert!(max_diff(&four, &Mat8::identity()) < 1e-12);
        let two = pulse_propagator(&Tone { angle: 2.0 * PI, ..t });
        let mut expected = Mat8::identity();
        expected[(t.upper, t.upper)] = -expected[(t.upper, t.upper)];
        expected[(t.lower, t.lower)] = -expected[(t.lower, t.lower)];
        prop_assert!(max_diff(&two, &expected) < 1e-12);
    }

    #[test]
    fn disjoint_tones_commute(perm in Just([0usize, 1, 2, 3, 4, 5, 6, 7]).prop_shuffle(), a in proptest::collection::vec((-PI..PI, -PI..PI, axis()), 4)) {
        let tones: Vec<Tone> = perm
            .chunks(2)
            .zip(&a)
            .map(|(p, &(angle, phase, axis))| Tone::new(p[0].min(p[1]), p[0].max(p[1]), angle, phase, axis).unwrap())
            .collect();
        let forward = multi_tone_propagator(&tones).unwrap();
        let reversed: Vec<Tone> = tones.iter().rev().copied().collect();
        prop_assert!(max_diff(&forward, &multi_tone_propagator(&reversed).unwrap()) < 1e-14);
    }
}

#[test]
fn projector_algebra_over_all_index_sets() {
    for m in 0..8 {
        for n in 0..8 {
            let pmn = projector(m, n).unwrap();
            for k in 0..8 {
                for l in 0..8 {
                    let pkl = projector(k, l).unwrap();
                    let product = pmn.matrix() * pkl.matrix();
                    let expected = if n == k {
                        projector(m, l).unwrap().matrix()
                    } else {
                        Mat8::zeros()
                    };
                    assert_eq!(product, expected, "P{m}{n} P{k}{l}");
                    assert_eq!(pmn.compose(&pkl), (n == k).then(|| projector(m, l).unwrap()));
                }
            }
        }
    }
    let sum = (0..8).fold(Mat8::zeros(), |acc, m| acc + projector(m, m).unwrap().matrix());
    assert_eq!(sum, Mat8::identity());
}

#[test]
fn overlapping_tones_are_rejected() {
    let tones = [Tone::pi(2, 3).unwrap(), Tone::pi(3, 7).unwrap()];
    assert!(multi_tone_propagator(&tones).is_err());
}
