use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>)) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "pyspin72").unwrap();
        pyspin72::pyspin72(&m).unwrap();
        let locals = PyDict::new(py);
        locals.set_item("p", &m).unwrap();
        f(py, &locals);
    });
}

#[test]
fn gate_round_trip_from_python() {
    with_module(|py, locals| {
        py.run(
            c"
g = p.Gate('CCNOT:QR->S')
verdict, dev = p.verify(g, g.compile().propagator())
table = p.truth_table(g)
",
            None,
            Some(locals),
        )
        .unwrap();
        let verdict: String = locals.get_item("verdict").unwrap().unwrap().extract().unwrap();
        assert_eq!(verdict, "equal-up-to-i");
        let table: Vec<(usize, usize)> = locals.get_item("table").unwrap().unwrap().extract().unwrap();
        assert_eq!(table[6], (6, 7));
        assert_eq!(table[7], (7, 6));
    });
}

#[test]
fn matrices_are_python_complex() {
    with_module(|py, locals| {
        py.run(c"h = p.SpinSystem(1.0, 0.01, 0.6).hamiltonian()", None, Some(locals))
            .unwrap();
        let h: Vec<Vec<num_complex::Complex64>> = locals.get_item("h").unwrap().unwrap().extract().unwrap();
        assert_eq!(h.len(), 8);
        assert!((h[0][0].re - 3.5 - 0.01 * (3.0 * 0.6f64.cos().powi(2) - 1.0) * 7.0).abs() < 1e-12);
    });
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(|py, locals| {
        let e = py.run(c"p.Gate('CCNOT:Q->S')", None, Some(locals)).unwrap_err();
        assert!(e.is_instance_of::<PyValueError>(py));
        let e = py
            .run(c"p.SpinSystem(1.0, 1.0, 1.0).spectrum()", None, Some(locals))
            .unwrap_err();
        assert!(e.is_instance_of::<PyArithmeticError>(py));
    });
}
