//! Fixed-size complex matrix helpers for the eight-level space.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

/// Number of levels of a spin-7/2.
pub const DIM: usize = 8;

pub type Mat8 = SMatrix<Complex64, DIM, DIM>;
pub type Vec8 = SVector<Complex64, DIM>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &Mat8) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_diff(a: &Mat8, b: &Mat8) -> f64 {
    max_abs(&(a - b))
}

/// `max |U^dagger U - 1|`.
pub fn unitarity_error(u: &Mat8) -> f64 {
    max_abs(&(u.adjoint() * u - Mat8::identity()))
}

/// `max |H - H^dagger|`.
pub fn hermiticity_error(h: &Mat8) -> f64 {
    max_abs(&(h - h.adjoint()))
}

pub fn commutator(a: &Mat8, b: &Mat8) -> Mat8 {
    a * b - b * a
}

/// `exp(-i H t)` for a Hermitian `H`.
pub fn evolution(h: &Mat8, t: f64) -> Mat8 {
    (h * c(0.0, -t)).exp()
}

/// Diagonal matrix with the given complex entries.
pub fn diag(entries: &[Complex64; DIM]) -> Mat8 {
    Mat8::from_diagonal(&Vec8::from_column_slice(entries))
}

/// `exp(A)` by scaling and squaring of a truncated Taylor series.
///
/// Meant for the small slice generators of the integrator, where only a
/// handful of terms are needed.
pub fn expm_taylor(a: &Mat8) -> Mat8 {
    let norm = (0..DIM)
        .map(|col| a.column(col).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let b = a * re(0.5f64.powi(squarings));
    let mut sum = Mat8::identity();
    let mut term = Mat8::identity();
    for k in 1..=40 {
        term = term * b * re(1.0 / f64::from(k));
        sum += term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_matches_pade() {
        let mut h = Mat8::zeros();
        for j in 0..DIM {
            for k in 0..DIM {
                h[(j, k)] = c((j * 3 + k) as f64 * 0.1, (j as f64 - k as f64) * 0.05);
            }
        }
        let h = (h + h.adjoint()) * re(0.5);
        for t in [1e-6, 1e-3, 0.3, 4.0] {
            let a = h * c(0.0, -t);
            assert!(max_diff(&expm_taylor(&a), &a.exp()) < 1e-12, "t={t}");
            assert!(unitarity_error(&expm_taylor(&a)) < 1e-12);
        }
    }
}
