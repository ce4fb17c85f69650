//! Rotated-branch-cut rational approximants of (1+z)^{1/2} and (1+z)^{-1/2}.
//!
//! Both families start from real Pade coefficients and rotate the branch cut
//! by an angle theta so that the cut moves off the negative real axis to
//! arg(1+z) = theta - pi, keeping the evanescent-mode region well resolved.
//! They are the scalar symbols behind every localized OSRC operator in this
//! crate: substituting the surface Laplacian for z turns the partial
//! fractions into the sparse resolvent solves of [`crate::osrc`].

use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Coefficients of `(1+z)^{1/2} ~ C0 + sum_l A_l z / (1 + B_l z)`.
#[derive(Debug, Clone, Serialize)]
pub struct SqrtPadeCoeffs {
    pub order: usize,
    pub angle: f64,
    pub c0: Complex64,
    /// `F0 = C0 + sum_l A_l / B_l`; the constant of the equivalent closed
    /// form `F0 - sum_l A_l / (B_l (1 + B_l z))`.
    pub f0: Complex64,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

/// Coefficients of `(1+z)^{-1/2} ~ sum_l R_l / (S_l + z)`.
#[derive(Debug, Clone, Serialize)]
pub struct InvSqrtPadeCoeffs {
    pub order: usize,
    pub angle: f64,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub r: Vec<Complex64>,
    pub s: Vec<Complex64>,
}

fn check_order_angle(order: usize, angle: f64) -> Result<()> {
    if order < 1 {
        return Err(Error::Parameter("Pade order must be >= 1".into()));
    }
    if !(angle > -std::f64::consts::PI && angle <= std::f64::consts::PI) || !angle.is_finite() {
        return Err(Error::Parameter(format!("branch angle {angle} outside (-pi, pi]")));
    }
    Ok(())
}

/// Real Pade coefficients `a_l = 2/(2L+1) sin^2(l pi/(2L+1))`,
/// `b_l = cos^2(l pi/(2L+1))` of the un-rotated approximation of (1+z)^{1/2}.
pub fn real_sqrt_coeffs(order: usize) -> (Vec<f64>, Vec<f64>) {
    let big_l = order as f64;
    let mut a = Vec::with_capacity(order);
    let mut b = Vec::with_capacity(order);
    for l in 1..=order {
        let arg = l as f64 * std::f64::consts::PI / (2.0 * big_l + 1.0);
        a.push(2.0 / (2.0 * big_l + 1.0) * arg.sin().powi(2));
        b.push(arg.cos().powi(2));
    }
    (a, b)
}

/// Build the rotated square-root coefficient set.
pub fn sqrt_pade_coeffs(order: usize, angle: f64) -> Result<SqrtPadeCoeffs> {
    check_order_angle(order, angle)?;
    let (ar, br) = real_sqrt_coeffs(order);
    let e = Complex64::from_polar(1.0, -angle);
    let half = Complex64::from_polar(1.0, -angle / 2.0);
    let mut a = Vec::with_capacity(order);
    let mut b = Vec::with_capacity(order);
    for l in 0..order {
        let q = 1.0 + br[l] * (e - 1.0);
        a.push(half * ar[l] / (q * q));
        // The rotation maps the pole of term l to 1 + z = e^{i theta}(1 - 1/b_l),
        // which fixes B_l = e^{-i theta} b_l / q (positive sign).
        b.push(e * br[l] / q);
    }
    // C0 = e^{i theta/2} R_L(e^{-i theta} - 1)
    let w0 = e - 1.0;
    let mut r = Complex64::new(1.0, 0.0);
    for l in 0..order {
        r += ar[l] * w0 / (1.0 + br[l] * w0);
    }
    let c0 = Complex64::from_polar(1.0, angle / 2.0) * r;
    let f0 = c0 + a.iter().zip(&b).map(|(al, bl)| al / bl).sum::<Complex64>();
    Ok(SqrtPadeCoeffs { order, angle, c0, f0, a, b })
}

/// Build the rotated inverse-square-root coefficient set:
/// `c_l = d_l / L`, `d_l = 1 + tan^2(pi/(2L) (1/2 + l))`,
/// `R_l = e^{i theta/2} c_l`, `S_l = 1 - e^{i theta} + d_l e^{i theta}`.
pub fn invsqrt_pade_coeffs(order: usize, angle: f64) -> Result<InvSqrtPadeCoeffs> {
    check_order_angle(order, angle)?;
    let big_l = order as f64;
    let mut c = Vec::with_capacity(order);
    let mut d = Vec::with_capacity(order);
    for l in 0..order {
        let arg = std::f64::consts::PI / (2.0 * big_l) * (0.5 + l as f64);
        let dl = 1.0 + arg.tan().powi(2);
        d.push(dl);
        c.push(dl / big_l);
    }
    let e = Complex64::from_polar(1.0, angle);
    let half = Complex64::from_polar(1.0, angle / 2.0);
    let r = c.iter().map(|&cl| half * cl).collect();
    let s = d.iter().map(|&dl| 1.0 - e + dl * e).collect();
    Ok(InvSqrtPadeCoeffs { order, angle, c, d, r, s })
}

/// Evaluate `C0 + sum_l A_l z / (1 + B_l z)`.
pub fn eval_sqrt_pade(coeffs: &SqrtPadeCoeffs, z: Complex64) -> Result<Complex64> {
    let mut acc = coeffs.c0;
    for l in 0..coeffs.order {
        let den = 1.0 + coeffs.b[l] * z;
        if den.norm() < 1e-14 * (1.0 + (coeffs.b[l] * z).norm()) {
            return Err(Error::SingularEvaluation {
                term: l,
                context: format!("1 + B_{l} z vanished at z = {z}"),
            });
        }
        acc += coeffs.a[l] * z / den;
    }
    Ok(acc)
}

/// Evaluate through the equivalent `F0 - sum_l A_l/(B_l (1 + B_l z))` form.
pub fn eval_sqrt_pade_f0(coeffs: &SqrtPadeCoeffs, z: Complex64) -> Result<Complex64> {
    let mut acc = coeffs.f0;
    for l in 0..coeffs.order {
        let den = coeffs.b[l] * (1.0 + coeffs.b[l] * z);
        if den.norm() < 1e-14 * (1.0 + (coeffs.b[l] * z).norm()) {
            return Err(Error::SingularEvaluation {
                term: l,
                context: format!("1 + B_{l} z vanished at z = {z}"),
            });
        }
        acc -= coeffs.a[l] / den;
    }
    Ok(acc)
}

/// Evaluate `sum_l R_l / (S_l + z)`.
pub fn eval_invsqrt_pade(coeffs: &InvSqrtPadeCoeffs, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..coeffs.order {
        let den = coeffs.s[l] + z;
        if den.norm() < 1e-14 * (1.0 + z.norm()) {
            return Err(Error::SingularEvaluation {
                term: l,
                context: format!("S_{l} + z vanished at z = {z}"),
            });
        }
        acc += coeffs.r[l] / den;
    }
    Ok(acc)
}

/// The branch of the square root both coefficient families approximate:
/// `e^{i theta/2} ((e^{-i theta}(1+z))^{1/2}` with the principal root.
pub fn rotated_sqrt(z: Complex64, angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle / 2.0)
        * (Complex64::from_polar(1.0, -angle) * (1.0 + z)).sqrt()
}

/// Reciprocal of [`rotated_sqrt`]; the branch the R/S coefficients follow.
pub fn rotated_invsqrt(z: Complex64, angle: f64) -> Complex64 {
    1.0 / rotated_sqrt(z, angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn order_zero_rejected() {
        assert!(sqrt_pade_coeffs(0, 0.0).is_err());
        assert!(invsqrt_pade_coeffs(0, 0.0).is_err());
    }

    #[test]
    fn bad_angle_rejected() {
        assert!(sqrt_pade_coeffs(4, 4.0).is_err());
        assert!(invsqrt_pade_coeffs(4, f64::NAN).is_err());
    }

    #[test]
    fn l1_gives_printed_coefficients() {
        // a_1 = (2/3) sin^2(pi/3) = 1/2, b_1 = cos^2(pi/3) = 1/4.
        let (a, b) = real_sqrt_coeffs(1);
        assert_relative_eq!(a[0], 0.5, epsilon = 1e-14);
        assert_relative_eq!(b[0], 0.25, epsilon = 1e-14);
        // at theta = 0 the rotated set reduces to the real one
        let c = sqrt_pade_coeffs(1, 0.0).unwrap();
        assert_relative_eq!(c.a[0].re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(c.b[0].re, 0.25, epsilon = 1e-14);
        assert!(c.a[0].im.abs() < 1e-15 && c.b[0].im.abs() < 1e-15);
    }

    #[test]
    fn invsqrt_l1_coefficients() {
        // tan^2(pi/4) = 1 => d_0 = 2, c_0 = 2.
        let c = invsqrt_pade_coeffs(1, 0.0).unwrap();
        assert_relative_eq!(c.c[0], 2.0, epsilon = 1e-13);
        assert_relative_eq!(c.d[0], 2.0, epsilon = 1e-13);
    }

    #[test]
    fn d_is_order_times_c() {
        let c = invsqrt_pade_coeffs(11, 0.7).unwrap();
        for l in 0..11 {
            assert_relative_eq!(c.d[l], 11.0 * c.c[l], epsilon = 1e-12);
        }
    }

    #[test]
    fn pole_reported_with_term_index() {
        let c = sqrt_pade_coeffs(3, 0.0).unwrap();
        let z = -1.0 / c.b[1];
        match eval_sqrt_pade(&c, z) {
            Err(Error::SingularEvaluation { term, .. }) => assert_eq!(term, 1),
            other => panic!("expected pole error, got {other:?}"),
        }
    }
}
