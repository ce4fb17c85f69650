//! Riccati-Bessel and Riccati-Hankel functions of complex argument.
//!
//! The sphere spectra are built from the products psi_m(x) = x j_m(x) and
//! xi_m(x) = x h_m^(1)(x) together with their derivatives. Individually the
//! two families under- and overflow f64 long before the orders the spectral
//! sweeps need (psi_1000(pi) ~ 1e-2400), so alongside the plain evaluations
//! this module keeps a scaled representation `mantissa * 2^exponent` whose
//! products are exactly the O(1) quantities the spectra consume.

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest supported order for the recurrences.
pub const MAX_ORDER: usize = 2048;

/// Value and derivative of one Riccati function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiPair {
    pub value: Complex64,
    pub derivative: Complex64,
}

/// Complex number scaled as `mantissa * 2^exponent`, with the mantissa kept
/// within a range where products and differences cannot overflow.
#[derive(Debug, Clone, Copy)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub exponent: i64,
}

impl Scaled {
    pub fn new(v: Complex64) -> Self {
        Self { mantissa: v, exponent: 0 }.normalized()
    }

    pub fn zero() -> Self {
        Self { mantissa: Complex64::new(0.0, 0.0), exponent: 0 }
    }

    fn normalized(mut self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 || m.is_nan() {
            self.exponent = 0;
            return self;
        }
        if m > 2f64.powi(256) || m < 2f64.powi(-256) {
            let k = m.log2().floor() as i64;
            self.mantissa *= 2f64.powi(-k as i32);
            self.exponent += k;
        }
        self
    }

    pub fn mul(self, rhs: Scaled) -> Scaled {
        Scaled { mantissa: self.mantissa * rhs.mantissa, exponent: self.exponent + rhs.exponent }
            .normalized()
    }

    pub fn scale(self, c: Complex64) -> Scaled {
        Scaled { mantissa: self.mantissa * c, exponent: self.exponent }.normalized()
    }

    /// `self - rhs`, aligning exponents on the larger operand.
    pub fn sub(self, rhs: Scaled) -> Scaled {
        if rhs.mantissa.norm() == 0.0 {
            return self.normalized();
        }
        if self.mantissa.norm() == 0.0 {
            return Scaled { mantissa: -rhs.mantissa, exponent: rhs.exponent }.normalized();
        }
        let (a, b) = if self.exponent >= rhs.exponent { (self, rhs) } else { (rhs, self) };
        let shift = b.exponent - a.exponent; // <= 0
        let bv = if shift < -1100 { Complex64::new(0.0, 0.0) } else { b.mantissa * 2f64.powi(shift as i32) };
        let m = if self.exponent >= rhs.exponent { a.mantissa - bv } else { bv - a.mantissa };
        Scaled { mantissa: m, exponent: a.exponent }.normalized()
    }

    /// Collapse to a plain complex number (may under/overflow by design).
    pub fn to_complex(self) -> Complex64 {
        self.mantissa * 2f64.powf(self.exponent as f64)
    }
}

/// Scaled value/derivative pair.
#[derive(Debug, Clone, Copy)]
pub struct ScaledPair {
    pub value: Scaled,
    pub derivative: Scaled,
}

impl ScaledPair {
    pub fn to_pair(self) -> RiccatiPair {
        RiccatiPair { value: self.value.to_complex(), derivative: self.derivative.to_complex() }
    }
}

fn check_args(m: usize, x: Complex64) -> Result<()> {
    if m > MAX_ORDER {
        return Err(Error::OrderOverflow { order: m, max: MAX_ORDER });
    }
    if x.norm() == 0.0 {
        return Err(Error::Domain("Riccati functions need |x| > 0".into()));
    }
    Ok(())
}

fn psi0(x: Complex64) -> Complex64 {
    x.sin()
}

fn psi1(x: Complex64) -> Complex64 {
    x.sin() / x - x.cos()
}

/// xi_0(x) = -i e^{ix}; xi_1(x) = -(1 + i/x) e^{ix}.
fn xi0(x: Complex64) -> Complex64 {
    -Complex64::i() * (Complex64::i() * x).exp()
}

fn xi1(x: Complex64) -> Complex64 {
    -(Complex64::new(1.0, 0.0) + Complex64::i() / x) * (Complex64::i() * x).exp()
}

/// All psi_n(x) for n = 0..=m_max in scaled form.
///
/// Backward (Miller) recurrence started at `m_max + 40 + ceil|x|`, normalized
/// against whichever of the closed forms psi_0, psi_1 is larger in modulus
/// (sin x vanishes at x = n pi, so psi_0 alone is not a safe reference).
pub fn psi_table(m_max: usize, x: Complex64) -> Result<Vec<Scaled>> {
    check_args(m_max, x)?;
    let start = m_max + 40 + x.norm().ceil() as usize;
    let mut f_next = Scaled::zero();
    let mut f_cur = Scaled { mantissa: Complex64::new(1.0, 0.0), exponent: -900 };
    let mut vals = vec![Scaled::zero(); start + 1];
    vals[start] = f_cur;
    for n in (1..=start).rev() {
        let coef = Complex64::new(2.0 * n as f64 + 1.0, 0.0) / x;
        let f_prev = f_cur.scale(coef).sub(f_next);
        vals[n - 1] = f_prev;
        f_next = f_cur;
        f_cur = f_prev;
    }
    let p0 = psi0(x);
    let p1 = psi1(x);
    let ratio = if p0.norm() >= p1.norm() {
        Scaled::new(p0).mul(invert(vals[0]))
    } else {
        Scaled::new(p1).mul(invert(vals[1]))
    };
    let mut out: Vec<Scaled> = vals[..=m_max].iter().map(|v| v.mul(ratio)).collect();
    // The closed forms are exact; recurrence values near zeros of sin x lose
    // all relative accuracy for n = 0, 1.
    out[0] = Scaled::new(p0);
    if m_max >= 1 {
        out[1] = Scaled::new(p1);
    }
    Ok(out)
}

fn invert(s: Scaled) -> Scaled {
    Scaled { mantissa: 1.0 / s.mantissa, exponent: -s.exponent }.normalized()
}

/// All xi_n(x) for n = 0..=m_max in scaled form (upward recurrence; the
/// Hankel family is dominant so forward is stable).
pub fn xi_table(m_max: usize, x: Complex64) -> Result<Vec<Scaled>> {
    check_args(m_max, x)?;
    let mut out = vec![Scaled::zero(); m_max + 1];
    out[0] = Scaled::new(xi0(x));
    if m_max >= 1 {
        out[1] = Scaled::new(xi1(x));
    }
    for n in 1..m_max {
        let coef = Complex64::new(2.0 * n as f64 + 1.0, 0.0) / x;
        out[n + 1] = out[n].scale(coef).sub(out[n - 1]);
    }
    Ok(out)
}

fn derivative_from_table(table: &[Scaled], m: usize, x: Complex64) -> Scaled {
    if m == 0 {
        unreachable!("handled by closed forms");
    }
    // f_m'(x) = f_{m-1}(x) - (m/x) f_m(x), valid for both families.
    table[m - 1].sub(table[m].scale(Complex64::new(m as f64, 0.0) / x))
}

/// psi_m(x) and psi_m'(x) in scaled form.
pub fn riccati_psi_scaled(m: usize, x: Complex64) -> Result<ScaledPair> {
    check_args(m, x)?;
    if m == 0 {
        return Ok(ScaledPair { value: Scaled::new(psi0(x)), derivative: Scaled::new(x.cos()) });
    }
    let table = psi_table(m, x)?;
    Ok(ScaledPair { value: table[m], derivative: derivative_from_table(&table, m, x) })
}

/// xi_m^(1)(x) and its derivative in scaled form.
pub fn riccati_xi1_scaled(m: usize, x: Complex64) -> Result<ScaledPair> {
    check_args(m, x)?;
    if m == 0 {
        let e = (Complex64::i() * x).exp();
        return Ok(ScaledPair { value: Scaled::new(-Complex64::i() * e), derivative: Scaled::new(e) });
    }
    let table = xi_table(m, x)?;
    Ok(ScaledPair { value: table[m], derivative: derivative_from_table(&table, m, x) })
}

/// Riccati-Bessel function psi_m(x) = x j_m(x) with derivative.
///
/// Upward recurrence when the order is well inside the oscillatory regime
/// (|x| > m + 2), Miller backward recurrence otherwise.
pub fn riccati_psi(m: usize, x: Complex64) -> Result<RiccatiPair> {
    check_args(m, x)?;
    if m == 0 {
        return Ok(RiccatiPair { value: psi0(x), derivative: x.cos() });
    }
    if m == 1 {
        return Ok(RiccatiPair { value: psi1(x), derivative: psi0(x) - psi1(x) / x });
    }
    if (m as f64) + 2.0 < x.norm() {
        // forward recurrence from the closed forms
        let mut prev = psi0(x);
        let mut cur = psi1(x);
        for n in 1..m {
            let next = Complex64::new(2.0 * n as f64 + 1.0, 0.0) / x * cur - prev;
            prev = cur;
            cur = next;
        }
        let d = prev - Complex64::new(m as f64, 0.0) / x * cur;
        Ok(RiccatiPair { value: cur, derivative: d })
    } else {
        Ok(riccati_psi_scaled(m, x)?.to_pair())
    }
}

/// Riccati-Hankel function xi_m^(1)(x) = x h_m^(1)(x) with derivative.
pub fn riccati_xi1(m: usize, x: Complex64) -> Result<RiccatiPair> {
    Ok(riccati_xi1_scaled(m, x)?.to_pair())
}

/// psi and xi tables with derivatives for every order up to `m_max`;
/// the shared workhorse of the spectral sweeps.
pub struct RiccatiTable {
    pub psi: Vec<ScaledPair>,
    pub xi: Vec<ScaledPair>,
}

impl RiccatiTable {
    pub fn build(m_max: usize, x: Complex64) -> Result<Self> {
        check_args(m_max, x)?;
        let pv = psi_table(m_max, x)?;
        let xv = xi_table(m_max, x)?;
        let deriv = |tab: &[Scaled], m: usize, d0: Complex64| -> Scaled {
            if m == 0 {
                Scaled::new(d0)
            } else {
                derivative_from_table(tab, m, x)
            }
        };
        let psi = (0..=m_max)
            .map(|m| ScaledPair { value: pv[m], derivative: deriv(&pv, m, x.cos()) })
            .collect();
        let e = (Complex64::i() * x).exp();
        let xi = (0..=m_max)
            .map(|m| ScaledPair { value: xv[m], derivative: deriv(&xv, m, e) })
            .collect();
        Ok(Self { psi, xi })
    }

    /// Cross-Wronskian psi_m xi_m' - psi_m' xi_m (identically i).
    pub fn wronskian(&self, m: usize) -> Complex64 {
        self.psi[m]
            .value
            .mul(self.xi[m].derivative)
            .sub(self.psi[m].derivative.mul(self.xi[m].value))
            .to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn psi0_is_sine() {
        let p = riccati_psi(0, Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(p.value.re, 1.0f64.sin(), epsilon = 1e-12);
        assert_relative_eq!(p.derivative.re, 1.0f64.cos(), epsilon = 1e-12);
    }

    #[test]
    fn zero_argument_rejected() {
        assert!(matches!(riccati_psi(3, Complex64::new(0.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn order_overflow_rejected() {
        let e = riccati_psi(MAX_ORDER + 1, Complex64::new(1.0, 0.0));
        assert!(matches!(e, Err(Error::OrderOverflow { .. })));
    }

    #[test]
    fn forward_and_backward_agree() {
        // m just below |x|: the forward path runs; compare with Miller.
        let x = Complex64::new(25.0, 0.3);
        for m in [2usize, 5, 10, 20] {
            let fwd = riccati_psi(m, x).unwrap();
            let bwd = riccati_psi_scaled(m, x).unwrap().to_pair();
            assert_relative_eq!(fwd.value.re, bwd.value.re, max_relative = 1e-10);
            assert_relative_eq!(fwd.value.im, bwd.value.im, max_relative = 1e-10);
        }
    }
}
