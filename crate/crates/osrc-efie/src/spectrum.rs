//! Closed-form eigenvalue sweeps on the sphere for every formulation:
//! raw EFIE, Calderon-squared, OSRC-preconditioned (left and right),
//! the Lambda_2-only shortcut, and the Pade-approximated variants.
//!
//! On the sphere S_R the gradient/curl vector spherical harmonics
//! diagonalize everything: the electric field integral operator has
//! eigenvalues t_m^- = xi_m(kR) psi_m(kR) and t_m^+ = xi_m'(kR) psi_m'(kR),
//! while the OSRC square roots contribute L_m^{+-} = (1 - lambda_m/keps^2)^{+-1/2}.

use num_complex::Complex64;
use serde::Serialize;

use crate::pade::{
    eval_invsqrt_pade, eval_sqrt_pade, invsqrt_pade_coeffs, sqrt_pade_coeffs, InvSqrtPadeCoeffs,
    SqrtPadeCoeffs,
};
use crate::special::RiccatiTable;
use crate::{Error, Result};

/// Which Laplace-Beltrami eigenvalue to attach to mode m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaConvention {
    /// m(m+1)/2, exactly as printed in the source analysis.
    PaperHalf,
    /// m(m+1)/R^2, the classical spectrum on the sphere of radius R.
    Standard,
}

impl std::str::FromStr for LambdaConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-half" | "paper_half" => Ok(Self::PaperHalf),
            "standard" => Ok(Self::Standard),
            other => Err(Error::Parameter(format!("unknown lambda convention '{other}'"))),
        }
    }
}

/// Everything a spectral sweep needs.
#[derive(Debug, Clone)]
pub struct SpectrumConfig {
    pub kappa: f64,
    pub radius: f64,
    /// Mean curvature entering the damping rule; 1/R for the sphere.
    pub curvature: f64,
    pub epsilon: f64,
    pub pade_sqrt: SqrtPadeCoeffs,
    pub pade_invsqrt: InvSqrtPadeCoeffs,
    pub m_max: usize,
    pub lambda_convention: LambdaConvention,
}

impl SpectrumConfig {
    /// Standard configuration: damping per the optimal rule, both Pade
    /// families at the same order and branch angle.
    pub fn new(kappa: f64, radius: f64, pade_order: usize, theta: f64) -> Result<Self> {
        if kappa <= 0.0 || radius <= 0.0 {
            return Err(Error::Parameter("kappa and radius must be positive".into()));
        }
        let curvature = 1.0 / radius;
        Ok(Self {
            kappa,
            radius,
            curvature,
            epsilon: damping_epsilon(kappa, curvature)?,
            pade_sqrt: sqrt_pade_coeffs(pade_order, theta)?,
            pade_invsqrt: invsqrt_pade_coeffs(pade_order, theta)?,
            m_max: 1,
            lambda_convention: LambdaConvention::Standard,
        })
    }

    pub fn with_m_max(mut self, m_max: usize) -> Self {
        self.m_max = m_max.max(1);
        self
    }

    pub fn with_convention(mut self, c: LambdaConvention) -> Self {
        self.lambda_convention = c;
        self
    }

    /// Damped wavenumber kappa + i epsilon.
    pub fn kappa_eps(&self) -> Complex64 {
        Complex64::new(self.kappa, self.epsilon)
    }

    pub fn lambda(&self, m: usize) -> f64 {
        laplace_beltrami_eigenvalue(m, self.radius, self.lambda_convention)
    }
}

/// All spectral quantities of one mode.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeEigenvalues {
    pub m: usize,
    pub lambda_m: f64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub l_plus: Complex64,
    pub l_minus: Complex64,
    /// Pade approximation of l_plus (square-root family).
    pub l_tilde_plus: Complex64,
    /// Pade approximation of l_minus (inverse-square-root family).
    pub l_tilde_minus: Complex64,
}

/// Optimal damping `0.39 kappa^{1/3} H^{2/3}`.
pub fn damping_epsilon(kappa: f64, curvature: f64) -> Result<f64> {
    if kappa <= 0.0 || curvature <= 0.0 {
        return Err(Error::Parameter("damping rule needs kappa > 0 and H > 0".into()));
    }
    Ok(0.39 * kappa.powf(1.0 / 3.0) * curvature.powf(2.0 / 3.0))
}

/// Laplace-Beltrami eigenvalue of mode m under the chosen convention.
pub fn laplace_beltrami_eigenvalue(m: usize, radius: f64, convention: LambdaConvention) -> f64 {
    let mm = m as f64;
    match convention {
        LambdaConvention::PaperHalf => mm * (mm + 1.0) / 2.0,
        LambdaConvention::Standard => mm * (mm + 1.0) / (radius * radius),
    }
}

/// EFIO eigenvalues of mode m:
/// `t_minus = xi_m(kR) psi_m(kR)`, `t_plus = xi_m'(kR) psi_m'(kR)`.
pub fn efio_eigenvalues(m: usize, kappa: f64, radius: f64) -> Result<(Complex64, Complex64)> {
    if m < 1 {
        return Err(Error::Parameter("mode index must be >= 1".into()));
    }
    if kappa * radius <= 0.0 {
        return Err(Error::Parameter("kappa * R must be positive".into()));
    }
    let table = RiccatiTable::build(m, Complex64::new(kappa * radius, 0.0))?;
    Ok(efio_from_table(&table, m))
}

fn efio_from_table(table: &RiccatiTable, m: usize) -> (Complex64, Complex64) {
    let t_plus = table.xi[m].derivative.mul(table.psi[m].derivative).to_complex();
    let t_minus = table.xi[m].value.mul(table.psi[m].value).to_complex();
    (t_plus, t_minus)
}

/// OSRC square-root eigenvalues `L_plus = (1 - lambda_m/keps^2)^{1/2}`
/// and its reciprocal, principal branch.
pub fn osrc_eigenvalues(m: usize, cfg: &SpectrumConfig) -> Result<(Complex64, Complex64)> {
    let keps2 = cfg.kappa_eps() * cfg.kappa_eps();
    let arg = 1.0 - cfg.lambda(m) / keps2;
    if arg.norm() < 1e-300 || (cfg.epsilon == 0.0 && arg.re <= 0.0 && arg.im == 0.0) {
        return Err(Error::SingularMode {
            mode: m,
            context: "1 - lambda_m/kappa^2 hit the branch cut (undamped resonance)".into(),
        });
    }
    let l_plus = arg.sqrt();
    Ok((l_plus, 1.0 / l_plus))
}

/// The four Pade eigenvalue families of one mode, labelled by what they
/// approximate: the `l1` pair comes from the inverse-square-root sum, the
/// `lm1` pair from the square-root form; `*_plus ~ L_m^+`, `*_minus ~ L_m^-`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PadeEigenvalues {
    pub l1_plus: Complex64,
    pub l1_minus: Complex64,
    pub lm1_plus: Complex64,
    pub lm1_minus: Complex64,
}

/// Pade-approximated OSRC eigenvalues; the Laplacian acts as -lambda_m, so
/// both rational families are evaluated at z = -lambda_m/keps^2.
pub fn pade_osrc_eigenvalues(m: usize, cfg: &SpectrumConfig) -> Result<PadeEigenvalues> {
    let keps2 = cfg.kappa_eps() * cfg.kappa_eps();
    let z = -cfg.lambda(m) / keps2;
    let q_minus = eval_invsqrt_pade(&cfg.pade_invsqrt, z).map_err(|e| singular_mode(m, e))?;
    let p_plus = eval_sqrt_pade(&cfg.pade_sqrt, z).map_err(|e| singular_mode(m, e))?;
    if q_minus.norm() == 0.0 || p_plus.norm() == 0.0 {
        return Err(Error::SingularMode { mode: m, context: "Pade value vanished".into() });
    }
    Ok(PadeEigenvalues {
        l1_plus: 1.0 / q_minus,
        l1_minus: q_minus,
        lm1_plus: p_plus,
        lm1_minus: 1.0 / p_plus,
    })
}

fn singular_mode(m: usize, e: Error) -> Error {
    match e {
        Error::SingularEvaluation { term, context } => Error::SingularMode {
            mode: m,
            context: format!("resolvent pole in term {term}: {context}"),
        },
        other => other,
    }
}

/// Full per-mode summary (exact and Pade eigenvalues).
pub fn mode_eigenvalues(m: usize, cfg: &SpectrumConfig) -> Result<ModeEigenvalues> {
    let (t_plus, t_minus) = efio_eigenvalues(m, cfg.kappa, cfg.radius)?;
    let (l_plus, l_minus) = osrc_eigenvalues(m, cfg)?;
    let pade = pade_osrc_eigenvalues(m, cfg)?;
    Ok(ModeEigenvalues {
        m,
        lambda_m: cfg.lambda(m),
        t_plus,
        t_minus,
        l_plus,
        l_minus,
        l_tilde_plus: pade.lm1_plus,
        l_tilde_minus: pade.l1_minus,
    })
}

/// Formulations whose sphere spectrum has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Formulation {
    Efie,
    Calderon,
    EtmLeft,
    MteLeft,
    EtmRight,
    MteRight,
    Lambda2Only,
    /// OSRC-EFIE with the square-root Pade family (MtE route).
    EfiePadeMte,
    /// OSRC-EFIE with the inverse-square-root Pade family (EtM route).
    EfiePadeEtm,
}

impl Formulation {
    pub const ALL: [Formulation; 9] = [
        Formulation::Efie,
        Formulation::Calderon,
        Formulation::EtmLeft,
        Formulation::MteLeft,
        Formulation::EtmRight,
        Formulation::MteRight,
        Formulation::Lambda2Only,
        Formulation::EfiePadeMte,
        Formulation::EfiePadeEtm,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Formulation::Efie => "efie",
            Formulation::Calderon => "calderon",
            Formulation::EtmLeft => "etm_left",
            Formulation::MteLeft => "mte_left",
            Formulation::EtmRight => "etm_right",
            Formulation::MteRight => "mte_right",
            Formulation::Lambda2Only => "lambda2_only",
            Formulation::EfiePadeMte => "efie_pade_mte",
            Formulation::EfiePadeEtm => "efie_pade_etm",
        }
    }
}

impl std::str::FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Formulation::ALL
            .iter()
            .find(|f| f.name() == s)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("unknown formulation '{s}'")))
    }
}

/// One spectrum sample: mode index, branch label and eigenvalue.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumPoint {
    pub m: usize,
    /// "plus"/"minus": first/second entry of the formulation's printed pair.
    pub branch: &'static str,
    pub value: Complex64,
}

/// Both eigenvalue branches of `formulation` for every mode up to
/// `cfg.m_max`.
pub fn formulation_spectrum(
    formulation: Formulation,
    cfg: &SpectrumConfig,
) -> Result<Vec<SpectrumPoint>> {
    let x = Complex64::new(cfg.kappa * cfg.radius, 0.0);
    let table = RiccatiTable::build(cfg.m_max, x)?;
    let mut out = Vec::with_capacity(2 * cfg.m_max);
    for m in 1..=cfg.m_max {
        let (tp, tm) = efio_from_table(&table, m);
        let pair = match formulation {
            Formulation::Efie => (tp, tm),
            Formulation::Calderon => {
                let v = -tp * tm;
                (v, v)
            }
            Formulation::EtmLeft | Formulation::MteLeft => {
                let (lp, lm) = osrc_eigenvalues(m, cfg)?;
                (lp * tm, lm * tp)
            }
            // Right preconditioning lists the branches in the opposite
            // order: the gradient harmonic now carries L^- t^+.
            Formulation::EtmRight => {
                let (lp, lm) = osrc_eigenvalues(m, cfg)?;
                (lm * tp, lp * tm)
            }
            Formulation::MteRight => {
                let (lp, lm) = osrc_eigenvalues(m, cfg)?;
                (lp * tm, lm * tp)
            }
            Formulation::Lambda2Only => {
                let (_, lm) = osrc_eigenvalues(m, cfg)?;
                (tm, lm * lm * tp)
            }
            Formulation::EfiePadeMte => {
                let p = pade_osrc_eigenvalues(m, cfg)?;
                (p.lm1_plus * tm, p.lm1_minus * tp)
            }
            Formulation::EfiePadeEtm => {
                let p = pade_osrc_eigenvalues(m, cfg)?;
                (p.l1_plus * tm, p.l1_minus * tp)
            }
        };
        out.push(SpectrumPoint { m, branch: "plus", value: pair.0 });
        out.push(SpectrumPoint { m, branch: "minus", value: pair.1 });
    }
    Ok(out)
}

/// How the sweep chooses its largest mode.
#[derive(Debug, Clone, Copy)]
pub enum ModeCapRule {
    /// Nyquist-style cap from mesh density: `m_max = ceil(kappa R ppw / 2)`.
    PointsPerWavelength(f64),
    Explicit(usize),
}

impl ModeCapRule {
    pub fn m_max(&self, kappa: f64, radius: f64) -> usize {
        match self {
            ModeCapRule::PointsPerWavelength(ppw) => {
                (kappa * radius * ppw / 2.0).ceil().max(1.0) as usize
            }
            ModeCapRule::Explicit(m) => (*m).max(1),
        }
    }
}

/// CSV sweep over a list of formulations with columns
/// `formulation,m,branch,re,im,abs`.
pub fn spectrum_report(
    cfg: &SpectrumConfig,
    formulations: &[Formulation],
    mode_cap: ModeCapRule,
) -> Result<String> {
    let m_max = mode_cap.m_max(cfg.kappa, cfg.radius);
    let cfg = cfg.clone().with_m_max(m_max);
    let mut csv = String::from("formulation,m,branch,re,im,abs\n");
    for f in formulations {
        for p in formulation_spectrum(*f, &cfg)? {
            csv.push_str(&format!(
                "{},{},{},{:.16e},{:.16e},{:.16e}\n",
                f.name(),
                p.m,
                p.branch,
                p.value.re,
                p.value.im,
                p.value.norm()
            ));
        }
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg(kappa: f64) -> SpectrumConfig {
        SpectrumConfig::new(kappa, 1.0, 8, std::f64::consts::FRAC_PI_3).unwrap()
    }

    #[test]
    fn damping_examples() {
        assert_relative_eq!(damping_epsilon(1.0, 1.0).unwrap(), 0.39, epsilon = 1e-15);
        assert_relative_eq!(damping_epsilon(8.0, 1.0).unwrap(), 0.78, epsilon = 1e-15);
        assert_relative_eq!(
            damping_epsilon(std::f64::consts::PI, 1.0).unwrap(),
            0.571190836148994,
            epsilon = 1e-12
        );
        assert!(damping_epsilon(-1.0, 1.0).is_err());
    }

    #[test]
    fn lambda_conventions() {
        assert_relative_eq!(
            laplace_beltrami_eigenvalue(1, 1.0, LambdaConvention::PaperHalf),
            1.0
        );
        assert_relative_eq!(
            laplace_beltrami_eigenvalue(1, 1.0, LambdaConvention::Standard),
            2.0
        );
        assert_relative_eq!(
            laplace_beltrami_eigenvalue(10, 2.0, LambdaConvention::Standard),
            27.5
        );
    }

    #[test]
    fn osrc_identity_at_lambda_zero() {
        // lambda = 0 formally: (1 - 0)^{1/2} = 1 on both branches.
        let c = cfg(std::f64::consts::PI);
        let keps2 = c.kappa_eps() * c.kappa_eps();
        let arg = 1.0 - 0.0 / keps2;
        assert_relative_eq!(arg.sqrt().re, 1.0);
    }

    #[test]
    fn undamped_resonance_is_singular() {
        let mut c = cfg(std::f64::consts::PI);
        c.epsilon = 0.0;
        // pick kappa^2 = lambda_m exactly: m(m+1) = kappa^2
        let m = 3usize;
        c.kappa = ((m * (m + 1)) as f64).sqrt();
        match osrc_eigenvalues(m, &c) {
            Err(Error::SingularMode { mode, .. }) => assert_eq!(mode, m),
            other => panic!("expected singular mode, got {other:?}"),
        }
    }

    #[test]
    fn mte_left_equals_etm_left() {
        let c = cfg(std::f64::consts::PI).with_m_max(30);
        let a = formulation_spectrum(Formulation::MteLeft, &c).unwrap();
        let b = formulation_spectrum(Formulation::EtmLeft, &c).unwrap();
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(pa.m, pb.m);
            assert_relative_eq!(pa.value.re, pb.value.re, max_relative = 1e-14);
            assert_relative_eq!(pa.value.im, pb.value.im, max_relative = 1e-14);
        }
    }

    #[test]
    fn unknown_formulation_rejected() {
        assert!("nope".parse::<Formulation>().is_err());
    }

    #[test]
    fn report_row_count() {
        let c = cfg(std::f64::consts::PI);
        let csv = spectrum_report(&c, &[Formulation::Efie], ModeCapRule::Explicit(3)).unwrap();
        assert_eq!(csv.lines().count(), 1 + 6, "header plus two branches per mode");
        let empty = spectrum_report(&c, &[], ModeCapRule::Explicit(3)).unwrap();
        assert_eq!(empty.trim(), "formulation,m,branch,re,im,abs");
    }

    #[test]
    fn mode_cap_rule() {
        // kappa = pi, R = 1, ppw = 10 -> ceil(5 pi) = 16
        let m = ModeCapRule::PointsPerWavelength(10.0).m_max(std::f64::consts::PI, 1.0);
        assert_eq!(m, 16);
    }
}
