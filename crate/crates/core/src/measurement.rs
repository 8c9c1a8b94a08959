//! Polarization and path analyzers, correlations and the four-intensity
//! estimator.
//!
//! Branch projectors:
//! `σ_{θ,0/π} = ½(|V) ± e^{iθ}|H))((V| ± e^{−iθ}(H|) ⊗ I_path` and
//! `σ_{φ,0/π} = I_pol ⊗ ½(|a) ± e^{iφ}|b))((a| ± e^{−iφ}(b|)`; the observables
//! are `σ_θ = σ_{θ,0} − σ_{θ,π}` and `σ_φ = σ_{φ,0} − σ_{φ,π}`.
//!
//! For a unit-norm beam the four joint-branch intensities sum to the beam
//! intensity; for `Φ⁺` each diagonal branch carries `¼[1 + cos(θ+φ)]`.

use num_complex::Complex;
use thiserror::Error;

use crate::elements::{Lift, OpticalOperator};
use crate::export::fmt_real;
use crate::linalg::{self, CMat, CVec, LinalgError, C};
use crate::scalar::Real;
use crate::states::{BeamState, ProductStateParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasurementError {
    #[error("observable {label:?} is not hermitian (defect {defect:e})")]
    NonHermitian { label: String, defect: f64 },
    #[error("expectation has imaginary residue {0:e}")]
    ImaginaryResidue(f64),
    #[error("dark input: total detected intensity is zero")]
    DarkInput,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Analyzer phases: `theta` for polarization, `phi` for path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerAngles<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> AnalyzerAngles<T> {
    pub fn new(theta: T, phi: T) -> Self {
        Self { theta, phi }
    }
}

/// Which eigenbranch of an analyzer a projector selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Zero,
    Pi,
}

impl Branch {
    fn sign<T: Real>(self) -> T {
        match self {
            Branch::Zero => T::one(),
            Branch::Pi => -T::one(),
        }
    }
}

/// `½(|0) + s e^{iχ}|1))((0| + s e^{−iχ}(1|)` on a 2-dim factor.
fn rank_one<T: Real>(chi: T, branch: Branch) -> CMat<T> {
    let half = T::lit(0.5);
    let v = CVec::from_raw(vec![
        C::new(T::one(), T::zero()),
        Complex::from_polar(branch.sign::<T>(), chi),
    ]);
    CMat::outer(&v, &v).scale(C::new(half, T::zero()))
}

/// `e^{−iχ}|0)(1| + e^{iχ}|1)(0|` on a 2-dim factor.
fn phase_flip<T: Real>(chi: T) -> CMat<T> {
    let z = C::new(T::zero(), T::zero());
    CMat::mat2([
        [z, Complex::from_polar(T::one(), -chi)],
        [Complex::from_polar(T::one(), chi), z],
    ])
}

pub fn projector_pol<T: Real>(theta: T, branch: Branch) -> OpticalOperator<T> {
    OpticalOperator::lifted(rank_one(theta, branch), Lift::PolSpace, "proj_pol")
        .expect("2x2 generator")
}

pub fn projector_path<T: Real>(phi: T, branch: Branch) -> OpticalOperator<T> {
    OpticalOperator::lifted(rank_one(phi, branch), Lift::PathSpace, "proj_path")
        .expect("2x2 generator")
}

/// 2×2 polarization observable `e^{−iθ}|V)(H| + e^{iθ}|H)(V|`.
pub fn sigma_theta_2<T: Real>(theta: T) -> CMat<T> {
    phase_flip(theta)
}

/// 2×2 path observable `e^{−iφ}|a)(b| + e^{iφ}|b)(a|`.
pub fn sigma_phi_2<T: Real>(phi: T) -> CMat<T> {
    phase_flip(phi)
}

pub fn sigma_theta<T: Real>(theta: T) -> OpticalOperator<T> {
    OpticalOperator::lifted(sigma_theta_2(theta), Lift::PolSpace, "sigma_theta")
        .expect("2x2 generator")
}

pub fn sigma_phi<T: Real>(phi: T) -> OpticalOperator<T> {
    OpticalOperator::lifted(sigma_phi_2(phi), Lift::PathSpace, "sigma_phi")
        .expect("2x2 generator")
}

/// `(v|M|v)` for a hermitian `M` on any dimension; imaginary residue above
/// the structural tolerance is reported as an error.
pub fn vector_expectation<T: Real>(
    v: &CVec<T>,
    m: &CMat<T>,
    label: &str,
) -> Result<T, MeasurementError> {
    let tol = T::structural_tol();
    let defect = m.max_abs_diff(&linalg::adjoint(m))?;
    if defect > tol {
        return Err(MeasurementError::NonHermitian {
            label: label.to_string(),
            defect: defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let z = linalg::inner(v, &linalg::matvec(m, v)?)?;
    if z.im.abs() > tol {
        return Err(MeasurementError::ImaginaryResidue(
            z.im.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(z.re)
}

/// `(s|O|s)` on the normalized amplitudes.
pub fn expectation<T: Real>(
    s: &BeamState<T>,
    op: &OpticalOperator<T>,
) -> Result<T, MeasurementError> {
    vector_expectation(s.amplitudes(), op.matrix(), op.label())
}

/// Joint observable `σ_θ·σ_φ`, equal to `σ_φ ⊗ σ_θ` in path-major ordering.
pub fn joint_observable<T: Real>(a: AnalyzerAngles<T>) -> OpticalOperator<T> {
    let m = linalg::kron(&sigma_phi_2(a.phi), &sigma_theta_2(a.theta));
    OpticalOperator::new(m, "sigma_theta.sigma_phi").expect("4x4")
}

/// `E(θ, φ) = (Ψ|σ_θ·σ_φ|Ψ)`.
pub fn correlation_direct<T: Real>(
    s: &BeamState<T>,
    a: AnalyzerAngles<T>,
) -> Result<T, MeasurementError> {
    expectation(s, &joint_observable(a))
}

/// Detected intensities at the four analyzer settings
/// `(θ, φ)`, `(θ+π, φ+π)`, `(θ+π, φ)`, `(θ, φ+π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityQuad<T> {
    pub i_00: T,
    pub i_pp: T,
    pub i_p0: T,
    pub i_0p: T,
}

impl<T: Real> IntensityQuad<T> {
    pub const CSV_HEADER: [&'static str; 7] = ["theta", "phi", "i00", "ipp", "ip0", "i0p", "E"];

    pub fn total(&self) -> T {
        self.i_00 + self.i_pp + self.i_p0 + self.i_0p
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            i_00: self.i_00 * k,
            i_pp: self.i_pp * k,
            i_p0: self.i_p0 * k,
            i_0p: self.i_0p * k,
        }
    }

    /// CSV record `theta,phi,i00,ipp,ip0,i0p,E`.
    pub fn csv_record(&self, a: AnalyzerAngles<T>) -> Result<Vec<String>, MeasurementError> {
        let e = correlation_from_intensities(self)?;
        Ok([a.theta, a.phi, self.i_00, self.i_pp, self.i_p0, self.i_0p, e]
            .iter()
            .map(|&x| fmt_real(x))
            .collect())
    }
}

pub fn intensity_quad<T: Real>(
    s: &BeamState<T>,
    a: AnalyzerAngles<T>,
) -> Result<IntensityQuad<T>, MeasurementError> {
    let joint = |tb: Branch, pb: Branch| -> Result<T, MeasurementError> {
        let m = linalg::kron(&rank_one(a.phi, pb), &rank_one(a.theta, tb));
        Ok(vector_expectation(s.amplitudes(), &m, "joint projector")? * s.intensity())
    };
    // projector expectations are ≥ 0 up to rounding
    let clip = |x: T| x.max(T::zero());
    Ok(IntensityQuad {
        i_00: clip(joint(Branch::Zero, Branch::Zero)?),
        i_pp: clip(joint(Branch::Pi, Branch::Pi)?),
        i_p0: clip(joint(Branch::Pi, Branch::Zero)?),
        i_0p: clip(joint(Branch::Zero, Branch::Pi)?),
    })
}

/// `(I₀₀ + I_ππ − I_π0 − I_0π) / (I₀₀ + I_ππ + I_π0 + I_0π)`.
pub fn correlation_from_intensities<T: Real>(q: &IntensityQuad<T>) -> Result<T, MeasurementError> {
    let total = q.total();
    if !(total > T::zero()) {
        return Err(MeasurementError::DarkInput);
    }
    Ok((q.i_00 + q.i_pp - q.i_p0 - q.i_0p) / total)
}

/// Polarization factor expectation `(ψ_pol|σ_θ|ψ_pol)` evaluated on the 2-dim factor.
pub fn pol_expectation<T: Real>(p: &ProductStateParams<T>, theta: T) -> T {
    vector_expectation(&p.pol_factor(), &sigma_theta_2(theta), "sigma_theta")
        .expect("hermitian by construction")
}

/// Path factor expectation `(ψ_path|σ_φ|ψ_path)` evaluated on the 2-dim factor.
pub fn path_expectation<T: Real>(p: &ProductStateParams<T>, phi: T) -> T {
    vector_expectation(&p.path_factor(), &sigma_phi_2(phi), "sigma_phi")
        .expect("hermitian by construction")
}

/// Closed form of [`pol_expectation`]: `sin 2α · cos(β − θ)`.
pub fn pol_expectation_closed<T: Real>(p: &ProductStateParams<T>, theta: T) -> T {
    (p.alpha + p.alpha).sin() * (p.beta - theta).cos()
}

/// Closed form of [`path_expectation`]: `sin 2γ · cos(δ − φ)`.
pub fn path_expectation_closed<T: Real>(p: &ProductStateParams<T>, phi: T) -> T {
    (p.gamma + p.gamma).sin() * (p.delta - phi).cos()
}
