//! Beam states on the path ⊗ polarization space.
//!
//! A [`BeamState`] keeps a unit-norm amplitude vector and carries the beam
//! intensity separately, so correlation ratios are computed on normalized
//! amplitudes while reported intensities scale with the source.

use std::f64::consts::TAU;

use num_complex::Complex;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::linalg::{self, CMat, CVec, LinalgError, C};
use crate::scalar::Real;

/// Label string for the basis ordering used in serialized states.
pub const BASIS_LABEL: &str = "aV,aH,bV,bH";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("intensity must be finite and non-negative, got {0}")]
    BadIntensity(f64),
    #[error("amplitude vector must have dimension 4, got {0}")]
    BadDimension(usize),
    #[error("amplitude vector is not unit norm (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("dark beam: amplitude vector has zero norm")]
    Dark,
    #[error("non-finite angle parameter")]
    NonFiniteAngle,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Spatial arm of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    A,
    B,
}

impl Path {
    pub fn index(self) -> usize {
        match self {
            Path::A => 0,
            Path::B => 1,
        }
    }

    pub fn other(self) -> Path {
        match self {
            Path::A => Path::B,
            Path::B => Path::A,
        }
    }

    pub fn ket<T: Real>(self) -> CVec<T> {
        CVec::basis(2, self.index())
    }
}

/// Linear polarization basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pol {
    V,
    H,
}

impl Pol {
    pub fn index(self) -> usize {
        match self {
            Pol::V => 0,
            Pol::H => 1,
        }
    }

    pub fn ket<T: Real>(self) -> CVec<T> {
        CVec::basis(2, self.index())
    }
}

/// `|path) ⊗ |pol)` as a 4-vector.
pub fn ket<T: Real>(path: Path, pol: Pol) -> CVec<T> {
    CVec::basis(4, 2 * path.index() + pol.index())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamState<T> {
    amplitudes: CVec<T>,
    intensity: T,
}

fn check_intensity<T: Real>(intensity: T) -> Result<(), StateError> {
    if intensity.is_finite() && intensity >= T::zero() {
        Ok(())
    } else {
        Err(StateError::BadIntensity(intensity.to_f64().unwrap_or(f64::NAN)))
    }
}

impl<T: Real> BeamState<T> {
    /// Wraps an already normalized amplitude vector.
    pub fn new(amplitudes: CVec<T>, intensity: T) -> Result<Self, StateError> {
        check_intensity(intensity)?;
        if amplitudes.dim() != 4 {
            return Err(StateError::BadDimension(amplitudes.dim()));
        }
        let n2 = amplitudes.norm_sqr();
        if (n2 - T::one()).abs() > T::structural_tol() {
            return Err(StateError::NotNormalized(n2.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            amplitudes,
            intensity,
        })
    }

    /// Normalizes `amplitudes`, folding its squared norm into the intensity.
    pub fn from_unnormalized(amplitudes: CVec<T>) -> Result<Self, StateError> {
        if amplitudes.dim() != 4 {
            return Err(StateError::BadDimension(amplitudes.dim()));
        }
        let n2 = amplitudes.norm_sqr();
        if n2 <= T::zero() {
            return Err(StateError::Dark);
        }
        let amplitudes = amplitudes.scale(C::new(T::one() / n2.sqrt(), T::zero()));
        Ok(Self {
            amplitudes,
            intensity: n2,
        })
    }

    /// Basis input beam `|path) ⊗ |pol)` of the given intensity.
    pub fn basis(path: Path, pol: Pol, intensity: T) -> Result<Self, StateError> {
        check_intensity(intensity)?;
        Ok(Self {
            amplitudes: ket(path, pol),
            intensity,
        })
    }

    pub fn amplitudes(&self) -> &CVec<T> {
        &self.amplitudes
    }

    pub fn intensity(&self) -> T {
        self.intensity
    }

    pub fn with_intensity(&self, intensity: T) -> Result<Self, StateError> {
        check_intensity(intensity)?;
        Ok(Self {
            amplitudes: self.amplitudes.clone(),
            intensity,
        })
    }

    /// Multiplies the amplitudes by a global phase `e^{iχ}`.
    pub fn with_global_phase(&self, chi: T) -> Self {
        Self {
            amplitudes: self.amplitudes.scale(Complex::from_polar(T::one(), chi)),
            intensity: self.intensity,
        }
    }

    /// Applies a 4×4 operator. The output is renormalized and the intensity
    /// scaled by the transmitted fraction, which is 1 for unitary elements.
    pub fn apply(&self, m: &CMat<T>) -> Result<Self, StateError> {
        let out = linalg::matvec(m, &self.amplitudes)?;
        let frac = out.norm_sqr();
        if frac <= T::zero() {
            return Err(StateError::Dark);
        }
        Ok(Self {
            amplitudes: out.scale(C::new(T::one() / frac.sqrt(), T::zero())),
            intensity: self.intensity * frac,
        })
    }

    /// 2×2 amplitude matrix `M[path][pol]`.
    pub fn amplitude_matrix(&self) -> CMat<T> {
        CMat::from_raw(2, 2, self.amplitudes.as_slice().to_vec())
    }
}

impl<T: Real + Serialize> Serialize for BeamState<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let amps: Vec<[T; 2]> = self
            .amplitudes
            .as_slice()
            .iter()
            .map(|z| [z.re, z.im])
            .collect();
        let mut s = serializer.serialize_struct("BeamState", 3)?;
        s.serialize_field("intensity", &self.intensity)?;
        s.serialize_field("amplitudes", &amps)?;
        s.serialize_field("basis", BASIS_LABEL)?;
        s.end()
    }
}

/// Angles of a general product state
/// `(cos α|V) + e^{iβ} sin α|H)) ⊗ (cos γ|a) + e^{iδ} sin γ|b))`,
/// reduced to `[0, 2π)` on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductStateParams<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle<T: Real>(x: T) -> T {
    let tau = T::lit(TAU);
    let r = x % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // r + tau can round up to tau for tiny negative inputs
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

impl<T: Real> ProductStateParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T) -> Result<Self, StateError> {
        if ![alpha, beta, gamma, delta].iter().all(|x| x.is_finite()) {
            return Err(StateError::NonFiniteAngle);
        }
        Ok(Self {
            alpha: reduce_angle(alpha),
            beta: reduce_angle(beta),
            gamma: reduce_angle(gamma),
            delta: reduce_angle(delta),
        })
    }

    /// Polarization factor `cos α|V) + e^{iβ} sin α|H)`.
    pub fn pol_factor(&self) -> CVec<T> {
        CVec::from_raw(vec![
            C::new(self.alpha.cos(), T::zero()),
            Complex::from_polar(self.alpha.sin(), self.beta),
        ])
    }

    /// Path factor `cos γ|a) + e^{iδ} sin γ|b)`.
    pub fn path_factor(&self) -> CVec<T> {
        CVec::from_raw(vec![
            C::new(self.gamma.cos(), T::zero()),
            Complex::from_polar(self.gamma.sin(), self.delta),
        ])
    }
}

pub fn product_state<T: Real>(
    p: &ProductStateParams<T>,
    intensity: T,
) -> Result<BeamState<T>, StateError> {
    check_intensity(intensity)?;
    Ok(BeamState {
        amplitudes: linalg::tensor(&p.path_factor(), &p.pol_factor()),
        intensity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        }
    }
}

impl std::str::FromStr for BellKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BellKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown Bell state {s:?} (expected phi+, phi-, psi+ or psi-)"))
    }
}

/// Maximally nonseparable states.
///
/// `Φ± = (|a,V) ± |b,H))/√2` and `Ψ± = (|a,H) ± |b,V))/√2`.
pub fn bell_state<T: Real>(kind: BellKind, intensity: T) -> Result<BeamState<T>, StateError> {
    check_intensity(intensity)?;
    let h = T::FRAC_1_SQRT_2();
    let (first, second, sign) = match kind {
        BellKind::PhiPlus => ((Path::A, Pol::V), (Path::B, Pol::H), T::one()),
        BellKind::PhiMinus => ((Path::A, Pol::V), (Path::B, Pol::H), -T::one()),
        BellKind::PsiPlus => ((Path::A, Pol::H), (Path::B, Pol::V), T::one()),
        BellKind::PsiMinus => ((Path::A, Pol::H), (Path::B, Pol::V), -T::one()),
    };
    let amplitudes = ket::<T>(first.0, first.1)
        .scale(C::new(h, T::zero()))
        .add(&ket(second.0, second.1).scale(C::new(h * sign, T::zero())))?;
    Ok(BeamState {
        amplitudes,
        intensity,
    })
}

/// Modulus of the determinant of the 2×2 path-by-polarization amplitude
/// matrix. Zero exactly for product states.
pub fn entanglement_det<T: Real>(s: &BeamState<T>) -> T {
    let m = s.amplitude_matrix();
    (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).norm()
}

/// Rank-1 test on the reshaped amplitude matrix.
pub fn schmidt_separable<T: Real>(s: &BeamState<T>, tol: T) -> bool {
    entanglement_det(s) <= tol
}
