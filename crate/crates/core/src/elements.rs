//! Optical elements as 4×4 operators on path ⊗ polarization.
//!
//! Jones matrices act on the polarization factor `{V, H}`; path matrices act
//! on `{a, b}`. Elements that sit in a single arm are lifted with
//! [`lift_on_path`].

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{self, CMat, LinalgError, C};
use crate::scalar::Real;
use crate::states::{BeamState, Path, StateError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElementError {
    #[error("cannot compose an empty pipeline")]
    EmptyPipeline,
    #[error("expected a {expected} generator, got {got}")]
    GeneratorShape {
        expected: &'static str,
        got: linalg::Shape,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How a 2×2 generator is embedded into the 4-dimensional space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    /// `G ⊗ I_pol`
    PathSpace,
    /// `I_path ⊗ G`
    PolSpace,
    /// `|p)(p| ⊗ G + |p̄)(p̄| ⊗ I`
    OnPath(Path),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T> {
    pub matrix: CMat<T>,
    pub lift: Lift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpticalOperator<T> {
    matrix: CMat<T>,
    label: String,
    unitary: bool,
    generator: Option<Generator<T>>,
}

impl<T: Real> OpticalOperator<T> {
    /// Wraps a 4×4 matrix; the unitary flag is computed at [`Real::structural_tol`].
    pub fn new(matrix: CMat<T>, label: impl Into<String>) -> Result<Self, ElementError> {
        if matrix.rows() != 4 || matrix.cols() != 4 {
            return Err(ElementError::GeneratorShape {
                expected: "4x4",
                got: matrix.shape(),
            });
        }
        let unitary = linalg::is_unitary(&matrix, T::structural_tol())?;
        Ok(Self {
            matrix,
            label: label.into(),
            unitary,
            generator: None,
        })
    }

    /// Embeds a 2×2 generator according to `lift`.
    pub fn lifted(
        jones: CMat<T>,
        lift: Lift,
        label: impl Into<String>,
    ) -> Result<Self, ElementError> {
        if jones.rows() != 2 || jones.cols() != 2 {
            return Err(ElementError::GeneratorShape {
                expected: "2x2",
                got: jones.shape(),
            });
        }
        let i2 = CMat::identity(2);
        let matrix = match lift {
            Lift::PathSpace => linalg::kron(&jones, &i2),
            Lift::PolSpace => linalg::kron(&i2, &jones),
            Lift::OnPath(p) => {
                let proj = |q: Path| CMat::outer(&q.ket(), &q.ket());
                linalg::kron(&proj(p), &jones).add(&linalg::kron(&proj(p.other()), &i2))?
            }
        };
        let mut op = Self::new(matrix, label)?;
        op.generator = Some(Generator {
            matrix: jones,
            lift,
        });
        Ok(op)
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn generator(&self) -> Option<&Generator<T>> {
        self.generator.as_ref()
    }

    pub fn apply(&self, state: &BeamState<T>) -> Result<BeamState<T>, StateError> {
        state.apply(&self.matrix)
    }
}

fn c<T: Real>(re: T, im: T) -> C<T> {
    C::new(re, im)
}

/// 50/50 non-polarizing beam splitter, `(1/√2)[[1, i], [i, 1]] ⊗ I`
/// (phase `i` on reflection).
pub fn npbs<T: Real>() -> OpticalOperator<T> {
    let h = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let bs = CMat::mat2([[c(h, z), c(z, h)], [c(z, h), c(h, z)]]);
    OpticalOperator::lifted(bs, Lift::PathSpace, "npbs").expect("2x2 generator")
}

/// Lifts a Jones matrix into one arm, leaving the other arm untouched.
pub fn lift_on_path<T: Real>(
    jones: &CMat<T>,
    path: Path,
) -> Result<OpticalOperator<T>, ElementError> {
    let label = match path {
        Path::A => "lift[a]",
        Path::B => "lift[b]",
    };
    OpticalOperator::lifted(jones.clone(), Lift::OnPath(path), label)
}

/// Quarter-wave plate with fast axis vertical.
///
/// The component along the fast axis picks up `−i`. In the `{V, H}` ordering
/// used here that is `diag(−i, 1)`; written in the conventional `(E_x, E_y)`
/// Jones ordering it reads `diag(1, −i)`.
pub fn qwp_fast_vertical<T: Real>() -> CMat<T> {
    CMat::diag(&[c(T::zero(), -T::one()), c(T::one(), T::zero())])
}

/// Quarter-wave plate with fast axis horizontal: `diag(1, −i)` on `{V, H}`.
pub fn qwp_fast_horizontal<T: Real>() -> CMat<T> {
    CMat::diag(&[c(T::one(), T::zero()), c(T::zero(), -T::one())])
}

/// Polarization flipper exchanging `V` and `H`.
pub fn pol_flipper<T: Real>() -> CMat<T> {
    let (o, l) = (c(T::zero(), T::zero()), c(T::one(), T::zero()));
    CMat::mat2([[o, l], [l, o]])
}

/// Phase shifter in arm `b`: `diag(1, e^{iφ})` on the path basis.
pub fn phase_shifter<T: Real>(phi: T) -> CMat<T> {
    phase_shifter_on(Path::B, phi)
}

/// Phase `e^{iφ}` applied to the given arm only.
pub fn phase_shifter_on<T: Real>(path: Path, phi: T) -> CMat<T> {
    let one = c(T::one(), T::zero());
    let ph = Complex::from_polar(T::one(), phi);
    match path {
        Path::A => CMat::diag(&[ph, one]),
        Path::B => CMat::diag(&[one, ph]),
    }
}

/// Active polarization rotation, `[[cos θ, −sin θ], [sin θ, cos θ]]` on
/// `{V, H}`; positive θ turns `V` toward `H`.
pub fn pol_rotator<T: Real>(theta: T) -> CMat<T> {
    let (s, co) = theta.sin_cos();
    let z = T::zero();
    CMat::mat2([[c(co, z), c(-s, z)], [c(s, z), c(co, z)]])
}

/// Composes a pipeline; the first listed element acts first.
pub fn compose<T: Real>(pipeline: &[OpticalOperator<T>]) -> Result<OpticalOperator<T>, ElementError> {
    let (first, rest) = pipeline.split_first().ok_or(ElementError::EmptyPipeline)?;
    if rest.is_empty() {
        return Ok(first.clone());
    }
    let mut m = first.matrix.clone();
    for op in rest {
        m = linalg::matmul(&op.matrix, &m)?;
    }
    let label = pipeline
        .iter()
        .map(|op| op.label.as_str())
        .collect::<Vec<_>>()
        .join(" -> ");
    OpticalOperator::new(m, label)
}

/// Preparation stage of the interferometer: splitter, then a quarter-wave
/// plate and a polarization flipper in arm `b`. Maps `|a,V)` to `Φ⁺`.
pub fn bell_preparation<T: Real>() -> Vec<OpticalOperator<T>> {
    vec![
        npbs(),
        lift_on_path(&qwp_fast_vertical(), Path::B).expect("2x2"),
        lift_on_path(&pol_flipper(), Path::B).expect("2x2"),
    ]
}
