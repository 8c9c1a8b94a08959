//! Six-operator contextuality check on `Φ⁻`.
//!
//! Single-factor generators follow the action tables
//! `Jx^p|a) = |b)`, `Jy^p|a) = i|b)`, `Jx^pol|V) = |H)`, `Jy^pol|V) = −i|H)`
//! (and their partners on `|b)`, `|H)`), lifted with the identity on the other
//! factor. The two composites are matrix products of lifted singles.
//!
//! Five relations fix eigenvalues on `Φ⁻`. Every operator label occurs twice
//! across their left-hand sides, so any assignment of predetermined ±1 values
//! multiplies to `+1`, while the eigenvalues multiply to `−1`.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, CMat, LinalgError};
use crate::scalar::Real;
use crate::states::BeamState;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KsError {
    #[error("relation {label} fails: residual {residual:e} exceeds tolerance")]
    Relation { label: String, residual: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KsLabel {
    #[serde(rename = "Jx_pol")]
    JxPol,
    #[serde(rename = "Jx_path")]
    JxPath,
    #[serde(rename = "Jy_pol")]
    JyPol,
    #[serde(rename = "Jy_path")]
    JyPath,
    #[serde(rename = "JxPol_JyPath")]
    JxPolJyPath,
    #[serde(rename = "JyPol_JxPath")]
    JyPolJxPath,
}

impl KsLabel {
    pub const ALL: [KsLabel; 6] = [
        KsLabel::JxPol,
        KsLabel::JxPath,
        KsLabel::JyPol,
        KsLabel::JyPath,
        KsLabel::JxPolJyPath,
        KsLabel::JyPolJxPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KsLabel::JxPol => "Jx_pol",
            KsLabel::JxPath => "Jx_path",
            KsLabel::JyPol => "Jy_pol",
            KsLabel::JyPath => "Jy_path",
            KsLabel::JxPolJyPath => "JxPol_JyPath",
            KsLabel::JyPolJxPath => "JyPol_JxPath",
        }
    }

    fn index(self) -> usize {
        KsLabel::ALL.iter().position(|&l| l == self).expect("listed")
    }
}

impl std::str::FromStr for KsLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KsLabel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown operator label {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsOperator<T> {
    pub label: KsLabel,
    pub matrix: CMat<T>,
}

/// The six operators, indexed in [`KsLabel::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct KsOperators<T> {
    ops: Vec<KsOperator<T>>,
}

fn z<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> KsOperators<T> {
    pub fn get(&self, label: KsLabel) -> &KsOperator<T> {
        &self.ops[label.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &KsOperator<T>> {
        self.ops.iter()
    }

    /// Copy with the sign of one operator flipped. Used to exercise the
    /// failure path of [`eigen_verify`].
    pub fn tampered(&self, label: KsLabel) -> Self {
        let mut out = self.clone();
        let op = &mut out.ops[label.index()];
        op.matrix = op.matrix.scale(z(-T::one(), T::zero()));
        out
    }
}

pub fn ks_operators<T: Real>() -> KsOperators<T> {
    let (o, l, i) = (
        z(T::zero(), T::zero()),
        z(T::one(), T::zero()),
        z(T::zero(), T::one()),
    );
    // columns are images of the basis kets
    let jx_path = CMat::mat2([[o, l], [l, o]]);
    let jy_path = CMat::mat2([[o, -i], [i, o]]);
    let jx_pol = CMat::mat2([[o, l], [l, o]]);
    let jy_pol = CMat::mat2([[o, i], [-i, o]]);

    let i2 = CMat::identity(2);
    let jx_pol = linalg::kron(&i2, &jx_pol);
    let jy_pol = linalg::kron(&i2, &jy_pol);
    let jx_path = linalg::kron(&jx_path, &i2);
    let jy_path = linalg::kron(&jy_path, &i2);
    let c1 = linalg::matmul(&jx_pol, &jy_path).expect("4x4");
    let c2 = linalg::matmul(&jy_pol, &jx_path).expect("4x4");

    let ops = [jx_pol, jx_path, jy_pol, jy_path, c1, c2]
        .into_iter()
        .zip(KsLabel::ALL)
        .map(|(matrix, label)| KsOperator { label, matrix })
        .collect();
    KsOperators { ops }
}

/// Pairwise commutation table, symmetric, in [`KsLabel::ALL`] order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationTable {
    pub commutes: [[bool; 6]; 6],
}

impl CommutationTable {
    pub fn commute(&self, a: KsLabel, b: KsLabel) -> bool {
        self.commutes[a.index()][b.index()]
    }

    /// Unordered non-commuting pairs, in table order.
    pub fn non_commuting_pairs(&self) -> Vec<(KsLabel, KsLabel)> {
        let mut out = Vec::new();
        for i in 0..6 {
            for j in i + 1..6 {
                if !self.commutes[i][j] {
                    out.push((KsLabel::ALL[i], KsLabel::ALL[j]));
                }
            }
        }
        out
    }
}

/// `[A, B] = 0` within `tol` (max-abs entry) for every pair.
pub fn commutation_audit<T: Real>(ops: &KsOperators<T>, tol: T) -> Result<CommutationTable, KsError> {
    let mut commutes = [[true; 6]; 6];
    for i in 0..6 {
        for j in i + 1..6 {
            let c = linalg::commutator(&ops.ops[i].matrix, &ops.ops[j].matrix)?;
            let ok = c.max_abs() <= tol;
            commutes[i][j] = ok;
            commutes[j][i] = ok;
        }
    }
    Ok(CommutationTable { commutes })
}

/// One eigenvalue relation: the product of `factors` (leftmost applied last)
/// should return the state times `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relation {
    pub factors: &'static [KsLabel],
    pub expected: i8,
}

impl Relation {
    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(|l| l.name())
            .collect::<Vec<_>>()
            .join("·")
    }
}

pub const RELATIONS: [Relation; 5] = [
    Relation {
        factors: &[KsLabel::JxPol, KsLabel::JxPath],
        expected: -1,
    },
    Relation {
        factors: &[KsLabel::JyPol, KsLabel::JyPath],
        expected: -1,
    },
    Relation {
        factors: &[KsLabel::JxPolJyPath, KsLabel::JxPol, KsLabel::JyPath],
        expected: 1,
    },
    Relation {
        factors: &[KsLabel::JyPolJxPath, KsLabel::JyPol, KsLabel::JxPath],
        expected: 1,
    },
    Relation {
        factors: &[KsLabel::JxPolJyPath, KsLabel::JyPolJxPath],
        expected: -1,
    },
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCheck<T> {
    pub label: String,
    /// Rayleigh quotient `(Ψ|O|Ψ)/(Ψ|Ψ)` of the relation's operator product.
    pub eigenvalue: T,
    /// `‖O|Ψ) − λ|Ψ)‖ / ‖Ψ‖` against the expected eigenvalue `λ`.
    pub residual: T,
    #[serde(skip)]
    pub expected: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsReport<T> {
    #[serde(rename = "relations")]
    pub eigen_checks: Vec<EigenCheck<T>>,
    /// Product of all left-hand sides under any predetermined ±1 assignment
    /// (0 if it depends on the assignment).
    pub lhs_product: i8,
    /// Product of the measured eigenvalue signs.
    pub rhs_product: i8,
    pub contradiction: bool,
    #[serde(skip)]
    pub consistent_assignment_exists: bool,
}

impl<T: Real> KsReport<T> {
    pub fn max_residual(&self) -> T {
        self.eigen_checks
            .iter()
            .fold(T::zero(), |m, c| m.max(c.residual))
    }

    /// First relation whose residual exceeds `tol`.
    pub fn first_failure(&self, tol: T) -> Option<&EigenCheck<T>> {
        self.eigen_checks.iter().find(|c| !(c.residual <= tol))
    }
}

fn assignment_value(bits: u32, label: KsLabel) -> i8 {
    if bits >> label.index() & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Product of every relation's left-hand side under value assignment `bits`.
fn lhs_under(bits: u32) -> i8 {
    RELATIONS
        .iter()
        .flat_map(|r| r.factors.iter())
        .map(|&l| assignment_value(bits, l))
        .product()
}

/// Whether some ±1 assignment to the six labels satisfies all relations.
fn assignment_exists(rhs: &[i8]) -> bool {
    (0..64u32).any(|bits| {
        RELATIONS.iter().zip(rhs).all(|(r, &want)| {
            r.factors
                .iter()
                .map(|&l| assignment_value(bits, l))
                .product::<i8>()
                == want
        })
    })
}

/// Evaluates the five relations on `state` without failing on residuals.
pub fn eigen_report<T: Real>(ops: &KsOperators<T>, state: &BeamState<T>) -> Result<KsReport<T>, KsError> {
    let psi = state.amplitudes();
    let norm = psi.norm();
    let mut checks = Vec::with_capacity(RELATIONS.len());
    for rel in &RELATIONS {
        let mut v = psi.clone();
        for &l in rel.factors.iter().rev() {
            v = linalg::matvec(&ops.get(l).matrix, &v)?;
        }
        let rq = linalg::inner(psi, &v)?.re / (norm * norm);
        let lambda = T::lit(f64::from(rel.expected));
        let residual = v.sub(&psi.scale(Complex::new(lambda, T::zero())))?.norm() / norm;
        checks.push(EigenCheck {
            label: rel.label(),
            eigenvalue: rq,
            residual,
            expected: rel.expected,
        });
    }
    let lhs_values: Vec<i8> = (0..64u32).map(lhs_under).collect();
    let lhs_product = if lhs_values.iter().all(|&x| x == lhs_values[0]) {
        lhs_values[0]
    } else {
        0
    };
    let signs: Vec<i8> = checks
        .iter()
        .map(|c| if c.eigenvalue < T::zero() { -1 } else { 1 })
        .collect();
    let rhs_product = signs.iter().product();
    Ok(KsReport {
        eigen_checks: checks,
        lhs_product,
        rhs_product,
        contradiction: lhs_product != rhs_product,
        consistent_assignment_exists: assignment_exists(&signs),
    })
}

/// Checks the five relations on `state`; any residual above `tol` is an
/// error naming the relation.
pub fn eigen_verify<T: Real>(state: &BeamState<T>, tol: T) -> Result<KsReport<T>, KsError> {
    verify_with(&ks_operators(), state, tol)
}

pub fn verify_with<T: Real>(
    ops: &KsOperators<T>,
    state: &BeamState<T>,
    tol: T,
) -> Result<KsReport<T>, KsError> {
    let report = eigen_report(ops, state)?;
    if let Some(bad) = report.first_failure(tol) {
        return Err(KsError::Relation {
            label: bad.label.clone(),
            residual: bad.residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, ket, BellKind, Path, Pol};

    fn phi_minus() -> BeamState<f64> {
        bell_state(BellKind::PhiMinus, 1.0).unwrap()
    }

    fn apply(l: KsLabel, path: Path, pol: Pol) -> linalg::CVec<f64> {
        linalg::matvec(&ks_operators::<f64>().get(l).matrix, &ket(path, pol)).unwrap()
    }

    #[test]
    fn action_table() {
        assert_eq!(apply(KsLabel::JxPath, Path::A, Pol::V), ket(Path::B, Pol::V));
        assert_eq!(apply(KsLabel::JxPath, Path::B, Pol::H), ket(Path::A, Pol::H));
        let i = Complex::new(0.0, 1.0);
        assert_eq!(apply(KsLabel::JyPath, Path::A, Pol::V), ket(Path::B, Pol::V).scale(i));
        assert_eq!(apply(KsLabel::JyPath, Path::B, Pol::V), ket(Path::A, Pol::V).scale(-i));
        assert_eq!(apply(KsLabel::JxPol, Path::A, Pol::V), ket(Path::A, Pol::H));
        assert_eq!(apply(KsLabel::JyPol, Path::A, Pol::V), ket(Path::A, Pol::H).scale(-i));
        assert_eq!(apply(KsLabel::JyPol, Path::A, Pol::H), ket(Path::A, Pol::V).scale(i));
    }

    #[test]
    fn operators_are_hermitian_involutions_and_traceless() {
        let id = CMat::<f64>::identity(4);
        for op in ks_operators::<f64>().iter() {
            let m = &op.matrix;
            assert!(linalg::is_hermitian(m, 1e-12).unwrap(), "{:?}", op.label);
            assert!(linalg::matmul(m, m).unwrap().max_abs_diff(&id).unwrap() <= 1e-12);
            assert!(linalg::is_unitary(m, 1e-12).unwrap());
            assert!(m.trace().unwrap().norm() <= 1e-12);
        }
    }

    #[test]
    fn commutation_structure() {
        let t = commutation_audit(&ks_operators::<f64>(), 1e-12).unwrap();
        assert!(t.commute(KsLabel::JxPol, KsLabel::JyPath));
        assert!(t.commute(KsLabel::JxPol, KsLabel::JxPol));
        // The composites commute with each other: their product is −σz⊗σz.
        assert!(t.commute(KsLabel::JxPolJyPath, KsLabel::JyPolJxPath));
        // Same-factor x/y pairs anticommute, as do composites with the
        // singles they do not contain.
        let pairs = t.non_commuting_pairs();
        assert_eq!(
            pairs,
            vec![
                (KsLabel::JxPol, KsLabel::JyPol),
                (KsLabel::JxPol, KsLabel::JyPolJxPath),
                (KsLabel::JxPath, KsLabel::JyPath),
                (KsLabel::JxPath, KsLabel::JxPolJyPath),
                (KsLabel::JyPol, KsLabel::JxPolJyPath),
                (KsLabel::JyPath, KsLabel::JyPolJxPath),
            ]
        );
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(t.commutes[i][j], t.commutes[j][i]);
            }
        }
    }

    #[test]
    fn relations_hold_on_phi_minus() {
        let r = eigen_verify(&phi_minus(), 1e-12).unwrap();
        let eig: Vec<f64> = r.eigen_checks.iter().map(|c| c.eigenvalue).collect();
        let want = [-1.0, -1.0, 1.0, 1.0, -1.0];
        for (e, w) in eig.iter().zip(want) {
            assert!((e - w).abs() <= 1e-12);
        }
        assert!(r.max_residual() <= 1e-12);
        assert_eq!(r.lhs_product, 1);
        assert_eq!(r.rhs_product, -1);
        assert!(r.contradiction);
        assert!(!r.consistent_assignment_exists);
        assert_eq!(r.eigen_checks[0].label, "Jx_pol·Jx_path");
    }

    #[test]
    fn global_phase_does_not_matter() {
        let r = eigen_verify(&phi_minus().with_global_phase(1.234), 1e-12).unwrap();
        assert!(r.contradiction);
    }

    #[test]
    fn tampering_names_failing_relation() {
        let ops = ks_operators::<f64>().tampered(KsLabel::JxPath);
        let err = verify_with(&ops, &phi_minus(), 1e-12).unwrap_err();
        match err {
            KsError::Relation { label, residual } => {
                assert_eq!(label, "Jx_pol·Jx_path");
                assert!((residual - 2.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn phi_plus_is_not_an_eigenstate_of_all_relations() {
        let phi_plus = bell_state::<f64>(BellKind::PhiPlus, 1.0).unwrap();
        assert!(eigen_verify(&phi_plus, 1e-12).is_err());
    }

    #[test]
    fn json_schema() {
        let r = eigen_verify(&phi_minus(), 1e-12).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["relations"].as_array().unwrap().len(), 5);
        assert!(v["relations"][0]["label"].is_string());
        assert!(v["relations"][0]["eigenvalue"].is_number());
        assert!(v["relations"][0]["residual"].is_number());
        assert_eq!(v["lhs_product"], 1);
        assert_eq!(v["rhs_product"], -1);
        assert_eq!(v["contradiction"], true);
    }

    #[test]
    fn labels_parse() {
        for l in KsLabel::ALL {
            assert_eq!(l.name().parse::<KsLabel>().unwrap(), l);
        }
        assert!("Jz_pol".parse::<KsLabel>().is_err());
    }
}
