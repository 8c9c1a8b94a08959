use super::{BenchProgram, Statement};
use crate::elements::{
    compose, lift_on_path, npbs, phase_shifter_on, pol_flipper, pol_rotator, qwp_fast_horizontal,
    qwp_fast_vertical, ElementError, Lift, OpticalOperator,
};
use crate::scalar::Real;
use crate::states::{BeamState, Path, Pol, StateError};

/// Input beam plus the ordered operator pipeline of a bench program.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledBench<T> {
    pub input: BeamState<T>,
    pub pipeline: Vec<OpticalOperator<T>>,
    /// Labels of arms `a` and `b` as written in the source.
    pub path_labels: Vec<String>,
}

impl<T: Real> CompiledBench<T> {
    /// Single operator for the whole pipeline, `None` when it is empty.
    pub fn composed(&self) -> Result<Option<OpticalOperator<T>>, ElementError> {
        if self.pipeline.is_empty() {
            return Ok(None);
        }
        compose(&self.pipeline).map(Some)
    }

    /// Final state after the beam has traversed every element.
    pub fn evaluate(&self) -> Result<BeamState<T>, StateError> {
        match self.composed().map_err(|e| match e {
            ElementError::Linalg(l) => StateError::Linalg(l),
            other => unreachable!("non-empty 4x4 pipeline: {other}"),
        })? {
            Some(op) => op.apply(&self.input),
            None => Ok(self.input.clone()),
        }
    }
}

/// Lowers a parsed program. Path labels map to arms in order of appearance.
pub fn compile<T: Real>(p: &BenchProgram) -> CompiledBench<T> {
    let labels: Vec<String> = p.path_labels().into_iter().map(String::from).collect();
    let arm = |label: &str| {
        if labels[0] == label {
            Path::A
        } else {
            Path::B
        }
    };
    let input = BeamState::basis(Path::A, p.source.pol, p.source.intensity.value())
        .expect("parser rejects negative intensity");

    let pipeline = p
        .statements
        .iter()
        .map(|st| {
            let op = match st {
                Statement::Npbs { .. } => npbs(),
                Statement::Qwp { path, fast } => {
                    let j = match fast {
                        Pol::V => qwp_fast_vertical(),
                        Pol::H => qwp_fast_horizontal(),
                    };
                    lift_on_path(&j, arm(path))
                        .expect("2x2")
                }
                Statement::Flip { path } => lift_on_path(&pol_flipper(), arm(path)).expect("2x2"),
                Statement::PhaseShift { path, angle } => OpticalOperator::lifted(
                    phase_shifter_on(arm(path), angle.value()),
                    Lift::PathSpace,
                    "ps",
                )
                .expect("2x2"),
                Statement::Rotate { path, angle } => {
                    lift_on_path(&pol_rotator(angle.value()), arm(path)).expect("2x2")
                }
            };
            relabel(op, st)
        })
        .collect();

    CompiledBench {
        input,
        pipeline,
        path_labels: labels,
    }
}

fn relabel<T: Real>(op: OpticalOperator<T>, st: &Statement) -> OpticalOperator<T> {
    let label = match st {
        Statement::Npbs { first, second } => format!("npbs {first} {second}"),
        Statement::Qwp { path, fast } => format!("qwp {path} fast={fast:?}"),
        Statement::Flip { path } => format!("flip {path}"),
        Statement::PhaseShift { path, angle } => format!("ps {path} {angle}"),
        Statement::Rotate { path, angle } => format!("pr {path} {angle}"),
    };
    op.with_label(label)
}
