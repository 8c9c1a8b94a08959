use super::{BenchProgram, Statement};
use crate::states::Pol;

fn pol(p: Pol) -> &'static str {
    match p {
        Pol::V => "V",
        Pol::H => "H",
    }
}

/// Canonical text: one statement per line, single spaces, comments and
/// blank lines dropped, π multiples kept symbolic.
pub fn format(p: &BenchProgram) -> String {
    let mut out = format!(
        "source {} {} {}\n",
        p.source.path,
        pol(p.source.pol),
        p.source.intensity
    );
    for st in &p.statements {
        let line = match st {
            Statement::Npbs { first, second } => format!("npbs {first} {second}"),
            Statement::Qwp { path, fast } => format!("qwp {path} fast={}", pol(*fast)),
            Statement::Flip { path } => format!("flip {path}"),
            Statement::PhaseShift { path, angle } => format!("ps {path} {angle}"),
            Statement::Rotate { path, angle } => format!("pr {path} {angle}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
