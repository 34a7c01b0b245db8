use std::collections::BTreeMap;

use serde::Serialize;

use super::ExpansionError;
use crate::kernel::TruthValue;
use crate::semantics::{Evaluator, GeneralStructure};
use crate::syntax::{Formula, FormulaSequence, Schedule, Term};

/// The forced-convergence transform with steps `s_m = schedule.bound(m)`.
pub fn force_convergence(seq: &FormulaSequence, steps: Schedule) -> FormulaSequence {
    force_convergence_with(seq, steps, |m| steps.bound(m))
}

/// `phi_0 = theta_0`, `phi_{m+1} = max(phi_m -. s_m, min(phi_m +. s_m, theta_{m+1}))`.
///
/// The output shares `phi_m` between its two occurrences, so it is a DAG of
/// linear size even though its printed form doubles at every step. The
/// returned sequence records `schedule` as its step schedule.
pub fn force_convergence_with(
    seq: &FormulaSequence,
    schedule: Schedule,
    step: impl Fn(usize) -> TruthValue,
) -> FormulaSequence {
    let mut out: Vec<Formula> = Vec::with_capacity(seq.len());
    for (m, theta) in seq.entries().iter().enumerate() {
        let next = match out.last() {
            None => theta.clone(),
            Some(prev) => {
                let s = Formula::constant(step(m - 1));
                Formula::max(
                    Formula::dotminus(prev.clone(), s.clone()),
                    Formula::min(Formula::dotplus(prev.clone(), s), theta.clone()),
                )
            }
        };
        out.push(next);
    }
    FormulaSequence::new(seq.frame().to_vec(), out, schedule).expect("frame unchanged")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub passed: bool,
    /// `(m, assignment labels, |phi_m - phi_{m+1}|, s_m)` of the first violation.
    pub violation: Option<(usize, Vec<String>, TruthValue, TruthValue)>,
}

/// Checks `|phi_m - phi_{m+1}| <= s_m` at every assignment of the frame.
pub fn check_steps(
    seq: &FormulaSequence,
    m: &GeneralStructure,
    step: impl Fn(usize) -> TruthValue,
) -> Result<StepReport, ExpansionError> {
    let mut ev = Evaluator::new(m);
    let tables = seq
        .entries()
        .iter()
        .map(|f| ev.table_over(f, seq.frame()))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, pair) in tables.windows(2).enumerate() {
        let s = step(i);
        for (idx, (a, b)) in pair[0].iter().zip(&pair[1]).enumerate() {
            let gap = a.absdiff(b);
            if gap > s {
                let labels = crate::semantics::decode_index(idx, m.size(), seq.frame().len())
                    .into_iter()
                    .map(|e| m.label(e).to_string())
                    .collect();
                return Ok(StepReport {
                    passed: false,
                    violation: Some((i, labels, gap, s)),
                });
            }
        }
    }
    Ok(StepReport {
        passed: true,
        violation: None,
    })
}

/// `e_k(x, y) = sup_z |d_k(x, z) - d_k(y, z)|` for each entry.
pub fn pseudometrize(seq: &FormulaSequence) -> Result<FormulaSequence, ExpansionError> {
    let frame = ["x".to_string(), "y".to_string()];
    let mut out = Vec::with_capacity(seq.len());
    for d in seq.entries() {
        if d.free_vars().iter().any(|v| !frame.contains(v)) {
            return Err(ExpansionError::BadFrame(d.free_vars().to_vec()));
        }
        let xz = d.substitute(&BTreeMap::from([("y".to_string(), Term::var("z"))]));
        let yz = d.substitute(&BTreeMap::from([
            ("x".to_string(), Term::var("y")),
            ("y".to_string(), Term::var("z")),
        ]));
        out.push(Formula::sup("z", Formula::absdiff(xz, yz)));
    }
    Ok(FormulaSequence::new(frame.to_vec(), out, seq.schedule()).expect("frame is x, y"))
}
