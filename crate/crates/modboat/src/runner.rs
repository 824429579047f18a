//! Parallel execution of sweep jobs. Rows come back in grid order.

use modboat_core::{BoatParams, ExperimentError, InputTuple, SweepJob, SweepKind, SweepTable};
use rayon::prelude::*;

pub fn run_sweep(
    kind: SweepKind,
    base: InputTuple,
    params: &BoatParams,
    jobs: &[SweepJob],
) -> Result<SweepTable, ExperimentError> {
    let truncation = jobs
        .first()
        .map(|j| j.settings.truncation)
        .ok_or(ExperimentError::EmptyGrid)?;
    let rows = jobs
        .par_iter()
        .map(SweepJob::run)
        .collect::<Result<Vec<_>, _>>()?;
    SweepTable::from_rows(kind, base, params, truncation, rows)
}
