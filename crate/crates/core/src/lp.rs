//! Thin wrapper over the interior-point conic solver, specialized to linear programs.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};

use crate::error::{Error, Result};

/// Tolerances tried in turn; degenerate problems can stall at the tightest.
const TOLERANCES: [f64; 3] = [1e-11, 1e-9, 1e-7];
const MAX_ITER: u32 = 400;

/// How much of an unfinished solve the caller can use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Acceptance {
    /// Only converged (or nearly converged) solutions.
    Converged,
    /// Also the last iterate of a stalled solve; for callers that certify the point themselves.
    LastIterate,
}

/// Minimizes `q·x` subject to `Ax + s = b`, `s` in the given cones.
pub(crate) fn minimize(
    q: &[f64],
    a: &CscMatrix<f64>,
    b: &[f64],
    cones: &[SupportedConeT<f64>],
    acceptance: Acceptance,
    what: &str,
) -> Result<Vec<f64>> {
    let n = q.len();
    let p = CscMatrix::<f64>::zeros((n, n));
    let mut fallback: Option<(f64, Vec<f64>)> = None;
    let mut last_status = SolverStatus::Unsolved;
    for tolerance in TOLERANCES {
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(MAX_ITER)
            .tol_gap_abs(tolerance)
            .tol_gap_rel(tolerance)
            .tol_feas(tolerance)
            .build()
            .map_err(|e| Error::Internal(format!("{what} LP settings: {e}")))?;
        let mut solver = DefaultSolver::new(&p, q, a, b, cones, settings);
        solver.solve();
        let solution = &solver.solution;
        last_status = solution.status;
        match solution.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => return Ok(solution.x.clone()),
            SolverStatus::InsufficientProgress | SolverStatus::MaxIterations | SolverStatus::NumericalError
                if solution.x.iter().all(|x| x.is_finite()) =>
            {
                let objective: f64 = q.iter().zip(&solution.x).map(|(c, x)| c * x).sum();
                if fallback.as_ref().is_none_or(|(best, _)| objective < *best) {
                    fallback = Some((objective, solution.x.clone()));
                }
            }
            _ => break,
        }
    }
    match fallback {
        Some((_, x)) if acceptance == Acceptance::LastIterate => Ok(x),
        _ => Err(Error::Internal(format!("{what} LP failed: {last_status:?}"))),
    }
}

/// Column-major sparse matrix from dense columns, dropping exact zeros.
pub(crate) fn csc_from_columns(rows: usize, columns: &[Vec<f64>]) -> CscMatrix<f64> {
    let mut colptr = Vec::with_capacity(columns.len() + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    colptr.push(0);
    for col in columns {
        for (i, v) in col.iter().enumerate() {
            if *v != 0.0 {
                rowval.push(i);
                nzval.push(*v);
            }
        }
        colptr.push(rowval.len());
    }
    CscMatrix::new(rows, columns.len(), colptr, rowval, nzval)
}
