//! Fan-out over grid points with fan-in in grid order.

use super::report::Record;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Applies `op` to every point. Records come back in `points` order however
/// the work was scheduled; an `Err` becomes a failed record built from
/// `describe` (label and inputs) with `n_metrics` NaN metrics.
pub fn sweep<P, D, F, E>(points: &[P], exec: Execution, n_metrics: usize, describe: D, op: F) -> Vec<Record>
where
    P: Sync,
    D: Fn(&P) -> (String, Vec<f64>) + Sync,
    F: Fn(&P) -> Result<Record, E> + Sync,
    E: std::fmt::Display,
{
    let one = |p: &P| match op(p) {
        Ok(r) => r,
        Err(e) => {
            let (label, inputs) = describe(p);
            Record::failed(label, inputs, n_metrics, e)
        }
    };
    match exec {
        Execution::Serial => points.iter().map(one).collect(),
        Execution::Parallel => points.par_iter().map(one).collect(),
    }
}

/// Order-preserving map used where a task needs raw values rather than records.
pub fn par_map<P, T, F>(points: &[P], exec: Execution, f: F) -> Vec<T>
where
    P: Sync,
    T: Send,
    F: Fn(&P) -> T + Sync,
{
    match exec {
        Execution::Serial => points.iter().map(f).collect(),
        Execution::Parallel => points.par_iter().map(&f).collect(),
    }
}
