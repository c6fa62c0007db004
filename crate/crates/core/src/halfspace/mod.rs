//! Explicit resolvent solution formulas in R^N and R^N_+.
//!
//! Half-space solutions are stored as mode decompositions in the normal
//! variable x_N, so every residual is checked with exact ∂_N.

mod model;
mod profile;
mod volevich;
mod weak;
mod wholespace;

pub use model::{
    solve_lopatinski, solve_neumann_model, solve_pressure_auxiliary, solve_surface_tension_model,
    LopatinskiSolution, PressureAuxiliary,
};
pub use profile::{FourierProfile, ModelResiduals, ProfileJson};
pub use volevich::{apply_volevich_operator, VolevichKernel, VolevichReport};
pub use weak::{solve_weak_dirichlet_halfspace, solve_weak_laplace_wholespace, WeakDirichletSolution, WeakLaplace};
pub use wholespace::{solve_wholespace, WholeSpaceSolution};

use crate::symbols::SymbolError;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("singular Lopatinski system: |(B - A) D| = {0:e}")]
    SingularSystem(f64),
    #[error("E_kappa near zero: |E_kappa| = {0:e}")]
    EKappaNearZero(f64),
    #[error("evaluation at xi = 0")]
    ZeroFrequency,
    #[error("data does not vanish on x_N = 0 (max tangential trace {0:e})")]
    SupportTouchesBoundary(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("empty grid")]
    EmptyGrid,
}

/// |Σ terms| / Σ|terms|, with 0/0 read as 0.
pub(crate) fn relative(terms: &[C64]) -> f64 {
    let num = terms.iter().sum::<C64>().norm();
    if num == 0.0 {
        return 0.0;
    }
    num / terms.iter().map(|t| t.norm()).sum::<f64>()
}
