//! Verification kernels for free-boundary Stokes and Navier–Stokes problems.
//!
//! The crate evaluates the explicit objects that the analysis of these
//! problems is built from and checks every computable identity about them:
//!
//! - [`symbols`]: resolvent symbols A, B, B0, 𝓜, the Lopatinski cubic D, E_κ,
//!   bound constants over sector grids, and multiplier-class checks.
//! - [`halfspace`]: whole-space and half-space solution formulas (Neumann and
//!   surface-tension model problems), weak Laplace/Dirichlet solvers, the
//!   auxiliary pressure and the half-space integral operators.
//! - [`geometry`]: charts of hypersurfaces, fundamental forms, Christoffel
//!   symbols, Laplace–Beltrami, mean curvature, spherical harmonics and the
//!   ball/sphere machinery (rigid basis, compatibility, spectral gap).
//! - [`transforms`]: Hanzawa and partial-Lagrange maps, V0/J algebra,
//!   divergence identity, Reynolds transport and area derivative checks.
//! - [`nonlinear`]: the transformed nonlinear terms f, g, gvec, h', h_N, d.
//! - [`harness`]: seeded sweeps, reports and the `fbstokes` command surface.
//!
//! Runnable entry points live in `examples/`:
//!
//! ```text
//! cargo run --example symbol_bounds
//! cargo run --example halfspace_profile
//! cargo run --example wholespace_resolvent
//! cargo run --example sphere_curvature
//! cargo run --example sphere_spectra
//! cargo run --example hanzawa_transport
//! cargo run --example nonlinear_audit
//! cargo run --example weak_dirichlet
//! ```

pub mod cutoff;
pub mod geometry;
pub mod halfspace;
pub mod harness;
pub mod nonlinear;
pub mod quadrature;
pub mod rng;
pub mod symbols;
pub mod transforms;
