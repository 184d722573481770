//! Numerical solver and verification harness for a relaxed degenerate
//! Cahn-Hilliard tumour-growth system with nutrient coupling and chemotaxis.
//!
//! The model couples a phase field phi (tumour volume fraction) with a
//! nutrient sigma through reaction terms, a single-well logarithmic
//! potential split into convex and concave parts, and the degenerate
//! mobility b(s) = s(1-s)^2. An elliptic relaxation of the chemical
//! potential (parameter delta) turns the fourth-order equation into a
//! second-order system:
//!
//! ```text
//! d/dt phi  = div( b(phi) grad(mu + Psi_+'(phi)) ) + R1
//! -delta Lap mu + mu = -gamma Lap phi + Psi_-'(phi - (delta/gamma) mu) - chi sigma
//! d/dt sigma = Lap( sigma - chi (phi - (delta/gamma) mu) ) - R1
//! ```
//!
//! with homogeneous Neumann conditions. The crate provides:
//!
//! - closed-form model functions and their eps-regularisations ([`model`]),
//! - conservative operators and the cosine eigenbasis on a box ([`grid`]),
//! - the stationary solves including the relaxed chemical potential
//!   ([`elliptic`]),
//! - a convex-splitting semi-implicit stepper ([`stepper`]),
//! - energy / entropy / mass / flux diagnostics ([`diagnostics`]),
//! - continuation studies in the Galerkin dimension, the regularisation
//!   eps, and the relaxation delta ([`studies`], [`galerkin`]),
//! - config parsing, file outputs and the `rch` command line ([`config`],
//!   [`output`], [`cli`]).
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod elliptic;
pub mod error;
pub mod galerkin;
pub mod grid;
pub mod model;
pub mod ode;
pub mod output;
pub mod stepper;
pub mod studies;

pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use model::{ConcaveExtension, ModelParams, ParamSet};
pub use stepper::{run, RunConfig, State};
