//! Multi-stage Bayesian optimisation (MSBO) for cascade processes.
//!
//! A cascade process is a chain of stages where each stage's latent output
//! feeds the next stage's input and only a masked, possibly noisy projection
//! of that output is observable. This crate provides:
//!
//! * [`inventory`] — the cascade data model and the persistent sample
//!   registry that makes sampling resumable from any intermediate stage;
//! * [`gp`] — exact single-output Gaussian-process regression with an
//!   RBF-ARD kernel and marginal-likelihood fitting;
//! * [`cascade`] — the chained per-stage surrogate with Monte-Carlo
//!   propagation of epistemic uncertainty to the terminal objective;
//! * [`acquisition`] — analytic expected improvement, the recursive
//!   multi-stage EI, cost-weighted stage selection and the continuous /
//!   discrete acquisition optimisers;
//! * [`synthetic`] — a reproducible generator of multi-stage benchmark
//!   functions built from small MLPs trained on random seed data, with a
//!   computable ground-truth optimum;
//! * [`drivers`] — optimisation-loop implementations: MSBO with resumable
//!   sampling plus random-search, black-box BO and full-cascade
//!   network-aware (BOFN-style) baselines.

pub mod acquisition;
pub mod cascade;
pub mod drivers;
pub mod gp;
pub mod inventory;
pub mod mlp;
pub mod optim;
pub mod rng;
pub mod sobol;
pub mod synthetic;

pub use acquisition::{AcquisitionConfig, AcquisitionProposal};
pub use cascade::CascadeSurrogate;
pub use drivers::{CampaignConfig, CampaignTrace, DriverKind, Environment};
pub use gp::{GpHyperparams, GpModel};
pub use inventory::{CascadeSchema, Inventory, Origin, SampleRecord, StageSpec, SurrogateMode};
pub use synthetic::SyntheticCascade;
