//! Agora simulates a market of political signals and measures the
//! polarization of the interaction networks it produces.
//!
//! The crate is organized around six building blocks:
//!
//! - [`ideology`]: perceived-ideology estimation from opinion surveys
//!   (per-politician OLS, rescaled onto the 1-5 axis).
//! - [`spatial`]: the electorate, politician-to-voter distances, the
//!   within-coalition vote contest and front-runner selection.
//! - [`signaling`]: message emission, the voters' posterior update and the
//!   like decision trading popularity against authenticity.
//! - [`netsci`]: correlation networks from interaction matrices, modularity,
//!   Louvain and edge-betweenness community detection.
//! - [`econometrics`]: the shared OLS core, dyad and fixed-effects panel
//!   regressions, and the two-variable principal component.
//! - [`ingest`]: file-based panel assembly and summary statistics.
//!
//! The `agora` binary wires these together; see [`cli`].

pub mod calibration;
pub mod cli;
pub mod econometrics;
pub mod ideology;
pub mod ingest;
pub mod netsci;
pub mod signaling;
pub mod spatial;
pub mod stream;
