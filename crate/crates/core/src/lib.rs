//! Deterministic-chaos laboratory.
//!
//! Four classic discrete-time systems under one roof, built for exact
//! reproducibility:
//!
//! - [`maps`] — first-order difference equations (logistic, Ricker) with
//!   Lyapunov exponents, predictability horizons, bifurcation scans and
//!   invariant-density checks.
//! - [`forecasting`] — delay embedding and simplex projection from a
//!   library of past patterns, correlation-vs-horizon curves, a linear
//!   autoregressive baseline, and a chaos/noise/periodicity classifier.
//! - [`lattice`] — a host-parasitoid coupled-map lattice: Nicholson-Bailey
//!   local dynamics plus eight-neighbour dispersal, with regime
//!   classification (extinction, static heterogeneity, persistent
//!   oscillation).
//! - [`games`] — the spatial Prisoner's Dilemma with deterministic,
//!   probabilistic and asynchronous update rules, cooperator-frequency
//!   statistics and cluster-growth experiments.
//!
//! [`runio`] supplies the shared plumbing: a counter-based random source
//! (pure function of seed and key, so results never depend on thread
//! schedule), bit-exact PGM/PPM frame writers, and lossless CSV/JSON
//! serialization. Every simulation is a pure function of its
//! configuration; rerunning with the same seed yields bit-identical
//! output regardless of parallelism.

pub mod forecasting;
pub mod games;
pub mod lattice;
pub mod maps;
pub mod runio;
