//! C ABI over the agora core: build a model (politicians plus electorate),
//! run seeded simulations into caller-owned flat like matrices, and score
//! polarization of interaction matrices.
//!
//! Conventions: every fallible call returns an [`AgoraStatus`]; results come
//! back through out-pointers; the only heap object crossing the boundary is
//! the opaque [`AgoraModel`] handle, released with [`agora_model_free`]. The
//! header `include/agora.h` is generated from this file at build time.

use std::os::raw::c_char;
use std::slice;

use agora::calibration::{default_electorate, default_politicians};
use agora::netsci::{correlation_network, modularity, CommunityMethod};
use agora::signaling::{posterior, simulate, GammaMode, SimulationConfig};
use agora::spatial::{Electorate, ElectorateKind, Politician, VoterGroup};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgoraStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation (sizes, signs, ranges).
    InvalidArgument = 2,
    /// The derived interaction network has no edges.
    EmptyGraph = 3,
    /// Numerical estimation failed downstream of valid inputs.
    Estimation = 4,
}

/// How authenticity is assigned in [`agora_simulate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgoraGammaMode {
    /// All politicians share the `gamma` argument.
    Homogeneous = 0,
    /// Per-politician draws from a normal(0.1, 0.1) truncated at zero;
    /// the `gamma` argument is ignored.
    Heterogeneous = 1,
}

/// Community detection method for [`agora_matrix_modularity`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgoraMethod {
    Louvain = 0,
    EdgeBetweenness = 1,
}

/// Opaque simulation model: a cast of politicians and an electorate.
pub struct AgoraModel {
    politicians: Vec<Politician>,
    electorate: Electorate,
}

/// Static version string of the library (not to be freed).
#[no_mangle]
pub extern "C" fn agora_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Voters' posterior belief after observing an endorsement: the weighted
/// average of prior `mu` and signal `delta` with signal weight `omega`.
///
/// # Safety
/// `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn agora_posterior(
    mu: f64,
    delta: f64,
    omega: f64,
    out: *mut f64,
) -> AgoraStatus {
    if out.is_null() {
        return AgoraStatus::NullPointer;
    }
    if omega.is_nan() || omega < 0.0 || !mu.is_finite() || !delta.is_finite() {
        return AgoraStatus::InvalidArgument;
    }
    *out = posterior(mu, delta, omega);
    AgoraStatus::Ok
}

/// The like decision for a single message: gain toward the front-runner
/// minus the authenticity cost, strictly positive to like.
///
/// # Safety
/// `out` must point to a writable boolean byte.
#[no_mangle]
pub unsafe extern "C" fn agora_like_decision(
    liker_mu: f64,
    liker_sigma: f64,
    liker_gamma: f64,
    message_delta: f64,
    front_runner_mu: f64,
    omega: f64,
    out: *mut bool,
) -> AgoraStatus {
    if out.is_null() {
        return AgoraStatus::NullPointer;
    }
    if liker_sigma <= 0.0 || liker_sigma.is_nan() || liker_gamma < 0.0 || omega.is_nan() || omega < 0.0 {
        return AgoraStatus::InvalidArgument;
    }
    let mu_star = posterior(liker_mu, message_delta, omega);
    let gain = (liker_mu - front_runner_mu).abs() - (mu_star - front_runner_mu).abs();
    let cost = liker_gamma * (message_delta - liker_mu).abs() / liker_sigma;
    *out = gain - cost > 0.0;
    AgoraStatus::Ok
}

/// Builds the bundled default model (28 politicians, lumpy empirical
/// electorate).
///
/// # Safety
/// `out` must point to a writable model pointer; the result must be
/// released with [`agora_model_free`].
#[no_mangle]
pub unsafe extern "C" fn agora_model_default(out: *mut *mut AgoraModel) -> AgoraStatus {
    if out.is_null() {
        return AgoraStatus::NullPointer;
    }
    let model = AgoraModel {
        politicians: default_politicians(),
        electorate: default_electorate(),
    };
    *out = Box::into_raw(Box::new(model));
    AgoraStatus::Ok
}

/// Builds a model from parallel politician arrays (ids become p00, p01, ...)
/// and an electorate of `n_groups` (position, weight) pairs with strictly
/// increasing positions.
///
/// # Safety
/// `mus`, `sigmas`, `coalitions` must point to `n_politicians` readable
/// elements; `group_positions`, `group_weights` to `n_groups`; `out` to a
/// writable model pointer. The result must be released with
/// [`agora_model_free`].
#[no_mangle]
pub unsafe extern "C" fn agora_model_new(
    mus: *const f64,
    sigmas: *const f64,
    coalitions: *const u32,
    n_politicians: usize,
    group_positions: *const f64,
    group_weights: *const f64,
    n_groups: usize,
    out: *mut *mut AgoraModel,
) -> AgoraStatus {
    if mus.is_null()
        || sigmas.is_null()
        || coalitions.is_null()
        || group_positions.is_null()
        || group_weights.is_null()
        || out.is_null()
    {
        return AgoraStatus::NullPointer;
    }
    if n_politicians == 0 || n_groups == 0 {
        return AgoraStatus::InvalidArgument;
    }
    let mus = slice::from_raw_parts(mus, n_politicians);
    let sigmas = slice::from_raw_parts(sigmas, n_politicians);
    let coalitions = slice::from_raw_parts(coalitions, n_politicians);
    let positions = slice::from_raw_parts(group_positions, n_groups);
    let weights = slice::from_raw_parts(group_weights, n_groups);

    let mut politicians = Vec::with_capacity(n_politicians);
    for k in 0..n_politicians {
        match Politician::new(format!("p{k:02}"), mus[k], sigmas[k], coalitions[k], 0.0) {
            Ok(p) => politicians.push(p),
            Err(_) => return AgoraStatus::InvalidArgument,
        }
    }
    let groups = positions
        .iter()
        .zip(weights)
        .map(|(&ideology, &weight)| VoterGroup { ideology, weight })
        .collect();
    let electorate = match Electorate::new(groups, ElectorateKind::EmpiricalDiscrete) {
        Ok(e) => e,
        Err(_) => return AgoraStatus::InvalidArgument,
    };
    *out = Box::into_raw(Box::new(AgoraModel {
        politicians,
        electorate,
    }));
    AgoraStatus::Ok
}

/// Number of politicians in the model; zero for a null handle.
///
/// # Safety
/// `model` must be null or a live handle from a constructor.
#[no_mangle]
pub unsafe extern "C" fn agora_model_size(model: *const AgoraModel) -> usize {
    if model.is_null() {
        0
    } else {
        (*model).politicians.len()
    }
}

/// Releases a model handle. Null is a no-op.
///
/// # Safety
/// `model` must be null or an unreleased handle from a constructor.
#[no_mangle]
pub unsafe extern "C" fn agora_model_free(model: *mut AgoraModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Runs one seeded simulation and writes the like matrix row-major into
/// `counts_out` (`n * n` entries, liker-major): entry `i * n + j` counts
/// likes given by politician `i` to `j`'s messages. Identical arguments
/// produce identical matrices.
///
/// # Safety
/// `model` must be a live handle and `counts_out` must point to
/// `agora_model_size(model)^2` writable u32 entries.
#[no_mangle]
pub unsafe extern "C" fn agora_simulate(
    model: *const AgoraModel,
    omega: f64,
    messages_per_politician: u32,
    seed: u64,
    gamma_mode: AgoraGammaMode,
    gamma: f64,
    counts_out: *mut u32,
) -> AgoraStatus {
    if model.is_null() || counts_out.is_null() {
        return AgoraStatus::NullPointer;
    }
    if omega.is_nan() || omega < 0.0 || messages_per_politician == 0 {
        return AgoraStatus::InvalidArgument;
    }
    let mode = match gamma_mode {
        AgoraGammaMode::Homogeneous => {
            if gamma < 0.0 || !gamma.is_finite() {
                return AgoraStatus::InvalidArgument;
            }
            GammaMode::Homogeneous { gamma }
        }
        AgoraGammaMode::Heterogeneous => GammaMode::Heterogeneous { mean: 0.1, sd: 0.1 },
    };
    let model = &*model;
    let config = SimulationConfig {
        omega,
        messages_per_politician,
        seed,
        gamma_mode: mode,
        ..Default::default()
    };
    let run = match simulate(&model.politicians, &model.electorate, &config) {
        Ok(run) => run,
        Err(_) => return AgoraStatus::Estimation,
    };
    let n = model.politicians.len();
    let out = slice::from_raw_parts_mut(counts_out, n * n);
    for (i, row) in run.likes.counts.iter().enumerate() {
        out[i * n..(i + 1) * n].copy_from_slice(row);
    }
    AgoraStatus::Ok
}

/// Builds the thresholded correlation network of a row-major `n * n`
/// interaction matrix, detects communities, and writes the modularity to
/// `q_out`. When `labels_out` is non-null it receives the community label
/// of each node.
///
/// # Safety
/// `counts` must point to `n * n` readable u32 entries; `q_out` to a
/// writable f64; `labels_out` must be null or point to `n` writable u32.
#[no_mangle]
pub unsafe extern "C" fn agora_matrix_modularity(
    counts: *const u32,
    n: usize,
    theta: f64,
    method: AgoraMethod,
    seed: u64,
    q_out: *mut f64,
    labels_out: *mut u32,
) -> AgoraStatus {
    if counts.is_null() || q_out.is_null() {
        return AgoraStatus::NullPointer;
    }
    if n < 3 || !(-1.0..=1.0).contains(&theta) {
        return AgoraStatus::InvalidArgument;
    }
    let counts = slice::from_raw_parts(counts, n * n);
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|i| counts[i * n..(i + 1) * n].iter().map(|&c| f64::from(c)).collect())
        .collect();
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let graph = match correlation_network(&labels, &matrix, theta) {
        Ok(g) => g,
        Err(_) => return AgoraStatus::InvalidArgument,
    };
    let detect = match method {
        AgoraMethod::Louvain => CommunityMethod::Louvain,
        AgoraMethod::EdgeBetweenness => CommunityMethod::EdgeBetweenness,
    };
    let partition = match detect.detect(&graph, seed) {
        Ok(p) => p,
        Err(_) => return AgoraStatus::EmptyGraph,
    };
    let q = match modularity(&graph, &partition) {
        Ok(q) => q,
        Err(_) => return AgoraStatus::EmptyGraph,
    };
    *q_out = q;
    if !labels_out.is_null() {
        let out = slice::from_raw_parts_mut(labels_out, n);
        for (slot, &label) in out.iter_mut().zip(partition.labels()) {
            *slot = label as u32;
        }
    }
    AgoraStatus::Ok
}
