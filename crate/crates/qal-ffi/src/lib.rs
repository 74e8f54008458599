//! C ABI for the active-learning qubit-labeling simulator.
//!
//! Opaque handles wrap the lattice and episode results; every function
//! returns a [`QalStatus`] code and writes results through out-pointers.
//! The matching header lives at `include/qal.h` (generated by cbindgen).
//!
//! Ownership: every `*_new`/`*_run` constructor pairs with a `*_free`;
//! passing a handle after freeing it is undefined behavior, as in any C
//! API. All functions tolerate null handle/out pointers by returning
//! `QAL_STATUS_NULL_POINTER`.

use qal_core::engine::{run_episode, EpisodeConfig, EpisodeResult};
use qal_core::lattice::{generate_lattice, LatticeState, SITE_COUNT};
use qal_core::measurement::{MeasurementConfig, MeasurementKind};
use qal_core::strategies::Strategy;
use std::ffi::{c_char, c_double, c_int, CStr};

/// Status codes returned by every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QalStatus {
    QalStatusOk = 0,
    QalStatusNullPointer = 1,
    QalStatusInvalidParameter = 2,
    QalStatusInvalidName = 3,
    QalStatusOutOfRange = 4,
    QalStatusRuntime = 5,
}

/// Measurement kinds, mirrored for C callers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QalMeasurementKind {
    QalMeasurementWeak = 0,
    QalMeasurementStrong = 1,
}

/// Episode settings. `fidelity_threshold <= 0` disables the threshold
/// stop; `seed_oracles == 0` uses the strategy default (3, QBC 5).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QalEpisodeConfig {
    pub sigma: c_double,
    pub n_copies: usize,
    pub kind: QalMeasurementKind,
    pub seed_oracles: usize,
    pub label_budget: usize,
    pub fidelity_threshold: c_double,
    pub seed: u64,
}

/// One lattice site, flattened for C.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QalSite {
    pub row: usize,
    pub col: usize,
    pub alpha: c_double,
    pub cos_alpha: c_double,
    pub true_class: c_int,
}

/// One trajectory point of an episode.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QalTrajectoryPoint {
    pub labels_used: usize,
    pub accuracy: c_double,
    pub system_fidelity: c_double,
}

/// Opaque lattice handle.
pub struct QalLattice(LatticeState);

/// Opaque episode-result handle.
pub struct QalEpisode(EpisodeResult);

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qal_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates the 441-qubit lattice. On success writes a handle the caller
/// must release with `qal_lattice_free`.
///
/// # Safety
/// `out` must be a valid pointer to a `QalLattice*`.
#[no_mangle]
pub unsafe extern "C" fn qal_lattice_generate(
    seed: u64,
    ramp_width: c_double,
    epsilon: c_double,
    out: *mut *mut QalLattice,
) -> QalStatus {
    if out.is_null() {
        return QalStatus::QalStatusNullPointer;
    }
    match generate_lattice(seed, ramp_width, epsilon) {
        Ok(lattice) => {
            unsafe { *out = Box::into_raw(Box::new(QalLattice(lattice))) };
            QalStatus::QalStatusOk
        }
        Err(_) => QalStatus::QalStatusInvalidParameter,
    }
}

/// Releases a lattice handle. Null is ignored.
///
/// # Safety
/// `lattice` must have come from `qal_lattice_generate` and not already
/// be freed.
#[no_mangle]
pub unsafe extern "C" fn qal_lattice_free(lattice: *mut QalLattice) {
    if !lattice.is_null() {
        drop(unsafe { Box::from_raw(lattice) });
    }
}

/// Number of lattice sites (constant 441).
#[no_mangle]
pub extern "C" fn qal_lattice_site_count() -> usize {
    SITE_COUNT
}

/// Fetches one site by row-major index.
///
/// # Safety
/// `lattice` must be a live handle; `out` must point to a `QalSite`.
#[no_mangle]
pub unsafe extern "C" fn qal_lattice_site(
    lattice: *const QalLattice,
    site_id: usize,
    out: *mut QalSite,
) -> QalStatus {
    if lattice.is_null() || out.is_null() {
        return QalStatus::QalStatusNullPointer;
    }
    let lattice = unsafe { &(*lattice).0 };
    if site_id >= lattice.sites.len() {
        return QalStatus::QalStatusOutOfRange;
    }
    let site = lattice.site(site_id);
    unsafe {
        *out = QalSite {
            row: site.row,
            col: site.col,
            alpha: site.alpha,
            cos_alpha: site.cos_alpha(),
            true_class: c_int::from(site.true_class),
        };
    }
    QalStatus::QalStatusOk
}

fn strategy_from_cstr(name: *const c_char) -> Option<Strategy> {
    if name.is_null() {
        return None;
    }
    let name = unsafe { CStr::from_ptr(name) }.to_str().ok()?;
    Strategy::parse(name).ok()
}

/// Runs one active-learning episode with the named strategy (`random`,
/// `usamp_lc`, `usamp_margin`, `usamp_entropy`, `qbc_ve`, `qbc_kl`).
/// On success writes an episode handle for `qal_episode_*` accessors;
/// release it with `qal_episode_free`.
///
/// # Safety
/// `lattice` must be a live handle, `strategy` a NUL-terminated string,
/// `config` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qal_episode_run(
    lattice: *const QalLattice,
    strategy: *const c_char,
    config: *const QalEpisodeConfig,
    out: *mut *mut QalEpisode,
) -> QalStatus {
    if lattice.is_null() || config.is_null() || out.is_null() {
        return QalStatus::QalStatusNullPointer;
    }
    let Some(strategy) = strategy_from_cstr(strategy) else {
        return QalStatus::QalStatusInvalidName;
    };
    let c = unsafe { &*config };
    let episode_config = EpisodeConfig {
        strategy,
        measurement: MeasurementConfig {
            sigma: c.sigma,
            n_copies: c.n_copies,
            kind: match c.kind {
                QalMeasurementKind::QalMeasurementWeak => MeasurementKind::Weak,
                QalMeasurementKind::QalMeasurementStrong => MeasurementKind::Strong,
            },
        },
        seed_oracles: if c.seed_oracles == 0 {
            strategy.default_seed_oracles()
        } else {
            c.seed_oracles
        },
        label_budget: c.label_budget,
        fidelity_threshold: (c.fidelity_threshold > 0.0).then_some(c.fidelity_threshold),
        seed: c.seed,
    };
    let lattice = unsafe { &(*lattice).0 };
    match run_episode(lattice, &episode_config) {
        Ok(result) => {
            unsafe { *out = Box::into_raw(Box::new(QalEpisode(result))) };
            QalStatus::QalStatusOk
        }
        Err(qal_core::Error::InvalidParameter(_)) => QalStatus::QalStatusInvalidParameter,
        Err(_) => QalStatus::QalStatusRuntime,
    }
}

/// Releases an episode handle. Null is ignored.
///
/// # Safety
/// `episode` must have come from `qal_episode_run` and not already be
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qal_episode_free(episode: *mut QalEpisode) {
    if !episode.is_null() {
        drop(unsafe { Box::from_raw(episode) });
    }
}

/// Trajectory length (one point per retrain, including the seed-only one).
///
/// # Safety
/// `episode` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qal_episode_len(episode: *const QalEpisode) -> usize {
    if episode.is_null() {
        return 0;
    }
    unsafe { &(*episode).0 }.trajectory.len()
}

/// Fetches one trajectory point.
///
/// # Safety
/// `episode` must be a live handle; `out` must point to a
/// `QalTrajectoryPoint`.
#[no_mangle]
pub unsafe extern "C" fn qal_episode_point(
    episode: *const QalEpisode,
    index: usize,
    out: *mut QalTrajectoryPoint,
) -> QalStatus {
    if episode.is_null() || out.is_null() {
        return QalStatus::QalStatusNullPointer;
    }
    let result = unsafe { &(*episode).0 };
    let Some(point) = result.trajectory.get(index) else {
        return QalStatus::QalStatusOutOfRange;
    };
    unsafe {
        *out = QalTrajectoryPoint {
            labels_used: point.labels_used,
            accuracy: point.accuracy,
            system_fidelity: point.system_fidelity,
        };
    }
    QalStatus::QalStatusOk
}

/// Number of queried sites whose measured label disagreed with ground
/// truth.
///
/// # Safety
/// `episode` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qal_episode_mislabels(episode: *const QalEpisode) -> usize {
    if episode.is_null() {
        return 0;
    }
    unsafe { &(*episode).0 }.mislabel_count
}
