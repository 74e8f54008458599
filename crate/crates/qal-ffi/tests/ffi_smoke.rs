//! C-ABI smoke tests: the exported functions driven exactly as a C caller
//! would, plus a real C program compiled against include/qal.h and linked
//! with the staticlib.

use qal_ffi::{
    qal_episode_free, qal_episode_len, qal_episode_mislabels, qal_episode_point, qal_episode_run,
    qal_lattice_free, qal_lattice_generate, qal_lattice_site, qal_lattice_site_count, qal_version,
    QalEpisode, QalEpisodeConfig, QalLattice, QalMeasurementKind, QalSite, QalStatus,
    QalTrajectoryPoint,
};
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

fn default_config(seed: u64) -> QalEpisodeConfig {
    QalEpisodeConfig {
        sigma: 10.0,
        n_copies: 20,
        kind: QalMeasurementKind::QalMeasurementWeak,
        seed_oracles: 0,
        label_budget: 5,
        fidelity_threshold: 0.0,
        seed,
    }
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(qal_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn full_episode_through_the_c_abi() {
    let mut lattice: *mut QalLattice = ptr::null_mut();
    assert_eq!(
        unsafe { qal_lattice_generate(7, 6.0, 0.02, &mut lattice) },
        QalStatus::QalStatusOk
    );
    assert_eq!(qal_lattice_site_count(), 441);

    let strategy = CString::new("qbc_ve").unwrap();
    let config = default_config(11);
    let mut episode: *mut QalEpisode = ptr::null_mut();
    assert_eq!(
        unsafe { qal_episode_run(lattice, strategy.as_ptr(), &config, &mut episode) },
        QalStatus::QalStatusOk
    );

    let len = unsafe { qal_episode_len(episode) };
    assert_eq!(len, 6); // seed point + 5 labels

    let mut previous_fidelity = f64::INFINITY;
    for i in 0..len {
        let mut point = QalTrajectoryPoint {
            labels_used: 0,
            accuracy: 0.0,
            system_fidelity: 0.0,
        };
        assert_eq!(
            unsafe { qal_episode_point(episode, i, &mut point) },
            QalStatus::QalStatusOk
        );
        assert_eq!(point.labels_used, i);
        assert!(point.accuracy > 0.0 && point.accuracy <= 1.0);
        assert!(point.system_fidelity <= previous_fidelity);
        previous_fidelity = point.system_fidelity;
    }
    let mut point = QalTrajectoryPoint {
        labels_used: 0,
        accuracy: 0.0,
        system_fidelity: 0.0,
    };
    assert_eq!(
        unsafe { qal_episode_point(episode, len, &mut point) },
        QalStatus::QalStatusOutOfRange
    );
    assert!(unsafe { qal_episode_mislabels(episode) } <= 5);

    // Determinism through the ABI.
    let mut episode2: *mut QalEpisode = ptr::null_mut();
    assert_eq!(
        unsafe { qal_episode_run(lattice, strategy.as_ptr(), &config, &mut episode2) },
        QalStatus::QalStatusOk
    );
    for i in 0..len {
        let mut a = QalTrajectoryPoint {
            labels_used: 0,
            accuracy: 0.0,
            system_fidelity: 0.0,
        };
        let mut b = a;
        unsafe {
            qal_episode_point(episode, i, &mut a);
            qal_episode_point(episode2, i, &mut b);
        }
        assert_eq!(
            (a.labels_used, a.accuracy, a.system_fidelity),
            (b.labels_used, b.accuracy, b.system_fidelity)
        );
    }

    unsafe {
        qal_episode_free(episode);
        qal_episode_free(episode2);
        qal_lattice_free(lattice);
    }
}

#[test]
fn error_paths_return_status_codes() {
    let mut lattice: *mut QalLattice = ptr::null_mut();
    assert_eq!(
        unsafe { qal_lattice_generate(1, 6.0, 0.5, &mut lattice) },
        QalStatus::QalStatusInvalidParameter
    );
    assert_eq!(
        unsafe { qal_lattice_generate(1, 6.0, 0.02, &mut lattice) },
        QalStatus::QalStatusOk
    );

    let mut site = QalSite {
        row: 0,
        col: 0,
        alpha: 0.0,
        cos_alpha: 0.0,
        true_class: 0,
    };
    assert_eq!(
        unsafe { qal_lattice_site(ptr::null(), 0, &mut site) },
        QalStatus::QalStatusNullPointer
    );

    let bad_name = CString::new("gradient_length").unwrap();
    let config = default_config(1);
    let mut episode: *mut QalEpisode = ptr::null_mut();
    assert_eq!(
        unsafe { qal_episode_run(lattice, bad_name.as_ptr(), &config, &mut episode) },
        QalStatus::QalStatusInvalidName
    );
    assert_eq!(
        unsafe { qal_episode_run(lattice, ptr::null(), &config, &mut episode) },
        QalStatus::QalStatusInvalidName
    );

    let mut bad = default_config(1);
    bad.sigma = -3.0;
    let name = CString::new("usamp_lc").unwrap();
    assert_eq!(
        unsafe { qal_episode_run(lattice, name.as_ptr(), &bad, &mut episode) },
        QalStatus::QalStatusInvalidParameter
    );

    unsafe { qal_lattice_free(lattice) };
    unsafe { qal_lattice_free(ptr::null_mut()) };
    unsafe { qal_episode_free(ptr::null_mut()) };
}

/// Compiles and runs a real C client against the generated header.
#[test]
fn c_client_compiles_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    assert!(include_dir.join("qal.h").exists(), "header not generated");

    // The staticlib lands two levels above the test executable
    // (target/debug/deps/this_test -> target/debug/libqal_ffi.a).
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe
        .parent()
        .and_then(Path::parent)
        .expect("target layout")
        .to_path_buf();
    let staticlib = lib_dir.join("libqal_ffi.a");
    assert!(staticlib.exists(), "staticlib missing at {staticlib:?}");

    let scratch = tempfile_dir();
    let c_source = scratch.join("client.c");
    std::fs::write(
        &c_source,
        r#"
#include "qal.h"
#include <stdio.h>

int main(void) {
    QalLattice *lattice = NULL;
    if (qal_lattice_generate(42, 6.0, 0.02, &lattice) != QAL_STATUS_OK) return 1;
    if (qal_lattice_site_count() != 441) return 2;

    QalSite site;
    if (qal_lattice_site(lattice, 220, &site) != QAL_STATUS_OK) return 3;
    if (site.row != 10 || site.col != 10) return 4;

    QalEpisodeConfig config = {
        .sigma = 10.0,
        .n_copies = 10,
        .kind = QAL_MEASUREMENT_WEAK,
        .seed_oracles = 0,
        .label_budget = 3,
        .fidelity_threshold = 0.0,
        .seed = 5,
    };
    QalEpisode *episode = NULL;
    if (qal_episode_run(lattice, "usamp_lc", &config, &episode) != QAL_STATUS_OK) return 5;
    size_t len = qal_episode_len(episode);
    if (len != 4) return 6;
    QalTrajectoryPoint point;
    if (qal_episode_point(episode, len - 1, &point) != QAL_STATUS_OK) return 7;
    if (!(point.system_fidelity > 0.0 && point.system_fidelity <= 1.0)) return 8;
    printf("final accuracy %.4f fidelity %.6f\n", point.accuracy, point.system_fidelity);
    qal_episode_free(episode);
    qal_lattice_free(lattice);
    return 0;
}
"#,
    )
    .unwrap();

    let binary = scratch.join("client");
    let compile = Command::new("cc")
        .arg(&c_source)
        .arg("-I")
        .arg(&include_dir)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .expect("cc available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "client exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qal-ffi-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
