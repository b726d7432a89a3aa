//! The generated header compiles as C and C++, and a C program linked
//! against the static library runs a sweep.

use std::path::{Path, PathBuf};
use std::process::Command;

fn include_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn compiler(name: &str) -> Option<String> {
    Command::new(name).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| name.to_owned())
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(include_dir().join("cqnc.h")).unwrap();
    for name in [
        "cqnc_scenario_from_json",
        "cqnc_scenario_from_preset",
        "cqnc_sweep_run",
        "cqnc_sweep_row",
        "cqnc_sweep_to_csv",
        "cqnc_string_free",
        "cqnc_last_error_message",
        "typedef struct CqncScenario CqncScenario;",
        "CQNC_STATUS_CONFIG = 3",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn header_compiles() {
    let Some(cc) = compiler("cc") else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile_dir();
    let src = dir.join("check.c");
    std::fs::write(&src, "#include \"cqnc.h\"\nint main(void) { return cqnc_version() == 0; }\n").unwrap();
    for lang in ["c", "c++"] {
        let status = Command::new(&cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg("-I")
            .arg(include_dir())
            .arg(&src)
            .status()
            .unwrap();
        assert!(status.success(), "{lang}");
    }
}

#[test]
fn c_program_runs_a_sweep() {
    let Some(cc) = compiler("cc") else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // integration tests live next to the library artifacts in target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libcqnc_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("sweep.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.join("sweep");
    let status = Command::new(&cc)
        .arg("-I")
        .arg(include_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "rows=400 sub_sql=yes");
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cqnc-ffi-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "cqnc.h"

int main(void) {
    CqncScenario *s = NULL;
    CqncSweep *sweep = NULL;
    if (cqnc_scenario_from_preset("fig5", 0, &s) != CQNC_STATUS_OK) {
        fprintf(stderr, "%s\n", cqnc_last_error_message());
        return 1;
    }
    if (cqnc_sweep_run(s, &sweep) != CQNC_STATUS_OK) {
        fprintf(stderr, "%s\n", cqnc_last_error_message());
        return 1;
    }
    size_t n = cqnc_sweep_len(sweep);
    double best = 1e300;
    for (size_t i = 0; i < n; i++) {
        CqncRow row;
        cqnc_sweep_row(sweep, i, &row);
        if (row.ratio < best) best = row.ratio;
    }
    printf("rows=%zu sub_sql=%s\n", n, best < 1.0 ? "yes" : "no");
    cqnc_sweep_free(sweep);
    cqnc_scenario_free(s);
    return 0;
}
"#;
