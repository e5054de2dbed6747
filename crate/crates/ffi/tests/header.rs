use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/pairpoly.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct PairpolyBetti PairpolyBetti;",
        "PAIRPOLY_STATUS_OK = 0",
        "pairpoly_betti_new(",
        "pairpoly_betti_get(",
        "pairpoly_flip_difference(",
        "pairpoly_closed_form(",
        "pairpoly_strata_get(",
        "pairpoly_string_free(",
        "pairpoly_last_error(",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("pairpoly-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        r#"#include "pairpoly.h"
int main(void) {
    PairpolyBetti *h = 0;
    int64_t b = 0;
    if (pairpoly_betti_new(2, 5, 5, 8, &h) != PAIRPOLY_STATUS_OK) return 1;
    pairpoly_betti_get(h, 0, &b);
    pairpoly_betti_free(h);
    return (int)b - 1;
}
"#,
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    let status = match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&src).status() {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            eprintln!("no C compiler on PATH; header syntax not checked");
            return;
        }
        Err(e) => panic!("{e}"),
    };
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(status.success());
}
