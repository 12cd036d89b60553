//! Compiles and runs a small C program against the generated header and the
//! static library, exercising the ABI end to end.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "treeldpc.h"

int main(void) {
    TldpcGraph *g = NULL;
    if (tldpc_graph_build("type2l3", 0, 2, 2, &g) != TLDPC_STATUS_OK) {
        fprintf(stderr, "build failed: %s\n", tldpc_last_error());
        return 1;
    }
    uint32_t n = tldpc_graph_n_var(g);
    uint32_t girth = 0, diameter = 0, k = 0;
    if (tldpc_graph_girth(g, &girth) != TLDPC_STATUS_OK) return 2;
    if (tldpc_graph_diameter(g, &diameter) != TLDPC_STATUS_OK) return 3;
    if (tldpc_graph_dimension(g, 2, &k) != TLDPC_STATUS_OK) return 4;

    double llr[21];
    uint8_t word[21];
    int32_t converged = 0;
    uint32_t iters = 0;
    for (int i = 0; i < 21; i++) llr[i] = 4.0;
    llr[3] = -4.0; /* one flipped position */
    if (tldpc_decode_min_sum(g, llr, 21, 50, word, &converged, &iters) != TLDPC_STATUS_OK)
        return 5;
    int weight = 0;
    for (int i = 0; i < 21; i++) weight += word[i];

    printf("n=%u girth=%u diameter=%u k=%u converged=%d weight=%d\n",
           n, girth, diameter, k, converged, weight);
    tldpc_graph_free(g);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let workspace = manifest.parent().unwrap().parent().unwrap();

    // Make sure the staticlib artifact exists (cargo test only builds the
    // test harness lib by default).
    let status = Command::new(env!("CARGO"))
        .args(["build", "-p", "treeldpc-ffi"])
        .current_dir(workspace)
        .status()
        .expect("cargo runs");
    assert!(status.success(), "staticlib build failed");

    let lib = workspace.join("target/debug/libtreeldpc_ffi.a");
    assert!(lib.exists(), "missing staticlib at {}", lib.display());
    let include = manifest.join("include");
    assert!(
        include.join("treeldpc.h").exists(),
        "missing generated header"
    );

    let dir = std::env::temp_dir().join(format!("treeldpc-csmoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();

    let cc = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("cc runs");
    assert!(
        cc.status.success(),
        "compile failed: {}",
        String::from_utf8_lossy(&cc.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke run failed with {:?}",
        run.status
    );
    let out = String::from_utf8(run.stdout).unwrap();
    assert_eq!(
        out.trim(),
        "n=21 girth=6 diameter=3 k=11 converged=1 weight=0"
    );
    std::fs::remove_dir_all(&dir).ok();
}
