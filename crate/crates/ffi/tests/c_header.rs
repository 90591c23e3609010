use std::path::PathBuf;
use std::process::Command;

/// Compile the C smoke test against the generated header and the static
/// library, then run it.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // cargo test only rebuilds the rlib, so build a fresh staticlib in a
    // private target dir (the outer build lock is still held)
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("staticlib");
    let status = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "acm-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(&manifest)
        .status()
        .expect("cargo runs");
    assert!(status.success());
    let lib = target.join("debug/libacm_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acm_smoke");
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
