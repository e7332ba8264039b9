use std::path::Path;
use std::process::Command;

/// `(name, arguments)`, run from `tests/golden/`.
pub const RUNS: [(&str, &[&str]); 12] = [
    ("solve_clash", &["solve", "workbench.uag", "-a", "Z2c", "-s", "Clash"]),
    ("gamma_cross", &["gamma", "workbench.uag", "-a", "Z3d", "-s", "Cross"]),
    (
        "decompose_plane",
        &["decompose", "workbench.uag", "-a", "Z2m", "-s", "Plane", "--shuffles", "5"],
    ),
    ("reduce_padded", &["reduce", "workbench.uag", "-a", "Z2m", "-s", "Padded"]),
    (
        "radical_diagonal",
        &["radical-member", "workbench.uag", "-a", "Z2m", "-s", "Diagonal", "-e", "x = e"],
    ),
    (
        "closure_padded",
        &["closure-member", "workbench.uag", "-s", "Padded", "-e", "+(y,x) = e"],
    ),
    ("check_coord_z4", &["check", "coord", "workbench.uag", "-a", "Z2", "-c", "Z4"]),
    (
        "check_irr_z2",
        &["check", "irr-coord", "workbench.uag", "-a", "Z2", "-c", "Z2", "--format", "text"],
    ),
    ("check_empty_z2c", &["check", "empty-set", "workbench.uag", "-a", "Z2c"]),
    ("check_ucl_z2", &["check", "trivial-ucl", "workbench.uag", "-a", "Z2", "--format", "text"]),
    (
        "duality_cross_line",
        &["duality", "workbench.uag", "-a", "Z3d", "--source", "Cross", "--target", "Line"],
    ),
    (
        "isomorphic_line_pair",
        &["isomorphic", "workbench.uag", "-a", "Z3d", "--source", "Line", "--target", "Pair"],
    ),
];

/// Exit status followed by stdout.
pub fn run(dir: &Path, args: &[&str], threads: usize) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_uag"))
        .current_dir(dir)
        .args(args)
        .args(["--threads", &threads.to_string()])
        .output()
        .expect("uag runs");
    format!(
        "exit {}\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout)
    )
}
