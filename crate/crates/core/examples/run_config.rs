//! Drive the library from a JSON run configuration, the way the binary does,
//! and replay the resulting manifest.

use mqcardinal::cli::{self, RunConfig};

fn main() -> mqcardinal::Result<()> {
    let dir = tempfile::tempdir()?;
    let out = dir.path().join("L.csv");
    let cfg: RunConfig = serde_json::from_value(serde_json::json!({
        "command": "fundamental",
        "params": { "alpha": -2.5, "c": 1.0, "d": 1 },
        "grid": { "m": 8, "oversample": 8, "d": 1 },
        "periodization": { "j": 6, "tail_tol": 1e-12 },
        "truncation": { "radius": 1002, "tail_bound_mode": "theorem-slope" },
        "io": { "out": out, "manifest": dir.path().join("L.csv.manifest.json") },
        "seed": 0
    }))?;
    let manifest = cli::run(&cfg)?;
    for a in &manifest.artifacts {
        println!("{} {} bytes sha256={}", a.path.display(), a.bytes, a.sha256);
    }

    let again = dir.path().join("replay");
    let path = dir.path().join("L.csv.manifest.json");
    let replayed = cli::replay(&path, Some(&again), true)?;
    println!("replayed {} artifact(s), hashes verified", replayed.artifacts.len());
    Ok(())
}
