//! Every shipped config preset must parse and resolve.

use csr_core::experiment::ExperimentConfig;
use std::path::{Path, PathBuf};

fn collect_configs(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            collect_configs(&path, out);
        } else if path.extension().is_some_and(|e| e == "toml") {
            out.push(path);
        }
    }
}

#[test]
fn shipped_configs_resolve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut paths = Vec::new();
    collect_configs(&dir, &mut paths);
    assert!(
        paths.len() >= 5,
        "expected the preset configs in {}",
        dir.display()
    );
    for path in paths {
        let cfg = ExperimentConfig::from_file(&path)
            .unwrap_or_else(|e| panic!("{} does not parse: {e}", path.display()));
        cfg.resolve()
            .unwrap_or_else(|e| panic!("{} does not resolve: {e}", path.display()));
    }
}
