//! Lattice selection: either a named preset or a TOML file with explicit
//! Gram rows.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use voa_core::lattice::{presets, Lattice};
use voa_core::{Error, Result};

#[derive(Deserialize)]
struct LatticeFile {
    name: Option<String>,
    gram: Vec<Vec<i64>>,
}

/// Resolves `--lattice`: a preset name (A1, A2, A1A1, D4, E8) or a path to
/// a TOML file containing `gram = [[..], ..]` and optionally `name`.
pub fn load_lattice(spec: &str) -> Result<(String, Lattice)> {
    if let Ok(l) = presets::lattice(spec) {
        return Ok((spec.to_string(), l));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::InvalidLattice(format!(
            "'{}' is neither a preset ({}) nor an existing file",
            spec,
            presets::NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidLattice(format!("cannot read {}: {}", spec, e)))?;
    let parsed: LatticeFile = toml::from_str(&text).map_err(|e| {
        Error::InvalidLattice(format!("{} is not a valid lattice file: {}", spec, e))
    })?;
    let lattice = Lattice::new(&parsed.gram)?;
    let name = parsed.name.unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| spec.to_string())
    });
    Ok((name, lattice))
}
