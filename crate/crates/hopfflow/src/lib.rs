//! File formats, presets and the command pipeline on top of
//! `hopfflow-core`.

pub mod commands;
pub mod error;
pub mod pipeline;
pub mod presets;
pub mod spec;
pub mod svg;

use std::path::Path;

pub use error::CliError;
pub use spec::{Resolved, SurfaceSpec};

/// Command-line overrides applied before validation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
    pub jet_cap: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, spec: &mut SurfaceSpec) {
        if let Some(n) = self.grid {
            spec.grid.nu = n;
            spec.grid.nv = n;
        }
        if let Some(r) = self.radius {
            spec.analysis.winding_radius = r;
        }
        if let Some(k) = self.samples {
            spec.analysis.samples = k;
        }
        if let Some(j) = self.jet_cap {
            spec.analysis.jet_cap = j;
        }
    }
}

/// Loads a spec file or a preset and resolves it.
pub fn load(spec: Option<&Path>, preset: Option<&str>, overrides: &Overrides) -> Result<Resolved, CliError> {
    let (mut s, fallback) = match (spec, preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("surface").to_string();
            (spec::parse_spec(&text)?, stem)
        }
        (None, Some(name)) => (presets::preset(name)?, name.to_string()),
        _ => {
            return Err(CliError::Spec {
                pointer: String::new(),
                message: "give exactly one of --spec and --preset".into(),
            })
        }
    };
    overrides.apply(&mut s);
    s.resolve(&fallback)
}
