//! Named surfaces, stored as spec documents.

use crate::error::CliError;
use crate::spec::{parse_spec, SurfaceSpec};

pub const PRESETS: [&str; 12] =
    ["plane", "exA1", "z2", "z3", "z5", "f1", "f2", "deg26", "exA2", "spacelike_m1", "spacelike_m2", "spacelike_m3"];

fn ko(g: &str) -> String {
    format!(r#"{{"route":"ko","data":{{"g":{{"z_poly":{g}}}}}}}"#)
}

fn null(g1: &str, g2: &str) -> String {
    format!(
        r#"{{"route":"null","data":{{"g1":{{"kind":"poly","coeffs":{g1}}},"g2":{{"kind":"poly","coeffs":{g2}}}}}}}"#
    )
}

/// `g = −z^{m+1}/(m+1)`, `ω = dz`: Hopf differential `z^m dz²`.
fn spacelike(m: usize) -> String {
    let mut g = vec!["0".to_string(); m + 1];
    g.push(format!("\"-1/{}\"", m + 1));
    format!(r#"{{"route":"kobayashi","data":{{"g":[{}],"omega_hat":[1]}}}}"#, g.join(","))
}

/// The JSON document of a preset.
pub fn preset_json(name: &str) -> Option<String> {
    Some(match name {
        // g = 0: a flat time-like plane
        "plane" => ko("[0]"),
        // g = −2ε₁z = (−1 − j)z
        "exA1" => ko("[0, [-1, -1]]"),
        "z2" => ko("[0, 0, 1]"),
        "z3" => ko("[0, 0, 0, 1]"),
        "z5" => ko("[0, 0, 0, 0, 0, 1]"),
        "f1" => null("[0, 1]", "[0, 0, 1]"),
        "f2" => null("[0, 1]", "[0, 0, 0, 1]"),
        "deg26" => null("[0, 0, 0, 1]", "[0, 0, 0, 0, 0, 0, 0, 1]"),
        // ω̂ = φ ∨ φ with φ(t) = exp(−1/t²)
        "exA2" => r#"{"route":"ko","data":{"g":{"z_poly":[0, 1]},"omega_hat":{"first":{"kind":"exp_flat","a":1},"second":{"kind":"exp_flat","a":1},"convention":"full_sum"},"allow_singular_base":true}}"#.to_string(),
        "spacelike_m1" => spacelike(1),
        "spacelike_m2" => spacelike(2),
        "spacelike_m3" => spacelike(3),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<SurfaceSpec, CliError> {
    let text = preset_json(name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))?;
    let mut spec = parse_spec(&text)?;
    spec.name = Some(name.to_string());
    Ok(spec)
}
