//! Parameter files: flat `key=value` text, one field per line.
//!
//! Keys follow the usual symbol names (`m`, `I_t`, `I`, `A_sub`, `r_t`,
//! `r_b`, `l_f`, `d_f`, `beta_deg`, `psi_deg`, `rho`, `C_b`, `C_r`, `C_f`,
//! `hull_diameter`, `epsilon`). Missing keys keep their defaults; unknown or
//! repeated keys are errors. `#` starts a comment line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use modboat_core::{default_params, derive_coeffs, Asymmetry, BoatParams};

use crate::error::FormatError;

/// Environment variable naming the default parameter file.
pub const PARAMS_ENV: &str = "MODBOAT_PARAMS";

pub const KEYS: [&str; 16] = [
    "m",
    "I_t",
    "I",
    "A_sub",
    "r_t",
    "r_b",
    "l_f",
    "d_f",
    "beta_deg",
    "psi_deg",
    "rho",
    "C_b",
    "C_r",
    "C_f",
    "hull_diameter",
    "epsilon",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamFile {
    pub params: BoatParams,
    /// Flipper thrust skew.
    pub epsilon: f64,
}

impl Default for ParamFile {
    fn default() -> Self {
        ParamFile {
            params: default_params(),
            epsilon: 0.0,
        }
    }
}

impl ParamFile {
    pub fn asymmetry(&self) -> Result<Asymmetry, FormatError> {
        Asymmetry::new(self.epsilon).map_err(|e| FormatError::Invalid(e.to_string()))
    }

    fn get(&self, key: &str) -> f64 {
        let p = &self.params;
        match key {
            "m" => p.mass,
            "I_t" => p.drive_inertia,
            "I" => p.inertia,
            "A_sub" => p.submerged_area,
            "r_t" => p.drive_radius,
            "r_b" => p.body_radius,
            "l_f" => p.flipper_length,
            "d_f" => p.flipper_depth,
            "beta_deg" => p.flipper_location_deg(),
            "psi_deg" => p.flipper_open_angle_deg(),
            "rho" => p.water_density,
            "C_b" => p.body_drag_coeff,
            "C_r" => p.rotation_drag,
            "C_f" => p.flipper_drag_coeff,
            "hull_diameter" => p.hull_diameter,
            "epsilon" => self.epsilon,
            _ => unreachable!("key list is closed"),
        }
    }

    fn set(&mut self, key: &str, v: f64) {
        let p = &mut self.params;
        match key {
            "m" => p.mass = v,
            "I_t" => p.drive_inertia = v,
            "I" => p.inertia = v,
            "A_sub" => p.submerged_area = v,
            "r_t" => p.drive_radius = v,
            "r_b" => p.body_radius = v,
            "l_f" => p.flipper_length = v,
            "d_f" => p.flipper_depth = v,
            "beta_deg" => p.set_flipper_location_deg(v),
            "psi_deg" => p.set_flipper_open_angle_deg(v),
            "rho" => p.water_density = v,
            "C_b" => p.body_drag_coeff = v,
            "C_r" => p.rotation_drag = v,
            "C_f" => p.flipper_drag_coeff = v,
            "hull_diameter" => p.hull_diameter = v,
            "epsilon" => self.epsilon = v,
            _ => unreachable!("key list is closed"),
        }
    }
}

pub fn parse(text: &str) -> Result<ParamFile, FormatError> {
    let mut out = ParamFile::default();
    let mut seen = [false; KEYS.len()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| FormatError::syntax(line, "expected key=value"))?;
        let key = key.trim();
        let idx = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| FormatError::UnknownKey {
                line,
                key: key.to_string(),
            })?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(FormatError::syntax(line, format!("`{key}` given twice")));
        }
        let v: f64 = value.trim().parse().map_err(|_| {
            FormatError::syntax(line, format!("`{}` is not a number", value.trim()))
        })?;
        out.set(key, v);
    }
    out.params
        .validate()
        .map_err(|e| FormatError::Invalid(e.to_string()))?;
    out.asymmetry()?;
    Ok(out)
}

pub fn load(path: &Path) -> Result<ParamFile, FormatError> {
    let text = fs::read_to_string(path).map_err(FormatError::file(path))?;
    parse(&text)
}

/// Every key with its value, followed by the derived coefficients as
/// comments. The output parses back to the same parameters.
pub fn render(pf: &ParamFile) -> String {
    let mut s = String::new();
    for key in KEYS {
        let _ = writeln!(s, "{key}={}", pf.get(key));
    }
    if let Ok(k) = derive_coeffs(&pf.params) {
        let _ = writeln!(s, "# K_f={}", k.thrust);
        let _ = writeln!(s, "# K_t={}", k.torque_arm);
        let _ = writeln!(s, "# K_b={}", k.body_drag);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips() {
        let mut pf = ParamFile {
            epsilon: 0.05,
            ..ParamFile::default()
        };
        pf.params.mass = 0.71;
        assert_eq!(parse(&render(&pf)).unwrap(), pf);
    }

    #[test]
    fn missing_keys_keep_defaults() {
        let pf = parse("# lighter boat\nm = 0.5\n\n").unwrap();
        assert_eq!(pf.params.mass, 0.5);
        assert_eq!(pf.params.inertia, default_params().inertia);
        assert_eq!(pf.epsilon, 0.0);
    }

    #[test]
    fn degrees_convert_at_the_boundary() {
        let pf = parse("beta_deg=30\npsi_deg=-10").unwrap();
        assert!((pf.params.flipper_location - 30f64.to_radians()).abs() < 1e-15);
        assert!((pf.params.flipper_open_angle + 10f64.to_radians()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse("m=1\nmass=2"),
            Err(FormatError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            parse("m"),
            Err(FormatError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse("m=1\nm=2"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse("m=abc"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse("m=-1"), Err(FormatError::Invalid(_))));
        assert!(matches!(parse("epsilon=1.5"), Err(FormatError::Invalid(_))));
    }
}
