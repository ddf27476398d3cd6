//! Input validation against the shipped JSON schemas.

use crate::error::CliError;
use jsonschema::JSONSchema;
use serde::de::DeserializeOwned;
use serde_json::Value;
use std::path::Path;

pub const MODEL: (&str, &str) = ("model", include_str!("../../../schemas/model.schema.json"));
pub const AUTOMORPHISMS: (&str, &str) = ("automorphisms", include_str!("../../../schemas/automorphisms.schema.json"));

/// Validates `value` against one schema and returns the violations.
pub fn violations(schema: (&str, &str), value: &Value) -> Vec<String> {
    let doc: Value = serde_json::from_str(schema.1).expect("shipped schemas are JSON");
    let compiled = JSONSchema::compile(&doc).expect("shipped schemas compile");
    let found: Vec<String> = match compiled.validate(value) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| format!("{}: {}", e.instance_path, e)).collect(),
    };
    found
}

/// Reads a JSON file, checks it against `schema` and deserializes it.
pub fn load<T: DeserializeOwned>(path: &Path, schema: (&'static str, &str)) -> Result<T, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: shown.clone(), message: e.to_string() })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Json { path: shown.clone(), message: e.to_string() })?;
    let v = violations(schema, &value);
    if !v.is_empty() {
        return Err(CliError::Schema { path: shown, schema: schema.0, violations: v });
    }
    serde_json::from_value(value).map_err(|e| CliError::Json { path: shown, message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use reinhardt_core::models;
    use serde_json::json;

    #[test]
    fn bundled_models_validate() {
        for (name, src) in models::SOURCES {
            let v: Value = serde_json::from_str(src).unwrap();
            assert!(violations(MODEL, &v).is_empty(), "{name}");
        }
    }

    #[test]
    fn malformed_models_are_rejected() {
        for bad in [
            json!({"kind": "model4"}),
            json!({"kind": "disc"}),
            json!({"kind": "hyperbolic_model", "matrix": [[2, 1]], "phi": {"family": "zero"}, "t_sign": "+"}),
            json!({"kind": "parabolic_model", "matrix": [[1, 0], [1, 1]], "beta2": "one", "psi": {"family": "canonical"}}),
        ] {
            assert!(!violations(MODEL, &bad).is_empty(), "{bad}");
        }
    }

    #[test]
    fn generated_automorphisms_validate() {
        for name in ["model4", "model5", "model6", "parabolic_k1"] {
            let m = models::get(name).unwrap();
            let auts = reinhardt_core::stehle::random_automorphisms(&m, 5, 3).unwrap();
            let v = serde_json::to_value(&auts).unwrap();
            assert!(violations(AUTOMORPHISMS, &v).is_empty(), "{name}: {:?}", violations(AUTOMORPHISMS, &v));
        }
    }
}
