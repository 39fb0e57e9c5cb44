//! Sequence spec files.
//!
//! ```toml
//! label = "fibonacci"
//! order = 2
//! coeffs = ["1", "1"]   # a_1, ..., a_k
//! initial = ["1", "1"]  # U_1, ..., U_k
//! ```
//!
//! Integers are decimal strings so that values of any size survive; plain
//! TOML integers are accepted too.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use lrs_core::recurrence::RecurrenceSpec;

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum IntField {
    Int(i64),
    Text(String),
}

impl IntField {
    fn value(&self) -> LabResult<BigInt> {
        match self {
            IntField::Int(v) => Ok(BigInt::from(*v)),
            IntField::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| LabError::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    order: Option<usize>,
    coeffs: Vec<IntField>,
    initial: Vec<IntField>,
}

pub fn parse_spec(text: &str) -> LabResult<RecurrenceSpec> {
    let doc: SpecDoc = toml::from_str(text).map_err(|e| LabError::Parse(e.to_string()))?;
    let coeffs = doc.coeffs.iter().map(IntField::value).collect::<LabResult<Vec<_>>>()?;
    let initial = doc.initial.iter().map(IntField::value).collect::<LabResult<Vec<_>>>()?;
    if let Some(k) = doc.order {
        if k != coeffs.len() || k != initial.len() {
            return Err(LabError::Core(lrs_core::Error::InvalidSpec(format!(
                "order {k} but {} coeffs and {} initial values",
                coeffs.len(),
                initial.len()
            ))));
        }
    }
    let label = doc.label.unwrap_or_else(|| "unnamed".into());
    Ok(RecurrenceSpec::new(coeffs, initial, label)?)
}

pub fn load_spec(path: &Path) -> LabResult<RecurrenceSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_spec(&text)
}

pub fn spec_to_toml(spec: &RecurrenceSpec) -> String {
    let doc = SpecDoc {
        label: Some(spec.label.clone()),
        order: Some(spec.order()),
        coeffs: spec.coeffs().iter().map(|c| IntField::Text(c.to_string())).collect(),
        initial: spec.initial().iter().map(|c| IntField::Text(c.to_string())).collect(),
    };
    toml::to_string(&doc).expect("spec serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_file() {
        let s = parse_spec(
            "label = \"fibonacci\"\norder = 2\ncoeffs = [\"1\", \"1\"]\ninitial = [1, 1]\n",
        )
        .unwrap();
        assert_eq!(s, RecurrenceSpec::fibonacci());
    }

    #[test]
    fn round_trip() {
        let a: BigInt = "3234846617".parse().unwrap();
        let spec = RecurrenceSpec::two_pow_minus(&a, "forge");
        let back = parse_spec(&spec_to_toml(&spec)).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_spec("coeffs = [\"1\", \"0\"]\ninitial = [1, 1]\n").is_err());
        assert!(parse_spec("order = 3\ncoeffs = [1, 1]\ninitial = [1, 1]\n").is_err());
        assert!(parse_spec("coeffs = [\"x\"]\ninitial = [1]\n").is_err());
        assert!(parse_spec("coeffs = [1]\ninitial = [1]\nextra = 2\n").is_err());
    }
}
