//! Number formatting shared by the CSV and JSON writers.

use serde_json::{Number, Value};

/// 17 significant digits in scientific notation; `nan`/`inf` spelled out.
pub fn sci17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A JSON number carrying exactly the 17-digit text of [`sci17`]; non-finite
/// values become `null`.
pub fn json17(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(sci17(v).parse::<Number>().expect("valid JSON number"))
    } else {
        Value::Null
    }
}
