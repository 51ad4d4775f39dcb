//! Reproducible rendering: 15 significant digits, complex numbers as `[re, im]`.

use num_complex::Complex64;
use serde_json::{json, Value};

/// Rounds to 15 significant digits and maps `-0` to `0`.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    json!(if r == 0.0 { 0.0 } else { r })
}

pub fn complex(z: Complex64) -> Value {
    json!([real(z.re), real(z.im)])
}

pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Plain-text rendering of a number or `[re, im]` pair as stored in a value.
pub fn text(v: &Value) -> String {
    match v {
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            let re = a[0].as_f64().unwrap();
            let im = a[1].as_f64().unwrap();
            if im == 0.0 {
                format!("{re}")
            } else if im < 0.0 {
                format!("{re} - {}i", -im)
            } else {
                format!("{re} + {im}i")
            }
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
