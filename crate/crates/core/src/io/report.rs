use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Version of the report record layout.
pub const SCHEMA_VERSION: u32 = 1;

/// One JSON line `{"schema_version", "command", "config", "result"}`.
/// Keys are sorted, so equal inputs give byte-identical lines.
pub fn report_record<C: Serialize, R: Serialize>(
    command: &str,
    config: &C,
    result: &R,
) -> Result<String> {
    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": to_value(config)?,
        "result": to_value(result)?,
    });
    Ok(record.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::domain(format!("report serialisation failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Cfg {
        seed: u64,
        p: f64,
    }

    #[test]
    fn stable_layout() {
        let a = report_record("norm", &Cfg { seed: 3, p: 1.5 }, &vec![1.0, 2.0]).unwrap();
        let b = report_record("norm", &Cfg { seed: 3, p: 1.5 }, &vec![1.0, 2.0]).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a,
            r#"{"command":"norm","config":{"p":1.5,"seed":3},"result":[1.0,2.0],"schema_version":1}"#
        );
    }
}
