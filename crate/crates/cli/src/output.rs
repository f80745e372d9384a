use serde_json::{json, Map, Value};
use voronoi_core::tables::Row;

pub fn json_rows<R: Row>(rows: &[R]) -> Value {
    let header = R::header();
    Value::Array(
        rows.iter()
            .map(|r| {
                let obj: Map<String, Value> = header
                    .iter()
                    .zip(r.values())
                    .map(|(k, v)| (k.to_string(), json!(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

pub fn json_document(meta: Value, rows: Value) -> String {
    let mut text = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows })).expect("serializable");
    text.push('\n');
    text
}
