use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::template::Level;

/// One record of the model's JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractedTemplate {
    pub method: String,
    pub template: String,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no JSON array of template records found in response")]
pub struct MalformedResponse;

fn record(value: &Value) -> Option<ExtractedTemplate> {
    let obj = value.as_object()?;
    let method = obj.get("method")?.as_str()?;
    let template = obj.get("template")?.as_str()?;
    let level = obj.get("level")?.as_str()?.parse().ok()?;
    Some(ExtractedTemplate {
        method: method.to_string(),
        template: template.to_string(),
        level,
    })
}

/// Finds the first well-formed array of template records in `text`.
///
/// Surrounding prose and code fences are ignored. Every element must be an
/// object carrying string `method`, `template` and `level` fields.
pub fn parse_response(text: &str) -> Result<Vec<ExtractedTemplate>, MalformedResponse> {
    for (start, _) in text.match_indices('[') {
        let mut stream = serde_json::Deserializer::from_str(&text[start..]).into_iter::<Value>();
        let Some(Ok(Value::Array(items))) = stream.next() else {
            continue;
        };
        if let Some(records) = items.iter().map(record).collect::<Option<Vec<_>>>() {
            return Ok(records);
        }
    }
    Err(MalformedResponse)
}

pub fn render_records(records: &[ExtractedTemplate]) -> String {
    serde_json::to_string_pretty(records).expect("records always serialize")
}
