use super::gateway::{GatewayConfig, GatewayError, GatewayRequest, LlmGateway};
use super::response::{render_records, ExtractedTemplate};
use crate::analyzer::StaticReport;
use crate::template::{Segment, TemplateBody};

/// Deterministic stand-in for a hosted model.
///
/// Extraction replies list one record per enumerated path, taking the path's
/// template as-is: literals kept, every non-literal component a wildcard.
/// Verification answers `yes` when some constant holds a word of three or
/// more letters.
#[derive(Debug, Clone, Default)]
pub struct MockGateway {
    /// Surround the JSON with prose and a code fence, as chat models tend to.
    pub chatty: bool,
}

impl MockGateway {
    pub fn chatty() -> Self {
        MockGateway { chatty: true }
    }
}

pub fn records_from_report(report: &StaticReport) -> Vec<ExtractedTemplate> {
    let mut out: Vec<ExtractedTemplate> = Vec::new();
    for call in &report.calls {
        for path in &call.paths {
            let record = ExtractedTemplate {
                method: call.method.clone(),
                template: path.yielded.to_string(),
                level: call.level,
            };
            if !out.contains(&record) {
                out.push(record);
            }
        }
    }
    out
}

fn discriminates(body: &TemplateBody) -> bool {
    body.segments().iter().any(|s| match s {
        Segment::Const(text) => text
            .split(|c: char| !c.is_alphabetic())
            .any(|word| word.chars().count() >= 3),
        Segment::Wild => false,
    })
}

impl LlmGateway for MockGateway {
    fn complete(&self, request: &GatewayRequest<'_>, _config: &GatewayConfig) -> Result<String, GatewayError> {
        match request {
            GatewayRequest::Extraction(bundle) => {
                let json = render_records(&records_from_report(&bundle.analysis));
                if self.chatty {
                    Ok(format!(
                        "Sure. Following the rules [literal constants kept], the templates are:\n```json\n{json}\n```\nLet me know if you need more."
                    ))
                } else {
                    Ok(json)
                }
            }
            GatewayRequest::Verification(body) => {
                Ok(if discriminates(body) { "yes" } else { "no" }.to_string())
            }
        }
    }
}
