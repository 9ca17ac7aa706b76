//! Model-assisted template extraction for code that is available.

mod gateway;
mod mock;
mod postprocess;
mod prompt;
mod response;

pub use gateway::{
    chat_reply_content, chat_request_body, invoke_gateway, verify_template, GatewayConfig,
    GatewayError, GatewayReply, GatewayRequest, HttpGateway, LlmGateway,
};
pub use mock::{records_from_report, MockGateway};
pub use postprocess::{
    const_token_ratio, normalize_template, post_process, to_records, PostProcessOutcome,
    PostProcessPolicy, RejectReason, Verifier,
};
pub use prompt::{build_prompt, verifier_prompt, PromptBundle, EXTRACTION_INSTRUCTIONS};
pub use response::{parse_response, render_records, ExtractedTemplate, MalformedResponse};

use crate::analyzer::StaticReport;

/// Prompt and query the model for one unit. Units without logging calls
/// produce no request and no records.
pub fn extract_unit(
    java_code: &str,
    report: &StaticReport,
    gateway: &dyn LlmGateway,
    config: &GatewayConfig,
) -> Result<Vec<ExtractedTemplate>, GatewayError> {
    match build_prompt(java_code, report) {
        Some(bundle) => invoke_gateway(gateway, &bundle, config).map(|reply| reply.records),
        None => Ok(Vec::new()),
    }
}
