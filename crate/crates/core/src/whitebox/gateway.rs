//! Transport to the language model and the retry loop around it.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::prompt::{verifier_prompt, PromptBundle};
use super::response::{parse_response, ExtractedTemplate, MalformedResponse};
use crate::template::TemplateBody;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GatewayConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub timeout_secs: u64,
    pub max_retries: u32,
    /// Environment variable holding the bearer token, if any.
    pub api_key_env: String,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        GatewayConfig {
            endpoint: "http://127.0.0.1:8000/v1/chat/completions".into(),
            model: "qwen3-max".into(),
            temperature: 0.1,
            timeout_secs: 120,
            max_retries: 2,
            api_key_env: "SRCLOG_API_KEY".into(),
        }
    }
}

impl GatewayConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("temperature {} outside [0, 2]", self.temperature));
        }
        if self.timeout_secs == 0 {
            return Err("timeout_secs must be positive".into());
        }
        if self.model.is_empty() {
            return Err("model must not be empty".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum GatewayRequest<'a> {
    Extraction(&'a PromptBundle),
    Verification(&'a TemplateBody),
}

impl GatewayRequest<'_> {
    pub fn prompt_text(&self) -> String {
        match self {
            GatewayRequest::Extraction(bundle) => bundle.render(),
            GatewayRequest::Verification(body) => verifier_prompt(&body.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GatewayError {
    #[error("gateway unavailable: {0}")]
    Unavailable(String),
    #[error("gateway timed out after {0}s")]
    Timeout(u64),
    #[error("unusable gateway reply: {0}")]
    BadReply(String),
    #[error(transparent)]
    Malformed(#[from] MalformedResponse),
    #[error("retries exhausted after {attempts} attempts: {last}")]
    RetriesExhausted {
        attempts: u32,
        last: Box<GatewayError>,
    },
}

/// A language model endpoint. Implementations must be deterministic for tests
/// to be reproducible; the HTTP gateway obviously is not.
pub trait LlmGateway: Send + Sync {
    fn complete(&self, request: &GatewayRequest<'_>, config: &GatewayConfig) -> Result<String, GatewayError>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatewayReply {
    pub text: String,
    pub records: Vec<ExtractedTemplate>,
    pub attempts: u32,
}

/// Sends the extraction prompt, retrying on transport failures and on replies
/// that do not contain a parseable record array.
pub fn invoke_gateway(
    gateway: &dyn LlmGateway,
    bundle: &PromptBundle,
    config: &GatewayConfig,
) -> Result<GatewayReply, GatewayError> {
    let attempts = config.max_retries + 1;
    let request = GatewayRequest::Extraction(bundle);
    let mut last = None;
    for attempt in 1..=attempts {
        let outcome = gateway
            .complete(&request, config)
            .and_then(|text| Ok((parse_response(&text)?, text)));
        match outcome {
            Ok((records, text)) => {
                return Ok(GatewayReply {
                    text,
                    records,
                    attempts: attempt,
                })
            }
            Err(err) => last = Some(err),
        }
    }
    let last = last.expect("at least one attempt");
    if attempts == 1 {
        Err(last)
    } else {
        Err(GatewayError::RetriesExhausted {
            attempts,
            last: Box::new(last),
        })
    }
}

/// Asks the verifier about one template. `Ok(true)` on an affirmative answer.
pub fn verify_template(
    gateway: &dyn LlmGateway,
    body: &TemplateBody,
    config: &GatewayConfig,
) -> Result<bool, GatewayError> {
    let text = gateway.complete(&GatewayRequest::Verification(body), config)?;
    let answer = text
        .trim_start_matches(|c: char| !c.is_alphanumeric())
        .to_ascii_lowercase();
    Ok(answer.starts_with("yes"))
}

/// Chat-completion request body with a single user message.
pub fn chat_request_body(prompt: &str, config: &GatewayConfig) -> Value {
    json!({
        "model": config.model,
        "temperature": config.temperature,
        "messages": [{ "role": "user", "content": prompt }],
    })
}

/// Pulls `choices[0].message.content` out of a chat-completion reply.
pub fn chat_reply_content(reply: &Value) -> Option<&str> {
    reply
        .get("choices")?
        .get(0)?
        .get("message")?
        .get("content")?
        .as_str()
}

/// OpenAI-compatible chat-completion endpoint over HTTP.
#[derive(Debug, Clone, Default)]
pub struct HttpGateway;

fn is_timeout(err: &ureq::Transport) -> bool {
    let mut source = std::error::Error::source(err);
    while let Some(e) = source {
        if let Some(io) = e.downcast_ref::<std::io::Error>() {
            return matches!(
                io.kind(),
                std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock
            );
        }
        source = e.source();
    }
    false
}

impl LlmGateway for HttpGateway {
    fn complete(&self, request: &GatewayRequest<'_>, config: &GatewayConfig) -> Result<String, GatewayError> {
        let agent = ureq::AgentBuilder::new()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build();
        let mut req = agent.post(&config.endpoint);
        if let Ok(key) = std::env::var(&config.api_key_env) {
            req = req.set("Authorization", &format!("Bearer {key}"));
        }
        let body = chat_request_body(&request.prompt_text(), config);
        let reply = match req.send_json(body) {
            Ok(resp) => resp,
            Err(ureq::Error::Status(code, _)) => {
                return Err(GatewayError::Unavailable(format!("HTTP status {code}")))
            }
            Err(ureq::Error::Transport(t)) if is_timeout(&t) => {
                return Err(GatewayError::Timeout(config.timeout_secs))
            }
            Err(ureq::Error::Transport(t)) => return Err(GatewayError::Unavailable(t.to_string())),
        };
        let value: Value = reply
            .into_json()
            .map_err(|e| GatewayError::BadReply(e.to_string()))?;
        chat_reply_content(&value)
            .map(str::to_string)
            .ok_or_else(|| GatewayError::BadReply("missing choices[0].message.content".into()))
    }
}
