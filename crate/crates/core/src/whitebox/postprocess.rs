//! Normalization, degenerate filtering, deduplication and optional
//! verification of model-extracted templates.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::gateway::{verify_template, GatewayConfig, LlmGateway};
use super::response::ExtractedTemplate;
use crate::template::{Segment, Template, TemplateBody, TemplateSource, WILDCARD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PostProcessPolicy {
    /// Minimum number of non-whitespace constant characters.
    pub min_const_chars: usize,
    /// Minimum share of whitespace-separated tokens carrying constant text.
    pub min_const_token_ratio: f64,
    pub enable_verifier: bool,
}

impl Default for PostProcessPolicy {
    fn default() -> Self {
        PostProcessPolicy {
            min_const_chars: 3,
            min_const_token_ratio: 0.25,
            enable_verifier: false,
        }
    }
}

impl PostProcessPolicy {
    pub fn validate(&self) -> Result<(), String> {
        if self.min_const_chars < 1 {
            return Err("min_const_chars must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.min_const_token_ratio) {
            return Err(format!(
                "min_const_token_ratio {} outside [0, 1]",
                self.min_const_token_ratio
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RejectReason {
    Empty,
    AllWildcard,
    InsufficientConstChars { found: usize, required: usize },
    LowConstTokenRatio { ratio: f64, required: f64 },
    VerifierRejected,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Empty => f.write_str("empty"),
            RejectReason::AllWildcard => f.write_str("all-wildcard"),
            RejectReason::InsufficientConstChars { found, required } => {
                write!(f, "insufficient-const-chars ({found} < {required})")
            }
            RejectReason::LowConstTokenRatio { ratio, required } => {
                write!(f, "low-const-token-ratio ({ratio:.3} < {required})")
            }
            RejectReason::VerifierRejected => f.write_str("verifier-rejected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PostProcessOutcome {
    pub accepted: Vec<Template>,
    pub rejected: Vec<(ExtractedTemplate, RejectReason)>,
    /// Verifier calls that failed; those templates were kept.
    pub verifier_errors: usize,
}

/// Canonical body for a raw model template: `{}` leftovers become wildcards,
/// adjacent wildcards collapse and whitespace at the template's outer edges
/// is trimmed.
pub fn normalize_template(raw: &str) -> TemplateBody {
    let unified = raw.replace("{}", WILDCARD);
    let body = TemplateBody::parse(&unified);
    let last = body.segments().len().saturating_sub(1);
    TemplateBody::from_segments(body.segments().iter().enumerate().map(|(i, seg)| match seg {
        Segment::Const(text) => {
            let mut t = text.as_str();
            if i == 0 {
                t = t.trim_start();
            }
            if i == last {
                t = t.trim_end();
            }
            Segment::Const(t.to_string())
        }
        Segment::Wild => Segment::Wild,
    }))
}

/// Share of whitespace tokens that contain at least one constant character.
pub fn const_token_ratio(body: &TemplateBody) -> f64 {
    let text = body.to_string();
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return 0.0;
    }
    let constant = tokens
        .iter()
        .filter(|t| !t.replace(WILDCARD, "").is_empty())
        .count();
    constant as f64 / tokens.len() as f64
}

fn non_ws_const_chars(body: &TemplateBody) -> usize {
    body.constants()
        .flat_map(str::chars)
        .filter(|c| !c.is_whitespace())
        .count()
}

fn check(body: &TemplateBody, policy: &PostProcessPolicy) -> Option<RejectReason> {
    if body.is_empty() {
        return Some(RejectReason::Empty);
    }
    let chars = non_ws_const_chars(body);
    if chars == 0 {
        return Some(RejectReason::AllWildcard);
    }
    if chars < policy.min_const_chars {
        return Some(RejectReason::InsufficientConstChars {
            found: chars,
            required: policy.min_const_chars,
        });
    }
    let ratio = const_token_ratio(body);
    if ratio < policy.min_const_token_ratio {
        return Some(RejectReason::LowConstTokenRatio {
            ratio,
            required: policy.min_const_token_ratio,
        });
    }
    None
}

/// Optional secondary verification hook.
pub struct Verifier<'a> {
    pub gateway: &'a dyn LlmGateway,
    pub config: &'a GatewayConfig,
}

/// Turns raw records into repository-ready templates.
///
/// Accepted templates keep the order of their first record and get ids
/// `wb-0001`, `wb-0002`, ... in that order. Records with identical normalized
/// bodies merge: the least severe level is kept and contributing methods are
/// collected. The verifier only runs when the policy enables it and a
/// verifier is supplied.
pub fn post_process(
    records: &[ExtractedTemplate],
    policy: &PostProcessPolicy,
    verifier: Option<&Verifier<'_>>,
) -> PostProcessOutcome {
    let mut outcome = PostProcessOutcome::default();
    let mut merged: Vec<(TemplateBody, Template, Vec<&ExtractedTemplate>)> = Vec::new();

    for record in records {
        let body = normalize_template(&record.template);
        if let Some(reason) = check(&body, policy) {
            outcome.rejected.push((record.clone(), reason));
            continue;
        }
        match merged.iter_mut().find(|(b, _, _)| *b == body) {
            Some((_, template, sources)) => {
                template.level = template.level.min(Some(record.level));
                if !template.methods.contains(&record.method) {
                    template.methods.push(record.method.clone());
                    template.methods.sort();
                }
                sources.push(record);
            }
            None => {
                let template = Template {
                    id: String::new(),
                    template: body.clone(),
                    level: Some(record.level),
                    methods: vec![record.method.clone()],
                    source: TemplateSource::Whitebox,
                    match_count: None,
                };
                merged.push((body, template, vec![record]));
            }
        }
    }

    let verify = verifier.filter(|_| policy.enable_verifier);
    for (body, mut template, sources) in merged {
        if let Some(v) = verify {
            match verify_template(v.gateway, &body, v.config) {
                Ok(true) => {}
                Ok(false) => {
                    for record in sources {
                        outcome
                            .rejected
                            .push((record.clone(), RejectReason::VerifierRejected));
                    }
                    continue;
                }
                Err(_) => outcome.verifier_errors += 1,
            }
        }
        template.id = format!("wb-{:04}", outcome.accepted.len() + 1);
        outcome.accepted.push(template);
    }
    outcome
}

/// Expands accepted templates back into one record per contributing method.
pub fn to_records(templates: &[Template]) -> Vec<ExtractedTemplate> {
    templates
        .iter()
        .flat_map(|t| {
            t.methods.iter().filter_map(move |m| {
                Some(ExtractedTemplate {
                    method: m.clone(),
                    template: t.template.to_string(),
                    level: t.level?,
                })
            })
        })
        .collect()
}
