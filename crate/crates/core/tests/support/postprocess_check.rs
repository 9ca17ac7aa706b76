//! Post-processing checks against a string-level oracle.

use regex::Regex;
use srclog_core::whitebox::{post_process, to_records, ExtractedTemplate, PostProcessPolicy, RejectReason};
use srclog_core::Level;

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Accept(String),
    Reject(&'static str),
}

/// Re-derives the verdict for one raw template from plain string operations.
pub fn oracle(raw: &str, policy: &PostProcessPolicy) -> Expected {
    let collapse = Regex::new(r"(<\.\*>)+").unwrap();
    let unified = raw.replace("{}", "<.*>");
    let collapsed = collapse.replace_all(&unified, "<.*>");
    let s = collapsed.trim();
    if s.is_empty() {
        return Expected::Reject("empty");
    }
    let constant_chars = s.replace("<.*>", "").chars().filter(|c| !c.is_whitespace()).count();
    if constant_chars == 0 {
        return Expected::Reject("all-wildcard");
    }
    if constant_chars < policy.min_const_chars {
        return Expected::Reject("insufficient-const-chars");
    }
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let constant_tokens = tokens.iter().filter(|t| !t.replace("<.*>", "").is_empty()).count();
    if (constant_tokens as f64) / (tokens.len() as f64) < policy.min_const_token_ratio {
        return Expected::Reject("low-const-token-ratio");
    }
    Expected::Accept(s.to_string())
}

fn reason_name(r: &RejectReason) -> &'static str {
    match r {
        RejectReason::Empty => "empty",
        RejectReason::AllWildcard => "all-wildcard",
        RejectReason::InsufficientConstChars { .. } => "insufficient-const-chars",
        RejectReason::LowConstTokenRatio { .. } => "low-const-token-ratio",
        RejectReason::VerifierRejected => "verifier-rejected",
    }
}

pub fn load_cases() -> Vec<String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/testdata/postprocess_cases.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn record(i: usize, template: &str) -> ExtractedTemplate {
    ExtractedTemplate {
        method: format!("m.C.f{i}"),
        template: template.to_string(),
        level: Level::ALL[i % Level::ALL.len()],
    }
}

/// Per-case verdicts agree with the oracle, and post-processing is idempotent.
pub fn check_cases(cases: &[String], policy: &PostProcessPolicy) -> Result<(), String> {
    for (i, raw) in cases.iter().enumerate() {
        let out = post_process(&[record(i, raw)], policy, None);
        let got = match (out.accepted.first(), out.rejected.first()) {
            (Some(t), None) => Expected::Accept(t.template.to_string()),
            (None, Some((_, r))) => Expected::Reject(reason_name(r)),
            _ => return Err(format!("case {i} `{raw}`: neither accepted nor rejected once")),
        };
        let want = oracle(raw, policy);
        if got != want {
            return Err(format!("case {i} `{raw}`: got {got:?}, oracle says {want:?}"));
        }
    }
    let records: Vec<ExtractedTemplate> = cases.iter().enumerate().map(|(i, c)| record(i, c)).collect();
    let first = post_process(&records, policy, None);
    let second = post_process(&to_records(&first.accepted), policy, None);
    if second.accepted != first.accepted || !second.rejected.is_empty() {
        return Err("post_process is not idempotent on its own output".into());
    }
    Ok(())
}

/// The lone wildcard is rejected under every valid policy.
pub fn lone_wildcard_always_rejected() -> Result<(), String> {
    for min_const_chars in 1..=8 {
        for step in 0..=10 {
            let policy = PostProcessPolicy {
                min_const_chars,
                min_const_token_ratio: step as f64 / 10.0,
                enable_verifier: false,
            };
            for raw in ["<.*>", "{}", " <.*> ", "<.*><.*>"] {
                if !post_process(&[record(0, raw)], &policy, None).accepted.is_empty() {
                    return Err(format!("`{raw}` accepted under {policy:?}"));
                }
            }
        }
    }
    Ok(())
}
