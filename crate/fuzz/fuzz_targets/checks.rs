//! Target bodies, shared with the corpus replay test of the core crate.
#![allow(dead_code)]

use std::path::Path;

use srclog_core::analyzer::{analyze_unit, build_call_graph, parse_source as parse_java, AnalyzerConfig};
use srclog_core::blackbox::{ClusterTree, TreeParams};
use srclog_core::evaluator::{parse_ground_truth, score};
use srclog_core::matcher::{compile, HeaderStripper, MatchOptions, OnlineParser, Outcome};
use srclog_core::template::{read_repository as read_repo, write_repository};
use srclog_core::whitebox::{normalize_template, parse_response as parse_reply, post_process, render_records, PostProcessPolicy};
use srclog_core::{Segment, Template, TemplateBody, TemplateSource};

fn template(id: String, body: TemplateBody) -> Template {
    Template {
        id,
        template: body,
        level: None,
        methods: vec![],
        source: TemplateSource::Whitebox,
        match_count: None,
    }
}

pub fn parse_source(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(unit) = parse_java(text, Path::new("Fuzz.java")) {
        let config = AnalyzerConfig::default();
        let units = vec![unit];
        let graph = build_call_graph(&units, &config);
        let report = analyze_unit(&units[0], &graph, &config);
        assert_eq!(report.render(), analyze_unit(&units[0], &graph, &config).render());
    }
}

pub fn parse_response(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = parse_reply(text) {
        assert_eq!(parse_reply(&render_records(&records)).unwrap(), records);
        let _ = post_process(&records, &PostProcessPolicy::default(), None);
    }
}

pub fn template_body(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let body = TemplateBody::parse(text);
    for pair in body.segments().windows(2) {
        assert!(!matches!(pair, [Segment::Wild, Segment::Wild]));
        assert!(!matches!(pair, [Segment::Const(_), Segment::Const(_)]));
    }
    let normalized = normalize_template(text);
    assert_eq!(normalize_template(&normalized.to_string()), normalized);
    let repo = compile(vec![template("f".into(), body)], MatchOptions::default()).unwrap();
    let _ = repo.find(text);
}

pub fn read_repository(data: &[u8]) {
    if let Ok(templates) = read_repo(data) {
        let mut out = Vec::new();
        write_repository(&mut out, &templates).unwrap();
        assert_eq!(read_repo(out.as_slice()).unwrap(), templates);
    }
}

pub fn template_list(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(truth) = parse_ground_truth(text) {
        let report = score(&truth.templates, &truth);
        assert!(truth.templates.is_empty() || report.f1 == 1.0);
    }
}

const TEMPLATES: [&str; 4] = ["User_<.*>_NotFound", "connect to <.*> failed", "<.*> (<.*>) [<.*>]", "Guest_<.*>"];

pub fn match_line(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let templates = TEMPLATES
        .iter()
        .enumerate()
        .map(|(i, t)| template(format!("t{i}"), TemplateBody::parse(t)))
        .collect();
    let mut parser = OnlineParser {
        repo: compile(templates, MatchOptions::default()).unwrap(),
        header: HeaderStripper::new(Some(r"^\d+ (?P<content>.*)$")).unwrap(),
        tree: ClusterTree::new(TreeParams::default()),
    };
    for line in text.lines() {
        let result = parser.process(line);
        let empty = parser.header.strip(line).trim().is_empty();
        assert_eq!(empty, result.outcome == Outcome::Empty);
    }
}
