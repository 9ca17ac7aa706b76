//! Cross-check of path enumeration against the brute-force interpreter.

use std::path::Path;

use srclog_core::analyzer::{
    build_call_graph, enumerate_paths, find_log_calls, parse_source, AnalyzerConfig, PathBudget,
};
use srclog_core::matcher::{compile, CompiledRepository, MatchOptions};
use srclog_core::{Template, TemplateBody, TemplateSource};

use super::oracle::generate;

const ARGS: [&str; 2] = ["Zq9 v", "user_7"];

fn repo_of(bodies: &[TemplateBody]) -> CompiledRepository {
    let mut unique: Vec<TemplateBody> = Vec::new();
    for b in bodies {
        if !unique.contains(b) {
            unique.push(b.clone());
        }
    }
    let templates = unique
        .into_iter()
        .enumerate()
        .map(|(i, template)| Template {
            id: i.to_string(),
            template,
            level: None,
            methods: vec![],
            source: TemplateSource::Whitebox,
            match_count: None,
        })
        .collect();
    // `<.*>` read literally: any string, including the empty one
    compile(
        templates,
        MatchOptions {
            allow_empty_inner: true,
            flexible_whitespace: false,
        },
    )
    .unwrap()
}

/// Checks one generated program in both directions. Returns the number of
/// log call sites compared.
pub fn check_program(seed: u64) -> Result<usize, String> {
    let config = AnalyzerConfig {
        budget: PathBudget {
            max_call_depth: 8,
            max_paths_per_site: 100_000,
        },
        ..AnalyzerConfig::default()
    };
    let program = generate(seed);
    let mut units = Vec::new();
    for (name, text) in program.sources() {
        units.push(parse_source(&text, Path::new(&name)).map_err(|e| format!("seed {seed}: {e}\n{text}"))?);
    }
    let graph = build_call_graph(&units, &config);
    let sites = find_log_calls(&units[0], &config);
    let mut checked = 0;
    for arg in ARGS {
        let interpreted = program.interpret_entry(arg);
        if sites.len() != interpreted.len() {
            return Err(format!("seed {seed}: {} sites, interpreter saw {}", sites.len(), interpreted.len()));
        }
        for (site, expected) in sites.iter().zip(&interpreted) {
            if site.level.as_str() != expected.level {
                return Err(format!("seed {seed}: level {} vs {}", site.level, expected.level));
            }
            let enumeration = enumerate_paths(site, &graph, config.budget);
            if enumeration.truncated {
                return Err(format!("seed {seed}: enumeration truncated"));
            }
            let bodies: Vec<TemplateBody> = enumeration.paths.iter().map(|p| p.yielded.clone()).collect();
            let repo = repo_of(&bodies);
            if let Some(output) = expected.outputs.iter().find(|o| repo.find(o).is_none()) {
                return Err(format!("seed {seed}: `{output}` matches no template of {bodies:?}"));
            }
            for body in &bodies {
                let single = repo_of(std::slice::from_ref(body));
                if !expected.outputs.iter().any(|o| single.find(o).is_some()) {
                    return Err(format!("seed {seed}: template `{body}` produced by no branch assignment"));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}
