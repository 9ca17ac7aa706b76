//! Invariant checks for a stream of messages through the cluster tree.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srclog_core::blackbox::{ClusterTree, Token, TreeParams};
use srclog_core::matcher::{compile, CompiledRepository, MatchOptions};
use srclog_core::{Template, TemplateBody, TemplateSource};

const VOCAB: [&str; 14] = [
    "connect", "to", "failed", "user", "x1", "42", "10.0.0.7", "ok", "a", "b", "dom:", "retry", "id=7", "<*>",
];

/// Random token stream; a small vocabulary so clusters actually merge.
pub fn random_stream(seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=40);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            let sep = if rng.gen_bool(0.1) { "  " } else { " " };
            (0..len)
                .map(|_| *VOCAB.choose(&mut rng).unwrap())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect()
}

fn matches_template(
    cache: &mut HashMap<TemplateBody, CompiledRepository>,
    template: &TemplateBody,
    message: &str,
) -> bool {
    let repo = cache.entry(template.clone()).or_insert_with(|| compile(
        vec![Template {
            id: "c".into(),
            template: template.clone(),
            level: None,
            methods: vec![],
            source: TemplateSource::Blackbox,
            match_count: None,
        }],
        MatchOptions::default(),
    )
    .unwrap());
    repo.find(message.trim()).is_some()
}

/// Determinism, token-count partition, monotone generalization and
/// self-matching for one stream.
pub fn check_stream(messages: &[String], params: TreeParams) -> Result<(), String> {
    let mut tree = ClusterTree::new(params);
    let mut twin = ClusterTree::new(params);
    let mut lengths: BTreeMap<u64, usize> = BTreeMap::new();
    let mut members: BTreeMap<u64, Vec<&str>> = BTreeMap::new();
    let mut cache = HashMap::new();
    for message in messages {
        let before: BTreeMap<u64, Vec<Token>> =
            tree.clusters().iter().map(|c| (c.id, c.tokens.clone())).collect();
        let got = tree.ingest(message).map_err(|e| e.to_string())?;
        let again = twin.ingest(message).map_err(|e| e.to_string())?;
        if got != again {
            return Err(format!("nondeterministic ingest of `{message}`: {got:?} vs {again:?}"));
        }
        let count = message.split_whitespace().count();
        if *lengths.entry(got.cluster_id).or_insert(count) != count {
            return Err(format!("cluster {} mixes token counts", got.cluster_id));
        }
        members.entry(got.cluster_id).or_default().push(message);
        for c in tree.clusters() {
            if c.tokens.len() != lengths[&c.id] {
                return Err(format!("cluster {} has {} tokens", c.id, c.tokens.len()));
            }
            if let Some(old) = before.get(&c.id) {
                for (o, n) in old.iter().zip(&c.tokens) {
                    if *o == Token::Wild && *n != Token::Wild || matches!(n, Token::Const(_)) && o != n {
                        return Err(format!("cluster {} regressed: {old:?} -> {:?}", c.id, c.tokens));
                    }
                }
            }
        }
        let own = tree.cluster(got.cluster_id).unwrap().body();
        if !matches_template(&mut cache, &own, message) {
            return Err(format!("`{message}` does not match its template `{own}`"));
        }
    }
    if tree.to_string() != twin.to_string() || tree.partition_lengths() != twin.partition_lengths() {
        return Err("trees diverged".into());
    }
    for c in tree.clusters() {
        for m in &members[&c.id] {
            if !matches_template(&mut cache, &c.body(), m) {
                return Err(format!("final template `{}` lost member `{m}`", c.template_string()));
            }
        }
    }
    for (len, counts) in tree.partition_lengths() {
        if counts.iter().any(|&c| c != len) {
            return Err(format!("partition {len} holds clusters of lengths {counts:?}"));
        }
    }
    if tree.max_fanout() > params.max_children {
        return Err(format!("fan-out {} exceeds limit", tree.max_fanout()));
    }
    Ok(())
}
