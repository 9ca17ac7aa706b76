//! Synthetic template repositories and log streams.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srclog_core::{Segment, Template, TemplateBody, TemplateSource};

const NOUNS: [&str; 12] = [
    "block", "container", "session", "lease", "replica", "task", "job", "node", "channel", "queue", "snapshot", "segment",
];
const VERBS: [&str; 8] = ["started", "stopped", "failed", "committed", "evicted", "retried", "opened", "closed"];

/// `n` distinct white-box style templates.
pub fn templates(n: usize, seed: u64) -> Vec<Template> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let noun = NOUNS[i % NOUNS.len()];
            let verb = VERBS[(i / NOUNS.len()) % VERBS.len()];
            let text = match rng.gen_range(0..4) {
                0 => format!("{noun} <.*> {verb} after <.*> ms [{i}]"),
                1 => format!("Component{i}: {noun} {verb} for id=<.*>"),
                2 => format!("{verb} {noun}_{i} on host <.*> with status <.*>"),
                _ => format!("{noun}{i} {verb}"),
            };
            Template {
                id: format!("wb-{:04}", i + 1),
                template: TemplateBody::parse(&text),
                level: None,
                methods: vec![],
                source: TemplateSource::Whitebox,
                match_count: None,
            }
        })
        .collect()
}

fn fill(body: &TemplateBody, rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    for s in body.segments() {
        match s {
            Segment::Const(c) => out.push_str(c),
            Segment::Wild => {
                let v: u32 = rng.gen_range(1..100_000);
                out.push_str(&v.to_string());
            }
        }
    }
    out
}

/// Lines drawn from `templates`, with roughly `noise` of them unmatched.
pub fn lines(templates: &[Template], count: usize, noise: f64, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            if rng.gen_bool(noise) {
                format!(
                    "library {} message {} code {}",
                    NOUNS.choose(&mut rng).unwrap(),
                    rng.gen_range(0..50),
                    rng.gen_range(0..5)
                )
            } else {
                fill(&templates.choose(&mut rng).unwrap().template, &mut rng)
            }
        })
        .collect()
}
