//! Streaming template discovery for logs without source code.
//!
//! A fixed-depth prefix tree in the style of Drain: messages are partitioned
//! by token count, then routed through internal nodes keyed by their leading
//! tokens, and finally compared positionally against the clusters held by
//! the leaf. A sufficiently similar cluster absorbs the message and turns
//! every differing position into a wildcard; otherwise a new cluster starts.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::template::{Template, TemplateBody, TemplateSource};

/// Wildcard marker in cluster template strings.
pub const CLUSTER_WILDCARD: &str = "<*>";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TreeParams {
    /// Tree depth counting the root, the token-count layer and the leaf
    /// layer; `depth - 3` leading tokens key the internal nodes.
    pub depth: usize,
    pub sim_threshold: f64,
    pub max_children: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            depth: 4,
            sim_threshold: 0.4,
            max_children: 100,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.depth < 3 {
            return Err(format!("depth {} below the minimum of 3", self.depth));
        }
        if !(self.sim_threshold > 0.0 && self.sim_threshold <= 1.0) {
            return Err(format!("sim_threshold {} outside (0, 1]", self.sim_threshold));
        }
        if self.max_children < 1 {
            return Err("max_children must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Const(String),
    Wild,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub id: u64,
    pub tokens: Vec<Token>,
    pub match_count: u64,
}

impl Cluster {
    pub fn template_string(&self) -> String {
        let parts: Vec<&str> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Const(s) => s.as_str(),
                Token::Wild => CLUSTER_WILDCARD,
            })
            .collect();
        parts.join(" ")
    }

    pub fn body(&self) -> TemplateBody {
        let mut body = TemplateBody::new();
        for (i, token) in self.tokens.iter().enumerate() {
            if i > 0 {
                body.push_const(" ");
            }
            match token {
                Token::Const(s) => body.push_const(s),
                Token::Wild => body.push_wild(),
            }
        }
        body
    }

    /// Share of positions that equal the message token or are wildcards.
    pub fn similarity(&self, tokens: &[&str]) -> f64 {
        if self.tokens.is_empty() {
            return 1.0;
        }
        let hits = self
            .tokens
            .iter()
            .zip(tokens)
            .filter(|(t, m)| match t {
                Token::Wild => true,
                Token::Const(c) => c == *m,
            })
            .count();
        hits as f64 / self.tokens.len() as f64
    }

    fn wildcard_count(&self) -> usize {
        self.tokens.iter().filter(|t| **t == Token::Wild).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Token(String),
    CatchAll,
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: BTreeMap<Key, Node>,
    clusters: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Change {
    Created,
    Generalized,
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ingested {
    pub cluster_id: u64,
    pub template: String,
    pub change: Change,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("message is empty or whitespace only")]
pub struct EmptyMessage;

/// Single-writer clustering state.
#[derive(Debug, Clone)]
pub struct ClusterTree {
    params: TreeParams,
    by_length: BTreeMap<usize, Node>,
    clusters: Vec<Cluster>,
    dropped_empty: u64,
}

impl fmt::Display for ClusterTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clusters {
            writeln!(f, "{}\t{}\t{}", c.id, c.match_count, c.template_string())?;
        }
        Ok(())
    }
}

fn has_digit(token: &str) -> bool {
    token.bytes().any(|b| b.is_ascii_digit())
}

impl ClusterTree {
    pub fn new(params: TreeParams) -> Self {
        ClusterTree {
            params,
            by_length: BTreeMap::new(),
            clusters: Vec::new(),
            dropped_empty: 0,
        }
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn cluster(&self, id: u64) -> Option<&Cluster> {
        self.clusters.get(id.checked_sub(1)? as usize)
    }

    pub fn dropped_empty(&self) -> u64 {
        self.dropped_empty
    }

    fn prefix_tokens(&self) -> usize {
        self.params.depth - 3
    }

    /// Number of leading tokens used for routing a message of `len` tokens.
    fn route_len(&self, len: usize) -> usize {
        self.prefix_tokens().min(len.saturating_sub(1))
    }

    fn search(&self, tokens: &[&str]) -> Option<usize> {
        let mut node = self.by_length.get(&tokens.len())?;
        for token in &tokens[..self.route_len(tokens.len())] {
            node = node
                .children
                .get(&Key::Token(token.to_string()))
                .or_else(|| node.children.get(&Key::CatchAll))?;
        }
        let mut best: Option<(usize, f64, usize)> = None;
        for &idx in &node.clusters {
            let cluster = &self.clusters[idx];
            let sim = cluster.similarity(tokens);
            let params = cluster.wildcard_count();
            let better = match best {
                None => true,
                Some((_, best_sim, best_params)) => {
                    sim > best_sim || (sim == best_sim && params > best_params)
                }
            };
            if better {
                best = Some((idx, sim, params));
            }
        }
        best.filter(|(_, sim, _)| *sim >= self.params.sim_threshold)
            .map(|(idx, _, _)| idx)
    }

    fn insert(&mut self, idx: usize, tokens: &[&str]) {
        let max_children = self.params.max_children;
        let route = self.route_len(tokens.len());
        let mut node = self.by_length.entry(tokens.len()).or_default();
        for token in &tokens[..route] {
            let key = Key::Token(token.to_string());
            let next_key = if node.children.contains_key(&key) {
                key
            } else if has_digit(token) {
                Key::CatchAll
            } else if node.children.contains_key(&Key::CatchAll) {
                if node.children.len() < max_children {
                    key
                } else {
                    Key::CatchAll
                }
            } else if node.children.len() + 1 < max_children {
                key
            } else {
                Key::CatchAll
            };
            node = node.children.entry(next_key).or_default();
        }
        node.clusters.push(idx);
    }

    /// Clusters one message. `message` must already be stripped of its header.
    pub fn ingest(&mut self, message: &str) -> Result<Ingested, EmptyMessage> {
        let tokens: Vec<&str> = message.split_whitespace().collect();
        if tokens.is_empty() {
            self.dropped_empty += 1;
            return Err(EmptyMessage);
        }
        match self.search(&tokens) {
            Some(idx) => {
                let cluster = &mut self.clusters[idx];
                let mut change = Change::Unchanged;
                for (slot, token) in cluster.tokens.iter_mut().zip(&tokens) {
                    if let Token::Const(c) = slot {
                        if c != token {
                            *slot = Token::Wild;
                            change = Change::Generalized;
                        }
                    }
                }
                cluster.match_count += 1;
                Ok(Ingested {
                    cluster_id: cluster.id,
                    template: cluster.template_string(),
                    change,
                })
            }
            None => {
                let idx = self.clusters.len();
                let cluster = Cluster {
                    id: idx as u64 + 1,
                    tokens: tokens.iter().map(|t| Token::Const(t.to_string())).collect(),
                    match_count: 1,
                };
                let ingested = Ingested {
                    cluster_id: cluster.id,
                    template: cluster.template_string(),
                    change: Change::Created,
                };
                self.clusters.push(cluster);
                self.insert(idx, &tokens);
                Ok(ingested)
            }
        }
    }

    /// Current clusters as repository templates, in creation order.
    pub fn export_templates(&self) -> Vec<Template> {
        self.clusters
            .iter()
            .map(|c| Template {
                id: format!("bb-{:04}", c.id),
                template: c.body(),
                level: None,
                methods: Vec::new(),
                source: TemplateSource::Blackbox,
                match_count: Some(c.match_count),
            })
            .collect()
    }

    /// Largest number of children under any internal node.
    pub fn max_fanout(&self) -> usize {
        fn walk(node: &Node) -> usize {
            node.children
                .values()
                .map(walk)
                .max()
                .unwrap_or(0)
                .max(node.children.len())
        }
        self.by_length.values().map(walk).max().unwrap_or(0)
    }

    /// Token counts of the clusters stored under each length partition.
    pub fn partition_lengths(&self) -> Vec<(usize, Vec<usize>)> {
        fn collect(node: &Node, out: &mut Vec<usize>) {
            out.extend(node.clusters.iter().copied());
            for child in node.children.values() {
                collect(child, out);
            }
        }
        self.by_length
            .iter()
            .map(|(len, node)| {
                let mut idxs = Vec::new();
                collect(node, &mut idxs);
                (*len, idxs.iter().map(|&i| self.clusters[i].tokens.len()).collect())
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connect_example_merges() {
        let mut tree = ClusterTree::new(TreeParams::default());
        let a = tree.ingest("connect to 10.0.0.1 failed").unwrap();
        let cluster = tree.cluster(a.cluster_id).unwrap().clone();
        let tokens: Vec<&str> = "connect to 10.0.0.2 failed".split_whitespace().collect();
        assert!((cluster.similarity(&tokens) - 0.75).abs() < 1e-12);
        let b = tree.ingest("connect to 10.0.0.2 failed").unwrap();
        assert_eq!(a.cluster_id, b.cluster_id);
        assert_eq!(b.template, "connect to <*> failed");
        assert_eq!(b.change, Change::Generalized);
        assert_eq!(tree.clusters().len(), 1);
        let exported = tree.export_templates();
        assert_eq!(exported.len(), 1);
        assert_eq!(exported[0].template.to_string(), "connect to <.*> failed");
        assert_eq!(exported[0].template.wildcard_count(), 1);
        assert_eq!(exported[0].match_count, Some(2));
    }

    #[test]
    fn repeated_message_keeps_template() {
        let mut tree = ClusterTree::new(TreeParams::default());
        let a = tree.ingest("service started").unwrap();
        let b = tree.ingest("service started").unwrap();
        assert_eq!(a.cluster_id, b.cluster_id);
        assert_eq!(b.change, Change::Unchanged);
        assert_eq!(tree.cluster(a.cluster_id).unwrap().match_count, 2);
        assert_eq!(b.template, "service started");
    }

    #[test]
    fn token_count_partitions() {
        let mut tree = ClusterTree::new(TreeParams::default());
        let a = tree.ingest("a b c").unwrap();
        let b = tree.ingest("a b c d").unwrap();
        assert_ne!(a.cluster_id, b.cluster_id);
    }

    #[test]
    fn below_threshold_starts_new_cluster() {
        let mut tree = ClusterTree::new(TreeParams::default());
        let a = tree.ingest("alpha beta gamma delta epsilon").unwrap();
        let b = tree.ingest("alpha one two three four").unwrap();
        assert_ne!(a.cluster_id, b.cluster_id);
    }

    #[test]
    fn empty_messages_are_counted() {
        let mut tree = ClusterTree::new(TreeParams::default());
        assert_eq!(tree.ingest("   \t "), Err(EmptyMessage));
        assert_eq!(tree.dropped_empty(), 1);
        assert!(tree.export_templates().is_empty());
    }

    #[test]
    fn write_exception_export() {
        let mut tree = ClusterTree::new(TreeParams::default());
        tree.ingest("write exception java.io.IOException").unwrap();
        tree.ingest("write exception java.net.SocketTimeoutException").unwrap();
        let t = &tree.export_templates()[0];
        assert_eq!(t.template.to_string(), "write exception <.*>");
        assert_eq!(t.source, TemplateSource::Blackbox);
    }

    #[test]
    fn fanout_is_bounded() {
        let params = TreeParams {
            depth: 5,
            sim_threshold: 0.4,
            max_children: 3,
        };
        let mut tree = ClusterTree::new(params);
        for word in ["a", "b", "c", "d", "e", "f", "g"] {
            tree.ingest(&format!("{word} x y z")).unwrap();
            tree.ingest(&format!("q{word} {word} y z")).unwrap();
        }
        assert!(tree.max_fanout() <= 3 + 1);
    }

    #[test]
    fn digit_tokens_route_to_catch_all() {
        let mut tree = ClusterTree::new(TreeParams {
            depth: 5,
            ..TreeParams::default()
        });
        let a = tree.ingest("job 17 finished ok").unwrap();
        let b = tree.ingest("job 18 finished ok").unwrap();
        assert_eq!(a.cluster_id, b.cluster_id);
        assert_eq!(b.template, "job <*> finished ok");
    }
}
