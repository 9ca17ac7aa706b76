//! Declarative run configuration: one TOML file, overridable by flags.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use srclog_core::analyzer::{AnalyzerConfig, PathBudget, DEFAULT_BUILTINS, DEFAULT_LOGGER_NAMES};
use srclog_core::blackbox::TreeParams;
use srclog_core::matcher::MatchOptions;
use srclog_core::whitebox::{GatewayConfig, PostProcessPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GatewayKind {
    /// Deterministic offline stand-in
    #[default]
    Mock,
    /// OpenAI-compatible chat completions endpoint
    Http,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GatewaySection {
    pub kind: GatewayKind,
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub timeout_secs: u64,
    pub max_retries: u32,
    pub api_key_env: String,
}

impl Default for GatewaySection {
    fn default() -> Self {
        let g = GatewayConfig::default();
        GatewaySection {
            kind: GatewayKind::Mock,
            endpoint: g.endpoint,
            model: g.model,
            temperature: g.temperature,
            timeout_secs: g.timeout_secs,
            max_retries: g.max_retries,
            api_key_env: g.api_key_env,
        }
    }
}

impl GatewaySection {
    pub fn to_gateway_config(&self) -> GatewayConfig {
        GatewayConfig {
            endpoint: self.endpoint.clone(),
            model: self.model.clone(),
            temperature: self.temperature,
            timeout_secs: self.timeout_secs,
            max_retries: self.max_retries,
            api_key_env: self.api_key_env.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalyzerSection {
    pub builtin_methods: Vec<String>,
    pub logger_names: Vec<String>,
    pub max_call_depth: usize,
    pub max_paths_per_site: usize,
}

impl Default for AnalyzerSection {
    fn default() -> Self {
        let budget = PathBudget::default();
        AnalyzerSection {
            builtin_methods: DEFAULT_BUILTINS.iter().map(|s| s.to_string()).collect(),
            logger_names: DEFAULT_LOGGER_NAMES.iter().map(|s| s.to_string()).collect(),
            max_call_depth: budget.max_call_depth,
            max_paths_per_site: budget.max_paths_per_site,
        }
    }
}

impl AnalyzerSection {
    pub fn to_analyzer_config(&self) -> AnalyzerConfig {
        AnalyzerConfig {
            builtin_methods: self.builtin_methods.clone(),
            logger_names: self.logger_names.clone(),
            budget: PathBudget {
                max_call_depth: self.max_call_depth,
                max_paths_per_site: self.max_paths_per_site,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatcherSection {
    pub allow_empty_inner: bool,
    pub flexible_whitespace: bool,
    /// Header pattern used when no dataset is selected.
    pub header: Option<String>,
    /// Header patterns per dataset name.
    pub headers: BTreeMap<String, String>,
}

impl Default for MatcherSection {
    fn default() -> Self {
        let o = MatchOptions::default();
        MatcherSection {
            allow_empty_inner: o.allow_empty_inner,
            flexible_whitespace: o.flexible_whitespace,
            header: None,
            headers: BTreeMap::new(),
        }
    }
}

impl MatcherSection {
    pub fn options(&self) -> MatchOptions {
        MatchOptions {
            allow_empty_inner: self.allow_empty_inner,
            flexible_whitespace: self.flexible_whitespace,
        }
    }

    pub fn header_for(&self, dataset: Option<&str>) -> Result<Option<&str>> {
        match dataset {
            None => Ok(self.header.as_deref()),
            Some(name) => match self.headers.get(name) {
                Some(p) => Ok(Some(p)),
                None => bail!("no header pattern configured for dataset `{name}`"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractSection {
    pub workers: usize,
}

impl Default for ExtractSection {
    fn default() -> Self {
        ExtractSection { workers: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub gateway: GatewaySection,
    pub policy: PostProcessPolicy,
    pub blackbox: TreeParams,
    pub analyzer: AnalyzerSection,
    pub matcher: MatcherSection,
    pub extract: ExtractSection,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Config> {
        let config: Config = toml::from_str(text)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Config::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        self.gateway
            .to_gateway_config()
            .validate()
            .map_err(anyhow::Error::msg)
            .context("[gateway]")?;
        self.policy.validate().map_err(anyhow::Error::msg).context("[policy]")?;
        self.blackbox.validate().map_err(anyhow::Error::msg).context("[blackbox]")?;
        if self.analyzer.max_call_depth == 0 || self.analyzer.max_paths_per_site == 0 {
            bail!("[analyzer] max_call_depth and max_paths_per_site must be at least 1");
        }
        if self.analyzer.logger_names.is_empty() {
            bail!("[analyzer] logger_names must not be empty");
        }
        if self.extract.workers == 0 {
            bail!("[extract] workers must be at least 1");
        }
        for (name, pattern) in self
            .matcher
            .header
            .iter()
            .map(|p| ("default", p))
            .chain(self.matcher.headers.iter().map(|(k, v)| (k.as_str(), v)))
        {
            regex::Regex::new(pattern).with_context(|| format!("[matcher] header pattern `{name}`"))?;
        }
        Ok(())
    }
}

/// Command line overrides for every configuration field.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Configuration file (TOML)
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,

    #[arg(long, global = true, value_enum, help_heading = "Gateway")]
    pub gateway: Option<GatewayKind>,
    #[arg(long, global = true, help_heading = "Gateway")]
    pub endpoint: Option<String>,
    #[arg(long, global = true, help_heading = "Gateway")]
    pub model: Option<String>,
    #[arg(long, global = true, help_heading = "Gateway")]
    pub temperature: Option<f64>,
    #[arg(long, global = true, help_heading = "Gateway")]
    pub timeout_secs: Option<u64>,
    #[arg(long, global = true, help_heading = "Gateway")]
    pub max_retries: Option<u32>,
    /// Environment variable holding the API key
    #[arg(long, global = true, help_heading = "Gateway")]
    pub api_key_env: Option<String>,

    #[arg(long, global = true, help_heading = "Post-processing")]
    pub min_const_chars: Option<usize>,
    #[arg(long, global = true, help_heading = "Post-processing")]
    pub min_const_token_ratio: Option<f64>,
    #[arg(long, global = true, help_heading = "Post-processing")]
    pub enable_verifier: Option<bool>,

    #[arg(long, global = true, help_heading = "Clustering")]
    pub depth: Option<usize>,
    #[arg(long, global = true, help_heading = "Clustering")]
    pub sim_threshold: Option<f64>,
    #[arg(long, global = true, help_heading = "Clustering")]
    pub max_children: Option<usize>,

    /// Replaces the built-in method list; repeat or separate with commas
    #[arg(long = "builtin", global = true, value_delimiter = ',', help_heading = "Analysis")]
    pub builtin_methods: Option<Vec<String>>,
    /// Replaces the logger receiver names; repeat or separate with commas
    #[arg(long = "logger-name", global = true, value_delimiter = ',', help_heading = "Analysis")]
    pub logger_names: Option<Vec<String>>,
    #[arg(long, global = true, help_heading = "Analysis")]
    pub max_call_depth: Option<usize>,
    #[arg(long, global = true, help_heading = "Analysis")]
    pub max_paths_per_site: Option<usize>,

    #[arg(long, global = true, help_heading = "Matching")]
    pub allow_empty_inner: Option<bool>,
    #[arg(long, global = true, help_heading = "Matching")]
    pub flexible_whitespace: Option<bool>,
    /// Header pattern; a `content` group marks the message
    #[arg(long, global = true, help_heading = "Matching")]
    pub header: Option<String>,
    /// Use the header pattern configured for this dataset
    #[arg(long, global = true, help_heading = "Matching")]
    pub dataset: Option<String>,

    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

macro_rules! set {
    ($src:expr => $dst:expr) => {
        if let Some(v) = $src.clone() {
            $dst = v;
        }
    };
}

impl Overrides {
    /// Loads the configuration file, if any, applies flags and validates.
    pub fn resolve(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        set!(self.gateway => c.gateway.kind);
        set!(self.endpoint => c.gateway.endpoint);
        set!(self.model => c.gateway.model);
        set!(self.temperature => c.gateway.temperature);
        set!(self.timeout_secs => c.gateway.timeout_secs);
        set!(self.max_retries => c.gateway.max_retries);
        set!(self.api_key_env => c.gateway.api_key_env);
        set!(self.min_const_chars => c.policy.min_const_chars);
        set!(self.min_const_token_ratio => c.policy.min_const_token_ratio);
        set!(self.enable_verifier => c.policy.enable_verifier);
        set!(self.depth => c.blackbox.depth);
        set!(self.sim_threshold => c.blackbox.sim_threshold);
        set!(self.max_children => c.blackbox.max_children);
        set!(self.builtin_methods => c.analyzer.builtin_methods);
        set!(self.logger_names => c.analyzer.logger_names);
        set!(self.max_call_depth => c.analyzer.max_call_depth);
        set!(self.max_paths_per_site => c.analyzer.max_paths_per_site);
        set!(self.allow_empty_inner => c.matcher.allow_empty_inner);
        set!(self.flexible_whitespace => c.matcher.flexible_whitespace);
        if self.header.is_some() {
            c.matcher.header = self.header.clone();
        }
        set!(self.workers => c.extract.workers);
        c.validate()?;
        if self.dataset.is_some() && self.header.is_none() {
            c.matcher.header_for(self.dataset.as_deref())?;
        }
        Ok(c)
    }

    /// Header pattern in effect: an explicit flag wins over a dataset.
    pub fn header_pattern<'c>(&self, config: &'c Config) -> Result<Option<&'c str>> {
        if self.header.is_some() {
            return Ok(config.matcher.header.as_deref());
        }
        config.matcher.header_for(self.dataset.as_deref())
    }
}
