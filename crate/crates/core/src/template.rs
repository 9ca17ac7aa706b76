//! Log templates: ordered constant segments and wildcard slots.
//!
//! The textual form uses `<.*>` for every wildcard, e.g. `User_<.*>_NotFound`.
//! A [`TemplateBody`] is always kept normalized: adjacent constants are merged,
//! adjacent wildcards collapse into one and constants are never empty.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Wildcard marker in textual templates.
pub const WILDCARD: &str = "<.*>";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Segment {
    Const(String),
    Wild,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateBody {
    segments: Vec<Segment>,
}

impl TemplateBody {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn wild() -> Self {
        let mut body = Self::new();
        body.push_wild();
        body
    }

    pub fn constant(text: &str) -> Self {
        let mut body = Self::new();
        body.push_const(text);
        body
    }

    /// Builds a body from arbitrary segments, normalizing as it goes.
    pub fn from_segments<I: IntoIterator<Item = Segment>>(segments: I) -> Self {
        let mut body = Self::new();
        for seg in segments {
            body.push(seg);
        }
        body
    }

    /// Parses the `<.*>` notation. Every string is a valid template.
    pub fn parse(text: &str) -> Self {
        let mut body = Self::new();
        let mut parts = text.split(WILDCARD);
        if let Some(first) = parts.next() {
            body.push_const(first);
        }
        for part in parts {
            body.push_wild();
            body.push_const(part);
        }
        body
    }

    pub fn push(&mut self, segment: Segment) {
        match segment {
            Segment::Const(text) => self.push_const(&text),
            Segment::Wild => self.push_wild(),
        }
    }

    pub fn push_const(&mut self, text: &str) {
        if text.is_empty() {
            return;
        }
        if let Some(Segment::Const(last)) = self.segments.last_mut() {
            last.push_str(text);
        } else {
            self.segments.push(Segment::Const(text.to_string()));
        }
    }

    pub fn push_wild(&mut self) {
        if !matches!(self.segments.last(), Some(Segment::Wild)) {
            self.segments.push(Segment::Wild);
        }
    }

    pub fn append(&mut self, other: &TemplateBody) {
        for seg in &other.segments {
            self.push(seg.clone());
        }
    }

    pub fn concat(&self, other: &TemplateBody) -> TemplateBody {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn wildcard_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Wild))
            .count()
    }

    /// Total number of characters held in constant segments.
    pub fn const_chars(&self) -> usize {
        self.constants().map(|c| c.chars().count()).sum()
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Const(c) => Some(c.as_str()),
            Segment::Wild => None,
        })
    }

    pub fn has_constant(&self) -> bool {
        self.constants().next().is_some()
    }

    pub fn is_all_wildcard(&self) -> bool {
        !self.segments.is_empty() && !self.has_constant()
    }
}

impl fmt::Display for TemplateBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for seg in &self.segments {
            match seg {
                Segment::Const(c) => f.write_str(c)?,
                Segment::Wild => f.write_str(WILDCARD)?,
            }
        }
        Ok(())
    }
}

impl FromStr for TemplateBody {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Self::parse(s))
    }
}

impl Serialize for TemplateBody {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TemplateBody {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Ok(Self::parse(&text))
    }
}

/// Logger severity, ordered from least to most severe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Trace,
    Debug,
    Info,
    Warn,
    Error,
    Fatal,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::Trace,
        Level::Debug,
        Level::Info,
        Level::Warn,
        Level::Error,
        Level::Fatal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Trace => "trace",
            Level::Debug => "debug",
            Level::Info => "info",
            Level::Warn => "warn",
            Level::Error => "error",
            Level::Fatal => "fatal",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown log level `{0}`")]
pub struct UnknownLevel(pub String);

impl FromStr for Level {
    type Err = UnknownLevel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Level::ALL
            .into_iter()
            .find(|l| l.as_str() == lower)
            .ok_or_else(|| UnknownLevel(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateSource {
    Whitebox,
    Blackbox,
}

/// One entry of the template repository.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub id: String,
    pub template: TemplateBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<String>,
    pub source: TemplateSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_count: Option<u64>,
}

#[derive(Debug, Error)]
pub enum RepositoryError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads a line-oriented (JSON lines) template repository. Blank lines are skipped.
pub fn read_repository<R: BufRead>(reader: R) -> Result<Vec<Template>, RepositoryError> {
    let mut templates = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Template =
            serde_json::from_str(&line).map_err(|e| RepositoryError::Malformed {
                line: idx + 1,
                message: e.to_string(),
            })?;
        templates.push(record);
    }
    Ok(templates)
}

pub fn write_repository<W: Write>(mut writer: W, templates: &[Template]) -> std::io::Result<()> {
    for t in templates {
        serde_json::to_writer(&mut writer, t)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
