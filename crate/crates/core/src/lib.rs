//! Log template extraction from source code, streaming clustering of logs
//! without source, and template matching with template-level evaluation.

pub mod analyzer;
pub mod blackbox;
pub mod evaluator;
pub mod matcher;
pub mod template;
pub mod whitebox;

pub use template::{Level, Segment, Template, TemplateBody, TemplateSource, WILDCARD};
