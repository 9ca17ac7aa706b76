use crate::analyzer::StaticReport;

/// Instruction block sent ahead of the inputs of every extraction request.
pub const EXTRACTION_INSTRUCTIONS: &str = r#"You are an expert Java log template extractor. Please extract all log templates by given the source code and static analysis report.

Input format:
- Java source code
- Static analysis report containing:
  - Location, method name, and initial template for each log call
  - Call paths (cross-method/cross-file), showing for each level:
    - Class: fully qualified class name (e.g., com.example.A)
    - Call code: method invocation statement
    - Called function info: The source code of the called function)

Your task:
- For each log call and each of its paths, construct the final log template by concatenating string literals extracted from return statements across the call chain.
- Replace the following with <.*>:
  - Unknown functions,
  - Built-in methods,
  - Variable names,
  - Any non-literal string components,
  - All {} placeholders in the original log statement (SLF4J style), regardless of their runtime value.
- Preserve all deterministic string constants exactly as they appear.
- Output must be a JSON array. Each element has the format: {"method": class_path.method_name, "template": constructed_template, "level": log_level}"#;

/// Everything needed for one extraction request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptBundle {
    pub system_instructions: String,
    pub java_code: String,
    pub static_analysis_report: String,
    /// Structured twin of the rendered report. Not part of the prompt text.
    pub analysis: StaticReport,
}

impl PromptBundle {
    /// The single user message sent to the model.
    pub fn render(&self) -> String {
        format!(
            "{}\n\nNow process the following input:\n- java_code: {}\n- static_analysis_report:\n{}",
            self.system_instructions, self.java_code, self.static_analysis_report
        )
    }
}

/// Builds the extraction prompt for one unit; `None` when it has no logging calls.
pub fn build_prompt(java_code: &str, report: &StaticReport) -> Option<PromptBundle> {
    if report.call_count == 0 {
        return None;
    }
    Some(PromptBundle {
        system_instructions: EXTRACTION_INSTRUCTIONS.to_string(),
        java_code: java_code.to_string(),
        static_analysis_report: report.render(),
        analysis: report.clone(),
    })
}

/// Question asked of the secondary verifier for one template.
pub fn verifier_prompt(template: &str) -> String {
    format!(
        "You review log templates extracted from source code. Answer with a single word, yes or no.\n\
         Does the following log template meaningfully discriminate a failure mode, i.e. does its constant text identify a specific event rather than matching arbitrary messages?\n\
         Template: {template}"
    )
}
