#![allow(dead_code)]

pub mod blackbox_check;
pub mod eval_corpora;
pub mod oracle;
pub mod path_check;
pub mod postprocess_check;
pub mod synthetic;
