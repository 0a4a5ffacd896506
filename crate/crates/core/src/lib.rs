//! Four-layer analysis of non-functional requirements.
//!
//! A model is a lattice of stakeholders, the goals they own, the sub-goals
//! those goals decompose into, and the non-functional requirements (NFRs)
//! constraining them. This crate parses models from a small line-oriented
//! format ([`dsl`]), checks their structure ([`lint`]), computes the
//! completeness ratio, checklist validation score and NFR × goal
//! traceability matrix ([`analysis`]), and renders the results ([`report`]).

pub mod analysis;
pub mod cli;
pub mod dsl;
pub mod lint;
pub mod model;
pub mod report;

pub use analysis::{
    build_traceability_matrix, compute_mcr, derive_status, rank_criticality, score_checklist, AnalysisError,
    ChecklistScore, ChecklistSubject, CompletenessResult, CriticalityReport, Ratio, ThresholdMode,
    TraceabilityMatrix, ValidationStatus,
};
pub use dsl::{parse, parse_bytes, serialize, ParseError, ParseErrorKind, ParseErrors, SerializeError, SourceSpan};
pub use lint::{validate_structure, Diagnostic, RuleId, Severity};
pub use model::{Answer, ChecklistRecord, Goal, Ident, Layer, Model, ModelError, Nfr, Stakeholder, SubGoal};
pub use report::{export_json, render_matrix_table, render_summary, Format, ReportBundle, TableOptions};

/// The Library management case study.
pub const LIBRARY_FIXTURE: &str = include_str!("../corpus/library.nfr4");
/// The ATM case study.
pub const ATM_FIXTURE: &str = include_str!("../corpus/atm.nfr4");
