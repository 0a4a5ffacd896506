//! Text, Markdown and JSON rendering of analysis results.

use std::io;

use serde::Serialize;

use crate::analysis::{
    build_traceability_matrix, compute_mcr, rank_criticality, score_checklist, AnalysisError, ChecklistScore,
    ChecklistSubject, CompletenessResult, CriticalityReport, ThresholdMode, TraceabilityMatrix,
};
use crate::lint::{has_errors, validate_structure, Diagnostic};
use crate::model::{Ident, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSummary {
    pub system_name: String,
    pub stakeholders: Vec<Ident>,
    pub goals: Vec<Ident>,
    pub subgoals: Vec<Ident>,
    pub nfrs: Vec<Ident>,
}

/// Every analysis result for one model snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportBundle {
    pub model: ModelSummary,
    pub diagnostics: Vec<Diagnostic>,
    pub completeness: CompletenessResult,
    pub checklist: ChecklistScore,
    pub per_nfr: Vec<ChecklistScore>,
    pub matrix: TraceabilityMatrix,
    pub criticality: CriticalityReport,
}

impl ReportBundle {
    pub fn build(model: &Model, mode: ThresholdMode) -> Result<Self, AnalysisError> {
        let diagnostics = validate_structure(model);
        if has_errors(&diagnostics) {
            return Err(AnalysisError::InvalidModel(diagnostics));
        }
        let completeness = compute_mcr(model)?;
        let checklist = score_checklist(model, &ChecklistSubject::WholeModel)?;
        let per_nfr = model
            .nfrs
            .iter()
            .map(|n| score_checklist(model, &ChecklistSubject::Nfr(n.id.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = build_traceability_matrix(model)?;
        let criticality = rank_criticality(&matrix, mode)?;
        let ids = |it: &mut dyn Iterator<Item = &Ident>| it.cloned().collect::<Vec<_>>();
        Ok(ReportBundle {
            model: ModelSummary {
                system_name: model.system_name.clone(),
                stakeholders: ids(&mut model.stakeholders.iter().map(|e| &e.id)),
                goals: ids(&mut model.goals.iter().map(|e| &e.id)),
                subgoals: ids(&mut model.subgoals.iter().map(|e| &e.id)),
                nfrs: ids(&mut model.nfrs.iter().map(|e| &e.id)),
            },
            diagnostics,
            completeness,
            checklist,
            per_nfr,
            matrix,
            criticality,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    /// Append a `Gj = goal name` legend below the table.
    pub legend: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions { legend: true }
    }
}

fn column_label(j: usize) -> String {
    format!("G{}", j + 1)
}

/// Fixed-width table: one row per NFR, one `Gj` column per goal, then the
/// row score and a `*` for critical NFRs.
pub fn render_matrix_table(
    matrix: &TraceabilityMatrix,
    criticality: &CriticalityReport,
    options: TableOptions,
) -> Result<String, AnalysisError> {
    if matrix.is_empty() {
        return Err(AnalysisError::EmptyMatrix);
    }
    let name_w = matrix
        .nfr_names
        .iter()
        .map(|n| n.chars().count())
        .chain([3])
        .max()
        .unwrap_or(3);
    let cell_w = column_label(matrix.goal_ids.len() - 1).len();

    let mut lines = Vec::with_capacity(matrix.nfr_ids.len() + 1);
    let mut header = format!("{:<name_w$}", "NFR");
    for j in 0..matrix.goal_ids.len() {
        header.push_str(&format!(" {:<cell_w$}", column_label(j)));
    }
    header.push_str(" score critical");
    lines.push(header);

    for (i, name) in matrix.nfr_names.iter().enumerate() {
        let mut row = format!("{name:<name_w$}");
        for &mark in &matrix.marks[i] {
            row.push_str(&format!(" {:<cell_w$}", if mark { "X" } else { "" }));
        }
        row.push_str(&format!(" {:>5}", criticality.scores[i]));
        if criticality.is_critical(&matrix.nfr_ids[i]) {
            row.push_str(" *");
        }
        lines.push(row.trim_end().to_string());
    }

    let mut out = lines.join("\n");
    out.push('\n');
    if options.legend {
        out.push_str("\nLegend:\n");
        for (j, name) in matrix.goal_names.iter().enumerate() {
            out.push_str(&format!("  {} = {} ({})\n", column_label(j), name, matrix.goal_ids[j]));
        }
    }
    Ok(out)
}

fn render_matrix_markdown(matrix: &TraceabilityMatrix, criticality: &CriticalityReport) -> String {
    let mut out = String::from("| NFR |");
    for j in 0..matrix.goal_ids.len() {
        out.push_str(&format!(" {} |", column_label(j)));
    }
    out.push_str(" score | critical |\n|---|");
    out.push_str(&"---|".repeat(matrix.goal_ids.len() + 2));
    out.push('\n');
    for (i, name) in matrix.nfr_names.iter().enumerate() {
        out.push_str(&format!("| {name} |"));
        for &mark in &matrix.marks[i] {
            out.push_str(if mark { " X |" } else { "  |" });
        }
        let star = if criticality.is_critical(&matrix.nfr_ids[i]) { "*" } else { "" };
        out.push_str(&format!(" {} | {} |\n", criticality.scores[i], star));
    }
    out.push('\n');
    for (j, name) in matrix.goal_names.iter().enumerate() {
        out.push_str(&format!("- {} = {} (`{}`)\n", column_label(j), name, matrix.goal_ids[j]));
    }
    out
}

fn nfr_name<'a>(matrix: &'a TraceabilityMatrix, id: &'a Ident) -> &'a str {
    matrix
        .nfr_ids
        .iter()
        .position(|n| n == id)
        .map_or(id.as_str(), |i| matrix.nfr_names[i].as_str())
}

/// `<yes>/8 = <metric>`
pub fn validation_line(score: &ChecklistScore) -> String {
    format!("{}/8 = {}", score.yes_count, score.metric.to_fixed(4))
}

/// Critical set and per-NFR scores as plain text.
pub fn render_criticality(matrix: &TraceabilityMatrix, criticality: &CriticalityReport) -> String {
    let mut out = format!(
        "mode: {} (threshold {})\n",
        criticality.mode,
        criticality.threshold_value.to_fixed(4)
    );
    let name_w = matrix.nfr_names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
    for (i, name) in matrix.nfr_names.iter().enumerate() {
        let star = if criticality.is_critical(&matrix.nfr_ids[i]) { " *" } else { "" };
        out.push_str(&format!("  {name:<name_w$} {:>3}{star}\n", criticality.scores[i]));
    }
    let names: Vec<&str> = criticality.critical.iter().map(|id| nfr_name(matrix, id)).collect();
    out.push_str(&format!("critical: {}\n", if names.is_empty() { "(none)".to_string() } else { names.join(", ") }));
    out
}

/// Human-readable report. Output is a pure function of the bundle.
pub fn render_summary(bundle: &ReportBundle, format: Format) -> String {
    match format {
        Format::Text => render_text(bundle),
        Format::Markdown => render_markdown(bundle),
    }
}

fn render_text(b: &ReportBundle) -> String {
    let m = &b.model;
    let mut out = String::new();
    out.push_str("Model\n");
    out.push_str(&format!("  system: {}\n", m.system_name));
    out.push_str(&format!("  stakeholders: {}\n", m.stakeholders.len()));
    out.push_str(&format!("  goals: {}\n", m.goals.len()));
    out.push_str(&format!("  sub-goals: {}\n", m.subgoals.len()));
    out.push_str(&format!("  nfrs: {}\n", m.nfrs.len()));

    out.push_str("\nDiagnostics\n");
    if b.diagnostics.is_empty() {
        out.push_str("  (none)\n");
    }
    for d in &b.diagnostics {
        out.push_str(&format!("  {d}\n"));
    }

    out.push_str("\nCompleteness\n");
    out.push_str("  MCR = n_c / [n_c + n_nv]\n");
    out.push_str(&format!("  {}\n", b.completeness.formula_line()));

    out.push_str("\nValidation\n");
    out.push_str(&format!("  validation: {}\n", validation_line(&b.checklist)));
    for s in &b.per_nfr {
        out.push_str(&format!(
            "  {}: {} ({} answered)\n",
            s.subject,
            validation_line(s),
            s.answered_count
        ));
    }

    out.push_str("\nTraceability\n");
    let table = render_matrix_table(&b.matrix, &b.criticality, TableOptions::default())
        .expect("bundle matrix is non-empty");
    for line in table.lines() {
        if line.is_empty() {
            out.push('\n');
        } else {
            out.push_str(&format!("  {line}\n"));
        }
    }

    out.push_str("\nCritical NFRs\n");
    for line in render_criticality(&b.matrix, &b.criticality).lines() {
        out.push_str(&format!("  {line}\n"));
    }
    out
}

fn render_markdown(b: &ReportBundle) -> String {
    let m = &b.model;
    let mut out = format!("# {}\n\n## Model\n\n", m.system_name);
    out.push_str("| layer | count |\n|---|---|\n");
    out.push_str(&format!("| stakeholders | {} |\n", m.stakeholders.len()));
    out.push_str(&format!("| goals | {} |\n", m.goals.len()));
    out.push_str(&format!("| sub-goals | {} |\n", m.subgoals.len()));
    out.push_str(&format!("| nfrs | {} |\n", m.nfrs.len()));

    out.push_str("\n## Diagnostics\n\n");
    if b.diagnostics.is_empty() {
        out.push_str("None.\n");
    }
    for d in &b.diagnostics {
        out.push_str(&format!("- {d}\n"));
    }

    out.push_str("\n## Completeness\n\n");
    out.push_str(&format!("MCR = {} / [{}+{}] = {}\n", b.completeness.n_c, b.completeness.n_c, b.completeness.n_nv, b.completeness.mcr.to_fixed(4)));

    out.push_str("\n## Validation\n\n");
    out.push_str(&format!("validation: {}\n\n", validation_line(&b.checklist)));
    out.push_str("| nfr | yes | answered | metric |\n|---|---|---|---|\n");
    for s in &b.per_nfr {
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            s.subject,
            s.yes_count,
            s.answered_count,
            s.metric.to_fixed(4)
        ));
    }

    out.push_str("\n## Traceability\n\n");
    out.push_str(&render_matrix_markdown(&b.matrix, &b.criticality));

    out.push_str("\n## Critical NFRs\n\n");
    out.push_str(&format!(
        "Mode `{}`, threshold {}.\n\n",
        b.criticality.mode,
        b.criticality.threshold_value.to_fixed(4)
    ));
    if b.criticality.critical.is_empty() {
        out.push_str("None.\n");
    }
    for id in &b.criticality.critical {
        let score = b.criticality.score_of(id.as_str()).unwrap_or(0);
        out.push_str(&format!("- {} (`{}`): {}\n", nfr_name(&b.matrix, id), id, score));
    }
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    system: &'a str,
    layers: JsonLayers<'a>,
    diagnostics: Vec<JsonDiagnostic<'a>>,
    mcr: JsonMcr,
    checklist: JsonChecklist<'a>,
    matrix: JsonMatrix<'a>,
    criticality: JsonCriticality<'a>,
}

#[derive(Serialize)]
struct JsonLayer<'a> {
    count: usize,
    ids: Vec<&'a str>,
}

#[derive(Serialize)]
struct JsonLayers<'a> {
    stakeholders: JsonLayer<'a>,
    goals: JsonLayer<'a>,
    subgoals: JsonLayer<'a>,
    nfrs: JsonLayer<'a>,
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    rule: &'static str,
    severity: String,
    subject: Option<&'a str>,
    line: Option<u32>,
    message: &'a str,
}

#[derive(Serialize)]
struct JsonMcr {
    n_c: u64,
    n_nv: u64,
    value: String,
}

#[derive(Serialize)]
struct JsonScore<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    nfr: Option<&'a str>,
    yes: usize,
    answered: usize,
    metric: String,
}

#[derive(Serialize)]
struct JsonChecklist<'a> {
    whole_model: JsonScore<'a>,
    per_nfr: Vec<JsonScore<'a>>,
}

#[derive(Serialize)]
struct JsonMatrix<'a> {
    nfr_ids: Vec<&'a str>,
    goal_ids: Vec<&'a str>,
    marks: &'a [Vec<bool>],
}

#[derive(Serialize)]
struct JsonNfrScore<'a> {
    nfr: &'a str,
    score: usize,
}

#[derive(Serialize)]
struct JsonCriticality<'a> {
    scores: Vec<JsonNfrScore<'a>>,
    threshold_mode: String,
    threshold_value: String,
    critical: Vec<&'a str>,
}

fn strs(ids: &[Ident]) -> Vec<&str> {
    ids.iter().map(Ident::as_str).collect()
}

fn layer(ids: &[Ident]) -> JsonLayer<'_> {
    JsonLayer {
        count: ids.len(),
        ids: strs(ids),
    }
}

fn json_score(s: &ChecklistScore) -> JsonScore<'_> {
    JsonScore {
        nfr: match &s.subject {
            ChecklistSubject::Nfr(id) => Some(id.as_str()),
            ChecklistSubject::WholeModel => None,
        },
        yes: s.yes_count,
        answered: s.answered_count,
        metric: s.metric.to_fixed(4),
    }
}

fn json_mcr(c: &CompletenessResult) -> JsonMcr {
    JsonMcr {
        n_c: c.n_c,
        n_nv: c.n_nv,
        value: c.mcr.to_fixed(4),
    }
}

fn json_matrix(m: &TraceabilityMatrix) -> JsonMatrix<'_> {
    JsonMatrix {
        nfr_ids: strs(&m.nfr_ids),
        goal_ids: strs(&m.goal_ids),
        marks: &m.marks,
    }
}

fn json_criticality(c: &CriticalityReport) -> JsonCriticality<'_> {
    JsonCriticality {
        scores: c
            .nfr_ids
            .iter()
            .zip(&c.scores)
            .map(|(id, &score)| JsonNfrScore { nfr: id.as_str(), score })
            .collect(),
        threshold_mode: c.mode.to_string(),
        threshold_value: c.threshold_value.to_fixed(4),
        critical: strs(&c.critical),
    }
}

/// Single-line JSON with `": "` and `", "` separators.
struct SpacedFormatter;

impl serde_json::ser::Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            writer.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        writer.write_all(b": ")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("report values always serialize");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

/// The machine-readable report: one JSON object, keys in fixed order,
/// ratios as 4-decimal strings, terminated by a newline.
pub fn export_json(bundle: &ReportBundle) -> String {
    let m = &bundle.model;
    to_json(&JsonReport {
        system: &m.system_name,
        layers: JsonLayers {
            stakeholders: layer(&m.stakeholders),
            goals: layer(&m.goals),
            subgoals: layer(&m.subgoals),
            nfrs: layer(&m.nfrs),
        },
        diagnostics: bundle
            .diagnostics
            .iter()
            .map(|d| JsonDiagnostic {
                rule: d.rule_id.as_str(),
                severity: d.severity.to_string(),
                subject: d.subject_id.as_ref().map(Ident::as_str),
                line: d.source_line,
                message: &d.message,
            })
            .collect(),
        mcr: json_mcr(&bundle.completeness),
        checklist: JsonChecklist {
            whole_model: json_score(&bundle.checklist),
            per_nfr: bundle.per_nfr.iter().map(json_score).collect(),
        },
        matrix: json_matrix(&bundle.matrix),
        criticality: json_criticality(&bundle.criticality),
    })
}

/// `{"mcr": ..., "checklist": {"whole_model": ...}}`
pub fn metrics_json(completeness: &CompletenessResult, checklist: &ChecklistScore) -> String {
    #[derive(Serialize)]
    struct Whole<'a> {
        whole_model: JsonScore<'a>,
    }
    #[derive(Serialize)]
    struct Metrics<'a> {
        mcr: JsonMcr,
        checklist: Whole<'a>,
    }
    to_json(&Metrics {
        mcr: json_mcr(completeness),
        checklist: Whole {
            whole_model: json_score(checklist),
        },
    })
}

pub fn matrix_json(matrix: &TraceabilityMatrix) -> String {
    to_json(&json_matrix(matrix))
}

pub fn criticality_json(criticality: &CriticalityReport) -> String {
    to_json(&json_criticality(criticality))
}
