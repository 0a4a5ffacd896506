//! Completeness (MCR), checklist validation scoring, and traceability
//! matrix criticality.

use std::cmp::{Ordering, Reverse};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lint::{has_errors, validate_structure, Diagnostic};
use crate::model::{Answer, Ident, Model, ModelError, Nfr, CHECKLIST_LEN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("model has no non-functional requirements")]
    EmptyModel,
    #[error("model has {} error-level diagnostic(s)", .0.iter().filter(|d| d.is_error()).count())]
    InvalidModel(Vec<Diagnostic>),
    #[error("traceability matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("top_k threshold requires k >= 1")]
    ZeroTopK,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An exact non-negative ratio. Kept unreduced so `6/6` prints as such.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    /// `None` when `den` is zero.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        (den != 0).then_some(Ratio { num, den })
    }

    pub fn integer(n: u64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering with `places` digits, rounding half up.
    pub fn to_fixed(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let (num, den) = (self.num as u128, self.den as u128);
        let scaled = (2 * num * scale + den) / (2 * den);
        if places == 0 {
            return scaled.to_string();
        }
        format!(
            "{}.{:0width$}",
            scaled / scale,
            scaled % scale,
            width = places as usize
        )
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_fixed(4))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValidationStatus {
    ValidatedCorrect,
    NotYetValidated,
}

/// Validated-correct iff all eight checklist questions are answered `yes`.
/// Any unanswered question or any `no` leaves the NFR not yet validated.
pub fn derive_status(nfr: &Nfr) -> ValidationStatus {
    if nfr.checklist.answers().iter().all(|a| *a == Answer::Yes) {
        ValidationStatus::ValidatedCorrect
    } else {
        ValidationStatus::NotYetValidated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletenessResult {
    /// Requirements validated as correct.
    pub n_c: u64,
    /// Requirements not yet validated.
    pub n_nv: u64,
    pub mcr: Ratio,
}

impl CompletenessResult {
    /// `MCR = n_c / [n_c+n_nv] = x.xxxx`
    pub fn formula_line(&self) -> String {
        format!(
            "MCR = {} / [{}+{}] = {}",
            self.n_c,
            self.n_c,
            self.n_nv,
            self.mcr.to_fixed(4)
        )
    }
}

/// Completeness ratio `n_c / (n_c + n_nv)` over the model's NFRs.
pub fn compute_mcr(model: &Model) -> Result<CompletenessResult, AnalysisError> {
    let n_c = model
        .nfrs
        .iter()
        .filter(|n| derive_status(n) == ValidationStatus::ValidatedCorrect)
        .count() as u64;
    let total = model.nfrs.len() as u64;
    let mcr = Ratio::new(n_c, total).ok_or(AnalysisError::EmptyModel)?;
    Ok(CompletenessResult {
        n_c,
        n_nv: total - n_c,
        mcr,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChecklistSubject {
    Nfr(Ident),
    WholeModel,
}

impl fmt::Display for ChecklistSubject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChecklistSubject::Nfr(id) => write!(f, "{id}"),
            ChecklistSubject::WholeModel => f.write_str("whole model"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChecklistScore {
    pub subject: ChecklistSubject,
    pub yes_count: usize,
    pub answered_count: usize,
    /// `yes_count / 8`.
    pub metric: Ratio,
}

impl ChecklistScore {
    fn new(subject: ChecklistSubject, yes_count: usize, answered_count: usize) -> Self {
        ChecklistScore {
            subject,
            yes_count,
            answered_count,
            metric: Ratio {
                num: yes_count as u64,
                den: CHECKLIST_LEN as u64,
            },
        }
    }
}

/// Score one NFR's checklist, or the whole model. In whole-model mode a
/// question counts as `yes` only when every NFR answers it `yes` (and as
/// answered only when every NFR answers it). A model without NFRs scores 0.
pub fn score_checklist(model: &Model, subject: &ChecklistSubject) -> Result<ChecklistScore, AnalysisError> {
    match subject {
        ChecklistSubject::Nfr(id) => {
            let nfr = model.nfr(id.as_str()).ok_or_else(|| ModelError::UnknownId {
                layer: crate::model::Layer::Nfr,
                id: id.to_string(),
            })?;
            Ok(ChecklistScore::new(
                subject.clone(),
                nfr.checklist.yes_count(),
                nfr.checklist.answered_count(),
            ))
        }
        ChecklistSubject::WholeModel => {
            let mut yes = 0;
            let mut answered = 0;
            if !model.nfrs.is_empty() {
                for q in 0..CHECKLIST_LEN {
                    let slot = |n: &Nfr| n.checklist.answers()[q];
                    if model.nfrs.iter().all(|n| slot(n) == Answer::Yes) {
                        yes += 1;
                    }
                    if model.nfrs.iter().all(|n| slot(n).is_answered()) {
                        answered += 1;
                    }
                }
            }
            Ok(ChecklistScore::new(ChecklistSubject::WholeModel, yes, answered))
        }
    }
}

/// Boolean NFR × goal incidence. Rows and columns follow declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceabilityMatrix {
    pub nfr_ids: Vec<Ident>,
    pub nfr_names: Vec<String>,
    pub goal_ids: Vec<Ident>,
    pub goal_names: Vec<String>,
    /// `marks[i][j]`: NFR `i` constrains goal `j`.
    pub marks: Vec<Vec<bool>>,
}

impl TraceabilityMatrix {
    pub fn is_empty(&self) -> bool {
        self.nfr_ids.is_empty() || self.goal_ids.is_empty()
    }

    pub fn row_sum(&self, row: usize) -> usize {
        self.marks[row].iter().filter(|m| **m).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.nfr_ids.len()).map(|i| self.row_sum(i)).collect()
    }
}

/// Build the matrix. An NFR marks a goal when attached to it directly or to
/// any sub-goal having that goal as a parent. Refuses models with
/// error-level diagnostics.
pub fn build_traceability_matrix(model: &Model) -> Result<TraceabilityMatrix, AnalysisError> {
    let diagnostics = validate_structure(model);
    if has_errors(&diagnostics) {
        return Err(AnalysisError::InvalidModel(diagnostics));
    }

    let marks = model
        .nfrs
        .iter()
        .map(|nfr| {
            let lifted: Vec<&Ident> = model.attachments(nfr).lifted_goal_ids().collect();
            model
                .goals
                .iter()
                .map(|g| lifted.contains(&&g.id))
                .collect()
        })
        .collect();

    Ok(TraceabilityMatrix {
        nfr_ids: model.nfrs.iter().map(|n| n.id.clone()).collect(),
        nfr_names: model.nfrs.iter().map(|n| n.display_name.clone()).collect(),
        goal_ids: model.goals.iter().map(|g| g.id.clone()).collect(),
        goal_names: model.goals.iter().map(|g| g.display_name.clone()).collect(),
        marks,
    })
}

/// How the critical set is cut from the row scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThresholdMode {
    /// Scores strictly above the arithmetic mean.
    #[default]
    Mean,
    /// The `k` highest scores, ties broken by declaration order.
    TopK(usize),
    /// Scores at or above the given value.
    Absolute(u64),
}

impl fmt::Display for ThresholdMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdMode::Mean => f.write_str("mean"),
            ThresholdMode::TopK(k) => write!(f, "top_k={k}"),
            ThresholdMode::Absolute(t) => write!(f, "absolute={t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid threshold mode `{0}`: expected `mean`, `top_k=K` (K >= 1) or `absolute=T` (T >= 0)")]
pub struct BadThresholdMode(pub String);

impl FromStr for ThresholdMode {
    type Err = BadThresholdMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadThresholdMode(s.to_string());
        if s == "mean" {
            return Ok(ThresholdMode::Mean);
        }
        let (name, value) = s.split_once('=').ok_or_else(bad)?;
        match name {
            "top_k" => match value.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(ThresholdMode::TopK(k)),
                _ => Err(bad()),
            },
            "absolute" => value.parse::<u64>().map(ThresholdMode::Absolute).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalityReport {
    pub nfr_ids: Vec<Ident>,
    /// Row sums, in declaration order.
    pub scores: Vec<usize>,
    pub mode: ThresholdMode,
    /// Mean of the scores, `k`-th highest score, or the absolute cutoff.
    pub threshold_value: Ratio,
    /// Critical NFRs by descending score, then declaration order.
    pub critical: Vec<Ident>,
}

impl CriticalityReport {
    pub fn is_critical(&self, id: &Ident) -> bool {
        self.critical.contains(id)
    }

    pub fn score_of(&self, id: &str) -> Option<usize> {
        self.nfr_ids
            .iter()
            .position(|n| n == id)
            .map(|i| self.scores[i])
    }
}

pub fn rank_criticality(matrix: &TraceabilityMatrix, mode: ThresholdMode) -> Result<CriticalityReport, AnalysisError> {
    if matrix.is_empty() {
        return Err(AnalysisError::EmptyMatrix);
    }
    let scores = matrix.row_sums();
    let mut ranked: Vec<usize> = (0..scores.len()).collect();
    ranked.sort_by_key(|&i| (Reverse(scores[i]), i));

    let (threshold_value, selected): (Ratio, Vec<usize>) = match mode {
        ThresholdMode::Mean => {
            let n = scores.len() as u64;
            let total: u64 = scores.iter().map(|&s| s as u64).sum();
            let picked = ranked
                .iter()
                .copied()
                .filter(|&i| scores[i] as u64 * n > total)
                .collect();
            (Ratio { num: total, den: n }, picked)
        }
        ThresholdMode::TopK(0) => return Err(AnalysisError::ZeroTopK),
        ThresholdMode::TopK(k) => {
            let picked: Vec<usize> = ranked.iter().copied().take(k).collect();
            let cutoff = picked.last().map(|&i| scores[i]).unwrap_or(0);
            (Ratio::integer(cutoff as u64), picked)
        }
        ThresholdMode::Absolute(t) => {
            let picked = ranked
                .iter()
                .copied()
                .filter(|&i| scores[i] as u64 >= t)
                .collect();
            (Ratio::integer(t), picked)
        }
    };

    Ok(CriticalityReport {
        nfr_ids: matrix.nfr_ids.clone(),
        critical: selected.iter().map(|&i| matrix.nfr_ids[i].clone()).collect(),
        scores,
        mode,
        threshold_value,
    })
}
