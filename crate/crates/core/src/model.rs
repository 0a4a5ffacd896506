//! The four-layer requirements lattice: stakeholders own goals, goals are
//! decomposed into sub-goals, and non-functional requirements constrain
//! sub-goals (or goals directly).

use std::fmt;

use thiserror::Error;

/// Number of questions in the validation checklist.
pub const CHECKLIST_LEN: usize = 8;

/// Short labels for the checklist questions, in question order.
pub const CHECKLIST_LABELS: [&str; CHECKLIST_LEN] = [
    "has a source",
    "achievable in the target environment",
    "testable once implemented",
    "bounded and unambiguous",
    "reviewed for conflicts with other requirements",
    "traceable to system goals",
    "bounded in quantitative terms",
    "stated clearly",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid identifier `{0}`: expected a lowercase letter followed by lowercase letters, digits or `_`")]
    InvalidIdent(String),
    #[error("unknown {layer} `{id}`")]
    UnknownId { layer: Layer, id: String },
    #[error("checklist question {0} is out of range 1..=8")]
    BadQuestion(usize),
}

/// An element identifier: `[a-z][a-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(String);

impl Ident {
    pub fn new(s: impl Into<String>) -> Result<Self, ModelError> {
        let s = s.into();
        if Self::is_valid(&s) {
            Ok(Ident(s))
        } else {
            Err(ModelError::InvalidIdent(s))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_lowercase() => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for Ident {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ident::new(s)
    }
}

impl PartialEq<str> for Ident {
    fn eq(&self, other: &str) -> bool {
        self.0 == other
    }
}

impl PartialEq<&str> for Ident {
    fn eq(&self, other: &&str) -> bool {
        self.0 == *other
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Stakeholder,
    Goal,
    SubGoal,
    Nfr,
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::Stakeholder => "stakeholder",
            Layer::Goal => "goal",
            Layer::SubGoal => "sub-goal",
            Layer::Nfr => "nfr",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stakeholder {
    pub id: Ident,
    pub display_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub id: Ident,
    pub display_name: String,
    /// Owning stakeholder ids.
    pub owners: Vec<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubGoal {
    pub id: Ident,
    pub display_name: String,
    /// Parent goal ids.
    pub parents: Vec<Ident>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfr {
    pub id: Ident,
    pub display_name: String,
    /// Attachment targets in declaration order. Each target names a goal or
    /// a sub-goal; goals take precedence when resolving.
    pub targets: Vec<Ident>,
    pub checklist: ChecklistRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Answer {
    Yes,
    No,
    #[default]
    Unanswered,
}

impl Answer {
    pub fn is_answered(self) -> bool {
        self != Answer::Unanswered
    }
}

/// Answers to the eight checklist questions. Slots are addressed 1..=8.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChecklistRecord {
    answers: [Answer; CHECKLIST_LEN],
    notes: [Option<String>; CHECKLIST_LEN],
}

impl ChecklistRecord {
    pub fn all_yes() -> Self {
        ChecklistRecord {
            answers: [Answer::Yes; CHECKLIST_LEN],
            ..Default::default()
        }
    }

    pub fn set(&mut self, question: usize, answer: Answer) -> Result<(), ModelError> {
        let slot = Self::slot(question)?;
        self.answers[slot] = answer;
        Ok(())
    }

    pub fn set_note(&mut self, question: usize, note: Option<String>) -> Result<(), ModelError> {
        let slot = Self::slot(question)?;
        self.notes[slot] = note;
        Ok(())
    }

    pub fn answer(&self, question: usize) -> Option<Answer> {
        Self::slot(question).ok().map(|s| self.answers[s])
    }

    pub fn note(&self, question: usize) -> Option<&str> {
        Self::slot(question).ok().and_then(|s| self.notes[s].as_deref())
    }

    pub fn answers(&self) -> &[Answer; CHECKLIST_LEN] {
        &self.answers
    }

    pub fn yes_count(&self) -> usize {
        self.answers.iter().filter(|a| **a == Answer::Yes).count()
    }

    pub fn answered_count(&self) -> usize {
        self.answers.iter().filter(|a| a.is_answered()).count()
    }

    pub fn clear(&mut self) {
        *self = ChecklistRecord::default();
    }

    fn slot(question: usize) -> Result<usize, ModelError> {
        if (1..=CHECKLIST_LEN).contains(&question) {
            Ok(question - 1)
        } else {
            Err(ModelError::BadQuestion(question))
        }
    }
}

/// A checklist answer whose NFR id did not resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrphanCheck {
    pub nfr: Ident,
    pub question: usize,
    pub answer: Answer,
    pub note: Option<String>,
}

/// Source line numbers per element, parallel to the layer vectors.
#[derive(Debug, Clone, Default)]
pub(crate) struct SourceLines {
    pub stakeholders: Vec<u32>,
    pub goals: Vec<u32>,
    pub subgoals: Vec<u32>,
    pub nfrs: Vec<u32>,
    pub orphan_checks: Vec<u32>,
}

/// A complete four-layer model. Element order is declaration order.
///
/// Equality ignores provenance (`source_path` and source line numbers).
#[derive(Debug, Clone, Default)]
pub struct Model {
    pub system_name: String,
    pub stakeholders: Vec<Stakeholder>,
    pub goals: Vec<Goal>,
    pub subgoals: Vec<SubGoal>,
    pub nfrs: Vec<Nfr>,
    pub orphan_checks: Vec<OrphanCheck>,
    pub source_path: Option<String>,
    pub(crate) lines: SourceLines,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.system_name == other.system_name
            && self.stakeholders == other.stakeholders
            && self.goals == other.goals
            && self.subgoals == other.subgoals
            && self.nfrs == other.nfrs
            && self.orphan_checks == other.orphan_checks
    }
}

impl Eq for Model {}

/// An NFR's targets split by the layer they resolve to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Attachments<'a> {
    pub goals: Vec<&'a Goal>,
    pub subgoals: Vec<&'a SubGoal>,
    pub unresolved: Vec<&'a Ident>,
}

impl Model {
    pub fn new(system_name: impl Into<String>) -> Self {
        Model {
            system_name: system_name.into(),
            ..Default::default()
        }
    }

    pub fn builder(system_name: impl Into<String>) -> ModelBuilder {
        ModelBuilder {
            model: Model::new(system_name),
            error: None,
        }
    }

    pub fn stakeholder(&self, id: &str) -> Option<&Stakeholder> {
        self.stakeholders.iter().find(|s| s.id == id)
    }

    pub fn goal(&self, id: &str) -> Option<&Goal> {
        self.goals.iter().find(|g| g.id == id)
    }

    pub fn subgoal(&self, id: &str) -> Option<&SubGoal> {
        self.subgoals.iter().find(|s| s.id == id)
    }

    pub fn nfr(&self, id: &str) -> Option<&Nfr> {
        self.nfrs.iter().find(|n| n.id == id)
    }

    pub fn nfr_mut(&mut self, id: &str) -> Option<&mut Nfr> {
        self.nfrs.iter_mut().find(|n| n.id == id)
    }

    /// The first layer declaring `id`, if any.
    pub fn layer_of(&self, id: &str) -> Option<Layer> {
        if self.stakeholder(id).is_some() {
            Some(Layer::Stakeholder)
        } else if self.goal(id).is_some() {
            Some(Layer::Goal)
        } else if self.subgoal(id).is_some() {
            Some(Layer::SubGoal)
        } else if self.nfr(id).is_some() {
            Some(Layer::Nfr)
        } else {
            None
        }
    }

    pub fn goals_of_stakeholder(&self, stakeholder_id: &str) -> Result<Vec<&Goal>, ModelError> {
        self.stakeholder(stakeholder_id)
            .ok_or_else(|| unknown(Layer::Stakeholder, stakeholder_id))?;
        Ok(self
            .goals
            .iter()
            .filter(|g| g.owners.iter().any(|o| o == stakeholder_id))
            .collect())
    }

    pub fn subgoals_of_goal(&self, goal_id: &str) -> Result<Vec<&SubGoal>, ModelError> {
        self.goal(goal_id).ok_or_else(|| unknown(Layer::Goal, goal_id))?;
        Ok(self
            .subgoals
            .iter()
            .filter(|s| s.parents.iter().any(|p| p == goal_id))
            .collect())
    }

    /// NFRs attached directly to the sub-goal.
    pub fn nfrs_of_subgoal(&self, subgoal_id: &str) -> Result<Vec<&Nfr>, ModelError> {
        self.subgoal(subgoal_id)
            .ok_or_else(|| unknown(Layer::SubGoal, subgoal_id))?;
        Ok(self
            .nfrs
            .iter()
            .filter(|n| n.targets.iter().any(|t| t == subgoal_id))
            .collect())
    }

    /// NFRs constraining the goal, either directly or through one of its
    /// sub-goals.
    pub fn nfrs_of_goal(&self, goal_id: &str) -> Result<Vec<&Nfr>, ModelError> {
        self.goal(goal_id).ok_or_else(|| unknown(Layer::Goal, goal_id))?;
        Ok(self
            .nfrs
            .iter()
            .filter(|n| {
                self.attachments(n)
                    .lifted_goal_ids()
                    .any(|g| g.as_str() == goal_id)
            })
            .collect())
    }

    /// Resolve an NFR's targets. Goals win over sub-goals on collision.
    pub fn attachments<'a>(&'a self, nfr: &'a Nfr) -> Attachments<'a> {
        let mut out = Attachments::default();
        for t in &nfr.targets {
            if let Some(g) = self.goal(t.as_str()) {
                out.goals.push(g);
            } else if let Some(s) = self.subgoal(t.as_str()) {
                out.subgoals.push(s);
            } else {
                out.unresolved.push(t);
            }
        }
        out
    }

    pub(crate) fn line(&self, layer: Layer, index: usize) -> Option<u32> {
        let lines = match layer {
            Layer::Stakeholder => &self.lines.stakeholders,
            Layer::Goal => &self.lines.goals,
            Layer::SubGoal => &self.lines.subgoals,
            Layer::Nfr => &self.lines.nfrs,
        };
        lines.get(index).copied()
    }

    pub(crate) fn orphan_check_line(&self, index: usize) -> Option<u32> {
        self.lines.orphan_checks.get(index).copied()
    }
}

impl<'a> Attachments<'a> {
    /// Goal ids reached directly or by lifting each sub-goal to its parents.
    pub fn lifted_goal_ids(&self) -> impl Iterator<Item = &'a Ident> + '_ {
        self.goals
            .iter()
            .map(|g| &g.id)
            .chain(self.subgoals.iter().flat_map(|s| s.parents.iter()))
    }
}

fn unknown(layer: Layer, id: &str) -> ModelError {
    ModelError::UnknownId {
        layer,
        id: id.to_string(),
    }
}

/// Programmatic model construction. Identifiers are checked on `build`;
/// references are not resolved (that is what `validate_structure` reports).
#[derive(Debug)]
pub struct ModelBuilder {
    model: Model,
    error: Option<ModelError>,
}

impl ModelBuilder {
    fn ident(&mut self, s: &str) -> Ident {
        match Ident::new(s) {
            Ok(id) => id,
            Err(e) => {
                self.error.get_or_insert(e);
                Ident(s.to_string())
            }
        }
    }

    fn idents(&mut self, ids: &[&str]) -> Vec<Ident> {
        ids.iter().map(|s| self.ident(s)).collect()
    }

    pub fn stakeholder(mut self, id: &str, name: &str) -> Self {
        let id = self.ident(id);
        self.model.stakeholders.push(Stakeholder {
            id,
            display_name: name.to_string(),
        });
        self
    }

    pub fn goal(mut self, id: &str, name: &str, owners: &[&str]) -> Self {
        let id = self.ident(id);
        let owners = self.idents(owners);
        self.model.goals.push(Goal {
            id,
            display_name: name.to_string(),
            owners,
        });
        self
    }

    pub fn subgoal(mut self, id: &str, name: &str, parents: &[&str]) -> Self {
        let id = self.ident(id);
        let parents = self.idents(parents);
        self.model.subgoals.push(SubGoal {
            id,
            display_name: name.to_string(),
            parents,
        });
        self
    }

    pub fn nfr(mut self, id: &str, name: &str, targets: &[&str]) -> Self {
        let id = self.ident(id);
        let targets = self.idents(targets);
        self.model.nfrs.push(Nfr {
            id,
            display_name: name.to_string(),
            targets,
            checklist: ChecklistRecord::default(),
        });
        self
    }

    /// Record a checklist answer. An unknown NFR id becomes an orphan check.
    pub fn check(mut self, nfr: &str, question: usize, answer: Answer) -> Self {
        let nfr_id = self.ident(nfr);
        if !(1..=CHECKLIST_LEN).contains(&question) {
            self.error.get_or_insert(ModelError::BadQuestion(question));
            return self;
        }
        match self.model.nfr_mut(nfr) {
            Some(n) => {
                n.checklist.set(question, answer).expect("range checked");
            }
            None => self.model.orphan_checks.push(OrphanCheck {
                nfr: nfr_id,
                question,
                answer,
                note: None,
            }),
        }
        self
    }

    /// Answer all eight questions `yes` for the NFR.
    pub fn all_yes(self, nfr: &str) -> Self {
        (1..=CHECKLIST_LEN).fold(self, |b, q| b.check(nfr, q, Answer::Yes))
    }

    pub fn build(self) -> Result<Model, ModelError> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.model),
        }
    }
}
