//! Structural rules over the four-layer lattice.
//!
//! | rule | checks | severity |
//! |------|--------|----------|
//! | R1   | at least one stakeholder | error |
//! | R2   | stakeholders own goals, goals have owners | error |
//! | R3   | goals have sub-goals, sub-goals have parents | error |
//! | R4   | NFRs are attached, sub-goals are constrained | warning |
//! | REF  | every reference resolves in the adjacent layer | error |
//! | DUP  | identifiers are unique across all layers | error |

use std::collections::HashMap;
use std::fmt;

use crate::model::{Ident, Layer, Model};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    Ref,
    Dup,
}

impl RuleId {
    pub fn severity(self) -> Severity {
        match self {
            RuleId::R4 => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::R4 => "R4",
            RuleId::Ref => "REF",
            RuleId::Dup => "DUP",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// One rule violation. Severity is always `rule_id.severity()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule_id: RuleId,
    pub severity: Severity,
    pub message: String,
    /// The offending element; `None` for model-level findings (R1).
    pub subject_id: Option<Ident>,
    pub source_line: Option<u32>,
}

impl Diagnostic {
    fn new(rule_id: RuleId, subject_id: Option<&Ident>, source_line: Option<u32>, message: String) -> Self {
        Diagnostic {
            rule_id,
            severity: rule_id.severity(),
            message,
            subject_id: subject_id.cloned(),
            source_line,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.severity, self.rule_id)?;
        if let Some(line) = self.source_line {
            write!(f, " line {line}")?;
        }
        write!(f, ": {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

/// Position of an element for ordering: source line when known, then a
/// layer-major ordinal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Position {
    line: u32,
    ordinal: usize,
}

struct Collector<'m> {
    model: &'m Model,
    found: Vec<(Position, Diagnostic)>,
}

impl<'m> Collector<'m> {
    fn position(&self, layer: Layer, index: usize) -> Position {
        let m = self.model;
        let base = match layer {
            Layer::Stakeholder => 0,
            Layer::Goal => m.stakeholders.len(),
            Layer::SubGoal => m.stakeholders.len() + m.goals.len(),
            Layer::Nfr => m.stakeholders.len() + m.goals.len() + m.subgoals.len(),
        };
        Position {
            line: m.line(layer, index).unwrap_or(u32::MAX),
            ordinal: 1 + base + index,
        }
    }

    fn push(&mut self, rule: RuleId, layer: Layer, index: usize, subject: &Ident, message: String) {
        let pos = self.position(layer, index);
        let line = self.model.line(layer, index);
        self.found
            .push((pos, Diagnostic::new(rule, Some(subject), line, message)));
    }
}

/// Check every structural rule and return all violations, ordered by
/// declaration position then rule id. Never fails: dangling references are
/// reported, not assumed away.
pub fn validate_structure(model: &Model) -> Vec<Diagnostic> {
    let mut c = Collector {
        model,
        found: Vec::new(),
    };

    check_duplicates(&mut c);

    if model.stakeholders.is_empty() {
        c.found.push((
            Position { line: 0, ordinal: 0 },
            Diagnostic::new(RuleId::R1, None, None, "model declares no stakeholders".into()),
        ));
    }

    for (i, s) in model.stakeholders.iter().enumerate() {
        if !model.goals.iter().any(|g| g.owners.contains(&s.id)) {
            c.push(RuleId::R2, Layer::Stakeholder, i, &s.id, format!("stakeholder `{}` owns no goals", s.id));
        }
    }

    for (i, g) in model.goals.iter().enumerate() {
        if g.owners.is_empty() {
            c.push(RuleId::R2, Layer::Goal, i, &g.id, format!("goal `{}` has no owning stakeholder", g.id));
        }
        if !model.subgoals.iter().any(|s| s.parents.contains(&g.id)) {
            c.push(RuleId::R3, Layer::Goal, i, &g.id, format!("goal `{}` has no sub-goals", g.id));
        }
        for owner in &g.owners {
            if model.stakeholder(owner.as_str()).is_none() {
                c.push(
                    RuleId::Ref,
                    Layer::Goal,
                    i,
                    &g.id,
                    format!("goal `{}` names unknown stakeholder `{}`", g.id, owner),
                );
            }
        }
    }

    let mut covered = vec![false; model.subgoals.len()];
    for n in &model.nfrs {
        for t in &n.targets {
            if model.goal(t.as_str()).is_none() {
                for (k, s) in model.subgoals.iter().enumerate() {
                    if s.id == *t {
                        covered[k] = true;
                    }
                }
            }
        }
    }

    for (i, s) in model.subgoals.iter().enumerate() {
        if s.parents.is_empty() {
            c.push(RuleId::R3, Layer::SubGoal, i, &s.id, format!("sub-goal `{}` has no parent goal", s.id));
        }
        if !covered[i] {
            c.push(
                RuleId::R4,
                Layer::SubGoal,
                i,
                &s.id,
                format!("sub-goal `{}` is not constrained by any nfr", s.id),
            );
        }
        for parent in &s.parents {
            if model.goal(parent.as_str()).is_none() {
                c.push(
                    RuleId::Ref,
                    Layer::SubGoal,
                    i,
                    &s.id,
                    format!("sub-goal `{}` names unknown goal `{}`", s.id, parent),
                );
            }
        }
    }

    for (i, n) in model.nfrs.iter().enumerate() {
        if n.targets.is_empty() {
            c.push(
                RuleId::R4,
                Layer::Nfr,
                i,
                &n.id,
                format!("nfr `{}` is not attached to any goal or sub-goal", n.id),
            );
        }
        for t in model.attachments(n).unresolved {
            c.push(
                RuleId::Ref,
                Layer::Nfr,
                i,
                &n.id,
                format!("nfr `{}` targets unknown goal or sub-goal `{}`", n.id, t),
            );
        }
    }

    let after_nfrs = c.position(Layer::Nfr, model.nfrs.len()).ordinal;
    for (i, chk) in model.orphan_checks.iter().enumerate() {
        let line = model.orphan_check_line(i);
        let pos = Position {
            line: line.unwrap_or(u32::MAX),
            ordinal: after_nfrs + i,
        };
        c.found.push((
            pos,
            Diagnostic::new(
                RuleId::Ref,
                Some(&chk.nfr),
                line,
                format!("checklist answer {} names unknown nfr `{}`", chk.question, chk.nfr),
            ),
        ));
    }

    let mut found = c.found;
    found.sort_by_key(|(pos, d)| (*pos, d.rule_id));
    found.into_iter().map(|(_, d)| d).collect()
}

fn check_duplicates(c: &mut Collector<'_>) {
    let m = c.model;
    let mut all: Vec<(Position, Layer, usize, &Ident)> = Vec::new();
    let layers: [(Layer, Vec<&Ident>); 4] = [
        (Layer::Stakeholder, m.stakeholders.iter().map(|e| &e.id).collect()),
        (Layer::Goal, m.goals.iter().map(|e| &e.id).collect()),
        (Layer::SubGoal, m.subgoals.iter().map(|e| &e.id).collect()),
        (Layer::Nfr, m.nfrs.iter().map(|e| &e.id).collect()),
    ];
    for (layer, ids) in &layers {
        for (i, id) in ids.iter().enumerate() {
            all.push((c.position(*layer, i), *layer, i, id));
        }
    }
    all.sort_by_key(|(pos, ..)| *pos);

    let mut seen: HashMap<&Ident, Layer> = HashMap::new();
    for (_, layer, i, id) in all {
        match seen.get(id) {
            Some(first) => {
                let msg = format!("duplicate identifier `{id}` (already declared as a {first})");
                c.push(RuleId::Dup, layer, i, id, msg);
            }
            None => {
                seen.insert(id, layer);
            }
        }
    }
}
