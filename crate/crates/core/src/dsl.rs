//! Line-oriented text format for four-layer models (`.nfr4`).
//!
//! ```text
//! # comment
//! system "ATM System"
//! stakeholder customer "Customer"
//! goal withdraw_money "Withdraw money" for customer
//! subgoal enter_amount "Enter amount" of withdraw_money, deposit_money
//! nfr usability "Usability" on enter_amount
//! check usability 1 yes
//! ```
//!
//! One statement per line. Display names are double-quoted with no escapes.
//! `check <nfr> <n> <yes|no>` may carry a trailing quoted note.

use std::fmt;

use crate::lint::{validate_structure, RuleId};
use crate::model::{Answer, ChecklistRecord, Goal, Ident, Model, Nfr, OrphanCheck, Stakeholder, SubGoal, CHECKLIST_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    /// 1-based.
    pub line: u32,
    /// 1-based, in characters.
    pub column: u32,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    UnknownKeyword,
    MalformedLine,
    BadIdentifier,
    UnterminatedString,
    DuplicateSystem,
    MissingSystem,
    BadChecklistIndex,
    BadChecklistAnswer,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseErrorKind::UnknownKeyword => "unknown-keyword",
            ParseErrorKind::MalformedLine => "malformed-line",
            ParseErrorKind::BadIdentifier => "bad-identifier",
            ParseErrorKind::UnterminatedString => "unterminated-string",
            ParseErrorKind::DuplicateSystem => "duplicate-system",
            ParseErrorKind::MissingSystem => "missing-system",
            ParseErrorKind::BadChecklistIndex => "bad-checklist-index",
            ParseErrorKind::BadChecklistAnswer => "bad-checklist-answer",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error[{}]: {}", self.span, self.kind, self.message)
    }
}

/// Every error found in one pass over the input, in line order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<ParseError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SerializeError {
    #[error("cannot serialize model with unresolved reference: {0}")]
    DanglingReference(String),
    #[error("cannot serialize model with duplicate identifier: {0}")]
    DuplicateId(String),
    #[error("{0} has an empty reference list, which the text format cannot express")]
    EmptyList(String),
    #[error("display name {0:?} is empty or contains a quote or line break")]
    BadDisplayName(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Comma,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: u32,
}

impl Token {
    fn text(&self) -> String {
        match &self.tok {
            Tok::Word(w) => w.clone(),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Comma => ",".into(),
        }
    }
}

fn err(line: u32, column: u32, kind: ParseErrorKind, message: String) -> ParseError {
    ParseError {
        span: SourceSpan { line, column },
        kind,
        message,
    }
}

fn tokenize(text: &str, line: u32) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i as u32 + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == ',' {
            out.push(Token { tok: Tok::Comma, col });
            i += 1;
        } else if c == '"' {
            let start = i + 1;
            match chars[start..].iter().position(|&c| c == '"') {
                Some(len) => {
                    let s: String = chars[start..start + len].iter().collect();
                    out.push(Token { tok: Tok::Str(s), col });
                    i = start + len + 1;
                }
                None => {
                    let rest: String = chars[i..].iter().collect();
                    return Err(err(
                        line,
                        col,
                        ParseErrorKind::UnterminatedString,
                        format!("unterminated string `{rest}`"),
                    ));
                }
            }
        } else {
            let start = i;
            while i < chars.len() && !chars[i].is_whitespace() && !matches!(chars[i], '"' | ',' | '#') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                col,
            });
        }
    }
    Ok(out)
}

enum Statement {
    System(String),
    Stakeholder(Stakeholder),
    Goal(Goal),
    SubGoal(SubGoal),
    Nfr(Nfr),
    Check {
        nfr: Ident,
        question: usize,
        answer: Answer,
        note: Option<String>,
    },
}

struct LineParser {
    toks: Vec<Token>,
    pos: usize,
    line: u32,
    end_col: u32,
}

impl LineParser {
    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn malformed(&self, tok: Option<&Token>, expected: &str) -> ParseError {
        match tok {
            Some(t) => err(
                self.line,
                t.col,
                ParseErrorKind::MalformedLine,
                format!("expected {expected}, found `{}`", t.text()),
            ),
            None => err(
                self.line,
                self.end_col,
                ParseErrorKind::MalformedLine,
                format!("expected {expected}, found end of line"),
            ),
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        let tok = self.next();
        match &tok {
            Some(Token { tok: Tok::Word(w), col }) => Ident::new(w.as_str()).map_err(|_| {
                err(
                    self.line,
                    *col,
                    ParseErrorKind::BadIdentifier,
                    format!("bad identifier `{w}`"),
                )
            }),
            _ => Err(self.malformed(tok.as_ref(), "an identifier")),
        }
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let tok = self.next();
        match &tok {
            Some(Token { tok: Tok::Str(s), col }) => {
                if s.is_empty() {
                    Err(err(
                        self.line,
                        *col,
                        ParseErrorKind::MalformedLine,
                        "empty display name `\"\"`".into(),
                    ))
                } else {
                    Ok(s.clone())
                }
            }
            _ => Err(self.malformed(tok.as_ref(), "a quoted display name")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let tok = self.next();
        match &tok {
            Some(Token { tok: Tok::Word(w), .. }) if w == kw => Ok(()),
            _ => Err(self.malformed(tok.as_ref(), &format!("`{kw}`"))),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<Ident>, ParseError> {
        let mut ids = vec![self.ident()?];
        while let Some(Token { tok: Tok::Comma, .. }) = self.toks.get(self.pos) {
            self.pos += 1;
            ids.push(self.ident()?);
        }
        Ok(ids)
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.next() {
            None => Ok(()),
            Some(t) => Err(self.malformed(Some(&t), "end of line")),
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let head = self.next().expect("non-empty line");
        let kw = match &head.tok {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.malformed(Some(&head), "a statement keyword")),
        };
        let stmt = match kw.as_str() {
            "system" => Statement::System(self.string()?),
            "stakeholder" => {
                let id = self.ident()?;
                let display_name = self.string()?;
                Statement::Stakeholder(Stakeholder { id, display_name })
            }
            "goal" => {
                let id = self.ident()?;
                let display_name = self.string()?;
                self.keyword("for")?;
                let owners = self.ident_list()?;
                Statement::Goal(Goal { id, display_name, owners })
            }
            "subgoal" => {
                let id = self.ident()?;
                let display_name = self.string()?;
                self.keyword("of")?;
                let parents = self.ident_list()?;
                Statement::SubGoal(SubGoal { id, display_name, parents })
            }
            "nfr" => {
                let id = self.ident()?;
                let display_name = self.string()?;
                self.keyword("on")?;
                let targets = self.ident_list()?;
                Statement::Nfr(Nfr {
                    id,
                    display_name,
                    targets,
                    checklist: ChecklistRecord::default(),
                })
            }
            "check" => {
                let nfr = self.ident()?;
                let question = self.question()?;
                let answer = self.answer()?;
                let note = match self.toks.get(self.pos) {
                    Some(Token { tok: Tok::Str(s), .. }) => {
                        self.pos += 1;
                        Some(s.clone())
                    }
                    _ => None,
                };
                Statement::Check {
                    nfr,
                    question,
                    answer,
                    note,
                }
            }
            _ => {
                return Err(err(
                    self.line,
                    head.col,
                    ParseErrorKind::UnknownKeyword,
                    format!("unknown keyword `{kw}`"),
                ))
            }
        };
        self.end()?;
        Ok(stmt)
    }

    fn question(&mut self) -> Result<usize, ParseError> {
        let tok = self.next();
        match &tok {
            Some(Token { tok: Tok::Word(w), col }) => {
                let n = if w.bytes().all(|b| b.is_ascii_digit()) {
                    w.parse::<usize>().ok()
                } else {
                    None
                };
                match n {
                    Some(n) if (1..=CHECKLIST_LEN).contains(&n) => Ok(n),
                    _ => Err(err(
                        self.line,
                        *col,
                        ParseErrorKind::BadChecklistIndex,
                        format!("checklist question `{w}` is not in 1..8"),
                    )),
                }
            }
            _ => Err(self.malformed(tok.as_ref(), "a checklist question number")),
        }
    }

    fn answer(&mut self) -> Result<Answer, ParseError> {
        let tok = self.next();
        match &tok {
            Some(Token { tok: Tok::Word(w), col }) => match w.as_str() {
                "yes" => Ok(Answer::Yes),
                "no" => Ok(Answer::No),
                _ => Err(err(
                    self.line,
                    *col,
                    ParseErrorKind::BadChecklistAnswer,
                    format!("checklist answer `{w}` is not `yes` or `no`"),
                )),
            },
            _ => Err(self.malformed(tok.as_ref(), "`yes` or `no`")),
        }
    }
}

/// Parse model source text. All errors are collected in one pass.
/// Reference problems are left for `validate_structure`.
pub fn parse(source: &str) -> Result<Model, ParseErrors> {
    let mut model = Model::default();
    let mut errors = Vec::new();
    let mut system_line: Option<u32> = None;
    let mut element_before_system: Option<(u32, u32, String)> = None;
    let mut checks: Vec<(u32, Statement)> = Vec::new();

    for (idx, raw) in source.split('\n').enumerate() {
        let line_no = u32::try_from(idx + 1).unwrap_or(u32::MAX);
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        let toks = match tokenize(text, line_no) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        if toks.is_empty() {
            continue;
        }
        let head_col = toks[0].col;
        let head_text = toks[0].text();
        let mut lp = LineParser {
            toks,
            pos: 0,
            line: line_no,
            end_col: text.chars().count() as u32 + 1,
        };
        let stmt = match lp.statement() {
            Ok(s) => s,
            Err(e) => {
                errors.push(e);
                continue;
            }
        };
        if !matches!(stmt, Statement::System(_)) && system_line.is_none() && element_before_system.is_none() {
            element_before_system = Some((line_no, head_col, head_text));
        }
        match stmt {
            Statement::System(name) => {
                if system_line.is_some() {
                    errors.push(err(
                        line_no,
                        head_col,
                        ParseErrorKind::DuplicateSystem,
                        format!("duplicate `system` statement `\"{name}\"`"),
                    ));
                } else {
                    system_line = Some(line_no);
                    model.system_name = name;
                }
            }
            Statement::Stakeholder(s) => {
                model.stakeholders.push(s);
                model.lines.stakeholders.push(line_no);
            }
            Statement::Goal(g) => {
                model.goals.push(g);
                model.lines.goals.push(line_no);
            }
            Statement::SubGoal(s) => {
                model.subgoals.push(s);
                model.lines.subgoals.push(line_no);
            }
            Statement::Nfr(n) => {
                model.nfrs.push(n);
                model.lines.nfrs.push(line_no);
            }
            c @ Statement::Check { .. } => checks.push((line_no, c)),
        }
    }

    match (system_line, element_before_system) {
        (_, Some((line, col, tok))) => errors.push(err(
            line,
            col,
            ParseErrorKind::MissingSystem,
            format!("`{tok}` appears before the `system` statement"),
        )),
        (None, None) => errors.push(err(
            1,
            1,
            ParseErrorKind::MissingSystem,
            "missing `system` statement".into(),
        )),
        _ => {}
    }

    for (line_no, stmt) in checks {
        if let Statement::Check {
            nfr,
            question,
            answer,
            note,
        } = stmt
        {
            match model.nfr_mut(nfr.as_str()) {
                Some(n) => {
                    n.checklist.set(question, answer).expect("question range checked");
                    n.checklist.set_note(question, note).expect("question range checked");
                }
                None => {
                    model.orphan_checks.push(OrphanCheck {
                        nfr,
                        question,
                        answer,
                        note,
                    });
                    model.lines.orphan_checks.push(line_no);
                }
            }
        }
    }

    if errors.is_empty() {
        Ok(model)
    } else {
        errors.sort_by_key(|e| e.span);
        Err(ParseErrors(errors))
    }
}

/// Parse raw bytes. Invalid UTF-8 sequences are replaced, never rejected.
pub fn parse_bytes(source: &[u8]) -> Result<Model, ParseErrors> {
    parse(&String::from_utf8_lossy(source))
}

/// Render the canonical text for a model. `parse(&serialize(m)?)` equals `m`.
pub fn serialize(model: &Model) -> Result<String, SerializeError> {
    let diagnostics = validate_structure(model);
    if let Some(d) = diagnostics.iter().find(|d| d.rule_id == RuleId::Ref) {
        return Err(SerializeError::DanglingReference(d.message.clone()));
    }
    if let Some(d) = diagnostics.iter().find(|d| d.rule_id == RuleId::Dup) {
        return Err(SerializeError::DuplicateId(d.message.clone()));
    }

    let empty = model
        .goals
        .iter()
        .find(|g| g.owners.is_empty())
        .map(|g| format!("goal `{}`", g.id))
        .or_else(|| {
            model
                .subgoals
                .iter()
                .find(|s| s.parents.is_empty())
                .map(|s| format!("sub-goal `{}`", s.id))
        })
        .or_else(|| {
            model
                .nfrs
                .iter()
                .find(|n| n.targets.is_empty())
                .map(|n| format!("nfr `{}`", n.id))
        });
    if let Some(what) = empty {
        return Err(SerializeError::EmptyList(what));
    }

    let mut out = String::new();
    push_line(&mut out, &["system", &quote(&model.system_name)?]);
    for s in &model.stakeholders {
        push_line(&mut out, &["stakeholder", s.id.as_str(), &quote(&s.display_name)?]);
    }
    for g in &model.goals {
        push_line(&mut out, &["goal", g.id.as_str(), &quote(&g.display_name)?, "for", &join(&g.owners)]);
    }
    for s in &model.subgoals {
        push_line(&mut out, &["subgoal", s.id.as_str(), &quote(&s.display_name)?, "of", &join(&s.parents)]);
    }
    for n in &model.nfrs {
        push_line(&mut out, &["nfr", n.id.as_str(), &quote(&n.display_name)?, "on", &join(&n.targets)]);
    }
    for n in &model.nfrs {
        for q in 1..=CHECKLIST_LEN {
            let answer = match n.checklist.answer(q) {
                Some(Answer::Yes) => "yes",
                Some(Answer::No) => "no",
                _ => continue,
            };
            let q_text = q.to_string();
            let mut parts = vec!["check", n.id.as_str(), &q_text, answer];
            let note = n.checklist.note(q).map(quote).transpose()?;
            if let Some(note) = &note {
                parts.push(note);
            }
            push_line(&mut out, &parts);
        }
    }
    Ok(out)
}

fn quote(s: &str) -> Result<String, SerializeError> {
    if s.is_empty() || s.contains(['"', '\n', '\r']) {
        return Err(SerializeError::BadDisplayName(s.to_string()));
    }
    Ok(format!("\"{s}\""))
}

fn join(ids: &[Ident]) -> String {
    ids.iter().map(Ident::as_str).collect::<Vec<_>>().join(", ")
}

fn push_line(out: &mut String, parts: &[&str]) {
    out.push_str(&parts.join(" "));
    out.push('\n');
}
