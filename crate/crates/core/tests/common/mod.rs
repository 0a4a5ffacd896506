#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use nfr4::{Answer, Model};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

const NAME_CHARS: &[char] = &[
    'a', 'b', 'e', 'k', 'r', 'z', 'A', 'M', 'Q', '0', '7', ' ', '#', ',', '-', '_', '\'', '(', ')', 'é', 'ü', 'λ', '→', '\t',
];

fn display_name(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(1..=12);
    (0..len).map(|_| *NAME_CHARS.choose(rng).unwrap()).collect()
}

fn fresh_id(rng: &mut impl Rng, used: &mut HashSet<String>) -> String {
    loop {
        let len = rng.gen_range(1..=6);
        let mut s = String::new();
        s.push(rng.gen_range(b'a'..=b'z') as char);
        for _ in 1..len {
            let pool = b"abcdefghijklmnopqrstuvwxyz0123456789_";
            s.push(pool[rng.gen_range(0..pool.len())] as char);
        }
        if used.insert(s.clone()) {
            return s;
        }
    }
}

fn subset<'a>(rng: &mut impl Rng, pool: &'a [String], at_least: Option<&'a String>) -> Vec<&'a str> {
    let mut picked: Vec<&str> = pool.iter().filter(|_| rng.gen_bool(0.35)).map(String::as_str).collect();
    if let Some(must) = at_least {
        if !picked.contains(&must.as_str()) {
            picked.push(must);
        }
    }
    if picked.is_empty() {
        picked.push(pool.choose(rng).unwrap());
    }
    picked.shuffle(rng);
    picked
}

/// A model with no error-level diagnostics and at most six elements per
/// layer. Warnings (uncovered sub-goals) may occur.
pub fn random_model(rng: &mut impl Rng) -> Model {
    let mut used = HashSet::new();
    let ns = rng.gen_range(1..=6);
    let ng = rng.gen_range(1..=6);
    let nsub = rng.gen_range(1..=6);
    let nn = rng.gen_range(1..=6);
    let stakeholders: Vec<String> = (0..ns).map(|_| fresh_id(rng, &mut used)).collect();
    let goals: Vec<String> = (0..ng).map(|_| fresh_id(rng, &mut used)).collect();
    let subgoals: Vec<String> = (0..nsub).map(|_| fresh_id(rng, &mut used)).collect();
    let nfrs: Vec<String> = (0..nn).map(|_| fresh_id(rng, &mut used)).collect();

    let mut b = Model::builder(display_name(rng));
    for s in &stakeholders {
        b = b.stakeholder(s, &display_name(rng));
    }
    // every stakeholder owns goal (i mod ng); every goal gets owner (j mod ns)
    for (j, g) in goals.iter().enumerate() {
        let mut owners = subset(rng, &stakeholders, Some(&stakeholders[j % ns]));
        for (i, s) in stakeholders.iter().enumerate() {
            if i % ng == j && !owners.contains(&s.as_str()) {
                owners.push(s);
            }
        }
        b = b.goal(g, &display_name(rng), &owners);
    }
    for (k, s) in subgoals.iter().enumerate() {
        let mut parents = subset(rng, &goals, Some(&goals[k % ng]));
        for (j, g) in goals.iter().enumerate() {
            if j % nsub == k && !parents.contains(&g.as_str()) {
                parents.push(g);
            }
        }
        b = b.subgoal(s, &display_name(rng), &parents);
    }
    let targets_pool: Vec<String> = goals.iter().chain(&subgoals).cloned().collect();
    for n in &nfrs {
        let targets = subset(rng, &targets_pool, None);
        b = b.nfr(n, &display_name(rng), &targets);
    }
    let mut model = b.build().expect("generated identifiers are valid");
    for nfr in &mut model.nfrs {
        for q in 1..=8 {
            let answer = match rng.gen_range(0..3) {
                0 => Answer::Yes,
                1 => Answer::No,
                _ => Answer::Unanswered,
            };
            nfr.checklist.set(q, answer).unwrap();
            if answer.is_answered() && rng.gen_bool(0.1) {
                nfr.checklist.set_note(q, Some(display_name(rng))).unwrap();
            }
        }
    }
    model
}

/// Brute-force reachability: NFR `i` reaches goal `j` when some target
/// names goal `j`, or names a sub-goal one of whose parents is goal `j`.
pub fn oracle_marks(model: &Model) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for nfr in &model.nfrs {
        let mut row = Vec::new();
        for goal in &model.goals {
            let mut reached = false;
            for t in &nfr.targets {
                let t = t.as_str();
                let is_goal = model.goals.iter().any(|g| g.id.as_str() == t);
                if is_goal {
                    if t == goal.id.as_str() {
                        reached = true;
                    }
                    continue;
                }
                for s in &model.subgoals {
                    if s.id.as_str() == t {
                        for p in &s.parents {
                            if p.as_str() == goal.id.as_str() {
                                reached = true;
                            }
                        }
                    }
                }
            }
            row.push(reached);
        }
        out.push(row);
    }
    out
}

/// Read the X pattern back out of a rendered matrix table.
pub fn parse_rendered_table(table: &str, goals: usize) -> Vec<Vec<bool>> {
    let mut lines = table.lines();
    let header: Vec<char> = lines.next().unwrap().chars().collect();
    let header_s: String = header.iter().collect();
    let cols: Vec<usize> = (1..=goals)
        .map(|j| {
            let label = format!(" G{j} ");
            let byte = header_s.find(&label).unwrap() + 1;
            header_s[..byte].chars().count()
        })
        .collect();
    lines
        .take_while(|l| !l.is_empty())
        .map(|l| {
            let row: Vec<char> = l.chars().collect();
            cols.iter().map(|&c| row.get(c) == Some(&'X')).collect()
        })
        .collect()
}
