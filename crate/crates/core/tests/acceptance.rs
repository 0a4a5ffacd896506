//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use common::{corpus, oracle_marks, random_model};
use itertools::Itertools;
use nfr4::{
    build_traceability_matrix, compute_mcr, parse, parse_bytes, rank_criticality, serialize, validate_structure,
    Answer, Model, RuleId, Severity, ThresholdMode, ATM_FIXTURE, LIBRARY_FIXTURE,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn nfr4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfr4")).args(args).output().expect("spawn nfr4")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

type Scored = (Vec<(String, u64)>, Vec<String>);

fn critical_json(path: &str, mode: &str) -> Result<Scored, String> {
    let out = nfr4(&["critical", path, "--format", "json", "--mode", mode]);
    ensure!(out.status.code() == Some(0), "critical exited {:?}", out.status.code());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).map_err(|e| e.to_string())?;
    let scores = v["scores"]
        .as_array()
        .ok_or("no scores")?
        .iter()
        .map(|s| (s["nfr"].as_str().unwrap().to_string(), s["score"].as_u64().unwrap()))
        .collect();
    let critical = v["critical"]
        .as_array()
        .ok_or("no critical")?
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    Ok((scores, critical))
}

fn metrics_golden(file: &str, line: &str, n_c: u64, counts: Option<(usize, usize, usize, usize)>) -> Outcome {
    let path = corpus(file);
    let path = path.to_str().unwrap();
    let start = Instant::now();
    let out = nfr4(&["metrics", path]);
    let elapsed = start.elapsed();
    ensure!(out.status.code() == Some(0), "metrics exited {:?}", out.status.code());
    let text = stdout(&out);
    ensure!(text.lines().any(|l| l == line), "missing `{line}` in {text:?}");
    ensure!(text.lines().any(|l| l.starts_with("validation: 8/8")), "validation not 8/8: {text:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");

    let model = parse(&std::fs::read_to_string(path).unwrap()).map_err(|e| e.to_string())?;
    let c = compute_mcr(&model).map_err(|e| e.to_string())?;
    ensure!(c.n_c == n_c && c.n_nv == 0, "n_c={} n_nv={}", c.n_c, c.n_nv);
    ensure!(c.mcr.to_fixed(4) == "1.0000", "mcr {}", c.mcr);
    ensure!(
        model.nfrs.iter().all(|n| n.checklist.yes_count() == 8),
        "some NFR is not answered yes on all 8 questions"
    );
    if let Some((s, g, sg, n)) = counts {
        ensure!(model.stakeholders.len() == s, "stakeholders {}", model.stakeholders.len());
        ensure!(model.goals.len() >= g, "goals {}", model.goals.len());
        ensure!(model.subgoals.len() == sg, "sub-goals {}", model.subgoals.len());
        ensure!(model.nfrs.len() == n, "nfrs {}", model.nfrs.len());
    }
    Ok(format!("{line}, n_c={n_c}, n_nv=0, validation 8/8, {elapsed:.0?}"))
}

fn criticality_golden(file: &str, expected_scores: &[(&str, u64)], expected_critical: &[&str]) -> Outcome {
    let path = corpus(file);
    let (scores, critical) = critical_json(path.to_str().unwrap(), "mean")?;
    let scores_ref: Vec<(&str, u64)> = scores.iter().map(|(n, s)| (n.as_str(), *s)).collect();
    ensure!(scores_ref == expected_scores, "scores {scores_ref:?}");
    ensure!(critical == expected_critical, "critical {critical:?}");
    Ok(format!("scores {:?}, critical {:?}", scores_ref.iter().map(|s| s.1).collect::<Vec<_>>(), critical))
}

fn ac1() -> Outcome {
    metrics_golden("library.nfr4", "MCR = 6 / [6+0] = 1.0000", 6, Some((3, 11, 21, 6)))
}

fn ac2() -> Outcome {
    criticality_golden(
        "library.nfr4",
        &[
            ("usability", 7),
            ("performance", 3),
            ("security", 1),
            ("reliability", 2),
            ("safety", 2),
            ("flexibility", 1),
        ],
        &["usability", "performance"],
    )
}

fn ac3() -> Outcome {
    metrics_golden("atm.nfr4", "MCR = 5 / [5+0] = 1.0000", 5, None)
}

fn ac4() -> Outcome {
    criticality_golden(
        "atm.nfr4",
        &[
            ("usability", 6),
            ("performance", 4),
            ("security", 4),
            ("reliability", 2),
            ("safety", 1),
        ],
        &["usability", "performance", "security"],
    )
}

fn ac5() -> Outcome {
    let start = Instant::now();
    let base = parse(LIBRARY_FIXTURE).map_err(|e| e.to_string())?;
    let ids: Vec<String> = base.nfrs.iter().map(|n| n.id.to_string()).collect();
    ensure!(ids.len() == 6, "expected 6 NFRs");
    for mask in 0u32..64 {
        let mut m = base.clone();
        for (i, id) in ids.iter().enumerate() {
            if mask & (1 << i) != 0 {
                m.nfr_mut(id).unwrap().checklist.clear();
            }
        }
        let removed = mask.count_ones() as u64;
        let expected = nfr4::Ratio::new(6 - removed, 6).unwrap().to_fixed(4);
        let got = compute_mcr(&m).map_err(|e| e.to_string())?;
        ensure!(
            got.mcr.to_fixed(4) == expected,
            "subset {mask:06b}: got {} expected {expected}",
            got.mcr
        );
        // independent float check of the same value
        let float = format!("{:.4}", (6 - removed) as f64 / 6.0);
        ensure!(float == expected, "subset {mask:06b}: float {float} vs {expected}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("64/64 subsets, {elapsed:.0?}"))
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e66_7234);
    let mut cells = 0usize;
    let models = 2000;
    for k in 0..models {
        let m = random_model(&mut rng);
        ensure!(
            !validate_structure(&m).iter().any(|d| d.severity == Severity::Error),
            "generated model {k} is not well-formed"
        );
        let t = build_traceability_matrix(&m).map_err(|e| e.to_string())?;
        let oracle = oracle_marks(&m);
        for (i, row) in oracle.iter().enumerate() {
            for (j, &o) in row.iter().enumerate() {
                cells += 1;
                ensure!(t.marks[i][j] == o, "model {k}: mismatch at ({i},{j})");
            }
        }
    }
    Ok(format!("{models} models, {cells} cells, 0 mismatches"))
}

fn fuzz_input(rng: &mut ChaCha8Rng, seeds: &[&str]) -> Vec<u8> {
    match rng.gen_range(0..3) {
        0 => (0..rng.gen_range(0..256)).map(|_| rng.gen()).collect(),
        1 => {
            let mut bytes = seeds[rng.gen_range(0..seeds.len())].as_bytes().to_vec();
            for _ in 0..rng.gen_range(1..16) {
                if bytes.is_empty() {
                    break;
                }
                let at = rng.gen_range(0..bytes.len());
                match rng.gen_range(0..3) {
                    0 => bytes[at] = rng.gen(),
                    1 => {
                        bytes.remove(at);
                    }
                    _ => bytes.insert(at, b"\"#,\n\r 9yesno"[rng.gen_range(0..12)]),
                }
            }
            bytes
        }
        _ => {
            let words = [
                "system", "stakeholder", "goal", "subgoal", "nfr", "check", "for", "of", "on", "\"x\"", "\"", ",", "#",
                "a", "B", "1", "9", "yes", "no", "\n", "\r\n", "é", "\u{0}",
            ];
            (0..rng.gen_range(0..40))
                .map(|_| words[rng.gen_range(0..words.len())])
                .join(" ")
                .into_bytes()
        }
    }
}

fn ac7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7275_6e64);
    let models = 2000;
    for k in 0..models {
        let m = random_model(&mut rng);
        let text = serialize(&m).map_err(|e| format!("model {k}: {e}"))?;
        let back = parse(&text).map_err(|e| format!("model {k}: {e}"))?;
        ensure!(back == m, "model {k}: round trip differs");
    }
    let seeds = [LIBRARY_FIXTURE, ATM_FIXTURE];
    let fuzz = 10_000;
    let mut accepted = 0;
    for k in 0..fuzz {
        let input = fuzz_input(&mut rng, &seeds);
        let result = catch_unwind(|| parse_bytes(&input).is_ok());
        match result {
            Ok(ok) => accepted += ok as usize,
            Err(_) => return Err(format!("parse panicked on fuzz input {k}: {input:?}")),
        }
    }
    Ok(format!("{models} round trips, {fuzz} fuzz inputs ({accepted} parsed), 0 panics"))
}

fn ac8() -> Outcome {
    let base = || {
        Model::builder("Minimal")
            .stakeholder("s", "S")
            .goal("g", "G", &["s"])
            .subgoal("sg", "SG", &["g"])
            .nfr("n", "N", &["sg"])
    };
    let build = |b: nfr4::model::ModelBuilder| b.build().expect("valid identifiers");
    let cases: Vec<(&str, Model, RuleId, Severity)> = vec![
        ("no stakeholders", build(Model::builder("Empty")), RuleId::R1, Severity::Error),
        ("goalless stakeholder", build(base().stakeholder("idle", "Idle")), RuleId::R2, Severity::Error),
        (
            "ownerless goal",
            build(base().goal("orphan", "Orphan", &[]).subgoal("sg2", "SG2", &["orphan"]).nfr("n2", "N2", &["sg2"])),
            RuleId::R2,
            Severity::Error,
        ),
        ("childless goal", build(base().goal("leaf", "Leaf", &["s"])), RuleId::R3, Severity::Error),
        (
            "parentless sub-goal",
            build(base().subgoal("floating", "Floating", &[]).nfr("n2", "N2", &["floating"])),
            RuleId::R3,
            Severity::Error,
        ),
        ("unattached nfr", build(base().nfr("loose", "Loose", &[])), RuleId::R4, Severity::Warning),
        ("unconstrained sub-goal", build(base().subgoal("bare", "Bare", &["g"])), RuleId::R4, Severity::Warning),
        (
            "dangling goal owner",
            build(base().goal("g2", "G2", &["nobody"]).subgoal("sg2", "SG2", &["g2"]).nfr("n2", "N2", &["sg2"])),
            RuleId::Ref,
            Severity::Error,
        ),
        (
            "dangling sub-goal parent",
            build(base().subgoal("sg2", "SG2", &["borow_book"]).nfr("n2", "N2", &["sg2"])),
            RuleId::Ref,
            Severity::Error,
        ),
        ("dangling nfr target", build(base().nfr("n2", "N2", &["sg", "ghost"])), RuleId::Ref, Severity::Error),
        ("dangling checklist nfr", build(base().check("nn", 1, Answer::Yes)), RuleId::Ref, Severity::Error),
        ("duplicate id in one layer", build(base().nfr("n", "N again", &["sg"])), RuleId::Dup, Severity::Error),
        ("duplicate id across layers", build(base().nfr("g", "G as NFR", &["sg"])), RuleId::Dup, Severity::Error),
    ];
    ensure!(validate_structure(&build(base())).is_empty(), "base model is not clean");
    for (name, model, rule, severity) in &cases {
        let ds = validate_structure(model);
        ensure!(
            ds.len() == 1 && ds[0].rule_id == *rule && ds[0].severity == *severity,
            "{name}: expected exactly one {rule}/{severity}, got {:?}",
            ds.iter().map(|d| format!("{}/{}", d.rule_id, d.severity)).collect::<Vec<_>>()
        );
    }
    Ok(format!("{} violating models, each with exactly its rule and severity", cases.len()))
}

fn permuted_nfr_lines(source: &str) -> Vec<String> {
    let lines: Vec<&str> = source.lines().collect();
    let slots: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].starts_with("nfr ")).collect();
    slots
        .iter()
        .copied()
        .permutations(slots.len())
        .map(|order| {
            let mut out = lines.clone();
            for (slot, src) in slots.iter().zip(order) {
                out[*slot] = lines[src];
            }
            out.join("\n")
        })
        .collect()
}

fn ac9() -> Outcome {
    let mut permutations = 0;
    for (file, source) in [("library.nfr4", LIBRARY_FIXTURE), ("atm.nfr4", ATM_FIXTURE)] {
        let path = corpus(file);
        let path = path.to_str().unwrap();
        let a = nfr4(&["report", path, "--format", "json"]);
        let b = nfr4(&["report", path, "--format", "json"]);
        ensure!(a.status.code() == Some(0), "{file}: report exited {:?}", a.status.code());
        ensure!(a.stdout == b.stdout && !a.stdout.is_empty(), "{file}: report output differs between runs");

        let critical_set = |text: &str| -> Result<BTreeSet<String>, String> {
            let m = parse(text).map_err(|e| e.to_string())?;
            let t = build_traceability_matrix(&m).map_err(|e| e.to_string())?;
            let r = rank_criticality(&t, ThresholdMode::Mean).map_err(|e| e.to_string())?;
            Ok(r.critical.iter().map(|i| i.to_string()).collect())
        };
        let expected = critical_set(source)?;
        for variant in permuted_nfr_lines(source) {
            permutations += 1;
            let got = critical_set(&variant)?;
            ensure!(got == expected, "{file}: permuted critical set {got:?} != {expected:?}");
        }
    }
    Ok(format!("byte-identical JSON on both fixtures, {permutations} NFR orderings agree"))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "library metrics golden", ac1),
        ("AC2", "library criticality", ac2),
        ("AC3", "ATM metrics golden", ac3),
        ("AC4", "ATM criticality", ac4),
        ("AC5", "MCR over all 64 answer-deletion subsets", ac5),
        ("AC6", "matrix vs reachability oracle", ac6),
        ("AC7", "round trip and fuzzing", ac7),
        ("AC8", "structural rule table", ac8),
        ("AC9", "determinism and permutation invariance", ac9),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS {id} {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id} {title}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
