// Score the eight-question validation checklist per NFR and for the model.

use nfr4::model::CHECKLIST_LABELS;
use nfr4::{parse, score_checklist, Answer, ChecklistSubject};

const SOURCE: &str = r#"
system "Course registration"
stakeholder student "Student"
goal enrol "Enrol in course" for student
subgoal pick_course "Pick course" of enrol
nfr usability "Usability" on pick_course
nfr performance "Performance" on enrol
check usability 1 yes
check usability 2 yes
check usability 3 yes
check usability 4 yes
check usability 5 no "overlaps with the performance budget"
check usability 6 no
check performance 1 yes
check performance 3 yes
"#;

pub fn run_example() -> Result<(usize, usize), Box<dyn std::error::Error>> {
    let model = parse(SOURCE)?;
    for nfr in &model.nfrs {
        let score = score_checklist(&model, &ChecklistSubject::Nfr(nfr.id.clone()))?;
        println!(
            "{}: {}/8 yes, {} answered, metric {}",
            nfr.display_name, score.yes_count, score.answered_count, score.metric
        );
        for (q, label) in CHECKLIST_LABELS.iter().enumerate() {
            let mark = match nfr.checklist.answer(q + 1) {
                Some(Answer::Yes) => "yes",
                Some(Answer::No) => "no",
                _ => "-",
            };
            let note = nfr.checklist.note(q + 1).map(|n| format!(" ({n})")).unwrap_or_default();
            println!("  {}. {label}: {mark}{note}", q + 1);
        }
    }
    let whole = score_checklist(&model, &ChecklistSubject::WholeModel)?;
    println!("whole model: {}/8", whole.yes_count);
    let usability = score_checklist(&model, &ChecklistSubject::Nfr("usability".parse()?))?;
    Ok((usability.yes_count, whole.yes_count))
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
