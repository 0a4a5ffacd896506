// Completeness ratio as checklist answers are withdrawn.

use nfr4::{compute_mcr, derive_status, parse, ValidationStatus, LIBRARY_FIXTURE};

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let mut model = parse(LIBRARY_FIXTURE)?;
    let mut lines = vec![compute_mcr(&model)?.formula_line()];
    for id in ["safety", "flexibility"] {
        model.nfr_mut(id).expect("declared in the fixture").checklist.clear();
        lines.push(compute_mcr(&model)?.formula_line());
    }
    for line in &lines {
        println!("{line}");
    }
    for nfr in &model.nfrs {
        let status = match derive_status(nfr) {
            ValidationStatus::ValidatedCorrect => "validated",
            ValidationStatus::NotYetValidated => "not yet validated",
        };
        println!("  {:<12} {status}", nfr.display_name);
    }
    Ok(lines)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
