// Traceability matrix and critical NFRs under each threshold mode.

use nfr4::{build_traceability_matrix, parse, rank_criticality, render_matrix_table, TableOptions, ThresholdMode};

pub fn run_example() -> Result<Vec<Vec<String>>, Box<dyn std::error::Error>> {
    let model = parse(nfr4::LIBRARY_FIXTURE)?;
    let matrix = build_traceability_matrix(&model)?;
    let mean = rank_criticality(&matrix, ThresholdMode::Mean)?;
    print!("{}", render_matrix_table(&matrix, &mean, TableOptions::default())?);

    let mut sets = Vec::new();
    for mode in [ThresholdMode::Mean, ThresholdMode::TopK(3), ThresholdMode::Absolute(2)] {
        let report = rank_criticality(&matrix, mode)?;
        let ids: Vec<String> = report.critical.iter().map(|id| id.to_string()).collect();
        println!("{mode} (cutoff {}): {}", report.threshold_value, ids.join(", "));
        sets.push(ids);
    }
    Ok(sets)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
