// The full report as text, Markdown and JSON.

use nfr4::{export_json, parse, render_summary, Format, ReportBundle, ThresholdMode, ATM_FIXTURE};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = parse(ATM_FIXTURE)?;
    let bundle = ReportBundle::build(&model, ThresholdMode::Mean)?;
    print!("{}", render_summary(&bundle, Format::Text));
    println!();
    print!("{}", render_summary(&bundle, Format::Markdown));
    println!();
    let json = export_json(&bundle);
    print!("{json}");
    Ok(json)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
