// Parse a model file and run the structural rules over it.
//
// cargo run --example parse_and_check -- corpus/library.nfr4

use nfr4::{parse, validate_structure, Severity};

pub fn run_example(source: &str) -> Result<usize, Box<dyn std::error::Error>> {
    let model = parse(source)?;
    println!(
        "{}: {} stakeholders, {} goals, {} sub-goals, {} nfrs",
        model.system_name,
        model.stakeholders.len(),
        model.goals.len(),
        model.subgoals.len(),
        model.nfrs.len()
    );
    let diagnostics = validate_structure(&model);
    for d in &diagnostics {
        println!("  {d}");
    }
    let errors = diagnostics.iter().filter(|d| d.severity == Severity::Error).count();

    // A broken copy: a typo in a parent reference and a bad checklist index.
    let broken = source.replace("of borrow_book", "of borow_book") + "check usability 9 yes\n";
    match parse(&broken) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(errors) => {
            for e in &errors.0 {
                println!("  parse error {e}");
            }
        }
    }
    Ok(errors)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let source = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => nfr4::LIBRARY_FIXTURE.to_string(),
    };
    run_example(&source)?;
    Ok(())
}
