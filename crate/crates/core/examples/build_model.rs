// Build a model in code and write it out in the text format.

use nfr4::{parse, serialize, validate_structure, Model};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let model = Model::builder("Ticket kiosk")
        .stakeholder("traveller", "Traveller")
        .stakeholder("operator", "Operator")
        .goal("buy_ticket", "Buy ticket", &["traveller"])
        .goal("load_tickets", "Load ticket stock", &["operator"])
        .subgoal("choose_fare", "Choose fare", &["buy_ticket"])
        .subgoal("pay", "Pay", &["buy_ticket"])
        .subgoal("open_printer", "Open printer", &["load_tickets"])
        .nfr("usability", "Usability", &["choose_fare", "pay"])
        .nfr("security", "Security", &["pay"])
        .nfr("safety", "Safety", &["open_printer"])
        .all_yes("usability")
        .all_yes("security")
        .build()?;
    assert!(validate_structure(&model).is_empty());

    let text = serialize(&model)?;
    print!("{text}");
    assert_eq!(parse(&text)?, model);
    Ok(text)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
