// Walk the lattice top-down: stakeholder, goals, sub-goals, NFRs.

use nfr4::{parse, ATM_FIXTURE};

pub fn run_example() -> Result<usize, Box<dyn std::error::Error>> {
    let model = parse(ATM_FIXTURE)?;
    let mut edges = 0;
    for stakeholder in &model.stakeholders {
        println!("{}", stakeholder.display_name);
        for goal in model.goals_of_stakeholder(stakeholder.id.as_str())? {
            println!("  {}", goal.display_name);
            for sub in model.subgoals_of_goal(goal.id.as_str())? {
                let nfrs: Vec<_> = model
                    .nfrs_of_subgoal(sub.id.as_str())?
                    .iter()
                    .map(|n| n.display_name.as_str())
                    .collect();
                println!("    {} [{}]", sub.display_name, nfrs.join(", "));
                edges += 1 + nfrs.len();
            }
        }
    }
    Ok(edges)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(|_| ())
}
