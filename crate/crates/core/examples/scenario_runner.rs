// Build a scenario in code, run it, and feed the witness back through `validate`.

use jointmeas::cli::{run_scenario, Operand, RunOptions, Scenario, Task};
use jointmeas::prelude::*;

fn main() {
    let cfg = Config::default();
    let s = HermitianOperator::new(pauli::x(), &cfg).unwrap();
    let t = HermitianOperator::new(pauli::z(), &cfg).unwrap();
    let half = |m: &HermitianOperator| HermitianOperator::identity(2).add(&m.scale(0.6)).scale(0.5);
    let scenario = Scenario::new(Task::JmTest)
        .with("first", Operand::from_effect(&half(&s)))
        .with("second", Operand::from_effect(&half(&t)));
    println!("{}", scenario.to_json());

    let out = run_scenario(&scenario, &RunOptions::default());
    let report = out.report.unwrap();
    println!("exit {} ({})", report.exit_code, report.result["verdict"]["decision"]);

    let witness: Operand = serde_json::from_value(report.result["witness"].clone()).unwrap();
    let check = run_scenario(&Scenario::new(Task::Validate).with("witness", witness), &RunOptions::default());
    println!("witness re-validates: exit {}", check.status.code());
}
