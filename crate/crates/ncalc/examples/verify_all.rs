//! Runs every verification suite and prints one line per check.
//! Equivalent to `ncalc verify all`.

use ncalc::suite::{run_suite, SuiteCaps};

fn main() {
    let rep = run_suite("all", 42, &SuiteCaps::default()).unwrap();
    for c in &rep.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        print!("{} {} ({} ms)", status, c.name, c.millis);
        if let Some(cex) = &c.counterexample {
            print!("  [{}]", cex);
        }
        println!();
    }
    let n = rep.checks.len();
    let passed = rep.checks.iter().filter(|c| c.passed).count();
    println!("{}/{} checks passed", passed, n);
    if !rep.passed() {
        std::process::exit(1);
    }
}
